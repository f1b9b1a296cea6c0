"""Reflection coefficients of a vacuum/chiral-medium interface.

Two providers share one small contract (``at_imag(xi)``, ``at_real(omega)``
returning a ``ReflectionSet``): the idealised perfect chiral mirror and the
isotropic chiral half-space in the non-retarded limit. Neither depends on the
in-plane wavevector, so coefficients are functions of frequency only.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

import numpy as np

from chiralcp.core import SingularInterfaceError
from chiralcp.material import ChiralMedium, ResponseTriple, eval_imag, eval_real

SINGULAR_RTOL = 1e-12


class ReflectionSet(NamedTuple):
    rss: complex
    rsp: complex
    rps: complex
    rpp: complex


class Handedness(enum.Enum):
    RIGHT = "right"
    LEFT = "left"

    @property
    def sign(self) -> int:
        return 1 if self is Handedness.RIGHT else -1


def perfect_mirror(h: Handedness) -> ReflectionSet:
    """Complete s<->p conversion: (0, +1, -1, 0) right-handed, (0, -1, +1, 0) left-handed."""
    s = h.sign
    return ReflectionSet(0.0, float(s), float(-s), 0.0)


def _interface_denominator(eps, mu, kappa):
    den = eps * mu - kappa**2 + eps + mu + 1.0
    if np.any(np.abs(den) < SINGULAR_RTOL * (1.0 + np.abs(eps * mu))):
        raise SingularInterfaceError(
            "interface denominator eps*mu - kappa^2 + eps + mu + 1 is numerically zero",
            module="reflection",
            parameter="eps, mu, kappa",
        )
    return den


def nonretarded_halfspace(resp: ResponseTriple) -> ReflectionSet:
    """Non-retarded reflection coefficients of an isotropic chiral half-space."""
    eps, mu, kappa = resp
    den = _interface_denominator(eps, mu, kappa)
    num = eps * mu - kappa**2
    rsp = 2j * kappa / den
    return ReflectionSet(
        rss=(num - eps + mu - 1.0) / den,
        rsp=rsp,
        rps=-rsp,
        rpp=(num + eps - mu - 1.0) / den,
    )


class ReflectionProvider:
    """Frequency -> ReflectionSet. Subclasses override what they support."""

    def at_imag(self, xi) -> ReflectionSet:
        raise NotImplementedError(f"{type(self).__name__} has no imaginary-frequency coefficients")

    def at_real(self, omega) -> ReflectionSet:
        raise NotImplementedError(f"{type(self).__name__} has no real-frequency coefficients")


class PerfectChiralMirror(ReflectionProvider):
    def __init__(self, handedness: Handedness):
        self.handedness = handedness

    def _broadcast(self, x) -> ReflectionSet:
        ones = np.ones_like(np.asarray(x, dtype=float))
        return ReflectionSet(*(v * ones for v in perfect_mirror(self.handedness)))

    def at_imag(self, xi):
        return self._broadcast(xi)

    def at_real(self, omega):
        return self._broadcast(omega)

    def __repr__(self):
        return f"PerfectChiralMirror({self.handedness.value})"


class NonRetardedChiralHalfspace(ReflectionProvider):
    def __init__(self, medium: ChiralMedium):
        self.medium = medium

    def at_imag(self, xi):
        return nonretarded_halfspace(eval_imag(self.medium, xi))

    def at_real(self, omega):
        return nonretarded_halfspace(eval_real(self.medium, omega))

    def __repr__(self):
        return f"NonRetardedChiralHalfspace({self.medium!r})"
