"""Physical constants and the exception hierarchy shared by every module.

All quantities are SI; frequencies are angular (rad/s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import scipy.constants as _sc


@dataclass(frozen=True)
class Constants:
    hbar: float
    c: float
    eps0: float
    mu0: float

    @property
    def Z0(self) -> float:
        """Impedance of free space, sqrt(mu0/eps0)."""
        return math.sqrt(self.mu0 / self.eps0)


def si_constants() -> Constants:
    """CODATA values as shipped with scipy.

    eps0 is derived as 1/(mu0 c^2) so that c^2 eps0 mu0 = 1 to rounding; the
    tabulated value differs by less than its stated uncertainty.
    """
    return Constants(
        hbar=_sc.hbar,
        c=_sc.c,
        eps0=1.0 / (_sc.mu_0 * _sc.c**2),
        mu0=_sc.mu_0,
    )


CONST = si_constants()


class ChiralCPError(Exception):
    """Base class. ``module`` and ``parameter`` name the origin for diagnostics."""

    def __init__(self, message: str, *, module: str = "", parameter: str = ""):
        super().__init__(message)
        self.module = module
        self.parameter = parameter


class SingularResponseError(ChiralCPError, ZeroDivisionError):
    """A response-model denominator vanished (undamped resonance hit exactly)."""


class SingularInterfaceError(ChiralCPError, ZeroDivisionError):
    """The interface denominator eps*mu - kappa**2 + eps + mu + 1 is numerically zero."""


class ConvergenceError(ChiralCPError, ArithmeticError):
    """Quadrature did not reach the requested tolerance, or sampled a non-finite value."""
