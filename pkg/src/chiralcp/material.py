"""Single-resonance response models for an isotropic chiral medium.

Permittivity and permeability follow a Drude-Lorentz form,

    eps(w) = 1 - wp**2 / (w**2 - wE**2 + i*gE*w),

and the chirality parameter follows the Condon model,

    kappa(w) = a*w / (w**2 - wC**2 + i*gC*w).

Everything is vectorised over numpy arrays of frequency. At imaginary
frequency ``w = i*xi`` the closed forms are written out explicitly, so eps and
mu come back exactly real and kappa exactly imaginary.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from chiralcp.core import SingularResponseError


def _check_denominator(den, what: str, parameter: str) -> None:
    if np.any(den == 0):
        raise SingularResponseError(
            f"{what} denominator vanishes (undamped resonance hit exactly)",
            module="material",
            parameter=parameter,
        )


@dataclass(frozen=True)
class LorentzOscillator:
    """One Drude-Lorentz resonance: oscillator strength, resonance and damping in rad/s."""

    strength: float
    resonance: float
    damping: float

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError(f"oscillator strength must be >= 0, got {self.strength}")
        if self.resonance < 0:
            raise ValueError(f"resonance frequency must be >= 0, got {self.resonance}")

    def at_real(self, omega):
        omega = np.asarray(omega, dtype=float)
        den = omega**2 - self.resonance**2 + 1j * self.damping * omega
        _check_denominator(den, "Drude-Lorentz", "omega")
        return 1.0 - self.strength**2 / den

    def at_imag(self, xi):
        xi = np.asarray(xi, dtype=float)
        den = xi**2 + self.resonance**2 + self.damping * xi
        _check_denominator(den, "Drude-Lorentz", "xi")
        return 1.0 + self.strength**2 / den


@dataclass(frozen=True)
class CondonChirality:
    """Condon model for kappa. ``a`` is signed; ``gamma_c`` may be negative."""

    a: float
    omega_c: float
    gamma_c: float

    def __post_init__(self):
        if self.omega_c < 0:
            raise ValueError(f"omega_c must be >= 0, got {self.omega_c}")

    def at_real(self, omega):
        omega = np.asarray(omega, dtype=float)
        den = omega**2 - self.omega_c**2 + 1j * self.gamma_c * omega
        _check_denominator(den, "Condon", "omega")
        return self.a * omega / den

    def i_kappa_at_imag(self, xi):
        """Real quantity i*kappa(i*xi) = a*xi / (xi**2 + wC**2 + gC*xi)."""
        xi = np.asarray(xi, dtype=float)
        den = xi**2 + self.omega_c**2 + self.gamma_c * xi
        _check_denominator(den, "Condon", "xi")
        return self.a * xi / den

    def at_imag(self, xi):
        return -1j * self.i_kappa_at_imag(xi)


@dataclass(frozen=True)
class ChiralMedium:
    eps_model: LorentzOscillator
    mu_model: LorentzOscillator
    kappa_model: CondonChirality

    def mirrored(self) -> "ChiralMedium":
        """Same medium with the opposite handedness (a -> -a)."""
        return replace(self, kappa_model=replace(self.kappa_model, a=-self.kappa_model.a))

    @classmethod
    def from_parameters(cls, *, omega_p, omega_m, a, omega_E, omega_B, omega_C,
                        gamma_E, gamma_B, gamma_C) -> "ChiralMedium":
        return cls(
            LorentzOscillator(omega_p, omega_E, gamma_E),
            LorentzOscillator(omega_m, omega_B, gamma_B),
            CondonChirality(a, omega_C, gamma_C),
        )

    def parameters(self) -> dict:
        return {
            "omega_p": self.eps_model.strength,
            "omega_m": self.mu_model.strength,
            "a": self.kappa_model.a,
            "omega_E": self.eps_model.resonance,
            "omega_B": self.mu_model.resonance,
            "omega_C": self.kappa_model.omega_c,
            "gamma_E": self.eps_model.damping,
            "gamma_B": self.mu_model.damping,
            "gamma_C": self.kappa_model.gamma_c,
        }


class ResponseTriple(NamedTuple):
    eps: complex
    mu: complex
    kappa: complex


def eval_real(medium: ChiralMedium, omega) -> ResponseTriple:
    """(eps, mu, kappa) at real angular frequency ``omega > 0``."""
    if np.any(np.asarray(omega) <= 0):
        raise ValueError("real frequency must be positive")
    return ResponseTriple(
        medium.eps_model.at_real(omega),
        medium.mu_model.at_real(omega),
        medium.kappa_model.at_real(omega),
    )


def eval_imag(medium: ChiralMedium, xi) -> ResponseTriple:
    """(eps, mu, kappa) at imaginary frequency ``i*xi``, ``xi >= 0``.

    eps and mu have zero imaginary part; kappa has zero real part.
    """
    if np.any(np.asarray(xi) < 0):
        raise ValueError("imaginary frequency xi must be >= 0")
    return ResponseTriple(
        medium.eps_model.at_imag(xi) + 0j,
        medium.mu_model.at_imag(xi) + 0j,
        medium.kappa_model.at_imag(xi),
    )


class PassivityReport(NamedTuple):
    passive: bool
    margin: float  # Im(eps)*Im(mu) - Im(kappa)**2


def passivity_report(medium: ChiralMedium, omega: float) -> PassivityReport:
    """Check (Im kappa)**2 < Im eps * Im mu at ``omega``. Diagnostic only."""
    eps, mu, kappa = eval_real(medium, omega)
    margin = float(np.imag(eps) * np.imag(mu) - np.imag(kappa) ** 2)
    return PassivityReport(margin > 0, margin)
