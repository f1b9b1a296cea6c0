"""Casimir-Polder potential and force kernels near a single interface.

Sign conventions: ``z`` is the molecule-interface distance in metres and a
positive force points away from the interface (towards larger ``z``).
"""

from __future__ import annotations

import math
import warnings
from typing import NamedTuple

import numpy as np

from chiralcp.core import CONST
from chiralcp.material import ChiralMedium, eval_real
from chiralcp.molecule import (
    Molecule,
    alpha_iso,
    downward_transitions,
    gamma_iso,
    gamma_slope_at_zero,
)
from chiralcp.quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    integrate_kz_tail,
    integrate_semiinfinite,
)
from chiralcp.reflection import (
    Handedness,
    ReflectionProvider,
    _interface_denominator,
)

PI2 = math.pi**2


class Breakdown(NamedTuple):
    """Electric/chiral x off-resonant/resonant split of a potential or force."""

    electric_offres: float
    electric_res: float
    chiral_offres: float
    chiral_res: float

    @property
    def electric(self) -> float:
        return self.electric_offres + self.electric_res

    @property
    def chiral(self) -> float:
        return self.chiral_offres + self.chiral_res

    @property
    def total(self) -> float:
        return self.electric + self.chiral

    def scaled(self, factor: float) -> "Breakdown":
        return Breakdown(*(factor * v for v in self))


PotentialBreakdown = Breakdown


def _check_z(z):
    if not z > 0:
        raise ValueError(f"distance z must be > 0, got {z}")


def _require_ground(mol: Molecule, what: str):
    if not mol.is_ground_state:
        raise ValueError(f"{what} is defined for ground-state molecules only")


def _mirror_scale(mol: Molecule, z: float) -> float:
    # geometric mean of the molecular and retardation frequency scales
    return math.sqrt(mol.dominant_frequency * CONST.c / (2.0 * z))


# -- perfect chiral mirror ---------------------------------------------------


def perfect_mirror_integral(mol: Molecule, z: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """IntegralResult for int_0^inf Gamma(i xi) exp(-2 xi z/c) (2 xi z/c + 1) d xi."""
    _check_z(z)
    c = CONST.c

    def f(xi):
        s = 2.0 * xi * z / c
        return gamma_iso(mol, xi) * np.exp(-s) * (s + 1.0)

    return integrate_semiinfinite(f, spec, scale=_mirror_scale(mol, z))


def u_chiral_perfect_mirror(h: Handedness, mol: Molecule, z: float,
                            spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Chiral potential (J) of a ground-state molecule a distance ``z`` from a perfect chiral mirror."""
    _require_ground(mol, "the perfect-mirror potential")
    integral = perfect_mirror_integral(mol, z, spec).value
    return float(h.sign * CONST.hbar * CONST.Z0 / (8.0 * PI2 * z**3) * integral)


def force_perfect_mirror(h: Handedness, mol: Molecule, z: float,
                         spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """-dU/dz for the perfect mirror, differentiated under the integral sign."""
    _require_ground(mol, "the perfect-mirror force")
    _check_z(z)
    c = CONST.c

    def f(xi):
        q = xi / c
        return gamma_iso(mol, xi) * np.exp(-2.0 * q * z) * (3.0 / z + 6.0 * q + 4.0 * q**2 * z)

    integral = integrate_semiinfinite(f, spec, scale=_mirror_scale(mol, z)).value
    return float(h.sign * CONST.hbar * CONST.Z0 / (8.0 * PI2 * z**3) * integral)


def u_chiral_retarded_limit(mol: Molecule, z: float, h: Handedness) -> float:
    """Large-distance form -/+ Z0 c^2 / (16 pi^2 z^5) sum_k R_0k / omega_k0^2.

    Built from the analytic static slope of Gamma, so it scales exactly as z**-5.
    """
    _require_ground(mol, "the retarded limit")
    _check_z(z)
    # int_0^inf xi exp(-2 xi z/c)(2 xi z/c + 1) d xi = 3 c^2 / (4 z^2)
    moment = 3.0 * CONST.c**2 / (4.0 * z**2)
    return float(h.sign * CONST.hbar * CONST.Z0 / (8.0 * PI2 * z**3)
                 * gamma_slope_at_zero(mol) * moment)


def u_chiral_nonretarded_limit(mol: Molecule, z: float, h: Handedness) -> float:
    """Short-distance form +/- Z0 / (12 pi^2 z^3) sum_k R_0k ln(omega_k0 z / c)."""
    _require_ground(mol, "the non-retarded limit")
    _check_z(z)
    w, _, r = mol._arrays()
    if z * w.max() / CONST.c >= 1.0:
        warnings.warn(
            f"z*omega_max/c = {z * w.max() / CONST.c:.3g} is not small; "
            "the non-retarded limit is not applicable",
            stacklevel=2,
        )
    return float(h.sign * CONST.Z0 / (12.0 * PI2 * z**3) * np.sum(r * np.log(w * z / CONST.c)))


# -- general off-resonant half-space integral --------------------------------


def u_chiral_general_offres(provider: ReflectionProvider, mol: Molecule, z: float,
                            spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Off-resonant chiral potential from the full wavevector integral.

    U = hbar mu0 / (4 pi^2 c) int d xi xi^2 Gamma(i xi)
        int_{xi/c}^inf dk exp(-2 k z) [(2 k^2 c^2 / xi^2 - 1) Rsp + Rps]

    The ``xi**2`` factor is folded into the bracket so the inner integrand
    stays bounded as ``xi -> 0``.
    """
    _check_z(z)
    c = CONST.c

    def outer(xi):
        refl = provider.at_imag(xi)
        rsp = np.real(refl.rsp)[..., None]
        rps = np.real(refl.rps)[..., None]
        xi2 = (xi**2)[..., None]

        def g(k):
            return (2.0 * k**2 * c**2 - xi2) * rsp + xi2 * rps

        inner = integrate_kz_tail(g, xi / c, z, spec).value
        return gamma_iso(mol, xi) * inner

    integral = integrate_semiinfinite(outer, spec, scale=_mirror_scale(mol, z)).value
    return float(CONST.hbar * CONST.mu0 / (4.0 * PI2 * c) * integral)


# -- non-retarded isotropic chiral half-space --------------------------------


def _medium_scale(medium: ChiralMedium) -> float:
    p = medium.parameters()
    freqs = [abs(p[k]) for k in ("omega_p", "omega_m", "a", "omega_E", "omega_B", "omega_C")]
    return max(freqs) or 1.0


def nonretarded_coefficients(medium: ChiralMedium, mol: Molecule,
                             spec: QuadratureSpec = DEFAULT_SPEC) -> Breakdown:
    """Distance-independent coefficients C (J m^3) with U = C / z**3 per component."""
    hbar, Z0, eps0 = CONST.hbar, CONST.Z0, CONST.eps0
    scale = math.sqrt(mol.dominant_frequency * _medium_scale(medium))

    eps_m, mu_m, kap_m = medium.eps_model, medium.mu_model, medium.kappa_model

    def electric_integrand(xi):
        eps, mu = eps_m.at_imag(xi), mu_m.at_imag(xi)
        ik = kap_m.i_kappa_at_imag(xi)
        # -kappa^2 = (i kappa)^2 at imaginary frequency
        den = _interface_denominator(eps, mu, 1j * ik).real
        num = eps * mu + ik**2 + eps - mu - 1.0
        return alpha_iso(mol, xi) * num / den

    def chiral_integrand(xi):
        eps, mu = eps_m.at_imag(xi), mu_m.at_imag(xi)
        ik = kap_m.i_kappa_at_imag(xi)
        den = _interface_denominator(eps, mu, 1j * ik).real
        return gamma_iso(mol, xi) * ik / den

    e_int = integrate_semiinfinite(electric_integrand, spec, scale=scale).value
    if medium.kappa_model.a == 0 or all(t.rotatory == 0 for t in mol.transitions):
        c_int = 0.0
    else:
        c_int = integrate_semiinfinite(chiral_integrand, spec, scale=scale).value

    e_off = -hbar / (16.0 * PI2 * eps0) * e_int
    c_off = hbar * Z0 / (4.0 * PI2) * c_int

    e_res = 0.0
    c_res = 0.0
    for t in downward_transitions(mol):
        eps, mu, kappa = eval_real(medium, abs(t.omega_kn))
        den = _interface_denominator(eps, mu, kappa)
        rpp = (eps * mu - kappa**2 + eps - mu - 1.0) / den
        e_res += -t.dipole_sq / (24.0 * math.pi * eps0) * float(np.real(rpp))
        c_res += Z0 * t.rotatory / (6.0 * math.pi) * float(np.imag(1j * kappa / den))

    return Breakdown(float(e_off), e_res, float(c_off), c_res)


def u_nonretarded_halfspace(medium: ChiralMedium, mol: Molecule, z: float,
                            spec: QuadratureSpec = DEFAULT_SPEC,
                            coefficients: Breakdown | None = None) -> Breakdown:
    """Potential breakdown (J) at distance ``z`` from a non-retarded chiral half-space."""
    _check_z(z)
    coeff = coefficients or nonretarded_coefficients(medium, mol, spec)
    return coeff.scaled(1.0 / z**3)


def force_nonretarded(medium: ChiralMedium, mol: Molecule, z: float,
                      spec: QuadratureSpec = DEFAULT_SPEC,
                      coefficients: Breakdown | None = None) -> Breakdown:
    """Force breakdown (N), ``3 C / z**4`` per component; positive points away from the wall."""
    _check_z(z)
    coeff = coefficients or nonretarded_coefficients(medium, mol, spec)
    return coeff.scaled(3.0 / z**4)
