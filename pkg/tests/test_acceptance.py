"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""

import math
import time
import warnings

import numpy as np
import pytest
from scipy.optimize import brentq

from chiralcp import (
    CavityConfig,
    ChiralMedium,
    Handedness,
    Molecule,
    PerfectChiralMirror,
    Transition,
    dmds_example,
    dominance_region,
    force_nonretarded,
    force_perfect_mirror,
    magnitude_ratio,
    scan,
    u_chiral_general_offres,
    u_chiral_nonretarded_limit,
    u_chiral_perfect_mirror,
    u_chiral_retarded_limit,
    u_nonretarded_halfspace,
)
from chiralcp.cavity import evaluate, wall_coefficients
from chiralcp.cli import TUNED_OMEGA_P, WOODPILE, tuned_medium_parameters
from chiralcp.core import CONST
from chiralcp.molecule import DMDS_DIPOLE_SQ, DMDS_OMEGA, DMDS_ROTATORY, alpha_iso
from chiralcp.potential import nonretarded_coefficients, perfect_mirror_integral
from chiralcp.quadrature import QuadratureSpec

from oracles import central_difference, trapezoid_log

R, L = Handedness.RIGHT, Handedness.LEFT
NM = 1e-9


def _relerr(a, b):
    return abs(a - b) / abs(b)


# 1 -------------------------------------------------------------------------


def test_general_integral_equals_closed_form(dmds, acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    for h in (R, L):
        for z in (1 * NM, 10 * NM, 100 * NM):
            general = u_chiral_general_offres(PerfectChiralMirror(h), dmds, z)
            closed = u_chiral_perfect_mirror(h, dmds, z)
            worst = max(worst, _relerr(general, closed))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and elapsed < 10
    acceptance(1, ok, f"max rel err {worst:.2e} (< 1e-6), {elapsed:.2f} s (< 10 s)")
    assert ok


# 2 -------------------------------------------------------------------------


def test_retarded_asymptote(dmds, acceptance):
    z = 100 * CONST.c / DMDS_OMEGA
    u = u_chiral_perfect_mirror(R, dmds, z)
    ratio = u / u_chiral_retarded_limit(dmds, z, R)
    slope = abs(u_chiral_perfect_mirror(R, dmds, 2 * z) * 32 / u - 1)
    ok = abs(ratio - 1) < 0.01 and slope < 0.02
    acceptance(2, ok, f"U/U_ret = {ratio:.5f} (within 1%), |32 U(2z)/U(z) - 1| = {slope:.2e} (< 2%)")
    assert ok


# 3 -------------------------------------------------------------------------


def test_nonretarded_asymptote(dmds, acceptance):
    lam = CONST.c / DMDS_OMEGA
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ratio = u_chiral_perfect_mirror(R, dmds, 1e-3 * lam) / u_chiral_nonretarded_limit(dmds, 1e-3 * lam, R)
    z = np.geomspace(1e-4, 1e-3, 6) * lam
    y = [abs(u_chiral_perfect_mirror(R, dmds, x) / math.log(DMDS_OMEGA * x / CONST.c)) for x in z]
    exponent = np.polyfit(np.log(z), np.log(y), 1)[0]
    ok = abs(ratio - 1) < 0.10 and abs(exponent + 3.0) <= 0.1
    acceptance(3, ok, f"U/U_nr = {ratio:.4f} (within 10%), exponent of U/ln(wz/c) = {exponent:.4f} (-3 +/- 0.1)")
    assert ok


# 4 -------------------------------------------------------------------------


def test_fresnel_recovery(dmds, acceptance):
    p = dict(WOODPILE, omega_m=0.0, a=0.0)
    medium = ChiralMedium.from_parameters(**p)
    z = 5 * NM
    u = u_nonretarded_halfspace(medium, dmds, z).electric
    eps = medium.eps_model.at_imag

    def f(xi):
        e = eps(xi).real
        return alpha_iso(dmds, xi) * (e - 1) / (e + 1)

    oracle = -CONST.hbar / (16 * math.pi**2 * CONST.eps0 * z**3) * trapezoid_log(f, n=10**6)
    err = _relerr(u, oracle)
    ok = err < 1e-6
    acceptance(4, ok, f"rel err vs 1e6-node trapezoid {err:.2e} (< 1e-6)")
    assert ok


# 5 -------------------------------------------------------------------------


def _random_medium(rng):
    def freq():
        return 10 ** rng.uniform(13, 16)

    return ChiralMedium.from_parameters(
        omega_p=freq(), omega_m=freq(), a=rng.choice([-1, 1]) * freq(),
        omega_E=freq(), omega_B=freq(), omega_C=freq(),
        gamma_E=freq() / 100, gamma_B=freq() / 100, gamma_C=rng.choice([-1, 1]) * freq() / 100,
    )


def _random_molecule(rng):
    return Molecule(tuple(
        Transition(rng.choice([-1, 1]) * 10 ** rng.uniform(14, 17),
                   10 ** rng.uniform(-61, -58),
                   rng.choice([-1, 1]) * 10 ** rng.uniform(-66, -62))
        for _ in range(rng.integers(1, 4))
    ))


def _curie_failures(medium, mol):
    fails = []
    base = nonretarded_coefficients(medium, mol)
    achiral_medium = ChiralMedium(medium.eps_model, medium.mu_model,
                                  type(medium.kappa_model)(0.0, medium.kappa_model.omega_c,
                                                           medium.kappa_model.gamma_c))
    c = nonretarded_coefficients(achiral_medium, mol)
    if c.chiral_offres != 0.0 or c.chiral_res != 0.0:
        fails.append("achiral medium")
    achiral_mol = Molecule(tuple(Transition(t.omega_kn, t.dipole_sq, 0.0) for t in mol.transitions))
    c = nonretarded_coefficients(medium, achiral_mol)
    if c.chiral_offres != 0.0 or c.chiral_res != 0.0:
        fails.append("achiral molecule")
    for label, c in (("R -> -R", nonretarded_coefficients(medium, mol.mirrored())),
                     ("a -> -a", nonretarded_coefficients(medium.mirrored(), mol))):
        if (c.chiral_offres != -base.chiral_offres or c.chiral_res != -base.chiral_res
                or c.electric_offres != base.electric_offres or c.electric_res != base.electric_res):
            fails.append(label)
    if mol.is_ground_state:
        u = u_chiral_perfect_mirror(R, mol, 3 * NM)
        if u_chiral_perfect_mirror(R, mol.mirrored(), 3 * NM) != -u:
            fails.append("mirror R -> -R")
    return fails


def test_curie_and_antisymmetry(acceptance):
    rng = np.random.default_rng(20240515)
    t0 = time.perf_counter()
    failures = []
    for i in range(100):
        medium, mol = _random_medium(rng), _random_molecule(rng)
        failures += [(i, f) for f in _curie_failures(medium, mol)]
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 30
    acceptance(5, ok, f"100 random sets, {len(failures)} failures, {elapsed:.2f} s (< 30 s)")
    assert ok, failures[:5]


# 6 -------------------------------------------------------------------------


def test_ground_state_cavity(woodpile, dmds, acceptance):
    t0 = time.perf_counter()
    config = CavityConfig.opposite_walls(woodpile, dmds, 100 * NM)
    assert config.grid == 200
    result = scan(config)
    left, right = result.coefficients["left"], result.coefficients["right"]
    mid = evaluate(config, [0.0], left, right)
    cancel = abs(mid.F_e_total[0]) / abs(mid.F_e_left[0])
    ratios = [magnitude_ratio(result, z) for z in (-25 * NM, 25 * NM)]
    elapsed = time.perf_counter() - t0
    ok = (cancel < 1e-10 and mid.F_c_total[0] != 0 and min(ratios) >= 1e3
          and len(result.z) == 200 and elapsed < 60)
    acceptance(6, ok, f"mid-gap |F_e|/|F_e,wall| = {cancel:.1e} (< 1e-10), F_c(0) = {mid.F_c_total[0]:.3e} N, "
                      f"min |F_e/F_c| at +/-25 nm = {min(ratios):.2e} (>= 1e3), {elapsed:.2f} s (< 60 s)")
    assert ok


# 7 -------------------------------------------------------------------------


def _tuned(omega_p):
    return ChiralMedium.from_parameters(**tuned_medium_parameters(omega_p))


def _neighbours(x, n):
    lo, hi, out = x, x, [x]
    for _ in range(n):
        lo, hi = np.nextafter(lo, 0.0), np.nextafter(hi, np.inf)
        out += [lo, hi]
    return out


def _width(config):
    result = scan(config)
    region = dominance_region(result)
    coarse = 0.0 if region is None else region[1] - region[0]
    # fine grid around mid-gap so a sub-grid interval is still measured
    left, right = result.coefficients["left"], result.coefficients["right"]
    fine = dominance_region(evaluate(config, np.linspace(-10 * NM, 10 * NM, 20001), left, right))
    return max(coarse, 0.0 if fine is None else fine[1] - fine[0])


def test_excited_state_dominance(dmds, dmds_excited, acceptance):
    # electric coefficient changes sign at the dispersive surface resonance
    def ce(omega_p):
        return nonretarded_coefficients(_tuned(omega_p), dmds_excited).electric

    root = brentq(ce, 1.029e16, 1.031e16, xtol=1e-300, rtol=8.9e-16)
    candidates = _neighbours(root, 50)

    def dominance(omega_p):
        c = nonretarded_coefficients(_tuned(omega_p), dmds_excited)
        return abs(c.chiral / c.electric) if c.electric != 0 else math.inf

    best = max(candidates, key=dominance)
    assert TUNED_OMEGA_P in candidates and dominance(TUNED_OMEGA_P) == dominance(best)

    medium = _tuned(TUNED_OMEGA_P)
    excited = CavityConfig.opposite_walls(medium, dmds_excited, 100 * NM)
    ground = CavityConfig.opposite_walls(medium, dmds, 100 * NM)
    width = _width(excited)
    fc_exc = scan(excited).F_c_total
    fc_gnd = scan(ground).F_c_total
    opposite = bool(np.all(np.sign(fc_exc) == -np.sign(fc_gnd)))

    ok = width > 5 * NM and opposite
    acceptance(7, ok, f"omega_p = {TUNED_OMEGA_P!r} rad/s: dominance width {width / NM:.3g} nm (> 5 nm), "
                      f"chiral force opposite to ground state at all z: {opposite}")
    assert opposite, "chiral force direction does not reverse"
    assert width > 5 * NM, f"dominance width {width / NM:.3g} nm"


# 8 -------------------------------------------------------------------------


def _fd_cases(woodpile, tuned, dmds, dmds_excited):
    gnd_cav = CavityConfig.opposite_walls(woodpile, dmds, 100 * NM)
    exc_cav = CavityConfig.opposite_walls(tuned, dmds_excited, 100 * NM)
    coeffs = {id(c): wall_coefficients(c) for c in (gnd_cav, exc_cav)}

    def cavity(cfg, part):
        l, r = coeffs[id(cfg)]
        return (lambda z: getattr(evaluate(cfg, [z], l, r), f"F_{part}_total")[0],
                lambda z: getattr(evaluate(cfg, [z], l, r), f"U_{part}_total")[0])

    def halfspace(medium, mol, part):
        return (lambda z: getattr(force_nonretarded(medium, mol, z), part),
                lambda z: getattr(u_nonretarded_halfspace(medium, mol, z), part))

    def mirror(h):
        return (lambda z: force_perfect_mirror(h, dmds, z),
                lambda z: u_chiral_perfect_mirror(h, dmds, z))

    log_z = ("log", 1 * NM, 1e-6)
    near_z = ("log", 1 * NM, 100 * NM)
    gap_z = ("gap", 5 * NM, 45 * NM)
    return [
        ("mirror right", *mirror(R), log_z),
        ("mirror left", *mirror(L), log_z),
        ("halfspace electric", *halfspace(woodpile, dmds, "electric"), near_z),
        ("halfspace chiral", *halfspace(woodpile, dmds, "chiral"), near_z),
        ("excited halfspace chiral", *halfspace(tuned, dmds_excited, "chiral"), near_z),
        ("cavity electric", *cavity(gnd_cav, "e"), gap_z),
        ("cavity chiral", *cavity(gnd_cav, "c"), gap_z),
        ("excited cavity chiral", *cavity(exc_cav, "c"), gap_z),
    ]


def _draw_z(rng, kind):
    mode, lo, hi = kind
    if mode == "log":
        return 10 ** rng.uniform(math.log10(lo), math.log10(hi))
    return rng.choice([-1, 1]) * rng.uniform(lo, hi)


def _fd(potential, z, rel_step=1e-5):
    if z > 0:
        return -central_difference(potential, z, rel_step)
    h = abs(z) * rel_step
    return -(potential(z + h) - potential(z - h)) / (2 * h)


def test_numerical_hygiene(woodpile, tuned, dmds, dmds_excited, acceptance):
    rng = np.random.default_rng(8)
    cases = _fd_cases(woodpile, tuned, dmds, dmds_excited)
    worst_fd = 0.0
    for _ in range(20):
        name, force, potential, kind = cases[rng.integers(len(cases))]
        z = _draw_z(rng, kind)
        err = _relerr(_fd(potential, z), force(z))
        worst_fd = max(worst_fd, err)

    doubled = QuadratureSpec(base_nodes=128)
    stability = []
    for z in (1 * NM, 30 * NM, 1e-6):
        stability.append(_relerr(perfect_mirror_integral(dmds, z, doubled).value,
                                 perfect_mirror_integral(dmds, z).value))
    for medium, mol in ((woodpile, dmds), (tuned, dmds_excited)):
        a, b = nonretarded_coefficients(medium, mol), nonretarded_coefficients(medium, mol, doubled)
        stability += [_relerr(b.electric_offres, a.electric_offres), _relerr(b.chiral_offres, a.chiral_offres)]
    stability.append(_relerr(u_chiral_general_offres(PerfectChiralMirror(R), dmds, 10 * NM, doubled),
                             u_chiral_general_offres(PerfectChiralMirror(R), dmds, 10 * NM)))
    worst_q = max(stability)

    ok = worst_fd < 1e-5 and worst_q <= 1e-8
    acceptance(8, ok, f"max FD rel err over 20 pairs {worst_fd:.2e} (< 1e-5), "
                      f"max node-doubling change {worst_q:.2e} (<= 1e-8)")
    assert ok


# 9 -------------------------------------------------------------------------


def test_dmds_sanity(acceptance):
    lhs, rhs = DMDS_ROTATORY / CONST.c, 1e-11 * DMDS_DIPOLE_SQ
    ok = lhs <= rhs
    acceptance(9, ok, f"R/c = {lhs:.3e} <= 1e-11 |d|^2 = {rhs:.3e}")
    assert ok
    mol = dmds_example()
    assert mol.transitions[0].rotatory / CONST.c <= 1e-11 * mol.transitions[0].dipole_sq


@pytest.mark.parametrize("excited", [False, True])
def test_dmds_preset_matches_constants(excited):
    t = dmds_example(excited=excited).transitions[0]
    assert abs(t.omega_kn) == DMDS_OMEGA and t.dipole_sq == DMDS_DIPOLE_SQ
    assert t.rotatory == DMDS_ROTATORY

