"""Molecule between two chiral half-spaces, forces added wall by wall.

Coordinates are measured from the cavity centre: the left wall sits at
``-gap/2`` (medium fills z < -gap/2) and the right wall at ``+gap/2``.
Multiple reflections between the walls are ignored, so each wall contributes
its single-interface non-retarded force. Forces are reported along +z.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from chiralcp.core import ChiralCPError
from chiralcp.material import ChiralMedium
from chiralcp.molecule import Molecule
from chiralcp.potential import Breakdown, nonretarded_coefficients
from chiralcp.quadrature import DEFAULT_SPEC, QuadratureSpec

SCAN_COLUMNS = (
    "z_m",
    "F_e_left",
    "F_e_right",
    "F_e_total",
    "F_c_left",
    "F_c_right",
    "F_c_total",
    "U_e_total",
    "U_c_total",
)


@dataclass(frozen=True)
class CavityConfig:
    gap_width: float
    left_medium: ChiralMedium
    right_medium: ChiralMedium
    molecule: Molecule
    grid: int = 200
    margin: float = 1e-9

    def __post_init__(self):
        if not self.gap_width > 0:
            raise ValueError(f"gap_width must be > 0, got {self.gap_width}")
        if self.grid < 3:
            raise ValueError(f"grid must be >= 3, got {self.grid}")
        if not 0 <= self.margin < self.gap_width / 2:
            raise ValueError("margin must lie in [0, gap_width/2)")

    @classmethod
    def opposite_walls(cls, medium: ChiralMedium, molecule: Molecule, gap_width: float,
                       **kw) -> "CavityConfig":
        """Left wall ``medium``, right wall its mirror image."""
        return cls(gap_width, medium, medium.mirrored(), molecule, **kw)

    def positions(self) -> np.ndarray:
        half = self.gap_width / 2 - self.margin
        return np.linspace(-half, half, self.grid)


@dataclass
class CavityScan:
    z: np.ndarray
    F_e_left: np.ndarray
    F_e_right: np.ndarray
    F_e_total: np.ndarray
    F_c_left: np.ndarray
    F_c_right: np.ndarray
    F_c_total: np.ndarray
    U_e_total: np.ndarray
    U_c_total: np.ndarray
    coefficients: dict = field(default_factory=dict)

    def rows(self):
        cols = [getattr(self, "z" if name == "z_m" else name) for name in SCAN_COLUMNS]
        for values in zip(*cols):
            yield dict(zip(SCAN_COLUMNS, (float(v) for v in values)))


def wall_coefficients(config: CavityConfig, spec: QuadratureSpec = DEFAULT_SPEC,
                      jobs: int = 1) -> tuple[Breakdown, Breakdown]:
    """Per-wall non-retarded coefficients (left, right)."""
    media = {"left": config.left_medium, "right": config.right_medium}

    def one(side):
        try:
            return nonretarded_coefficients(media[side], config.molecule, spec)
        except ChiralCPError as exc:
            exc.args = (f"{side} wall: {exc.args[0]}",)
            raise

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=min(jobs, 2)) as pool:
            left, right = pool.map(one, ("left", "right"))
    else:
        left, right = one("left"), one("right")
    return left, right


def evaluate(config: CavityConfig, z, left: Breakdown, right: Breakdown) -> CavityScan:
    """Forces and potentials at positions ``z`` given per-wall coefficients."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    half = config.gap_width / 2
    if np.any(np.abs(z) >= half):
        bad = z[np.abs(z) >= half][0]
        raise ValueError(f"position z={bad} lies outside the gap")
    d_left = z + half
    d_right = half - z

    Ce_l, Cc_l = left.electric, left.chiral
    Ce_r, Cc_r = right.electric, right.chiral
    # away from the left wall is +z, away from the right wall is -z
    Fe_l = 3.0 * Ce_l / d_left**4
    Fe_r = -3.0 * Ce_r / d_right**4
    Fc_l = 3.0 * Cc_l / d_left**4
    Fc_r = -3.0 * Cc_r / d_right**4
    return CavityScan(
        z=z,
        F_e_left=Fe_l,
        F_e_right=Fe_r,
        F_e_total=Fe_l + Fe_r,
        F_c_left=Fc_l,
        F_c_right=Fc_r,
        F_c_total=Fc_l + Fc_r,
        U_e_total=Ce_l / d_left**3 + Ce_r / d_right**3,
        U_c_total=Cc_l / d_left**3 + Cc_r / d_right**3,
        coefficients={"left": left, "right": right},
    )


def scan(config: CavityConfig, spec: QuadratureSpec = DEFAULT_SPEC, jobs: int = 1,
         z=None) -> CavityScan:
    """Force profile across the gap, on ``config.positions()`` unless ``z`` is given."""
    left, right = wall_coefficients(config, spec, jobs)
    return evaluate(config, config.positions() if z is None else z, left, right)


def _crossing(z0, z1, y0, y1):
    return z0 - y0 * (z1 - z0) / (y1 - y0)


def dominance_region(result: CavityScan) -> tuple[float, float] | None:
    """Interval around the electric zero crossing where |F_c| > |F_e|.

    Edges are refined by linear interpolation of ``|F_c| - |F_e|``. Returns
    None when no such interval exists.
    """
    z, fe = result.z, result.F_e_total
    excess = np.abs(result.F_c_total) - np.abs(fe)
    sign_change = np.nonzero(np.signbit(fe[:-1]) != np.signbit(fe[1:]))[0]
    if len(sign_change) == 0:
        return None
    # sign change closest to the centre
    i = sign_change[np.argmin(np.abs(z[sign_change] + z[sign_change + 1]))]
    if excess[i] > 0:
        start = i
    elif excess[i + 1] > 0:
        start = i + 1
    else:
        return None
    lo = start
    while lo > 0 and excess[lo - 1] > 0:
        lo -= 1
    hi = start
    while hi < len(z) - 1 and excess[hi + 1] > 0:
        hi += 1
    z_lo = z[lo] if lo == 0 else _crossing(z[lo - 1], z[lo], excess[lo - 1], excess[lo])
    z_hi = z[hi] if hi == len(z) - 1 else _crossing(z[hi], z[hi + 1], excess[hi], excess[hi + 1])
    return float(z_lo), float(z_hi)


def magnitude_ratio(result: CavityScan, z: float) -> float:
    """|F_e_total| / |F_c_total| at ``z``, linearly interpolated; inf when the chiral force is zero."""
    if not result.z[0] <= z <= result.z[-1]:
        raise ValueError(f"z={z} outside scanned range [{result.z[0]}, {result.z[-1]}]")
    fe = np.interp(z, result.z, result.F_e_total)
    fc = np.interp(z, result.z, result.F_c_total)
    if fc == 0:
        return float("inf")
    return float(abs(fe) / abs(fc))
