"""Molecular transition data and the isotropic susceptibilities built from it.

Each transition carries a signed frequency ``omega_kn = omega_k - omega_n``
measured from the initial state n, so a negative value marks a downward
transition available for resonant (emission-type) contributions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from chiralcp.core import CONST

# Dimethyl disulphide, first transition at a 90 degree dihedral angle.
DMDS_OMEGA = 9.17e15  # rad/s
DMDS_DIPOLE_SQ = 8.264e-60  # (C m)^2
DMDS_ROTATORY = 3.328e-64  # C^2 m^3 / s


@dataclass(frozen=True)
class Transition:
    omega_kn: float
    dipole_sq: float
    rotatory: float

    def __post_init__(self):
        if self.dipole_sq < 0:
            raise ValueError(f"dipole_sq must be >= 0, got {self.dipole_sq}")
        if self.omega_kn == 0:
            raise ValueError("transition frequency omega_kn must be nonzero")

    @property
    def is_downward(self) -> bool:
        return self.omega_kn < 0


@dataclass(frozen=True)
class Molecule:
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if not self.transitions:
            raise ValueError("a molecule needs at least one transition")

    def mirrored(self) -> "Molecule":
        """The enantiomer: every rotatory strength negated."""
        return Molecule(tuple(replace(t, rotatory=-t.rotatory) for t in self.transitions))

    @property
    def is_ground_state(self) -> bool:
        return all(t.omega_kn > 0 for t in self.transitions)

    @property
    def dominant_frequency(self) -> float:
        """|omega_kn| of the transition with the largest dipole strength."""
        t = max(self.transitions, key=lambda t: (t.dipole_sq, abs(t.rotatory)))
        return abs(t.omega_kn)

    def _arrays(self):
        w = np.array([t.omega_kn for t in self.transitions])
        d2 = np.array([t.dipole_sq for t in self.transitions])
        r = np.array([t.rotatory for t in self.transitions])
        return w, d2, r


def alpha_iso(mol: Molecule, xi):
    """Isotropic electric polarisability alpha(i*xi) in C^2 m^2 / J.

    alpha = (2/3hbar) sum_k omega_kn |d_nk|^2 / (omega_kn^2 + xi^2)

    Negative for an initial state whose downward transitions dominate.
    """
    xi = np.asarray(xi, dtype=float)
    w, d2, _ = mol._arrays()
    terms = w * d2 / (w**2 + xi[..., None] ** 2)
    return 2.0 / (3.0 * CONST.hbar) * terms.sum(axis=-1)


def gamma_iso(mol: Molecule, xi):
    """Isotropic electric-magnetic cross polarisability Gamma(i*xi).

    Gamma = -(2/3hbar) sum_k xi R_nk / (omega_kn^2 + xi^2)
    """
    xi = np.asarray(xi, dtype=float)
    w, _, r = mol._arrays()
    terms = r / (w**2 + xi[..., None] ** 2)
    return -2.0 / (3.0 * CONST.hbar) * xi * terms.sum(axis=-1)


def gamma_slope_at_zero(mol: Molecule) -> float:
    """d Gamma / d xi at xi = 0, i.e. -(2/3hbar) sum_k R_nk / omega_kn^2."""
    w, _, r = mol._arrays()
    return float(-2.0 / (3.0 * CONST.hbar) * np.sum(r / w**2))


def downward_transitions(mol: Molecule) -> list[Transition]:
    """Transitions with omega_kn < 0, the only ones that feed resonant terms."""
    return [t for t in mol.transitions if t.is_downward]


def dmds_example(excited: bool = False, enantiomer: bool = False) -> Molecule:
    """Two-level dimethyl disulphide model.

    ``excited`` starts the molecule in the upper level (omega_kn = -omega);
    ``enantiomer`` flips the sign of the rotatory strength.
    """
    omega = -DMDS_OMEGA if excited else DMDS_OMEGA
    rot = -DMDS_ROTATORY if enantiomer else DMDS_ROTATORY
    return Molecule((Transition(omega, DMDS_DIPOLE_SQ, rot),))
