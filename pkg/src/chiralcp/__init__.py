"""Chiral and electric Casimir-Polder potentials and forces near chiral media."""

from chiralcp.core import (
    CONST,
    ChiralCPError,
    ConvergenceError,
    SingularInterfaceError,
    SingularResponseError,
    si_constants,
)
from chiralcp.material import (
    ChiralMedium,
    CondonChirality,
    LorentzOscillator,
    eval_imag,
    eval_real,
    passivity_report,
)
from chiralcp.molecule import (
    Molecule,
    Transition,
    alpha_iso,
    dmds_example,
    downward_transitions,
    gamma_iso,
)
from chiralcp.reflection import (
    Handedness,
    NonRetardedChiralHalfspace,
    PerfectChiralMirror,
    ReflectionSet,
    nonretarded_halfspace,
    perfect_mirror,
)
from chiralcp.quadrature import (
    IntegralResult,
    Mapping,
    QuadratureSpec,
    integrate_kz_tail,
    integrate_semiinfinite,
)
from chiralcp.potential import (
    Breakdown,
    force_nonretarded,
    force_perfect_mirror,
    u_chiral_general_offres,
    u_chiral_nonretarded_limit,
    u_chiral_perfect_mirror,
    u_chiral_retarded_limit,
    u_nonretarded_halfspace,
)
from chiralcp.cavity import (
    CavityConfig,
    CavityScan,
    dominance_region,
    magnitude_ratio,
    scan,
)

__version__ = "0.1.0"
