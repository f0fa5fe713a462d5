"""Principal eigenvalues of radially symmetric advection-diffusion
operators under large oscillating drift.

The package solves

    -phi'' - ((d-1)/r) phi' - 2 s m'(r) phi' + c(r) phi = lambda phi

on [0, 1] in weighted self-adjoint form, builds the two families of
infinitely oscillating drift potentials whose eigenvalues converge to
the core Dirichlet/Neumann reference values as s grows, and runs the
alternating tail-fold construction whose eigenvalue path oscillates
between those two limits instead of converging.
"""

from ._kernels import USING_NUMBA
from .coefficients import (
    BumpPotential,
    CoefficientError,
    MembershipReport,
    OscillationSchedule,
    Potential,
    Reaction,
    build_reaction,
    build_sdd,
    build_snn,
    envelope,
    fold_tail,
    make_schedule,
    potential_from_json,
    sup_distance,
    verify_h1,
    verify_membership,
)
from .mesh import Mesh, MeshError, build_mesh, refine
from .eigensolver import (
    EigenResult,
    EigensolverError,
    ReferenceEigenvalues,
    SweepPoint,
    WeightOverflowError,
    eigenvalue_sweep,
    reference_eigenvalues,
    solve_principal,
)
from .oracle import CrosscheckRecord, OracleError, ShootingConfig, \
    crosscheck, shoot_principal
from .asymptotics import (
    AsymptoticsError,
    LadderCoefficients,
    TrendReport,
    WindowReport,
    dirichlet_test_upper_bound,
    efg,
    ladder,
    neumann_test_upper_bound,
    trend,
    window_indices,
)
from .construction import (
    ConstructionConfig,
    ConstructionError,
    ConstructionTrace,
    check_continuity_bound,
    find_switch_s,
    kappa,
    kappa_report,
    rho,
    run_construction,
    threshold_s,
)

__version__ = "1.0.0"

__all__ = [
    "USING_NUMBA", "__version__",
    "BumpPotential", "CoefficientError", "MembershipReport",
    "OscillationSchedule", "Potential", "Reaction", "build_reaction",
    "build_sdd", "build_snn", "envelope", "fold_tail", "make_schedule",
    "potential_from_json", "sup_distance", "verify_h1", "verify_membership",
    "Mesh", "MeshError", "build_mesh", "refine",
    "EigenResult", "EigensolverError", "ReferenceEigenvalues", "SweepPoint",
    "WeightOverflowError", "eigenvalue_sweep", "reference_eigenvalues",
    "solve_principal",
    "CrosscheckRecord", "OracleError", "ShootingConfig", "crosscheck",
    "shoot_principal",
    "AsymptoticsError", "LadderCoefficients", "TrendReport", "WindowReport",
    "dirichlet_test_upper_bound", "efg", "ladder",
    "neumann_test_upper_bound", "trend", "window_indices",
    "ConstructionConfig", "ConstructionError", "ConstructionTrace",
    "check_continuity_bound", "find_switch_s", "kappa", "kappa_report",
    "rho", "run_construction", "threshold_s",
]
