"""Solver suite for the PT-symmetric extension of the KdV equation,

    u_t - i u (i u_x)^eps + u_xxx = 0,

covering spectral time evolution, conserved quantities of the eps=3 member
(with their Airy closed forms), solitary-wave profiles of the odd-eps
family, and a scenario runner for the pulse experiments.
"""

from .airy import (
    AiryValue,
    ai,
    ai_primitive,
    ai_value,
    bi,
    bi_primitive,
    bi_value,
    hi,
    hi_value,
)
from .dynamics import (
    EvolutionConfig,
    Trajectory,
    eps0_exact,
    evolve,
    export_trajectory,
    kdv_soliton,
    nonlinear_term,
)
from .errors import (
    BlowUpError,
    CarrierMismatchError,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    MalformedProfileError,
    NoSolutionError,
    NoWaveError,
    PtkdvError,
    SingularPowerError,
)
from .fields import (
    Field,
    Grid,
    distance,
    make_grid,
    quadrature,
    sample,
    spectral_derivative,
    write_field_csv,
)
from .invariants import (
    ConservedReport,
    SeriesSpec,
    drift_report,
    eps3_energy,
    eps3_momentum,
    hierarchy_residual,
    kdv_energy,
    kdv_momentum,
    parts_identity_residual,
    write_report,
)
from .waves import (
    Profile,
    export_profile,
    half_width,
    match_emergent_wave,
    peak_height,
    profile_field,
    profile_rhs,
    scorer_residual,
    solve_profile,
)

__version__ = "0.1.0"

__all__ = [
    "ai", "bi", "hi", "ai_primitive", "bi_primitive",
    "AiryValue", "ai_value", "bi_value", "hi_value",
    "Grid", "Field", "make_grid", "sample", "spectral_derivative",
    "quadrature", "distance", "write_field_csv",
    "EvolutionConfig", "Trajectory", "nonlinear_term", "evolve",
    "kdv_soliton", "eps0_exact", "export_trajectory",
    "SeriesSpec", "ConservedReport", "kdv_momentum", "kdv_energy",
    "eps3_momentum", "eps3_energy", "parts_identity_residual",
    "hierarchy_residual", "drift_report", "write_report",
    "Profile", "profile_rhs", "solve_profile", "peak_height", "half_width",
    "scorer_residual", "match_emergent_wave", "profile_field",
    "export_profile",
    "PtkdvError", "DomainError", "CarrierMismatchError", "SingularPowerError",
    "ConfigurationError", "BlowUpError", "ConvergenceError",
    "NoSolutionError", "NoWaveError", "MalformedProfileError",
]
