"""Numerical laboratory for point-vortex interaction energies on planar
domains: Green/Robin function evaluators, configuration-space energies and
their degree theory, a mean-field semilinear solver with continuation, and
radial shooting for an exponential-nonlinearity family."""

from .geometry import (
    ClosedCurve,
    Configuration,
    Domain,
    MalformedDomainError,
    RegionThresholds,
    SingularConfigurationError,
    build_domain,
    config_space_euler,
)
from .green import (
    AnnulusGreen,
    BoundaryIntegralGreen,
    DiskGreen,
    HalfPlaneGreen,
    make_evaluator,
    rescaled_green_error,
)
from .fields import (
    BendingProfile,
    PointField,
    WeightProfile,
    bent_phi_field,
    phi_field,
    strip_fields,
    xi_certificate,
    xi_field,
)
from .degree import (
    BoundaryChart,
    ConfigRegion,
    CriticalPointRecord,
    DegeneracyError,
    DegreeReport,
    UnsafeRegionError,
    brouwer_degree,
    degree_jump_check,
    expected_degree,
    find_zeros,
    meanfield_degree,
    strip_degree,
)
from .meanfield import (
    Branch,
    MFSolution,
    Mesh,
    MeshError,
    NonconvergenceError,
    blowup_diagnostics,
    bubble_profile_error,
    continue_branch,
    dirichlet_lambda1,
    liouville_beta,
    liouville_exact,
    liouville_lambda,
    solve_meanfield,
    triangulate,
)
from .shooting import (
    NoZeroError,
    RadialSolution,
    RegimeError,
    beta_curve,
    excess_energy_fit,
    expected_excess,
    shoot,
)

__all__ = [
    "AnnulusGreen",
    "BendingProfile",
    "BoundaryChart",
    "BoundaryIntegralGreen",
    "Branch",
    "ClosedCurve",
    "ConfigRegion",
    "Configuration",
    "CriticalPointRecord",
    "DegeneracyError",
    "DegreeReport",
    "DiskGreen",
    "Domain",
    "HalfPlaneGreen",
    "MFSolution",
    "MalformedDomainError",
    "Mesh",
    "MeshError",
    "NoZeroError",
    "NonconvergenceError",
    "PointField",
    "RadialSolution",
    "RegimeError",
    "RegionThresholds",
    "SingularConfigurationError",
    "UnsafeRegionError",
    "WeightProfile",
    "bent_phi_field",
    "beta_curve",
    "blowup_diagnostics",
    "brouwer_degree",
    "bubble_profile_error",
    "build_domain",
    "config_space_euler",
    "continue_branch",
    "degree_jump_check",
    "dirichlet_lambda1",
    "excess_energy_fit",
    "expected_degree",
    "expected_excess",
    "find_zeros",
    "liouville_beta",
    "liouville_exact",
    "liouville_lambda",
    "make_evaluator",
    "meanfield_degree",
    "phi_field",
    "rescaled_green_error",
    "shoot",
    "solve_meanfield",
    "strip_degree",
    "strip_fields",
    "triangulate",
    "xi_certificate",
    "xi_field",
]

__version__ = "0.1.0"
