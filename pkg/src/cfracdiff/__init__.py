"""Complex-order fractional difference equations: simulation and stability.

The package simulates linear and nonlinear difference systems whose
fractional order alpha = u + i*v is a complex number with u in (0, 1], and
decides asymptotic stability of equilibria two independent ways: membership
inside the parametric stability boundary curve, and direct counting of
characteristic roots outside the unit circle.
"""

from .kernel import (
    ComplexOrder,
    KernelCapacityError,
    PhiKernel,
    convolve_at,
    phi_coefficients,
)
from .solver import (
    DIVERGENCE_CUTOFF,
    MapSpec,
    Trajectory,
    numerical_jacobian,
    simulate_linear,
    simulate_nonlinear,
)
from .special_functions import (
    GammaPoleError,
    PowerDomainError,
    cpow_principal,
    log_gamma,
)
from .stability import (
    BoundaryCurve,
    Stability,
    StabilityVerdict,
    WindingError,
    boundary_curve,
    classify_lambda,
    classify_matrix,
    count_roots_outside,
    curve_point,
    detect_self_intersection,
    is_simple_order,
    real_axis_intervals,
)
from .systems import (
    CoupledParams,
    LogisticParams,
    NotAnEquilibriumError,
    build_system,
    coupled_map,
    equilibrium_verdict,
    linear_map,
    logistic_map,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ComplexOrder",
    "PhiKernel",
    "KernelCapacityError",
    "phi_coefficients",
    "convolve_at",
    "MapSpec",
    "Trajectory",
    "DIVERGENCE_CUTOFF",
    "simulate_linear",
    "simulate_nonlinear",
    "numerical_jacobian",
    "GammaPoleError",
    "PowerDomainError",
    "log_gamma",
    "cpow_principal",
    "BoundaryCurve",
    "Stability",
    "StabilityVerdict",
    "WindingError",
    "curve_point",
    "boundary_curve",
    "is_simple_order",
    "detect_self_intersection",
    "classify_lambda",
    "classify_matrix",
    "count_roots_outside",
    "real_axis_intervals",
    "LogisticParams",
    "CoupledParams",
    "NotAnEquilibriumError",
    "linear_map",
    "logistic_map",
    "coupled_map",
    "equilibrium_verdict",
    "build_system",
]
