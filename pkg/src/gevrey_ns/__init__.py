"""Pseudo-spectral Navier-Stokes/Euler on the torus with Gevrey-norm diagnostics."""

__version__ = "0.1.0"

from .lattice import (  # noqa: E402
    FieldOverflowError,
    SpectralScalarField,
    SpectralVectorField,
    TruncatedLattice,
    apply_multiplier,
    gevrey_multiplier,
    heat_factor,
    inner,
    lambda_power,
    leray_project,
    random_divfree_field,
    validate_field,
)
from .spectral import (  # noqa: E402
    ConfigurationError,
    PhysicalGrid,
    advection_fft,
    convolve_advection_exact,
    from_physical,
    to_physical,
)
from .exact import exact_solution_library  # noqa: E402
from .gevrey import (  # noqa: E402
    AprioriConstants,
    ConstantRadius,
    GevreyParams,
    RadiusSchedule,
    apriori_growth_bound,
    gevrey_norm,
    l2_norm,
    measure_constants,
    sobolev_norm,
    tau_at,
    tau_ode_residual,
)
from .solver import (  # noqa: E402
    SolverConfig,
    TrajectoryRecord,
    integrate,
    pressure_bound_check,
    recover_pressure,
    rhs,
    step_if_rk4,
)
