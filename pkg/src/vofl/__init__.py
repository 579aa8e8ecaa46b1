"""Variable-order fractional Laplacian toolkit.

Radial Riesz-type kernels with a space-dependent order, their regularized
Fourier-sine transforms, the Green's function of the variable-order
Poisson problem, and a spectral forward/inverse solver for radial data.
"""

from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    ProfileError,
    TableRangeError,
    VoflError,
)
from .exponent import (
    ExponentProfile,
    ValidationReport,
    constant_profile,
    make_example1,
    make_example2,
    moebius_profile,
    tabulated_profile,
    validate,
)
from .kernel import (
    GreenFunctionSample,
    KernelEvaluation,
    green_function,
    kernel_constant_order,
    kernel_eval,
    kernel_value,
    p_asymptotics_example1,
    p_derivative_example1,
    p_derivative_fd,
    p_value,
)
from .sinexform import (
    RegularizationPolicy,
    SineTransformResult,
    delta_khat_estimate,
    delta_khat_numeric,
    khat,
    khat_at_lambda,
    khat_grid,
    truncation_error_estimate,
)
from .specialfun import SpecialFunPrecision, digamma, gamma, log_gamma
from .spectral import (
    RadialField,
    SpectralTable,
    apply_vofl,
    forward_transform,
    gaussian_field,
    inverse_transform,
    plummer_field,
    riesz_apply,
    solve_poisson,
)

__version__ = "0.1.0"
