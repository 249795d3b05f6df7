"""Pseudospectral simulator and function-space diagnostics for the
generalized zero-family momentum equation m_t + u^k m_x = 0, m = u - u_xx,
on a large periodic box.
"""

from .checks import (
    DiagnosticsRecorder,
    DiagnosticsSeries,
    TheoremReport,
    check_h3_growth,
    check_i_functional_identity,
    check_l1_conservation,
    check_mean_conservation,
    check_radius_bound,
    check_sign_invariance,
    check_slope_bound,
    check_support_spreading,
    empirical_energy_ratio,
    lifespan_bound,
    lifespan_coefficient,
    lifespan_time,
    radius_lower_bound,
    run_with_diagnostics,
)
from .config import PRESETS, ConfigError, RunConfig, load_preset, parse_config
from .dynamics import (
    IntegrationResult,
    ModelParams,
    SolverConfig,
    State,
    cfl_dt,
    integrate,
    momentum,
    rhs,
    rk4_step,
    velocity_from_momentum,
)
from .families import load_field, make_field, save_field
from .flow import FlowMap, evolve_flow, transport_residual
from .runner import run_experiment, run_sweep
from .spaces import (
    GevreyNorm,
    RadiusFit,
    analyticity_radius,
    c1_norm,
    gevrey_norm,
    himonas_misiolek_norm,
    integral,
    kato_masuda_sq,
    kato_masuda_terms,
    l1_norm,
    sobolev_norm,
)
from .spectral import (
    ConfigurationError,
    EdgeDecayWarning,
    Field,
    Grid,
    NonFiniteError,
    Spectrum,
    dealias,
    derivative,
    fourier_interpolate,
    green_convolution,
    helmholtz_inverse,
    to_field,
    to_spectrum,
)

__version__ = "0.1.0"
