"""fastshock: traveling fronts of u_t + f(u)_x = mu*(u**m)_xx with 0 < m < 1.

The right state sits at the diffusion singularity u = 0. The package
constructs the viscous front profiles by quadrature, classifies them
(non-degenerate vs degenerate contact with the characteristic speed),
simulates the Cauchy problem with a positivity-preserving finite-volume
scheme, and measures convergence to the front family in the weighted norms
whose exponents are calibrated to the front's tail decay.
"""

from .flux import (
    FluxModel, ShockKind, ShockClassification,
    InvalidShockError, DegenerateMinusError,
    shock_speed, g_eval, check_entropy, classify,
    k_second_derivative, check_K_convexity,
)
from .profile import (
    ShockProfile, DecayFit, QuadratureFailureError, WindowTooNarrowError,
    h_eval, build_profile, eval_profile, profile_slope, verify_decay,
)
from .solver import (
    Grid1D, SolverState, StepReport,
    NonPositiveDataError, CFLViolationError, BlowUpError,
    init_state, stable_dt, step, advance_to,
)
from .initial_data import PowerTail, ExpTail, PiecewiseFrontData, ProfileData, example_data
from .analysis import (
    NonFiniteWeightError, WeightKind, WeightSpec, weight_exponents,
    zero_mass_shift, phi_field, weighted_norm, compute_N,
    sup_error, max_slope, NRecord, DiagnosticsRecord, DiagnosticsSeries,
)
from .harness import (
    ConfigError, ParseError, ValidationError,
    ExperimentConfig, load_config, RunReport, run_experiment,
    SuiteReport, run_suite, THRESHOLDS, example_flux,
)

__version__ = "0.1.0"
