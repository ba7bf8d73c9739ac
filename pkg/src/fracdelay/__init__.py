"""Scalar fractional delay differential equations.

Conformable and Caputo formulations of

    D^alpha y(t) + a y(t - T) = b(t),   y(0) = y0,   y(t) = 0 for t < 0,

with truncated series solutions, mesh-aligned time steppers and the error
harness used to compare them.
"""

from .specfun import MLParams, conformable_exp, log_gamma, mittag_leffler
from .forcing import ForcingSeries, eval_forcing, named_forcing
from .mesh import (
    Mesh,
    Trajectory,
    build_mesh,
    delayed_value_floor,
    delayed_value_interp,
)
from .conformable import (
    ProblemConfig,
    conformable_derivative_mesh,
    conformable_integral_numeric,
    conformable_linear_ivp,
    series_solution_conformable,
    solve_euler_conformable,
    solve_rk4_conformable,
)
from .caputo import (
    L2SigmaParams,
    caputo_constant_forcing,
    discrete_caputo_l1,
    series_solution_caputo,
    solve_l1_euler_caputo,
    solve_l2_1sigma_caputo,
    solve_predictor_corrector_caputo,
)
from .analysis import (
    ErrorReport,
    compare,
    convergence_study,
    run_scheme,
    stability_margin,
)
from .errors import (
    ConfigError,
    FracDelayError,
    MeshMismatchError,
    NonConvergenceError,
    SeriesOverflowError,
)

__version__ = "0.1.0"

__all__ = [
    "MLParams",
    "conformable_exp",
    "log_gamma",
    "mittag_leffler",
    "ForcingSeries",
    "eval_forcing",
    "named_forcing",
    "Mesh",
    "Trajectory",
    "build_mesh",
    "delayed_value_floor",
    "delayed_value_interp",
    "ProblemConfig",
    "conformable_derivative_mesh",
    "conformable_integral_numeric",
    "conformable_linear_ivp",
    "series_solution_conformable",
    "solve_euler_conformable",
    "solve_rk4_conformable",
    "L2SigmaParams",
    "caputo_constant_forcing",
    "discrete_caputo_l1",
    "series_solution_caputo",
    "solve_l1_euler_caputo",
    "solve_l2_1sigma_caputo",
    "solve_predictor_corrector_caputo",
    "ErrorReport",
    "compare",
    "convergence_study",
    "run_scheme",
    "stability_margin",
    "ConfigError",
    "FracDelayError",
    "MeshMismatchError",
    "NonConvergenceError",
    "SeriesOverflowError",
]
