"""First curve of the Fucik spectrum of the discrete Dirichlet Laplacian."""

from .asymptotics import (
    AsymptoteModel,
    Certificate,
    capacity,
    certify_upper_bound,
    epsilon_beta,
    k_curve_asymptote,
    rbar1,
    separation_check,
)
from .core import (
    FucikParams,
    RegularizedState,
    SpectrumPoint,
    f_gradient,
    f_value,
    fiber_scale,
    minimize_on_M,
    project_to_M,
    residual_norm,
    seed_feasible,
    solve_point,
)
from .errors import *  # noqa: F401,F403
from .grid import (
    Domain,
    Field,
    build_ball,
    build_box,
    build_domain,
    build_interval,
    build_rectangle,
    dirichlet_energy,
    l2_norm,
)
from .oracle1d import first_curve_analytic, shoot_first_curve
from .spectral import EigenPair, smallest_eigenpairs
from .tracer import CurveTrace, Report, asymptotic_diagnostic, trace_curve

__version__ = "0.1.0"
