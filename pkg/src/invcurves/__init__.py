"""Invariant manifolds of the recurrence x[n+1] = alpha + beta*x[n-1] + x[n-1]/x[n].

Closed-form cubic approximations of the stable and unstable manifolds of
the saddle equilibrium (alpha < 1), and of the invariant curves through the
period-two points (alpha = 1), checked against a truncated power-series
solver of the same invariance equations.
"""

from .dynamics import (
    DomainError,
    Params,
    PeriodicPair,
    State,
    fixed_point,
    iterate_trajectory,
    periodic_partner,
    step_T,
    step_T2,
    validate_params,
)
from .manifolds import (
    CurveTrace,
    ManifoldModel,
    center_model,
    eval_manifold,
    stable_model,
    tangent_slope,
    trace_curve,
    unstable_model,
)
from .series import TruncatedSeries, solve_invariance
from .spectral import (
    PreconditionError,
    SpectrumT,
    SpectrumT2,
    change_basis,
    normal_nonlinearity,
    normal_nonlinearity2,
    spectrum_T,
    spectrum_T2,
)
from .verify import CheckReport, reproduce_paper_report, run_suite

__version__ = "0.1.0"
