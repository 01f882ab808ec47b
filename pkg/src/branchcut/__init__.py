"""branchcut: a high-precision laboratory for near-diagonal Pade
approximants — where they converge, how their poles trace branch cuts,
and what that says about holomorphically embedded power-flow problems.
"""
from ._kernels import backend_name
from .analysis import (
    BadnessDetail,
    ConvergenceReport,
    Plane,
    Reach,
    ReachabilityVerdict,
    RootPortrait,
    badness_detail,
    capacity_badness,
    convergence_factor,
    convergence_factor_series,
    equilibrium_check,
    froissart_filter,
    portrait,
    reachability,
    real_axis_extent,
)
from .errors import BranchcutError
from .hem import Network, VoltageSeries, build_germ, extend, load_network, mismatch, snbp_estimate, solve
from .kernel import BigComplex, PrecisionContext, arith
from .pade import PadeApproximant, build, evaluate, near_diagonal_sequence
from .roots import RootSet, roots
from .series import (
    ExpansionPoint,
    LogRatioSpec,
    PowerSeries,
    case_spec,
    eval_reference,
    expand_at_infinity,
    expand_at_zero,
    load_spec,
)

__version__ = "0.1.0"

__all__ = [
    "BadnessDetail",
    "BigComplex",
    "BranchcutError",
    "ConvergenceReport",
    "ExpansionPoint",
    "LogRatioSpec",
    "Network",
    "PadeApproximant",
    "Plane",
    "PowerSeries",
    "PrecisionContext",
    "Reach",
    "ReachabilityVerdict",
    "RootPortrait",
    "RootSet",
    "VoltageSeries",
    "__version__",
    "arith",
    "backend_name",
    "badness_detail",
    "build",
    "build_germ",
    "capacity_badness",
    "case_spec",
    "convergence_factor",
    "convergence_factor_series",
    "equilibrium_check",
    "eval_reference",
    "evaluate",
    "expand_at_infinity",
    "expand_at_zero",
    "extend",
    "froissart_filter",
    "load_network",
    "load_spec",
    "mismatch",
    "near_diagonal_sequence",
    "portrait",
    "reachability",
    "real_axis_extent",
    "roots",
    "snbp_estimate",
    "solve",
]
