"""Exact moments and cumulants of traces of monomials in independent complex
Wishart matrices, their large-N limits, and Monte Carlo cross-checks."""
from .asymptotics import (
    CltCovariance,
    InsufficientMomentsError,
    MomentSequence,
    clt_covariance,
    limit_covariance,
    limit_mean,
    word_moments,
)
from .coloring import Coloring, EnumerationLimitError, connecting_planar_sets, enumerate_color_preserving, planar_set
from .config import ConfigError, RunConfig, load_config
from .cumulants import (
    GenusGradedExpr,
    StarsSpec,
    covariance_symbolic,
    cumulant_from_moments,
    cumulant_hypermap,
    enumerate_set_partitions,
    equal_parameter_reduction,
)
from .moments import MomentSpec, WishartModel, glm_moment, hss_moment, mn_moment, moment_numeric, moment_symbolic
from .montecarlo import MCEstimate, estimate_cumulant, estimate_laplace, estimate_moment, sample_wishart
from .parser import ParseError, parse_expression, parse_trace_expr, parse_word
from .perm import Permutation, compose, cycle_count, euler_genus, orbits
from .words import TraceExpr, TraceWord, entry_sum_identity_check, evaluate

__version__ = "0.1.0"
