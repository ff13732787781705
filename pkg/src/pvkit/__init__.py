"""Principal-value Cauchy integrals, arc limits and Hilbert transforms."""

__version__ = "0.1.0"

from .approxid import ArcLimitReport, arc_identity_value, arc_limit_estimate, convergence_table
from .expr import ExprAst, differentiate, evaluate, parse, unparse
from .path import ArcPath, CompositePath, SegmentPath, circle, is_closed, lower_contour, reverse, upper_contour
from .pv import DecayClass, PVConfig, PVResult, TailStrategy, analytic_pv, classify_decay, pv_cauchy, verify_cauchy_goursat
from .quad import IntegralResult, QuadratureConfig, integrate_line, integrate_real_interval
from .transforms import (
    ConjugatePairReport,
    GridSignal,
    conjugate_pair_check,
    dirichlet_integral,
    dirichlet_result,
    fourier_one_over_x,
    hilbert_grid,
    hilbert_point,
    hilbert_point_result,
)
