"""Eisenstein-series integral functions, their critical-line zeros, the real-zero
crossover y* = 4 pi exp(-gamma), Maass-Selberg verification, and semistable
lattice classification."""

from .options import (
    AccuracyError,
    BoundaryZeroError,
    DEFAULT_OPTIONS,
    EisZerosError,
    EvalOptions,
    NearPoleError,
    PoleError,
    RankError,
    ScaleError,
    SelfCheckError,
)
from .special_functions import (
    completed_zeta,
    gamma_complex,
    k_bessel,
    riemann_zeta,
    sigma_divisor,
    xi,
    xi_logderiv_at_zero,
)
from .eisenstein import (
    EULER_GAMMA,
    EisensteinValue,
    FamilyParam,
    a0,
    a_n,
    eisenstein_series,
    g_constant_term,
    h_constant_term,
    h_truncation,
    i_truncation,
    z2q,
)
from .zero_finder import (
    PhaseTrace,
    RectangleCount,
    ZeroRecord,
    a0_on_line,
    count_zeros_rectangle,
    critical_line_zeros,
    f_logderiv,
    phase_trace,
    predicted_count,
    real_zeros,
    y_star,
    y_star_via_fprime,
    zero_trajectory,
)
from .verification import MSCheckReport, maass_selberg_check, truncated_eisenstein
from .lattice import (
    CanonicalPolygon,
    LatticeBasis,
    Rank2Classification,
    SubmultReport,
    canonical_polygon,
    classify_rank2_point,
    covolume,
    kappa_r,
    parse_basis_text,
    slope,
    submultiplicativity_check,
)

__version__ = "0.1.0"
