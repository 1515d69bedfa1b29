"""Ranks of cyclic twists of elliptic curves over F_p(t), computed exactly."""

from .characters import OrderLCharacter, enumerate_characters, parity
from .constant import (
    SearchResult,
    constant_twist_direct,
    constant_twist_lpoly,
    search_deg2_matches,
    vanishing_check,
)
from .covers import (
    CoverSpec,
    PlaneModel,
    cover_equation,
    generate_vanishing_family,
    genus_and_count,
    substitute,
    zeta_count,
)
from .cyclotomic import CycNumber
from .elliptic import ConstantCurve, CurveOverFqt, constant_curve_with_trace, legendre, second_curve
from .galois import FieldCtx, FieldPoly, Place, factor, field
from .lfunction import (
    LPoly,
    analytic_rank,
    curve_lpoly,
    degree_truncation_check,
    dirichlet_lpoly,
    theorem_sign,
    twisted_by_fibers,
    twisted_lpoly,
    verify_fe,
)
from .sweep import RankHistogram, SweepJob, run_sweep

__version__ = "0.1.0"
