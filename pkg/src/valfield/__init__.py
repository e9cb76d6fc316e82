"""Extensions of rank-one valuations to finite simple extensions.

Typical use::

    from valfield import parse_base, parse_poly, compute_extensions

    base = parse_base("tower:2")
    g = parse_poly("x^2 - x - 1/t", base).poly
    for report in compute_extensions(g, base):
        print(report.e, report.f, report.defect, report.case_tag)
"""

from .errors import *  # noqa: F401,F403
from .extensions import (
    Bounds,
    CaseTag,
    ExtensionReport,
    LimitInfo,
    compute_extensions,
    detect_limit,
    fundamental_equality_check,
    inseparable_degree,
)
from .keypoly import (
    KeyPolyChain,
    NewtonPolygon,
    ResidualPoly,
    augment,
    chain_invariants,
    effective_degree,
    empty_chain,
    newton_residual,
    q_expansion,
    trunc_value,
)
from .parse import PolyExpr, parse_poly
from .ramification import (
    AutClassification,
    RamificationTable,
    automorphism_oracle,
    check_defectless_criterion,
    check_kr_equals_kd_corollary,
    check_main_identity,
    check_no_limit_criterion,
    ramification_invariants,
)
from .valued import INF, ValueGroup, parse_base

__version__ = "0.1.0"
