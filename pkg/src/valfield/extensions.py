"""All extensions of the base valuation to ``L = K[x]/(g)``.

The driver explores the tree of MacLane chains: at each node the Newton
polygon of ``g`` with respect to the next key polynomial splits the roots by
value, and the residual polynomial of each side splits them by residue class.
A residual factor of multiplicity one closes a branch; a repeated factor is
lifted to the next key polynomial and the branch continues.

Branches whose chain keeps making degree-preserving (``alpha = 1``) steps with
a repeated residual factor are where defect lives.  On p-root tower bases a
self-similarity argument certifies that such a loop never ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .core.factor import factor_over_residue
from .core.poly import Poly, poly_gcd
from .errors import (
    ChainBudgetExhausted,
    DepthExhausted,
    Inconclusive,
    NotSquarefree,
)
from .keypoly import INF, KeyPolyChain, augment, candidate_steps, chain_invariants, empty_chain
from .valued import PRootTower, ValuedField, parse_base

STABILIZATION_WINDOW = 8


@dataclass(frozen=True)
class Bounds:
    max_chain_len: int = 64
    tower_depth: int = 32
    window: int = STABILIZATION_WINDOW


class CaseTag(str, Enum):
    INFINITELY_MANY_ALPHA_ONE = "InfinitelyManyAlphaOne"
    TERMINATED = "Terminated"
    DEPTH_EXHAUSTED_UNKNOWN = "DepthExhaustedUnknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class LimitInfo:
    truncation_depth: int
    stable_effective_degree: int | None
    case_tag: CaseTag
    n0: int
    stage_defects: tuple = (1,)
    certified: bool = True
    q_omega: Poly | None = None
    note: str = ""

    @property
    def conclusive(self) -> bool:
        return self.case_tag != CaseTag.DEPTH_EXHAUSTED_UNKNOWN


@dataclass
class ExtensionReport:
    """One extension of the base valuation, with its MacLane chain.

    ``chain`` holds the steps up to and including the one whose residual
    factor is simple (or the last step explored for a limit branch);
    ``closing`` appends the key polynomial that separates the branch, with
    its exact value (``inf`` when it divides ``g``).
    """

    chain: KeyPolyChain
    e: int
    f: int
    local_degree: int
    defect: int
    limit: LimitInfo | None
    closing: KeyPolyChain | None = None
    residual_multiplicity: int = 1

    @property
    def conclusive(self) -> bool:
        return self.limit is None or self.limit.conclusive

    @property
    def case_tag(self) -> CaseTag:
        return CaseTag.TERMINATED if self.limit is None else self.limit.case_tag

    @property
    def values(self):
        return self.chain.values

    def sort_key(self):
        return tuple(-v if v != INF else -math.inf for v in self.values)


# --------------------------------------------------------------------------
# Limit detection
# --------------------------------------------------------------------------


def _shifted(g: Poly, c):
    """g(w + c) as a polynomial in w."""
    return g.compose(Poly.gen(g.field, g.var) + c)


def self_similar(chain: KeyPolyChain, g: Poly, base: ValuedField) -> bool:
    """Exact check that the last two degree-one steps are related by the inverse Frobenius.

    With keys ``x - c_{i-1}`` and ``x - c_i`` it verifies
    ``sigma(g(w + c_{i-1})) == g(w + c_i)`` where ``sigma`` sends ``t^r`` to
    ``t^(r/p)``.  ``sigma`` is a field automorphism scaling every value by
    ``1/p``, so the branch reproduces itself at every later step: the
    ``alpha = 1`` steps never stop.
    """
    if not isinstance(base, PRootTower) or len(chain) < 2:
        return False
    prev, last = chain.steps[-2], chain.steps[-1]
    if prev.key.degree() != 1 or last.key.degree() != 1 or last.alpha != 1:
        return False
    c_prev, c_last = -prev.key[0], -last.key[0]
    g_prev = _shifted(g, c_prev).map_coeffs(base.frobenius_inverse)
    return g_prev == _shifted(g, c_last)


def _q_omega(g: Poly, n: int, p: int):
    """g itself when its degree matches and it has the additive normal form."""
    if g.degree() != n or n <= 1:
        return None
    for i, c in enumerate(g.coeffs[1:], start=1):
        if c and (i & (i - 1) if p == 2 else not _is_p_power(i, p)):
            return None
    return g


def _is_p_power(i, p):
    while i % p == 0:
        i //= p
    return i == 1


def detect_limit(history: KeyPolyChain, g: Poly, base: ValuedField, bounds: Bounds | None = None,
                 terminated: bool = False) -> LimitInfo | None:
    """Classify a branch from its chain; ``None`` means keep augmenting.

    A terminated branch contributes defect one.  Otherwise the exact
    self-similarity prover is tried first; failing that, ``window``
    consecutive ``alpha = 1`` steps with increasing values and a stable
    effective degree ``>= p`` count as a detection (certified only when the
    prover succeeded).
    """
    bounds = bounds or Bounds()
    depth = len(history)
    if terminated:
        return LimitInfo(depth, None, CaseTag.TERMINATED, 1, (1,))
    if depth == 0:
        return None
    p = base.p
    delta = history.effective_degree(g, depth)
    if self_similar(history, g, base) and p and delta >= p:
        return LimitInfo(depth, delta, CaseTag.INFINITELY_MANY_ALPHA_ONE, 1, (delta,), True,
                         _q_omega(g, history.steps[-1].key.degree() * delta, p),
                         "self-similar under the inverse Frobenius")
    W = bounds.window
    if depth <= W:
        return None
    tail = history.steps[-W:]
    if not all(s.alpha == 1 for s in tail):
        return None
    vals = [s.value for s in tail]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        return None
    deltas = {history.effective_degree(g, i) for i in range(depth - W + 1, depth + 1)}
    if len(deltas) != 1 or not p or delta < p:
        return None
    if isinstance(base, PRootTower):
        tag, note = CaseTag.INFINITELY_MANY_ALPHA_ONE, f"heuristic: {W} stable alpha=1 steps"
    else:
        tag, note = CaseTag.DEPTH_EXHAUSTED_UNKNOWN, f"{W} stable alpha=1 steps on a defectless base"
    return LimitInfo(depth, delta, tag, 1, (delta,), False,
                     _q_omega(g, history.steps[-1].key.degree() * delta, p), note)


# --------------------------------------------------------------------------
# Driver
# --------------------------------------------------------------------------


def inseparable_degree(g: Poly):
    """``(l, h)`` with ``g(x) = h(x^(p^l))`` and ``h`` not a polynomial in ``x^p``."""
    p = getattr(g.field, "characteristic", 0)
    l, h = 0, g
    if not p:
        return 0, g
    while h.degree() > 0 and not h.derivative():
        h = Poly(h.field, h.coeffs[::p], h.var)
        l += 1
    return l, h


def _check_squarefree(g: Poly):
    dg = g.derivative()
    if dg and poly_gcd(g, dg).degree() > 0:
        raise NotSquarefree(f"{g} has a repeated factor")


def _as_base(base, bounds):
    if isinstance(base, str):
        base = base.strip()
        if base.startswith("tower:") and base.count(":") == 1:
            base = f"{base}:{bounds.tower_depth}"
        return parse_base(base)
    return base


class _Explorer:
    def __init__(self, g, base, bounds):
        self.g, self.base, self.bounds = g, base, bounds
        self.reports = []

    def run(self):
        x = Poly.gen(self.base.field, self.g.var)
        self.explore(empty_chain(self.base), x)
        return self.reports

    def _partial(self, chain, n, mult, note):
        e, f, _ = chain_invariants(chain)
        info = LimitInfo(len(chain), chain.effective_degree(self.g, len(chain)),
                         CaseTag.DEPTH_EXHAUSTED_UNKNOWN, 1, (n // (e * f),), False, None, note)
        self.reports.append(ExtensionReport(chain, e, f, n, n // (e * f), info, None, mult))

    def explore(self, prefix: KeyPolyChain, phi: Poly):
        g = self.g
        for cand in candidate_steps(g, prefix, phi):
            if cand.value == INF:
                if cand.length > 1:
                    raise NotSquarefree(f"{phi} divides {g} more than once")
                ch = cand.chain
                e, f = (chain_invariants(prefix)[:2]) if prefix.steps else (1, 1)
                self.reports.append(ExtensionReport(ch, e, f, phi.degree(), 1, None, ch))
                continue
            chain = cand.chain
            top = chain.levels[-1]
            for psi, mult in factor_over_residue(cand.residual.poly):
                ch = chain.with_residual_factor(psi)
                n = top.m * top.e * psi.degree() * mult
                if mult == 1:
                    self._close(ch, psi, n)
                    continue
                self._continue(ch, psi, n, mult)

    def _close(self, ch, psi, n):
        g = self.g
        e, f, _ = chain_invariants(ch)
        if n == g.degree():
            closing = augment(ch, g, INF)
        else:
            key = ch.lift_to_key(psi)
            closing = max(candidate_steps(g, ch, key), key=lambda c: c.value).chain
        self.reports.append(ExtensionReport(ch, e, f, n, 1, None, closing))

    def _continue(self, ch, psi, n, mult):
        g = self.g
        info = detect_limit(ch, g, self.base, self.bounds)
        if info is not None:
            e, f, _ = chain_invariants(ch)
            d, rem = divmod(n, e * f)
            if rem or d != math.prod(info.stage_defects):
                info = LimitInfo(info.truncation_depth, info.stable_effective_degree,
                                 CaseTag.DEPTH_EXHAUSTED_UNKNOWN, info.n0, info.stage_defects, False,
                                 None, "local degree disagrees with the stable effective degree")
            self.reports.append(ExtensionReport(ch, e, f, n, d, info, None, mult))
            return
        if len(ch) >= self.bounds.max_chain_len:
            self._partial(ch, n, mult, f"chain length reached {self.bounds.max_chain_len}")
            return
        try:
            nxt = ch.lift_to_key(psi)
            before = len(self.reports)
            self.explore(ch, nxt)
        except DepthExhausted as exc:
            del self.reports[before:]
            self._partial(ch, n, mult, str(exc))


def compute_extensions(g: Poly, base, bounds: Bounds | None = None, strict: bool = False):
    """One report per extension of the base valuation to ``K[x]/(g)``.

    Unclassified branches are returned with case tag ``DepthExhaustedUnknown``;
    with ``strict=True`` they raise :class:`ChainBudgetExhausted` instead
    (carrying all reports).
    """
    bounds = bounds or Bounds()
    base = _as_base(base, bounds)
    if g.degree() < 1:
        raise ValueError("g must have positive degree")
    if not g.is_monic():
        raise ValueError("g must be monic")
    g = g.change_field(base.field)
    _check_squarefree(g)
    reports = _Explorer(g, base, bounds).run()
    reports.sort(key=ExtensionReport.sort_key)
    total = sum(r.local_degree for r in reports)
    if total != g.degree():
        raise ArithmeticError(f"local degrees sum to {total}, expected {g.degree()}")
    if strict and any(not r.conclusive for r in reports):
        raise ChainBudgetExhausted("some branches could not be classified within the bounds", reports)
    return reports


@dataclass(frozen=True)
class EqualityWitness:
    holds: bool
    terms: tuple  # (e, f, d) per report
    total: int
    degree: int

    def __bool__(self):
        return self.holds

    def __str__(self):
        lhs = " + ".join(f"{e}*{f}*{d}" for e, f, d in self.terms)
        return f"{lhs} = {self.total} {'==' if self.holds else '!='} {self.degree}"


def fundamental_equality_check(g: Poly, reports) -> EqualityWitness:
    """``sum e_i f_i d_i == deg g`` with the full arithmetic as witness."""
    if any(not r.conclusive for r in reports):
        raise Inconclusive("a report is DepthExhaustedUnknown")
    terms = tuple((r.e, r.f, r.defect) for r in reports)
    total = sum(e * f * d for e, f, d in terms)
    return EqualityWitness(total == g.degree(), terms, total, g.degree())
