"""Ramification invariants of normal extensions and the identities relating them.

For a normal ``L = K[x]/(g)`` all extensions of the base valuation share
``e``, ``f`` and ``d``.  Writing ``e = e0 p^t`` (``p`` prime to ``e0``),
``f = f0 p^s`` and ``p^l`` for the inseparable degree, the groups
``G^d >= G^i >= G^r`` have orders ``f0 e0 p^u``, ``e0 p^u`` and ``p^u`` with
``p^u = d p^(s+t-l)``.  Here ``f0`` is the separable part of the residue
degree and ``p^s`` its inseparable part, so ``p`` may divide ``f0`` (an
unramified quadratic over Q_2 has ``f0 = 2`` and ``s = 0``).

The automorphism oracle recomputes these orders from scratch: it finds the
automorphisms of ``L`` and tests the defining conditions with exact values
on ``L``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .core.poly import Poly
from .errors import (
    HypothesisNotMet,
    Inconclusive,
    InconsistentReports,
    NotNormal,
    OracleBoundExceeded,
    RootsNotRational,
    TheoryViolation,
)
from .extensions import CaseTag, inseparable_degree
from .galois import automorphisms, compose_auts
from .keypoly import INF, candidate_steps
from .valued import PRootTower, render_value

DEFAULT_ORACLE_BOUND = 6
SPOT_CHECKS = 12
MAX_REFINEMENTS = 200


def _p_split(n: int, p: int):
    """``(n0, k)`` with ``n = n0 p^k`` and ``p`` prime to ``n0``."""
    k = 0
    if p:
        while n % p == 0:
            n //= p
            k += 1
    return n, k


@dataclass(frozen=True)
class RamificationTable:
    n: int
    g: int
    e: int
    f: int
    d: int
    e0: int
    f0: int
    t: int
    s: int
    l: int
    u: int
    p: int
    normality_checked: bool = True

    @property
    def order_gr(self) -> int:
        return self.p ** self.u if self.p else 1

    @property
    def order_gi(self) -> int:
        return self.e0 * self.order_gr

    @property
    def order_gd(self) -> int:
        return self.f0 * self.order_gi

    @property
    def orders(self):
        return self.order_gd, self.order_gi, self.order_gr

    def as_dict(self):
        keys = ("n", "g", "e", "f", "d", "e0", "f0", "t", "s", "l", "u")
        return {k: getattr(self, k) for k in keys}

    def render(self) -> str:
        """The four-column summary: group, field, value-group and residue-field indices."""
        pu = f"p^u={self.order_gr}"
        rows = [
            ("", "Galois group", "field extension", "value group", "residue field"),
            ("G^r > id", pu, f"K^sep|K^r: {pu}", f"p^t={self.p ** self.t if self.p else 1}",
             f"p^s={self.p ** self.s if self.p else 1}"),
            ("G^i > G^r", f"e0={self.e0}", f"K^r|K^i: {self.e0}", f"e0={self.e0}", "1"),
            ("G^d > G^i", f"f0={self.f0}", f"K^i|K^d: {self.f0}", "1", f"f0={self.f0}"),
            ("G > G^d", f"g={self.g}", f"K^d|K: {self.g}", "1", "1"),
            ("L|K^sep", "", f"p^l={self.p ** self.l if self.p else 1}", "", ""),
            ("total", f"|G|={self.n // (self.p ** self.l if self.p else 1)}", f"n={self.n}",
             f"e={self.e}", f"f={self.f}"),
        ]
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _require_conclusive(reports):
    bad = [r for r in reports if not r.conclusive]
    if bad:
        raise Inconclusive(f"{len(bad)} extension(s) could not be classified (DepthExhaustedUnknown)")


def is_normal(g: Poly, base):
    """``(True|False|None, automorphisms)``; ``None`` when the base is not supported."""
    l, h = inseparable_degree(g)
    sep = g.degree() // (_char(g) ** l if l else 1)
    if not _oracle_supported(g, base, l, h):
        return None, None
    try:
        auts = automorphisms(g, base)
    except RootsNotRational:
        return False, None
    return len(auts) == sep, auts


def _char(g):
    return getattr(g.field, "characteristic", 0)


def _oracle_supported(g, base, l, h):
    from .core.fields import QQ, FiniteField, RatFuncField

    if g.degree() == 1 or (l and h.degree() == 1):
        return True
    if l:
        return False
    if isinstance(base, PRootTower) or g.field == QQ:
        return True
    return isinstance(g.field, RatFuncField) and isinstance(g.field.const, FiniteField)


def residue_inseparable_exponent(report) -> int:
    """``s`` with ``p^s`` the inseparable degree of the residue extension of a branch."""
    s = 0
    for step in report.chain.steps:
        if step.residual_factor is not None:
            s += inseparable_degree(step.residual_factor)[0]
    return s


def ramification_invariants(g: Poly, reports, base=None, check_normal: bool = True) -> RamificationTable:
    """Table of invariants for a normal ``K[x]/(g)`` from its extension reports."""
    _require_conclusive(reports)
    if not reports:
        raise InconsistentReports("no extension reports")
    base = base or reports[0].chain.base
    efd = {(r.e, r.f, r.defect) for r in reports}
    if len(efd) != 1:
        raise InconsistentReports(f"extensions disagree on (e, f, d): {sorted(efd)}")
    e, f, d = efd.pop()
    p = base.p or 0
    n = g.degree()
    e0, t = _p_split(e, p)
    s = residue_inseparable_exponent(reports[0])
    f0 = f // p ** s
    l, _ = inseparable_degree(g)
    d0, k = _p_split(d, p)
    if d0 != 1:
        raise InconsistentReports(f"defect {d} is not a power of the residue characteristic")
    u = k + s + t - l
    if u < 0:
        raise InconsistentReports(f"negative exponent u = {u}")
    checked = False
    if check_normal:
        normal, _ = is_normal(g, base)
        if normal is False:
            raise NotNormal(f"{g} does not split in K[x]/(g)")
        checked = normal is True
    table = RamificationTable(n, len(reports), e, f, d, e0, f0, t, s, l, u, p, checked)
    if n != table.g * d * e * f:
        raise InconsistentReports(f"n = {n} but g*d*e*f = {table.g * d * e * f}")
    return table


# --------------------------------------------------------------------------
# Identity checks
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    holds: bool
    witness: str
    status: str = ""

    def __post_init__(self):
        if not self.status:
            object.__setattr__(self, "status", "pass" if self.holds else "fail")

    def __bool__(self):
        return self.holds


def _ppow(p, k):
    return Fraction(p) ** k if p else Fraction(1)


def _stage_defects(r):
    if r.limit is None or r.limit.case_tag == CaseTag.TERMINATED:
        return (1,)
    return tuple(r.limit.stage_defects)


def check_main_identity(table: RamificationTable, reports) -> CheckResult:
    """``|G^r| = p^(s+t-l) * prod_j d_omega_j`` for every extension."""
    _require_conclusive(reports)
    base = _ppow(table.p, table.s + table.t - table.l)
    parts, ok = [], True
    for i, r in enumerate(reports):
        prod = math.prod(_stage_defects(r))
        rhs = base * prod
        ok &= rhs == table.order_gr
        parts.append(f"#{i + 1}: {render_value(base)}*{prod} = {render_value(rhs)}")
    return CheckResult("main_identity", ok, f"|G^r| = {table.order_gr}; " + "; ".join(parts))


def check_defectless_criterion(table: RamificationTable, reports) -> CheckResult:
    """``all d_i = 1`` iff ``|G^r| = p^(s+t-l)``."""
    _require_conclusive(reports)
    lhs = all(r.defect == 1 for r in reports)
    bound = _ppow(table.p, table.s + table.t - table.l)
    rhs = table.order_gr == bound
    return CheckResult(
        "defectless_criterion",
        lhs == rhs,
        f"defectless={lhs}, |G^r|={table.order_gr} vs p^(s+t-l)={render_value(bound)} ({rhs})",
    )


def check_no_limit_criterion(table: RamificationTable, reports) -> CheckResult:
    """If ``|G^r| = p^(s+t-l)`` then no chain needs a limit key polynomial."""
    _require_conclusive(reports)
    premise = table.order_gr == _ppow(table.p, table.s + table.t - table.l)
    tags = [str(r.case_tag) for r in reports]
    terminated = all(r.case_tag == CaseTag.TERMINATED for r in reports)
    holds = (not premise) or terminated
    return CheckResult("no_limit_criterion", holds, f"premise={premise}, chains: {', '.join(tags)}")


def check_kr_equals_kd_corollary(table: RamificationTable, reports) -> CheckResult:
    """With ``e0 = f0 = 1`` and ``l = 0``: some key has degree ``e f prod_{j<n0} d_j``
    and ``|G^r|`` equals that degree times the last stage defect."""
    if table.e0 != 1 or table.f0 != 1 or table.l != 0:
        raise HypothesisNotMet(f"needs e0 = f0 = 1 and l = 0 (have e0={table.e0}, f0={table.f0}, l={table.l})")
    _require_conclusive(reports)
    ok, parts = True, []
    for i, r in enumerate(reports):
        stages = _stage_defects(r)
        target = r.e * r.f * math.prod(stages[:-1])
        keys = list(r.chain.keys)
        if r.closing is not None and len(r.closing) > len(r.chain):
            keys.append(r.closing.steps[-1].key)
        hits = [j for j, q in enumerate(keys, start=1) if q.degree() == target]
        succ = [j for j in hits if j >= 2]
        if not hits:
            ok = False
            parts.append(f"#{i + 1}: no key of degree {target}")
            continue
        j = (succ or hits)[-1]
        val = keys[j - 1].degree() * stages[-1]
        ok &= val == table.order_gr
        parts.append(f"#{i + 1}: deg Q_{j} = {target}, {target}*{stages[-1]} = {val}")
    return CheckResult("kr_equals_kd_corollary", ok, f"|G^r| = {table.order_gr}; " + "; ".join(parts))


# --------------------------------------------------------------------------
# Exact values on L and the automorphism oracle
# --------------------------------------------------------------------------


class BranchValuation:
    """The extension of the base valuation attached to one terminated report.

    Values are exact: the closing chain is refined (always by degree-preserving
    steps) until the element's expansion is dominated by its constant term.
    """

    def __init__(self, g: Poly, report):
        if report.closing is None:
            raise Inconclusive("exact values need a terminated chain")
        self.g = g
        self.chains = [report.closing]

    def _chain(self, k):
        while len(self.chains) <= k:
            c = self.chains[-1]
            if c.steps[-1].value == INF:
                return c
            R = c.residual_polynomial(self.g)
            if R.degree() != 1:
                raise ArithmeticError("closing step is not simple")
            c2 = c.with_residual_factor(R.monic())
            key = c2.lift_to_key(R.monic())
            self.chains.append(max(candidate_steps(self.g, c2, key), key=lambda cd: cd.value).chain)
        return self.chains[k]

    def key(self, k=0):
        return self._chain(k).steps[-1].key

    def value(self, a: Poly):
        a = a % self.g
        if not a:
            return INF
        for k in range(MAX_REFINEMENTS):
            c = self._chain(k)
            top = c.steps[-1]
            if top.value == INF:
                return c.value(a % top.key)
            i = len(c)
            if c.effective_degree(a, i) == 0:
                return c.trunc_value(a, i)
        raise Inconclusive("value did not stabilize within the refinement budget")


@dataclass
class AutClassification:
    automorphisms: list
    decomposition: list  # indices into automorphisms
    inertia: list
    ramification: list
    witnesses: list = field(default_factory=list)

    @property
    def orders(self):
        return len(self.decomposition), len(self.inertia), len(self.ramification)

    @property
    def index(self):
        return len(self.automorphisms) // max(1, len(self.decomposition))


def _order(g, r):
    x = Poly.gen(g.field, g.var)
    cur, k = r, 1
    while cur != x:
        cur = compose_auts(g, cur, r)
        k += 1
        if k > g.degree() + 1:
            raise ArithmeticError("automorphism of unexpected order")
    return k


def _random_element(g, base, rng):
    n = g.degree()
    K = g.field
    if hasattr(base.field, "random_element"):
        cs = [base.field.random_element(rng) for _ in range(n)]
    else:
        cs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
    return Poly(K, cs, g.var)


def automorphism_oracle(g: Poly, base, reports, bound: int = DEFAULT_ORACLE_BOUND, seed: int = 0):
    """Brute-force ``G^d``, ``G^i``, ``G^r`` from exact values on ``L``."""
    if g.degree() > bound:
        raise OracleBoundExceeded(f"degree {g.degree()} exceeds the oracle bound {bound}")
    _require_conclusive(reports)
    if any(r.closing is None for r in reports):
        raise Inconclusive("oracle needs terminated chains (no limit stages)")
    p = base.p or 0
    l, _ = inseparable_degree(g)
    sep = g.degree() // (p ** l if l else 1)
    auts = automorphisms(g, base)
    if len(auts) != sep:
        raise RootsNotRational(f"found {len(auts)} automorphisms, expected {sep}")
    mus = [BranchValuation(g, r) for r in reports]
    witnesses = []
    # separating vectors: values of every branch's closing key under every branch
    for k in range(MAX_REFINEMENTS if len(mus) > 1 else 1):
        keys = [m.key(k) for m in mus]
        table = [tuple(m.value(q) for q in keys) for m in mus]
        if len(set(table)) == len(table):
            break
    else:
        raise Inconclusive("extensions could not be separated")
    mu = mus[0]
    decomposition = []
    for idx, r in enumerate(auts):
        vec = tuple(mu.value(q.compose(r)) for q in keys)
        j = table.index(vec) if vec in table else None
        if j is None:
            raise TheoryViolation(f"mu o sigma matches no extension for sigma(x) = {r}")
        if j == 0:
            decomposition.append(idx)
        else:
            witnesses.append(f"sigma{idx}: mu o sigma is extension #{j + 1} "
                             f"(values of {keys[j]}: {_vals(vec[j])} vs {_vals(table[0][j])})")
    chain = reports[0].chain
    gens = []
    for lv in chain.levels:
        psi = chain.steps[lv.step_index].residual_factor
        if psi is not None and psi.degree() > 1:
            gens.append(chain.y_parts(chain.levels.index(lv)))
    inertia = []
    for idx in decomposition:
        r = auts[idx]
        moved = None
        for A, B in gens:
            diff = (A.compose(r) * B - A * B.compose(r)) % g
            v = mu.value(diff) - 2 * mu.value(B)
            if not v > 0:
                moved = (A, B, v)
                break
        if moved is None:
            inertia.append(idx)
        else:
            A, B, v = moved
            witnesses.append(f"sigma{idx}: mu(sigma(y) - y) = {_vals(v)} for y = ({A})/({B})")
    orders = {idx: _order(g, auts[idx]) for idx in inertia}
    ramification = [idx for idx in inertia if p and _is_power(orders[idx], p) or orders[idx] == 1]
    rng = random.Random(seed)
    samples = [_random_element(g, base, rng) for _ in range(SPOT_CHECKS)]
    samples = [a for a in samples if a % g] + [Poly.gen(g.field, g.var)]
    x = Poly.gen(g.field, g.var)
    for idx in inertia:
        r = auts[idx]
        if r == x:
            continue
        for a in samples:
            va = mu.value(a)
            vd = mu.value(a.compose(r) - a)
            if idx in ramification and not vd > va:
                raise TheoryViolation(f"sigma{idx} in G^r but mu(sigma(a) - a) = {_vals(vd)} <= mu(a) for a = {a}")
            if va >= 0 and not vd > 0:
                raise TheoryViolation(f"sigma{idx} in G^i but moves the residue of a = {a}")
        if idx not in ramification:
            w = next((a for a in samples if not mu.value(a.compose(r) - a) > mu.value(a)), None)
            if w is not None:
                witnesses.append(f"sigma{idx}: mu(sigma(a) - a) = {_vals(mu.value(w.compose(r) - w))}"
                                 f" <= mu(a) = {_vals(mu.value(w))} for a = {w}")
            else:
                witnesses.append(f"sigma{idx}: order {orders[idx]} is prime to p")
    cls = AutClassification(auts, decomposition, inertia, ramification, witnesses)
    _check_subgroups(g, cls)
    return cls


def _vals(v):
    return render_value(v)


def _is_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _check_subgroups(g, cls: AutClassification):
    auts = cls.automorphisms
    index = {a: i for i, a in enumerate(auts)}
    for name, sub in (("G^d", cls.decomposition), ("G^i", cls.inertia), ("G^r", cls.ramification)):
        for i in sub:
            for j in sub:
                c = index.get(compose_auts(g, auts[i], auts[j]))
                if c not in sub:
                    raise TheoryViolation(f"{name} is not closed under composition")
    if not set(cls.ramification) <= set(cls.inertia) <= set(cls.decomposition):
        raise TheoryViolation("subgroups are not nested")
