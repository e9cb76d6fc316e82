"""MacLane chains of key polynomials over a base valued field.

A chain is a list of steps ``(Q_l, beta_l)``.  Steps whose key polynomial has
the same degree as its predecessor (``alpha_l = 1``) refine the previous
augmentation; internally such a step *replaces* the previous one, giving the
reduced list of *levels* on which residues and lifts are computed.

For a level ``j`` with key ``phi_j`` of degree ``m_j`` and value ``lambda_j``:

* polynomials of degree ``< m_j`` have values in ``Gamma_{j-1}``;
* their residues (relative to a canonical monomial of the same value) lie in
  the field ``F_j``, where ``F_0`` is the residue field of the base and
  ``F_{j+1} = F_j[z]/(psi)`` for the residual factor ``psi`` selected at
  level ``j``;
* ``y_j = phi_j^{e_j} / U_j`` (``U_j`` the canonical monomial of value
  ``e_j*lambda_j``) reduces to the generator ``z`` of ``F_{j+1}``.

Canonical monomials are products ``pi^g * phi_0^{a_0} ... phi_{j-1}^{a_{j-1}}``
with ``0 <= a_i < e_i`` and ``pi^g`` the base's monomial of value ``g``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .core.factor import factor_over_residue
from .core.fields import ExtField
from .core.poly import NEG_INF, Poly
from .errors import RejectedAugmentation, UnsupportedResidueFactorization
from .valued import INF, ValueGroup, ValuedField


def _expand(P: Poly, Q: Poly):
    # Poly equality ignores the field, so the field is part of the cache key
    return _expand_in(P.field, P, Q)


@lru_cache(maxsize=1 << 16)
def _expand_in(field, P: Poly, Q: Poly):
    out = []
    rest = P
    while rest:
        rest, r = divmod(rest, Q)
        out.append(r)
    return tuple(out)


def q_expansion(P: Poly, Q: Poly) -> list:
    """Coefficients ``a_i`` (deg < deg Q) with ``P = sum a_i Q^i``.

    The length minus one is ``d_Q(P)``; the zero polynomial expands to ``[]``.
    """
    if Q.degree() < 1 or not Q.is_monic():
        raise ValueError("expansion polynomial must be monic of positive degree")
    return list(_expand(P, Q))


def _times(s: int, beta):
    return 0 if s == 0 else s * beta


# --------------------------------------------------------------------------
# Newton polygons
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    slope: Fraction
    start: int
    end: int
    points: tuple  # abscissae lying on the segment

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def root_value(self):
        """Value of the roots (or of the key polynomial at them) this side accounts for."""
        return -self.slope


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``(j, v_j)``; infinite ordinates are dropped."""

    points: tuple
    segments: tuple

    @classmethod
    def from_values(cls, values):
        pts = tuple((j, v) for j, v in enumerate(values) if v != INF)
        hull = []
        for pt in pts:
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                # drop hull[-1] if it lies on or above the chord hull[-2] -> pt
                if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                    hull.pop()
                else:
                    break
            hull.append(pt)
        segs = []
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            slope = Fraction(y2 - y1) / (x2 - x1)
            on = tuple(j for j, v in pts if x1 <= j <= x2 and v - y1 == slope * (j - x1))
            segs.append(Segment(slope, x1, x2, on))
        return cls(pts, tuple(segs))

    def total_length(self) -> int:
        return sum(s.length for s in self.segments)


@dataclass(frozen=True)
class ResidualPoly:
    poly: Poly
    slope: Fraction  # root value of the side it was computed from

    @property
    def degree(self) -> int:
        return self.poly.degree()


# --------------------------------------------------------------------------
# Chains
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class KeyStep:
    key: Poly
    value: object  # Fraction or INF
    e: int
    alpha: int | None = None
    residual_factor: Poly | None = None

    @property
    def f(self) -> int:
        return 1 if self.residual_factor is None else self.residual_factor.degree()


class _Level:
    __slots__ = ("key", "value", "m", "e", "group", "group_before", "F", "z", "step_index")

    def __repr__(self):
        return f"<level {self.key} @ {self.value} e={self.e} F={self.F!r}>"


def _extend_field(F, psi, name):
    """``F[z]/(psi)`` and the class of ``z``; a linear ``psi`` gives ``F`` itself."""
    psi = psi.monic()
    if psi.degree() == 1:
        return F, -psi[0]
    E = ExtField(F, psi, name)
    return E, E.gen()


def _to_subfield(c, E, F):
    """Write an element of ``E`` (an extension tower over ``F``) in ``F``."""
    while E != F:
        c = E(c).in_base()
        if c is None:
            raise ArithmeticError("element does not lie in the subfield")
        E = E.base
    return c


@dataclass(frozen=True, eq=False)
class KeyPolyChain:
    """A persistent MacLane chain over ``base``; operations return new chains."""

    base: ValuedField
    steps: tuple = ()
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    def truncate(self, n: int) -> "KeyPolyChain":
        return KeyPolyChain(self.base, self.steps[:n])

    def with_residual_factor(self, psi: Poly) -> "KeyPolyChain":
        last = dataclasses.replace(self.steps[-1], residual_factor=psi.monic())
        return KeyPolyChain(self.base, self.steps[:-1] + (last,))

    @property
    def keys(self):
        return [s.key for s in self.steps]

    @property
    def values(self):
        return [s.value for s in self.steps]

    @cached_property
    def value_group(self) -> ValueGroup:
        g = self.base.value_group
        for s in self.steps:
            if s.value != INF:
                g = g.joined(s.value)
        return g

    # -- reduced levels ----------------------------------------------------

    @cached_property
    def levels(self):
        levels = []
        base_group = self.base.value_group
        for idx, step in enumerate(self.steps):
            lv = _Level()
            lv.key, lv.value, lv.m, lv.step_index = step.key, step.value, step.key.degree(), idx
            if levels and lv.m == levels[-1].m:
                prev = levels.pop()
                lv.group_before, lv.F, lv.z = prev.group_before, prev.F, prev.z
            elif levels:
                prev = levels[-1]
                psi = self.steps[idx - 1].residual_factor
                if psi is None:
                    raise RejectedAugmentation("previous step has no residual factor selected")
                lv.group_before = prev.group
                lv.F, lv.z = _extend_field(prev.F, psi, f"z{len(levels)}")
            else:
                lv.group_before = base_group
                lv.F, lv.z = self.base.residue_field, None
            if lv.value == INF:
                lv.e, lv.group = 1, lv.group_before
            else:
                lv.e = lv.group_before.index_of(lv.value)
                lv.group = lv.group_before.joined(lv.value)
            levels.append(lv)
        return levels

    @cached_property
    def residue_field(self):
        """Residue field reached after the last step's selected residual factor."""
        if not self.steps:
            return self.base.residue_field
        top = self.levels[-1]
        psi = self.steps[-1].residual_factor
        if psi is None:
            return top.F
        return _extend_field(top.F, psi, f"z{len(self.levels)}")[0]

    @cached_property
    def _terminal_z(self):
        top = self.levels[-1]
        return _extend_field(top.F, self.steps[-1].residual_factor, f"z{len(self.levels)}")[1]

    def _field_of(self, j):
        """F_j; j == len(levels) means the terminal residue field."""
        levels = self.levels
        return levels[j].F if j < len(levels) else self.residue_field

    def _z_of(self, j):
        levels = self.levels
        return levels[j].z if j < len(levels) else self._terminal_z

    # -- valuations --------------------------------------------------------

    def _base_value(self, c: Poly):
        if c.degree() > 0:
            raise ValueError("base value of a non-constant polynomial")
        return self.base.value(c[0])

    def level_value(self, h: Poly, j: int):
        """mu_j(h) for the reduced level ``j`` (``j = -1``: base value of a constant)."""
        if not h:
            return INF
        if j < 0:
            return self._base_value(h)
        key = ("v", h, j)
        memo = self._memo
        if key in memo:
            return memo[key]
        lv = self.levels[j]
        if h.degree() < lv.m:
            out = self.level_value(h, j - 1)
        else:
            out = INF
            for s, c in enumerate(_expand(h, lv.key)):
                if c:
                    v = self.level_value(c, j - 1)
                    if s and lv.value == INF:
                        continue
                    out = min(out, v + _times(s, lv.value))
        memo[key] = out
        return out

    def value(self, h: Poly):
        """The chain's (pseudo-)valuation of ``h``."""
        if not self.steps:
            return min((self.base.value(c) for c in h.coeffs), default=INF)
        return self.level_value(h, len(self.levels) - 1)

    # -- monomials and residues -------------------------------------------

    def decompose(self, gamma, j):
        """Canonical monomial of value ``gamma`` in levels ``< j``: ``(g0, exps)``."""
        levels = self.levels
        exps = [0] * len(levels)
        gamma = Fraction(gamma)
        for i in range(j - 1, -1, -1):
            lv = levels[i]
            for a in range(lv.e):
                if gamma - a * lv.value in lv.group_before:
                    break
            else:
                raise ValueError(f"{gamma} not in the value group below level {j}")
            exps[i] = a
            gamma -= a * lv.value
        if gamma not in self.base.value_group:
            raise ValueError(f"{gamma} not in the value group below level {j}")
        return gamma, exps

    def _u_exps(self, i):
        lv = self.levels[i]
        return self.decompose(lv.e * lv.value, i)

    def monomial_poly(self, g0, exps) -> Poly:
        out = Poly.constant(self.base.field, self.base.element_of_value(g0))
        for lv, a in zip(self.levels, exps):
            if a:
                out = out * lv.key ** a
        return out

    def monomial_residue(self, exps, j):
        """Residue in F_j of a value-zero monomial with φ-exponents ``exps`` (levels < j)."""
        F = self._field_of(j)
        out = F.one
        exps = list(exps)
        for i in range(j - 1, -1, -1):
            c = exps[i]
            if not c:
                continue
            e = self.levels[i].e
            if c % e:
                raise ArithmeticError("monomial does not have value zero")
            q = c // e
            out = out * F(self._z_of(i + 1)) ** q
            exps[i] = 0
            ue = self._u_exps(i)[1]
            for k in range(i):
                exps[k] += q * ue[k]
        return out

    def unit_residue(self, a: Poly, j: int):
        """Residue in F_j of ``a / Pi_{mu(a)}`` for ``0 != a`` with ``deg a < m_j``."""
        if j == 0:
            c = a[0]
            v = self.base.value(c)
            return self.base.residue(c / self.base.element_of_value(v))
        key = ("rho", a, j)
        memo = self._memo
        if key in memo:
            return memo[key]
        F = self._field_of(j)
        prev = self.levels[j - 1]
        gamma = self.level_value(a, j - 1)
        _, pi_exps = self.decompose(gamma, j)
        total = F.zero
        for s, c in enumerate(_expand(a, prev.key)):
            if not c:
                continue
            vc = self.level_value(c, j - 2)
            if vc + _times(s, prev.value) != gamma:
                continue
            r = self.unit_residue(c, j - 1)
            _, ce = self.decompose(vc, j - 1)
            mon = [x - y for x, y in zip(ce, pi_exps)]
            mon[j - 1] += s
            total = total + F(r) * self.monomial_residue(mon, j)
        memo[key] = total
        return total

    def lift(self, c, gamma, j) -> Poly:
        """A polynomial of degree < m_j, value ``gamma`` and residue ``c`` in F_j."""
        base = self.base
        if j == 0:
            return Poly.constant(base.field, base.lift(c) * base.element_of_value(gamma))
        F = self._field_of(j)
        c = F(c)
        if not c:
            return Poly(base.field, ())
        prev = self.levels[j - 1]
        Fp = prev.F
        if isinstance(F, ExtField) and F != Fp:
            coords = list(c.p.coeffs)
        else:
            coords = [c]
        _, pi_exps = self.decompose(gamma, j)
        a0 = pi_exps[j - 1]
        z = F(self._z_of(j))
        out = Poly(base.field, ())
        for k, ck in enumerate(coords):
            if not ck:
                continue
            s = a0 + k * prev.e
            g2 = Fraction(gamma) - s * prev.value
            _, ce = self.decompose(g2, j - 1)
            mon = [x - y for x, y in zip(ce, pi_exps)]
            mon[j - 1] += s
            w = self.monomial_residue(mon, j)
            ck2 = _to_subfield(F(ck) * z ** k / w, F, Fp)
            out = out + self.lift(ck2, g2, j - 1) * prev.key ** s
        return out

    # -- residual polynomials ---------------------------------------------

    def residual_polynomial(self, h: Poly) -> Poly:
        """R(h) in F_top[y] with respect to the last level's key and value."""
        j = len(self.levels) - 1
        lv = self.levels[j]
        if lv.value == INF:
            raise ValueError("no residual polynomial at an infinite step")
        F = lv.F
        cs = _expand(h, lv.key)
        vals = [self.level_value(c, j - 1) if c else INF for c in cs]
        M = min(v + _times(s, lv.value) for s, v in enumerate(vals) if v != INF)
        S = [s for s, v in enumerate(vals) if v != INF and v + _times(s, lv.value) == M]
        s0 = S[0]
        _, p0 = self.decompose(vals[s0], j)
        _, ue = self._u_exps(j)
        coeffs = {}
        for s in S:
            k, rem = divmod(s - s0, lv.e)
            if rem:
                raise ArithmeticError("inconsistent segment")
            _, ce = self.decompose(vals[s], j)
            mon = [ce[i] + k * ue[i] - p0[i] for i in range(len(ce))]
            coeffs[k] = self.unit_residue(cs[s], j) * self.monomial_residue(mon, j)
        top = max(coeffs)
        return Poly(F, [coeffs.get(k, F.zero) for k in range(top + 1)], "y")

    def lift_to_key(self, psi: Poly) -> Poly:
        """A key polynomial over the last level whose residual polynomial is ``psi``."""
        j = len(self.levels) - 1
        lv = self.levels[j]
        psi = psi.change_field(lv.F).monic()
        if psi.degree() < 1 or not psi[0]:
            raise ValueError("residual factor must be monic, non-constant and prime to y")
        f, e, lam = psi.degree(), lv.e, lv.value
        _, ue = self._u_exps(j)
        _, top_exps = self.decompose(f * e * lam, j)
        r_f = self.monomial_residue([f * u - t for u, t in zip(ue, top_exps)], j)
        phi = lv.key ** (e * f)
        for k in range(f):
            if not psi[k]:
                continue
            gk = (f - k) * e * lam
            _, ge = self.decompose(gk, j)
            w = self.monomial_residue([g + k * u - t for g, u, t in zip(ge, ue, top_exps)], j)
            phi = phi + self.lift(psi[k] * r_f / w, gk, j) * lv.key ** (k * e)
        return phi

    def y_parts(self, i):
        """``(phi_i^{e_i}, U_i)``: numerator and denominator of ``y_i``."""
        lv = self.levels[i]
        g0, ue = self._u_exps(i)
        return lv.key ** lv.e, self.monomial_poly(g0, ue)

    # -- per-step truncations (1-based, mu_1 .. mu_len) -------------------

    def trunc_value(self, h: Poly, i: int):
        """mu_i(h) = min_j (j*beta_i + mu(c_{j,i})) over the Q_i-expansion."""
        if not 1 <= i <= len(self.steps):
            raise IndexError(f"step index {i} out of range 1..{len(self.steps)}")
        return self._trunc(h, i)[0]

    def effective_degree(self, h: Poly, i: int):
        """delta_i(h): the largest j attaining mu_i(h); NEG_INF for h = 0."""
        if not 1 <= i <= len(self.steps):
            raise IndexError(f"step index {i} out of range 1..{len(self.steps)}")
        return self._trunc(h, i)[1]

    def _trunc(self, h, i):
        if not h:
            return INF, NEG_INF
        key = ("t", h, i)
        memo = self._memo
        if key in memo:
            return memo[key]
        step = self.steps[i - 1]
        best, arg = INF, NEG_INF
        for s, c in enumerate(_expand(h, step.key)):
            if not c:
                continue
            if i == 1:
                vc = self._base_value(c)
            else:
                vc = self._trunc(c, i - 1)[0]
            if s and step.value == INF:
                v = INF
            else:
                v = vc + _times(s, step.value)
            if v < best:
                best, arg = v, s
            elif v == best:
                arg = s
        memo[key] = (best, arg)
        return best, arg


def empty_chain(base: ValuedField) -> KeyPolyChain:
    return KeyPolyChain(base, ())


def trunc_value(h: Poly, chain: KeyPolyChain, i: int):
    return chain.trunc_value(h, i)


def effective_degree(h: Poly, chain: KeyPolyChain, i: int):
    return chain.effective_degree(h, i)


def _check_irreducible(psi: Poly):
    try:
        facs = factor_over_residue(psi)
    except UnsupportedResidueFactorization:
        return True
    return len(facs) == 1 and facs[0][1] == 1


def augment(chain: KeyPolyChain, q_next: Poly, beta_next) -> KeyPolyChain:
    """Append ``(q_next, beta_next)``; validates MacLane's augmentation conditions."""
    base = chain.base
    if not q_next.is_monic():
        raise RejectedAugmentation("key polynomial must be monic")
    if beta_next != INF:
        beta_next = Fraction(beta_next)
    if not chain.steps:
        if q_next.degree() != 1:
            raise RejectedAugmentation("the first key polynomial must have degree 1")
        # every value defines a valid first (monomial) valuation
        e = 1 if beta_next == INF else base.value_group.index_of(beta_next)
        return KeyPolyChain(base, (KeyStep(q_next, beta_next, e, None, None),))
    last_level = chain.levels[-1]
    if last_level.value == INF:
        raise RejectedAugmentation("cannot augment past an infinite value")
    m_last = chain.steps[-1].key.degree()
    alpha, rem = divmod(q_next.degree(), m_last)
    if rem or alpha < 1:
        raise RejectedAugmentation(f"degree {q_next.degree()} is not a multiple of {m_last}")
    mu = chain.value(q_next)
    if not beta_next > mu:
        raise RejectedAugmentation(f"value {beta_next} does not exceed mu_last(Q) = {mu}")
    R = chain.residual_polynomial(q_next)
    psi = R.monic()
    if not psi[0] or psi.degree() < 1:
        raise RejectedAugmentation("residual polynomial of the key is divisible by y or constant")
    if q_next.degree() != last_level.m * last_level.e * psi.degree():
        raise RejectedAugmentation("key polynomial is not minimal for its residual class")
    if not _check_irreducible(psi):
        raise RejectedAugmentation(f"residual polynomial {psi} is reducible")
    prev = chain.steps[-1]
    if prev.residual_factor is not None and prev.residual_factor != psi:
        raise RejectedAugmentation("key polynomial lies outside the selected residual class")
    group = chain.value_group
    e = 1 if beta_next == INF else group.index_of(beta_next)
    steps = chain.steps[:-1] + (dataclasses.replace(prev, residual_factor=psi), KeyStep(q_next, beta_next, e, alpha, None))
    return KeyPolyChain(base, steps)


def chain_invariants(chain: KeyPolyChain):
    """``(e, f, alphas)``: products of the per-step ramification and residue degrees."""
    if not chain.steps:
        raise ValueError("empty chain")
    e = f = 1
    for s in chain.steps:
        e *= s.e
        f *= s.f
    return e, f, [s.alpha for s in chain.steps]


# --------------------------------------------------------------------------
# Newton polygon of h with respect to a (tentative) next key polynomial
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    """One admissible side of the Newton polygon and the chain it produces."""

    value: object
    chain: KeyPolyChain
    residual: ResidualPoly | None
    length: int


def candidate_steps(h: Poly, prefix: KeyPolyChain, phi: Poly):
    """Sides of the phi-Newton polygon of ``h`` beyond ``mu_prefix(phi)``.

    An exact factor (``phi | h``) shows up as a candidate of value ``INF``
    whose ``length`` is the multiplicity of ``phi``.
    """
    cs = _expand(h, phi)
    if prefix.steps:
        vals = [prefix.value(c) if c else INF for c in cs]
        threshold = prefix.value(phi)
    else:
        vals = [prefix.value(c) if c else INF for c in cs]
        threshold = None
    out = []
    k = 0
    while k < len(vals) and vals[k] == INF:
        k += 1
    if k:
        out.append(Candidate(INF, augment(prefix, phi, INF), None, k))
    poly = NewtonPolygon.from_values(vals)
    for seg in poly.segments:
        lam = seg.root_value
        if threshold is not None and not lam > threshold:
            continue
        tentative = augment(prefix, phi, lam)
        R = tentative.residual_polynomial(h)
        out.append(Candidate(lam, tentative, ResidualPoly(R, lam), seg.length))
    return out


def newton_residual(h: Poly, chain: KeyPolyChain | None = None, base: ValuedField | None = None):
    """Admissible ``(value, ResidualPoly)`` pairs for the chain's last key polynomial.

    With an empty chain the expansion is taken with respect to ``x`` over the
    base and every side is admissible.
    """
    if chain is None or not chain.steps:
        base = base if chain is None else chain.base
        prefix = empty_chain(base)
        phi = Poly.gen(base.field, "x")
    else:
        prefix = chain.truncate(len(chain) - 1)
        phi = chain.steps[-1].key
    return [(c.value, c.residual) for c in candidate_steps(h, prefix, phi) if c.residual is not None]


def newton_polygon(h: Poly, chain: KeyPolyChain | None = None, base: ValuedField | None = None) -> NewtonPolygon:
    if chain is None or not chain.steps:
        base = base if chain is None else chain.base
        phi = Poly.gen(base.field, "x")
        prefix = empty_chain(base)
    else:
        prefix = chain.truncate(len(chain) - 1)
        phi = chain.steps[-1].key
    return NewtonPolygon.from_values([prefix.value(c) if c else INF for c in _expand(h, phi)])
