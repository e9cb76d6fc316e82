"""Concrete rank-one valued fields (K, v) used as bases.

Supported descriptors::

    qp:<p>               Q with the p-adic valuation, v(p) = 1
    fqt:<p>^<k>          F_{p^k}(t) with the t-adic valuation, v(t) = 1
    fqst:<p>^<k>         F_{p^k}(s)(t), t-adic; residue field F_{p^k}(s)
    tower:<p>[:depth]    union of F_p(t^(1/p^N)); value group Z[1/p]

Values are ``Fraction`` or the float ``INF``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .core.fields import GF, QQ, RatFunc, RatFuncField
from .core.poly import Poly
from .errors import DepthExhausted, NegativeValue, ParseError

INF = math.inf

DEFAULT_MAX_DEPTH = 64


def render_value(v) -> str:
    """Canonical text for a value: ``a/b`` in lowest terms, or ``inf``."""
    if v == INF:
        return "inf"
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _p_part(n: int, p: int):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


# --------------------------------------------------------------------------
# Value groups
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ValueGroup:
    """A subgroup of Q that is either ``generator * Z`` or ``(1/D) * Z[1/p]``.

    For the p-divisible kind ``generator`` is ``1/D`` with ``D`` prime to p and
    ``depth`` records the tower depth reached so far (informational only).
    """

    generator: Fraction
    p: int | None = None
    depth: int = 0

    @property
    def kind(self):
        return "cyclic" if self.p is None else "pDivisible"

    def __contains__(self, x) -> bool:
        r = Fraction(x) / self.generator
        if self.p is None:
            return r.denominator == 1
        return _p_part(r.denominator, self.p)[1] == 1

    def index_of(self, x) -> int:
        """Smallest positive ``e`` with ``e*x`` in the group."""
        r = Fraction(x) / self.generator
        if self.p is None:
            return r.denominator
        return _p_part(r.denominator, self.p)[1]

    def joined(self, x) -> "ValueGroup":
        """The group generated by this one and ``x``."""
        e = self.index_of(x)
        if self.p is None:
            a, b = self.generator, Fraction(x)
            g = Fraction(math.gcd(a.numerator * b.denominator, b.numerator * a.denominator), a.denominator * b.denominator)
            return ValueGroup(abs(g))
        depth = max(self.depth, _p_part(Fraction(x).denominator, self.p)[0])
        return ValueGroup(self.generator / e, self.p, depth)

    def index_in(self, bigger: "ValueGroup") -> int:
        """``[bigger : self]`` for ``self`` contained in ``bigger``."""
        r = self.generator / bigger.generator
        if self.p is None:
            if r.denominator != 1:
                raise ValueError("not a subgroup")
            return abs(r.numerator)
        return _p_part(abs(r.numerator), self.p)[1]

    def describe(self) -> str:
        if self.p is None:
            return f"{render_value(self.generator)}*Z"
        return f"{render_value(self.generator)}*Z[1/{self.p}] (depth {self.depth})"


# --------------------------------------------------------------------------
# Base valued fields
# --------------------------------------------------------------------------


class ValuedField:
    """Common interface of the supported bases."""

    field = None
    residue_field = None
    p = None  # residue characteristic
    descriptor = ""
    value_group: ValueGroup

    def value(self, a):
        raise NotImplementedError

    def residue(self, a):
        raise NotImplementedError

    def lift(self, r):
        raise NotImplementedError

    def element_of_value(self, gamma):
        """The canonical monomial (p^n, t^n or t^(a/p^N)) of value ``gamma``."""
        raise NotImplementedError

    @property
    def characteristic(self):
        return self.field.characteristic

    def poly(self, coeffs, var="x"):
        return Poly(self.field, coeffs, var)

    def x(self):
        return Poly.gen(self.field, "x")

    def __str__(self):
        return self.descriptor

    def __repr__(self):
        return f"<{self.descriptor}>"

    def __eq__(self, other):
        return isinstance(other, ValuedField) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)


class PadicRationals(ValuedField):
    """Q with the p-adic valuation; elements are exact rationals."""

    def __init__(self, p: int):
        self.p = p
        self.field = QQ
        self.residue_field = GF(p)
        self.value_group = ValueGroup(Fraction(1))
        self.descriptor = f"qp:{p}"

    def value(self, a):
        a = Fraction(a)
        if not a:
            return INF
        return Fraction(_p_part(abs(a.numerator), self.p)[0] - _p_part(a.denominator, self.p)[0])

    def residue(self, a):
        a = Fraction(a)
        v = self.value(a)
        if v < 0:
            raise NegativeValue(f"{a} has negative {self.descriptor}-value {v}")
        if v > 0:
            return self.residue_field.zero
        return self.residue_field(a)

    def lift(self, r):
        return Fraction(self.residue_field(r).c[0])

    def element_of_value(self, gamma):
        gamma = Fraction(gamma)
        if gamma.denominator != 1:
            raise ValueError(f"{gamma} is not in the value group Z")
        return Fraction(self.p) ** gamma.numerator


def _ord(poly: Poly):
    return poly.valuation_at_zero()


class LaurentPlace(ValuedField):
    """``C(t)`` with the t-adic valuation, for a constant field ``C``."""

    def __init__(self, const, descriptor):
        self.const = const
        self.field = RatFuncField(const, "t")
        self.residue_field = const
        self.p = const.characteristic
        self.value_group = ValueGroup(Fraction(1))
        self.descriptor = descriptor

    def value(self, a):
        a = self.field(a)
        if not a:
            return INF
        return Fraction(_ord(a.num) - _ord(a.den))

    def residue(self, a):
        a = self.field(a)
        v = self.value(a)
        if v < 0:
            raise NegativeValue(f"{a} has negative value {v}")
        if v > 0:
            return self.residue_field.zero
        return a.num[_ord(a.num)] / a.den[_ord(a.den)]

    def lift(self, r):
        return self.field(self.residue_field(r))

    def element_of_value(self, gamma):
        gamma = Fraction(gamma)
        if gamma.denominator != 1:
            raise ValueError(f"{gamma} is not in the value group Z")
        return self.field.gen() ** gamma.numerator

    def t(self):
        return self.field.gen()


# --------------------------------------------------------------------------
# The p-root tower
# --------------------------------------------------------------------------


class TowerElem:
    """An element f(u) of F_q(u) with u = t^(1/p^depth)."""

    __slots__ = ("field", "rf", "depth")

    def __init__(self, field, rf, depth):
        self.field = field
        self.rf = rf
        self.depth = depth

    def _pair(self, other):
        o = other if isinstance(other, TowerElem) else self.field(other)
        d = max(self.depth, o.depth)
        return self.field._promote(self, d), self.field._promote(o, d), d

    def __add__(self, other):
        a, b, d = self._pair(other)
        return self.field._make(a + b, d)

    __radd__ = __add__

    def __neg__(self):
        return TowerElem(self.field, -self.rf, self.depth)

    def __sub__(self, other):
        a, b, d = self._pair(other)
        return self.field._make(a - b, d)

    def __rsub__(self, other):
        return self.field(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        a, b, d = self._pair(other)
        return self.field._make(a * b, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b, d = self._pair(other)
        return self.field._make(a / b, d)

    def __rtruediv__(self, other):
        return self.field(other) / self

    def __pow__(self, n):
        return self.field._make(self.rf ** n, self.depth)

    def inverse(self):
        return self.field._make(self.rf.inverse(), self.depth)

    def __bool__(self):
        return bool(self.rf)

    def __eq__(self, other):
        if not isinstance(other, TowerElem):
            try:
                other = self.field(other)
            except TypeError:
                return NotImplemented
        a, b, _ = self._pair(other)
        return a == b

    def __hash__(self):
        c = self.field._canonical(self.rf, self.depth)
        return hash((c.rf, c.depth)) if c.depth else hash(c.rf)

    def sort_key(self):
        c = self.field._canonical(self.rf, self.depth)
        return (c.depth, c.rf.sort_key())

    def __repr__(self):
        return str(self)

    def __str__(self):
        c = self.field._canonical(self.rf, self.depth)
        q = self.field.p ** c.depth

        def render(poly):
            terms = []
            for i in range(len(poly.coeffs) - 1, -1, -1):
                a = poly.coeffs[i]
                if not a:
                    continue
                e = Fraction(i, q)
                mono = "" if e == 0 else "t" if e == 1 else f"t^{e}" if e.denominator == 1 else f"t^({e})"
                if not mono:
                    terms.append(str(a))
                elif a == poly.field.one:
                    terms.append(mono)
                else:
                    terms.append(f"{a}*{mono}")
            if not terms:
                return "0"
            return " + ".join(terms)

        n, d = render(c.rf.num), render(c.rf.den)
        if d == "1":
            return n
        if " " in n:
            n = f"({n})"
        if " " in d:
            d = f"({d})"
        return f"{n}/{d}"


class TowerField:
    """The directed union of F_q(t^(1/p^N)); elements are kept at minimal depth."""

    is_finite = False
    order = None

    def __init__(self, p: int, k: int = 1, max_depth: int = DEFAULT_MAX_DEPTH):
        self.p = p
        self.const = GF(p, k)
        self.max_depth = max_depth
        self.characteristic = p
        self.ratfuncs = RatFuncField(self.const, "u")
        self.zero = TowerElem(self, self.ratfuncs.zero, 0)
        self.one = TowerElem(self, self.ratfuncs.one, 0)

    def __call__(self, x):
        if isinstance(x, TowerElem):
            if x.field is self or x.field == self:
                return x
            raise TypeError("element of a different tower")
        if isinstance(x, RatFunc) and x.field == self.ratfuncs:
            return TowerElem(self, x, 0)
        return TowerElem(self, self.ratfuncs(self.const(x)), 0)

    def root_of_t(self, depth: int) -> TowerElem:
        """u_N = t^(1/p^N)."""
        if depth > self.max_depth:
            raise DepthExhausted(f"depth {depth} exceeds the tower maximum {self.max_depth}")
        return TowerElem(self, self.ratfuncs.gen(), depth)

    def t(self):
        return self.root_of_t(0)

    def _stretch(self, rf, factor):
        def st(poly):
            cs = []
            for i, c in enumerate(poly.coeffs):
                if i:
                    cs.extend([poly.field.zero] * (factor - 1))
                cs.append(c)
            return Poly(poly.field, cs, poly.var)

        return RatFunc(self.ratfuncs, st(rf.num), st(rf.den), _reduced=True)

    def _promote(self, a, depth):
        if a.depth == depth:
            return a.rf
        return self._stretch(a.rf, self.p ** (depth - a.depth))

    def _canonical(self, rf, depth):
        p = self.p
        while depth > 0:
            if any(c for poly in (rf.num, rf.den) for i, c in enumerate(poly.coeffs) if i % p):
                break
            rf = RatFunc(
                self.ratfuncs,
                Poly(self.const, rf.num.coeffs[::p], "u"),
                Poly(self.const, rf.den.coeffs[::p], "u"),
                _reduced=True,
            )
            depth -= 1
        return TowerElem(self, rf, depth)

    def _make(self, rf, depth):
        return self._canonical(rf, depth)

    def frobenius_inverse(self, a: TowerElem) -> TowerElem:
        """The field automorphism t^c -> t^(c/p) (inverse Frobenius on constants)."""
        if a.depth + 1 > self.max_depth:
            raise DepthExhausted(f"depth {a.depth + 1} exceeds the tower maximum {self.max_depth}")
        rf = RatFunc(
            self.ratfuncs,
            a.rf.num.map_coeffs(self.const.pth_root),
            a.rf.den.map_coeffs(self.const.pth_root),
        )
        return TowerElem(self, rf, a.depth + 1)

    def random_element(self, rng, size=2, depth=None):
        d = rng.randint(0, 2) if depth is None else depth
        return self._canonical(self.ratfuncs.random_element(rng, size), d)

    def __eq__(self, other):
        return isinstance(other, TowerField) and (self.p, self.const, self.max_depth) == (
            other.p,
            other.const,
            other.max_depth,
        )

    def __hash__(self):
        return hash(("tower", self.p, self.const.k, self.max_depth))

    def __repr__(self):
        return f"Tower({self.const!r}, maxDepth={self.max_depth})"


@dataclass(frozen=True)
class TowerState:
    """A finite stage F_q(u), u = t^(1/p^depth), of the tower."""

    tower: TowerField
    depth: int = 0

    def __post_init__(self):
        if self.depth > self.tower.max_depth:
            raise DepthExhausted(f"depth {self.depth} exceeds the tower maximum {self.tower.max_depth}")

    def deepen(self, extra_levels: int) -> "TowerState":
        if extra_levels < 0:
            raise ValueError("cannot make the tower shallower")
        new = self.depth + extra_levels
        if new > self.tower.max_depth:
            raise DepthExhausted(f"depth {new} exceeds the tower maximum {self.tower.max_depth}")
        return TowerState(self.tower, new)

    @property
    def u(self) -> TowerElem:
        return self.tower.root_of_t(self.depth)

    def promote(self, a: TowerElem) -> TowerElem:
        """Rewrite ``a`` in terms of this stage's generator (same element)."""
        if a.depth > self.depth:
            raise ValueError("element lives deeper than this stage")
        return TowerElem(self.tower, self.tower._promote(a, self.depth), self.depth)

    def value_group(self) -> ValueGroup:
        return ValueGroup(Fraction(1), self.tower.p, self.depth)


class PRootTower(ValuedField):
    def __init__(self, p: int, k: int = 1, max_depth: int = DEFAULT_MAX_DEPTH):
        if max_depth < 1:
            raise ValueError("maxDepth must be >= 1")
        self.p = p
        self.field = TowerField(p, k, max_depth)
        self.residue_field = self.field.const
        self.value_group = ValueGroup(Fraction(1), p, 0)
        self.max_depth = max_depth
        kk = "" if k == 1 else f"^{k}"
        self.descriptor = f"tower:{p}{kk}" + ("" if max_depth == DEFAULT_MAX_DEPTH else f":{max_depth}")

    def state(self, depth=0) -> TowerState:
        return TowerState(self.field, depth)

    def value(self, a):
        a = self.field(a)
        if not a:
            return INF
        return Fraction(_ord(a.rf.num) - _ord(a.rf.den), self.p ** a.depth)

    def residue(self, a):
        a = self.field(a)
        v = self.value(a)
        if v < 0:
            raise NegativeValue(f"{a} has negative value {v}")
        if v > 0:
            return self.residue_field.zero
        return a.rf.num[_ord(a.rf.num)] / a.rf.den[_ord(a.rf.den)]

    def lift(self, r):
        return self.field(self.residue_field(r))

    def element_of_value(self, gamma):
        gamma = Fraction(gamma)
        depth, rest = _p_part(gamma.denominator, self.p)
        if rest != 1:
            raise ValueError(f"{gamma} is not in Z[1/{self.p}]")
        u = self.field.root_of_t(depth)
        return u ** gamma.numerator

    def t(self):
        return self.field.t()

    def frobenius_inverse(self, a):
        return self.field.frobenius_inverse(self.field(a))


# --------------------------------------------------------------------------
# Descriptors
# --------------------------------------------------------------------------

_DESC = re.compile(r"^(qp|fqt|fqst|tower):(\d+)(?:\^(\d+))?(?::(\d+))?$")


def parse_base(desc: str) -> ValuedField:
    """Build a base valued field from its descriptor string."""
    m = _DESC.match(desc.strip())
    if not m:
        raise ParseError(f"unknown base-field descriptor {desc!r}")
    kind, p, k, depth = m.group(1), int(m.group(2)), int(m.group(3) or 1), m.group(4)
    try:
        GF(p)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if depth is not None and kind != "tower":
        raise ParseError(f"only tower bases take a depth: {desc!r}")
    if kind == "qp":
        if k != 1:
            raise ParseError("qp takes a prime, not a prime power")
        return PadicRationals(p)
    kk = "" if k == 1 else f"^{k}"
    if kind == "fqt":
        return LaurentPlace(GF(p, k), f"fqt:{p}{kk}")
    if kind == "fqst":
        return LaurentPlace(RatFuncField(GF(p, k), "s"), f"fqst:{p}{kk}")
    return PRootTower(p, k, int(depth) if depth else DEFAULT_MAX_DEPTH)
