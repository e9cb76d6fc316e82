"""Roots of ``g`` inside ``L = K[x]/(g)``, i.e. the automorphisms of ``L|K``.

Every ``K``-automorphism ``sigma`` is fixed by ``r = sigma(x)``, a polynomial
of degree ``< n`` with ``g(r) = 0 mod g``.  To find them we pick a place of
``K`` (a prime ``q`` of Z, or an irreducible ``P`` of F_q[t]) where ``g``
splits into distinct linear factors, Hensel-lift the roots ``a_1..a_n``,
interpolate ``r`` through ``r(a_i) = a_pi(i)`` for candidate permutations
``pi``, rationally reconstruct its coefficients and verify ``g(r) = 0 mod g``
exactly.  Verification makes the method sound; completeness is relative to
the place and precision bounds.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .core.factor import factor_over_residue
from .core.fields import QQ, ExtField, FiniteField, RatFunc, RatFuncField
from .core.poly import Poly, poly_xgcd
from .errors import RootsNotRational, UnsupportedResidueFactorization
from .valued import PRootTower

PRECISIONS = (8, 16, 32, 64, 128)
MAX_PRIME = 20000
MAX_PLACE_DEGREE = 4


def _primes(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, b in enumerate(sieve) if b]


class _IntPlace:
    """Z / q^N."""

    def __init__(self, q):
        self.q = q

    @classmethod
    def search(cls, g):
        dens = math.lcm(*(c.denominator for c in g.coeffs))
        n = g.degree()
        for q in _primes(MAX_PRIME):
            if dens % q == 0 or q < n:
                continue
            cs = [c.numerator * pow(c.denominator, -1, q) % q for c in g.coeffs]
            roots = [a for a in range(q) if _horner_int(cs, a, q) == 0]
            if len(roots) == n:
                place = cls(q)
                place.roots0 = roots
                return place
            if roots and _uneven(Poly(FiniteField(q), cs, g.var)):
                raise NotNormalCertificate(f"{g} has an uneven factorization modulo {q}")
        return None

    def set_precision(self, N):
        self.M = self.q ** N

    def from_K(self, c: Fraction):
        return c.numerator * pow(c.denominator, -1, self.M) % self.M

    def add(self, a, b):
        return (a + b) % self.M

    def sub(self, a, b):
        return (a - b) % self.M

    def mul(self, a, b):
        return a * b % self.M

    def inv(self, a):
        return pow(a, -1, self.M)

    zero, one = 0, 1

    def reconstruct(self, a):
        M = self.M
        bound = math.isqrt(M // 2)
        r0, r1, t0, t1 = M, a % M, 0, 1
        while r1 > bound:
            qq = r0 // r1
            r0, r1 = r1, r0 - qq * r1
            t0, t1 = t1, t0 - qq * t1
        if t1 == 0 or abs(t1) > bound or math.gcd(t1, self.q) != 1:
            return None
        return Fraction(r1, t1)


class NotNormalCertificate(RootsNotRational):
    """``g`` has good reduction at some place with factors of different degrees.

    A normal ``g`` factors into irreducibles of one common degree at every
    place where it stays squarefree, so this proves ``g`` is not normal.
    """


def _uneven_factors(facs):
    return all(m == 1 for _, m in facs) and len({h.degree() for h, _ in facs}) > 1


def _uneven(gq: Poly):
    return _uneven_factors(factor_over_residue(gq))


def _horner_int(cs, a, q):
    acc = 0
    for c in reversed(cs):
        acc = (acc * a + c) % q
    return acc


def _monic_polys(F, d, var):
    for coeffs in itertools.product(F.elements(), repeat=d):
        yield Poly(F, list(coeffs) + [F.one], var)


class _PolyPlace:
    """F[t] / P^N for a finite constant field F."""

    def __init__(self, K: RatFuncField, P: Poly):
        self.K, self.P = K, P
        self.F = K.const
        self.uneven = False

    @classmethod
    def search(cls, g):
        K = g.field
        F = K.const
        if not isinstance(F, FiniteField):
            return None
        n = g.degree()
        for d in range(1, MAX_PLACE_DEGREE + 1):
            for P in _monic_polys(F, d, K.var):
                if d > 1 and factor_over_residue(P) != [(P, 1)]:
                    continue
                place = cls(K, P)
                roots = place._roots_mod_P(g)
                if roots is not None and len(roots) == n:
                    place.roots0 = roots
                    return place
                if place.uneven:
                    raise NotNormalCertificate(f"{g} has an uneven factorization modulo {P}")
        return None

    def _roots_mod_P(self, g):
        P = self.P
        E = self.F if P.degree() == 1 else ExtField(self.F, P, self.K.var)
        c0 = -P[0]

        def red(c: RatFunc):
            if P.degree() == 1:
                den = c.den(c0)
                return None if not den else c.num(c0) / den
            den = E(c.den)
            return None if not den else E(c.num) / den

        cs = [red(c) for c in g.coeffs]
        if any(c is None for c in cs):
            return None
        gP = Poly(E, cs, "y")
        if gP.degree() != g.degree():
            return None
        facs = factor_over_residue(gP)
        self.uneven = _uneven_factors(facs)
        if any(h.degree() != 1 or m != 1 for h, m in facs):
            return None
        out = []
        for h, _ in facs:
            r = -h[0]
            out.append(Poly.constant(self.F, r, self.K.var) if P.degree() == 1 else r.p.with_var(self.K.var))
        return out

    def set_precision(self, N):
        self.M = self.P ** N
        self.zero = Poly(self.F, (), self.K.var)
        self.one = Poly.constant(self.F, 1, self.K.var)

    def from_K(self, c: RatFunc):
        return self.mul(c.num, self.inv(c.den % self.M))

    def add(self, a, b):
        return (a + b) % self.M

    def sub(self, a, b):
        return (a - b) % self.M

    def mul(self, a, b):
        return (a * b) % self.M

    def inv(self, a):
        g, s, _ = poly_xgcd(a % self.M, self.M)
        if g.degree() != 0:
            raise ZeroDivisionError("not a unit modulo P^N")
        return s % self.M

    def reconstruct(self, a):
        M = self.M
        half = M.degree() / 2
        r0, r1 = M, a % M
        t0, t1 = self.zero, self.one
        while r1 and r1.degree() >= half:
            qq, rr = divmod(r0, r1)
            r0, r1 = r1, rr
            t0, t1 = t1, t0 - qq * t1
        if not t1 or t1.degree() >= half or not (t1 % self.P):
            return None
        return RatFunc(self.K, r1, t1)


def _ring_eval(place, cs, a):
    acc = place.zero
    for c in reversed(cs):
        acc = place.add(place.mul(acc, a), c)
    return acc


def _hensel(place, cs, dcs, a, N):
    for _ in range(max(2, N.bit_length() + 2)):
        ga = _ring_eval(place, cs, a)
        if ga == place.zero:
            break
        a = place.sub(a, place.mul(ga, place.inv(_ring_eval(place, dcs, a))))
    return a


def _interp_basis(place, xs):
    """Vectors C_i with r = sum_i y_i C_i interpolating r(x_i) = y_i."""
    n = len(xs)
    full = [place.one]
    for a in xs:
        # multiply by (X - a)
        nxt = [place.zero] * (len(full) + 1)
        for k, c in enumerate(full):
            nxt[k + 1] = place.add(nxt[k + 1], c)
            nxt[k] = place.sub(nxt[k], place.mul(a, c))
        full = nxt
    basis = []
    for i, a in enumerate(xs):
        # synthetic division of full by (X - a)
        quo = [place.zero] * n
        carry = place.zero
        for k in range(n, 0, -1):
            carry = place.add(full[k], place.mul(carry, a)) if k < n else full[k]
            quo[k - 1] = carry
        w = place.one
        for j, b in enumerate(xs):
            if j != i:
                w = place.mul(w, place.sub(a, b))
        winv = place.inv(w)
        basis.append([place.mul(c, winv) for c in quo])
    return basis


def _roots_generic(g: Poly, K, place, max_images=None):
    n = g.degree()
    found = {}
    x = Poly.gen(K, g.var)
    found[0] = x  # the identity is always there
    for N in PRECISIONS:
        place.set_precision(N)
        cs = [place.from_K(c) for c in g.coeffs]
        dcs = [place.from_K(c) for c in g.derivative().coeffs]
        roots = [_hensel(place, cs, dcs, r % place.M, N) for r in place.roots0]
        basis = _interp_basis(place, roots)
        for j in range(n):
            if j in found:
                continue
            others = [i for i in range(n) if i != j]
            for perm in itertools.permutations(others):
                images = (j,) + perm
                coeffs = []
                for k in range(n):
                    acc = place.zero
                    for i in range(n):
                        acc = place.add(acc, place.mul(roots[images[i]], basis[i][k]))
                    c = place.reconstruct(acc)
                    if c is None:
                        break
                    coeffs.append(c)
                else:
                    r = Poly(K, coeffs, g.var)
                    if not (g.compose(r) % g):
                        found[j] = r
                        break
        if len(found) == n:
            break
    return sorted(found.values(), key=lambda r: (r != x, r.sort_key()))


def automorphisms(g: Poly, base) -> list:
    """All ``r`` (deg < n) with ``g(r) = 0 mod g``; the identity ``x`` comes first.

    Raises :class:`RootsNotRational` when no usable place is found or the
    base is not supported.
    """
    from .extensions import inseparable_degree

    x = Poly.gen(g.field, g.var)
    if g.degree() == 1:
        return [x]
    l, h = inseparable_degree(g)
    if l:
        if h.degree() == 1:
            return [x]
        raise RootsNotRational("automorphisms of inseparable extensions with a nontrivial separable part")
    field = g.field
    if isinstance(base, PRootTower):
        return _tower_roots(g, base)
    if field == QQ:
        place = _IntPlace.search(g)
    elif isinstance(field, RatFuncField):
        try:
            place = _PolyPlace.search(g)
        except UnsupportedResidueFactorization:
            place = None
    else:
        place = None
    if place is None:
        raise RootsNotRational(f"no split place found for {g} over {base}")
    return _roots_generic(g, field, place)


def _tower_roots(g: Poly, base: PRootTower):
    T = base.field
    D = max(T(c).depth for c in g.coeffs)
    R = T.ratfuncs
    gu = Poly(R, [T._promote(T(c), D) for c in g.coeffs], g.var)
    place = _PolyPlace.search(gu)
    if place is None:
        raise RootsNotRational(f"no split place found for {g} over {base}")
    roots = _roots_generic(gu, R, place)
    return [Poly(T, [T._make(c, D) for c in r.coeffs], g.var) for r in roots]


def compose_auts(g: Poly, r1: Poly, r2: Poly) -> Poly:
    """Image of x under sigma_1 o sigma_2, where sigma_i(x) = r_i: it is r_2(r_1) mod g."""
    return r2.compose(r1) % g
