"""Factorization of polynomials over residue fields.

Finite residue fields (F_{p^k} and towers of simple extensions of it) get a
complete factorization: squarefree decomposition, distinct-degree and
Cantor-Zassenhaus equal-degree splitting.  Over F_{p^k}(s) only linear
factors and the purely inseparable pattern ``z^(p^m) - c`` are recognised.
"""

from __future__ import annotations

import random

from ..errors import UnsupportedResidueFactorization
from .fields import FiniteField, RatFunc, RatFuncField
from .poly import Poly, poly_gcd, sort_key


def _one(f: Poly) -> Poly:
    return Poly.constant(f.field, 1, f.var)


def poly_pth_root(f: Poly) -> Poly:
    """The polynomial ``h`` with ``h^p == f`` for ``f`` with only p-divisible exponents."""
    field = f.field
    p = field.characteristic
    cs = f.coeffs
    if any(c for i, c in enumerate(cs) if i % p):
        raise ValueError("polynomial is not a p-th power")
    return Poly(field, [field.pth_root(c) for c in cs[::p]], f.var)


def squarefree_decomposition(f: Poly):
    """Return [(g, m)] with f = lc * prod g^m, each g monic squarefree (finite fields)."""
    f = f.monic()
    if f.degree() <= 0:
        return []
    p = f.field.characteristic
    out = []
    df = f.derivative()
    if not df:
        return [(g, m * p) for g, m in squarefree_decomposition(poly_pth_root(f))]
    c = poly_gcd(f, df)
    w = f // c
    i = 1
    while w.degree() > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree() > 0:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.degree() > 0:
        out.extend((g, m * p) for g, m in squarefree_decomposition(poly_pth_root(c.monic())))
    return out


def distinct_degree(f: Poly):
    """Split a monic squarefree ``f`` into products of irreducibles of equal degree."""
    q = f.field.order
    x = Poly.gen(f.field, f.var)
    out = []
    h = x % f
    rest = f
    i = 1
    while rest.degree() >= 2 * i:
        h = h.powmod(q, rest)
        g = poly_gcd(rest, h - x)
        if g.degree() > 0:
            out.append((g, i))
            rest = rest // g
            h = h % rest
        i += 1
    if rest.degree() > 0:
        out.append((rest.monic(), rest.degree()))
    return out


def _random_poly(field, deg, var, rng):
    return Poly(field, [field.random_element(rng) for _ in range(deg)], var)


def equal_degree(f: Poly, d: int, rng=None):
    """Cantor-Zassenhaus splitting of a monic product of degree-``d`` irreducibles."""
    n = f.degree()
    if n == d:
        return [f]
    rng = rng or random.Random(n * 7919 + d)
    field = f.field
    q = field.order
    p = field.characteristic
    while True:
        a = _random_poly(field, n, f.var, rng)
        if a.degree() <= 0:
            continue
        if p == 2:
            # trace map to F_2
            k = (q.bit_length() - 1) * d
            b = a % f
            t = b
            for _ in range(k - 1):
                t = (t * t) % f
                b = b + t
        else:
            b = a.powmod((q ** d - 1) // 2, f) - _one(f)
        g = poly_gcd(f, b)
        if 0 < g.degree() < n:
            return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


def _factor_finite(h: Poly):
    out = []
    for g, m in squarefree_decomposition(h):
        for block, d in distinct_degree(g):
            for irr in equal_degree(block, d):
                out.append((irr.monic(), m))
    return out


def _is_pattern(h: Poly):
    """If monic ``h`` is ``z^(p^m) - c`` return ``(m, c)``, else None."""
    p = h.field.characteristic
    n = h.degree()
    if p == 0 or n < 2:
        return None
    m = 0
    k = n
    while k % p == 0:
        k //= p
        m += 1
    if k != 1:
        return None
    if any(h.coeffs[1:n]):
        return None
    return m, -h.coeffs[0]


def _divisors(poly: Poly):
    """All monic divisors of a nonzero polynomial over a finite field."""
    facs = _factor_finite(poly) if poly.degree() > 0 else []
    one = _one(poly)
    divs = [one]
    for g, m in facs:
        divs = [d * g ** e for d in divs for e in range(m + 1)]
    return divs


def _candidate_roots(h: Poly):
    """Rational-root candidates over F_q(s) (Gauss lemma over F_q[s])."""
    field = h.field
    den = _one(h.coeffs[0].den)
    for c in h.coeffs:
        den = den * c.den // poly_gcd(den, c.den)
    ints = [(c * field(den)).num for c in h.coeffs]
    cands = _candidate_roots_nonzero(h, ints)
    if not ints[0]:
        cands.add(field.zero)
    return cands


def _candidate_roots_nonzero(h, ints):
    field = h.field
    const = field.const
    k = 0
    while not ints[k]:
        k += 1
    a0, an = ints[k], ints[-1]
    units = [u for u in const.elements() if u] if isinstance(const, FiniteField) else None
    if units is None:
        raise UnsupportedResidueFactorization(f"root search over {field!r} needs a finite constant field")
    cands = set()
    for num in _divisors(a0):
        for den in _divisors(an):
            for u in units:
                cands.add(RatFunc(field, num * u, den))
    return cands


def _factor_function_field(h: Poly):
    field = h.field
    p = field.characteristic
    out = []
    x = Poly.gen(field, h.var)
    rest = h.monic()
    if isinstance(field, RatFuncField):
        for r in sorted(_candidate_roots(rest), key=sort_key):
            m = 0
            while rest.degree() > 0 and not rest(r):
                rest = rest // (x - r)
                m += 1
            if m:
                out.append((x - r, m))
    return out + _factor_remainder(rest, p, 1)


def _factor_remainder(rest: Poly, p: int, mult: int):
    if rest.degree() <= 0:
        return []
    if rest.degree() == 1:
        return [(rest.monic(), mult)]
    pat = _is_pattern(rest)
    field = rest.field
    if pat is not None and hasattr(field, "is_pth_power"):
        m, c = pat
        try:
            pth = field.is_pth_power(c)
        except NotImplementedError:
            pth = None
        if pth is False:
            return [(rest.monic(), mult)]
        if pth:
            root = field.pth_root(c)
            smaller = Poly.monomial(field, rest.degree() // p, var=rest.var) - root
            if smaller.degree() == 1:
                return [(smaller, mult * p)]
            return [(g, m2 * mult * p) for g, m2 in _factor_function_field(smaller)]
    raise UnsupportedResidueFactorization(
        f"cannot factor {rest} over {field!r}: only linear factors and z^(p^m) - c are supported"
    )


def is_finite_field(field) -> bool:
    return bool(getattr(field, "is_finite", False))


def factor_over_residue(h: Poly):
    """Factor ``h`` into monic irreducibles with multiplicities.

    The product of ``g**m`` over the result equals ``h.monic()``.  Results are
    sorted deterministically (by degree, then coefficients).
    """
    if not h:
        raise ValueError("cannot factor the zero polynomial")
    if h.degree() == 0:
        return []
    if is_finite_field(h.field):
        out = _factor_finite(h)
    else:
        out = _factor_function_field(h)
    merged = {}
    for g, m in out:
        merged[g] = merged.get(g, 0) + m
    return sorted(merged.items(), key=lambda gm: (gm[0].degree(), gm[0].sort_key(), gm[1]))


def is_purely_inseparable_factor(g: Poly) -> bool:
    """True when an irreducible factor has the shape ``z^(p^m) - c`` with ``m >= 1``."""
    pat = _is_pattern(g.monic())
    return pat is not None and pat[0] >= 1
