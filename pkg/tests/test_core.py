from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valfield.core.factor import factor_over_residue, squarefree_decomposition
from valfield.core.fields import GF, QQ, RatFuncField
from valfield.core.poly import Poly, poly_gcd, poly_xgcd

F8 = GF(2, 3)
F3 = GF(3)
F5 = GF(5)

small = st.integers(-20, 20)
rationals = st.builds(Fraction, small, st.integers(1, 9))


def ff_elem(F):
    elems = list(F.elements())
    return st.sampled_from(elems)


def polys(field, elem, max_deg=5):
    return st.lists(elem, max_size=max_deg + 1).map(lambda cs: Poly(field, cs))


def test_prime_field_basics():
    a = F5(3)
    assert a * F5(2) == F5.one
    assert a.inverse() == F5(2)
    assert F5(7) == F5(2)


def test_extension_field_generator_order():
    a = F8.gen()
    seen = {a ** k for k in range(1, 8)}
    assert len(seen) == 7
    assert a ** 7 == F8.one


@given(ff_elem(F8), ff_elem(F8), ff_elem(F8))
def test_field_axioms_f8(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    if a:
        assert a * a.inverse() == F8.one


@given(ff_elem(F8))
def test_frobenius_inverse(a):
    assert F8.pth_root(a) ** 2 == a


def test_not_prime_rejected():
    with pytest.raises(ValueError):
        GF(4)


@given(polys(QQ, rationals), polys(QQ, rationals, 3))
def test_divmod_rational(a, b):
    if not b:
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert not r or r.degree() < b.degree()


@given(polys(F5, ff_elem(F5)), polys(F5, ff_elem(F5)))
def test_xgcd_bezout(a, b):
    g, s, t = poly_xgcd(a, b)
    assert s * a + t * b == g
    if g:
        assert not (a % g) and not (b % g)


@settings(max_examples=60, deadline=None)
@given(polys(F3, ff_elem(F3), 7))
def test_factor_product(f):
    if f.degree() < 1:
        return
    f = f.monic()
    prod = Poly.constant(F3, 1)
    for h, m in factor_over_residue(f):
        assert h.is_monic()
        prod = prod * h ** m
    assert prod == f


def test_factor_known():
    x = Poly.gen(F5)
    facs = factor_over_residue(x ** 4 - 1)
    assert len(facs) == 4
    assert all(h.degree() == 1 and m == 1 for h, m in facs)


def test_squarefree_decomposition_char_p():
    x = Poly.gen(F3)
    f = (x + 1) ** 3 * (x + 2)
    parts = squarefree_decomposition(f)
    prod = Poly.constant(F3, 1)
    for h, m in parts:
        prod = prod * h ** m
    assert prod == f


def test_ratfunc_arithmetic():
    R = RatFuncField(F3, "t")
    t = R.gen()
    a = (t + 1) / (t - 1)
    assert a * ((t - 1) / (t + 1)) == R.one
    assert a - a == R.zero


def test_poly_gcd_monic():
    x = Poly.gen(QQ)
    g = poly_gcd((x - 1) * (x + 2), (x - 1) * (x + 3))
    assert g == x - 1
