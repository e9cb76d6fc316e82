from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valfield.errors import DepthExhausted, NegativeValue, ParseError
from valfield.keypoly import INF
from valfield.valued import parse_base

BASES = ["qp:2", "qp:3", "qp:5", "fqt:2", "fqt:3", "fqt:2^2", "fqst:2", "tower:2:6", "tower:3:4"]


def test_padic_value():
    K = parse_base("qp:2")
    assert K.value(Fraction(12)) == 2
    assert K.value(Fraction(3, 8)) == -3
    assert K.value(Fraction(0)) == INF


def test_function_field_value():
    K = parse_base("fqt:3")
    t = K.t()
    assert K.value(t ** 3 / (t + 1)) == 3


def test_tower_value_of_root():
    K = parse_base("tower:2:3")
    u = K.field.root_of_t(3)
    assert K.value(u) == Fraction(1, 8)
    assert K.value(K.t()) == 1


def test_residue_examples():
    Q2 = parse_base("qp:2")
    assert Q2.residue(Fraction(3, 5)) == Q2.residue_field.one
    assert not parse_base("qp:3").residue(Fraction(3))
    K = parse_base("fqt:5")
    t = K.t()
    assert K.residue((2 + t) / (1 + t * t)) == K.residue_field(2)


def test_residue_negative_value():
    with pytest.raises(NegativeValue):
        parse_base("qp:2").residue(Fraction(1, 2))


def test_lift_examples():
    Q5 = parse_base("qp:5")
    assert Q5.lift(Q5.residue_field(3)) == 3
    K = parse_base("fqst:2")
    s = K.residue_field.gen()
    assert K.residue(K.lift(s)) == s


def test_tower_depth_exhausted():
    K = parse_base("tower:2:3")
    with pytest.raises(DepthExhausted):
        K.field.root_of_t(4)


def test_tower_promotion_keeps_value():
    K = parse_base("tower:2:6")
    u1 = K.field.root_of_t(1)
    u2 = K.field.root_of_t(2)
    assert u2 * u2 == u1
    assert K.value(u1) == Fraction(1, 2)
    assert K.value(u2 * u2) == Fraction(1, 2)
    assert K.element_of_value(Fraction(3, 4)) == u2 ** 3


@pytest.mark.parametrize("desc", ["qp:4", "xyz:2", "qp:2:5", "fqt:", "tower:6"])
def test_bad_descriptors(desc):
    with pytest.raises(ParseError):
        parse_base(desc)


@pytest.mark.parametrize("desc", BASES)
def test_valuation_axioms_random(desc):
    import random

    K = parse_base(desc)
    rng = random.Random(7)
    # nested rational functions are slow, fewer samples there
    for _ in range(10 if desc.startswith("fqst") else 40):
        a = K.field.random_element(rng)
        b = K.field.random_element(rng)
        va, vb = K.value(a), K.value(b)
        if a and b:
            assert K.value(a * b) == va + vb
        s = K.value(a + b)
        assert s >= min(va, vb)
        if va != vb:
            assert s == min(va, vb)


@pytest.mark.parametrize("desc", BASES)
def test_residue_of_lift(desc):
    import random

    K = parse_base(desc)
    rng = random.Random(3)
    for _ in range(20):
        r = K.residue_field.random_element(rng)
        assert K.residue(K.lift(r)) == r
    assert not K.lift(K.residue_field.zero)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(-6, 6), st.integers(-6, 6))
def test_tower_arithmetic_commutes_with_promotion(d1, d2, n1, n2):
    K = parse_base("tower:3:6")
    a = K.field.root_of_t(d1) ** n1 + 1
    b = K.field.root_of_t(d2) ** n2
    deep = K.field.root_of_t(max(d1, d2) + 1)
    # the same elements rebuilt from a deeper generator
    a2 = deep ** (n1 * 3 ** (max(d1, d2) + 1 - d1)) + 1
    b2 = deep ** (n2 * 3 ** (max(d1, d2) + 1 - d2))
    assert a == a2 and b == b2
    assert a * b == a2 * b2
    assert K.value(a + b) == K.value(a2 + b2)


def test_value_group_index():
    K = parse_base("qp:3")
    G = K.value_group
    H = G.joined(Fraction(1, 2))
    assert G.index_in(H) == 2
