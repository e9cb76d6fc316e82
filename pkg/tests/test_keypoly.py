import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valfield.core.poly import NEG_INF, Poly
from valfield.errors import RejectedAugmentation
from valfield.keypoly import (
    INF,
    NewtonPolygon,
    augment,
    chain_invariants,
    effective_degree,
    empty_chain,
    newton_polygon,
    newton_residual,
    q_expansion,
    trunc_value,
)
from valfield.valued import parse_base

from conftest import corpus_chains, poly

Q2 = parse_base("qp:2")
Q3 = parse_base("qp:3")


def x_over(base):
    return Poly.gen(base.field)


def test_q_expansion_examples():
    x = x_over(Q2)
    assert q_expansion(x ** 2 - 2, x) == [Poly.constant(Q2.field, -2), Poly(Q2.field, []), Poly.constant(Q2.field, 1)]
    a, b = q_expansion(x ** 3 + 2 * x + 1, x ** 2)
    assert a == 2 * x + 1 and b == x
    Q = x ** 2 + 1
    P = Q ** 2 + 3 * Q + (x - 5)
    assert q_expansion(P, Q) == [x - 5, Poly.constant(Q2.field, 3), Poly.constant(Q2.field, 1)]


def test_trunc_value_and_effective_degree():
    x = x_over(Q2)
    ch = augment(empty_chain(Q2), x, Fraction(1, 2))
    h = x ** 2 - 2
    assert trunc_value(h, ch, 1) == 1
    assert effective_degree(h, ch, 1) == 2
    assert trunc_value(x, ch, 1) == Fraction(1, 2)
    assert effective_degree(x, ch, 1) == 1
    assert trunc_value(Poly.constant(Q2.field, 12), ch, 1) == 2
    zero = Poly(Q2.field, [])
    assert trunc_value(zero, ch, 1) == INF
    assert effective_degree(zero, ch, 1) == NEG_INF


def test_newton_x2_minus_2():
    g, _ = poly("qp:2", "x^2 - 2")
    np_ = newton_polygon(g, base=Q2)
    assert [(s.root_value, s.length) for s in np_.segments] == [(Fraction(1, 2), 2)]
    (val, res), = newton_residual(g, base=Q2)
    assert val == Fraction(1, 2) and res.degree == 1


def test_newton_two_slopes():
    g, _ = poly("qp:2", "x^2 + x + 2")
    segs = newton_polygon(g, base=Q2).segments
    assert sorted((s.root_value, s.length) for s in segs) == [(0, 1), (1, 1)]
    # increasing slope order
    assert [s.slope for s in segs] == sorted(s.slope for s in segs)


def test_newton_tower_negative_value():
    g, T = poly("tower:2", "x^2 - x - 1/t")
    segs = newton_polygon(g, base=T).segments
    assert [(s.root_value, s.length) for s in segs] == [(Fraction(-1, 2), 2)]
    assert 1 not in segs[0].points


def test_augment_x2_plus_1_over_q2():
    x = x_over(Q2)
    g = x ** 2 + 1
    ch = augment(empty_chain(Q2), x, 0)
    res = ch.residual_polynomial(g)
    assert res.degree() == 2
    ch2 = augment(ch, x + 1, Fraction(1, 2))
    assert ch2.steps[-1].alpha == 1
    assert ch2.value(g) == 1


def test_augment_rejects_small_value():
    x = x_over(Q2)
    ch = augment(empty_chain(Q2), x, 0)
    with pytest.raises(RejectedAugmentation):
        augment(ch, x + 1, 0)
    with pytest.raises(RejectedAugmentation):
        augment(empty_chain(Q2), x ** 2 + 1, 0)


def test_chain_invariants_examples():
    x = x_over(Q2)
    e, f, _ = chain_invariants(augment(empty_chain(Q2), x, Fraction(1, 2)).with_residual_factor(
        Poly.gen(Q2.residue_field, "y") + 1))
    assert (e, f) == (2, 1)
    x3 = x_over(Q3)
    ch = augment(empty_chain(Q3), x3, 0)
    psi = ch.residual_polynomial(x3 ** 2 + 1).monic()
    e, f, _ = chain_invariants(ch.with_residual_factor(psi))
    assert (e, f) == (1, 2)
    ch = augment(empty_chain(Q3), x3 - 1, 0)
    e, f, _ = chain_invariants(ch.with_residual_factor(Poly.gen(Q3.residue_field, "y")))
    assert (e, f) == (1, 1)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=8))
def test_polygon_partitions_degree(cs):
    vals = [Fraction(c) for c in cs] + [Fraction(0)]
    np_ = NewtonPolygon.from_values(vals)
    assert np_.total_length() == len(vals) - 1
    slopes = [s.slope for s in np_.segments]
    assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)


def _random_h(field, deg, rng):
    x = Poly.gen(field)
    h = x ** deg
    for k in range(deg):
        h = h + Poly.constant(field, field(rng.randint(-4, 4))) * x ** k
    return h


def _chain_samples(count, seed):
    rng = random.Random(seed)
    chains = [c for c in corpus_chains() if not c[0].startswith("fqst")]
    for _ in range(count):
        base, g, ch = rng.choice(chains)
        field = g.field
        h = g if rng.random() < 0.3 else _random_h(field, rng.randint(1, 2 * g.degree()), rng)
        yield h, ch


def test_truncation_bound_random():
    for h, ch in _chain_samples(150, 11):
        vals = [ch.trunc_value(h, i) for i in range(1, len(ch) + 1)]
        assert vals == sorted(vals)
        assert vals[-1] <= ch.value(h)


def test_trunc_value_matches_level_value():
    for h, ch in _chain_samples(60, 5):
        assert ch.trunc_value(h, len(ch)) == ch.value(h)


def test_effective_degree_decreases_random():
    for h, ch in _chain_samples(150, 29):
        deltas = [ch.effective_degree(h, i) for i in range(1, len(ch) + 1)]
        assert all(a >= b for a, b in zip(deltas, deltas[1:]))


def test_degree_multiplicativity_and_group_index():
    for _, _, ch in corpus_chains():
        for i in range(1, len(ch)):
            prev, step = ch.steps[i - 1], ch.steps[i]
            assert step.key.degree() == step.alpha * prev.key.degree()
            if step.value != INF:
                small = ch.truncate(i).value_group
                big = ch.truncate(i + 1).value_group
                assert small.index_in(big) == step.e
