import random
from fractions import Fraction

import pytest

from valfield.core.poly import Poly
from valfield.errors import ParseError, UnknownIndeterminate
from valfield.parse import parse_poly
from valfield.valued import parse_base


def test_simple():
    e = parse_poly("x^2 - 2", "qp:2")
    x = Poly.gen(e.base.field)
    assert e.poly == x ** 2 - 2
    assert e.source == "x^2 - 2"


def test_tower_inverse_t():
    e = parse_poly("x^2 - x - 1/t", "tower:2:8")
    K = e.base
    assert e.poly[0] == -(K.field.one / K.t())
    assert K.value(e.poly[0]) == -1


def test_precedence_and_parens():
    e = parse_poly("-2*x^2 + (x + 1)*(x - 1) / 3", "qp:5")
    x = Poly.gen(e.base.field)
    assert e.poly == -2 * x ** 2 + (x * x - 1) * Poly.constant(e.base.field, Fraction(1, 3))


def test_rational_exponent_on_tower():
    e = parse_poly("x - t^(1/4)", "tower:2:8")
    assert e.base.value(e.poly[0]) == Fraction(1, 4)


def test_constant_field_generator():
    e = parse_poly("x^2 + a*x + 1", "fqt:2^2")
    assert e.poly.degree() == 2


@pytest.mark.parametrize("text,base,pos", [
    ("x^2 - y", "qp:2", 6),
    ("x + s", "fqt:3", 4),
    ("x + t", "qp:3", 4),
])
def test_unknown_indeterminate(text, base, pos):
    with pytest.raises(UnknownIndeterminate) as exc:
        parse_poly(text, base)
    assert exc.value.position == pos


@pytest.mark.parametrize("text", ["", "x +", "x^^2", "(x + 1", "x / x", "x $ 2", "x^(1/2)", "1/0"])
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        parse_poly(text, "qp:3")
    with pytest.raises(SyntaxError):
        parse_poly(text, "qp:3")


@pytest.mark.parametrize("desc", ["qp:3", "qp:7", "fqt:3", "fqt:2^2", "fqst:2", "tower:2:6", "tower:3:4"])
def test_round_trip(desc):
    K = parse_base(desc)
    rng = random.Random(desc)
    for _ in range(15):
        n = rng.randint(0, 4)
        g = Poly(K.field, [K.field.random_element(rng) for _ in range(n)] + [K.field.one])
        again = parse_poly(str(g), K).poly
        assert again == g, (str(g), str(again))
