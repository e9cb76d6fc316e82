"""Exact arithmetic layer: fields, polynomials, residue-field factorization."""

from fractions import Fraction

from .factor import factor_over_residue, is_purely_inseparable_factor
from .fields import GF, QQ, ExtElem, ExtField, FFElem, FiniteField, RatFunc, RatFuncField
from .poly import NEG_INF, Poly, poly_divmod, poly_gcd, poly_xgcd

Rational = Fraction

__all__ = [
    "GF", "QQ", "ExtElem", "ExtField", "FFElem", "FiniteField", "Fraction", "NEG_INF",
    "Poly", "RatFunc", "RatFuncField", "Rational", "factor_over_residue",
    "is_purely_inseparable_factor", "poly_divmod", "poly_gcd", "poly_xgcd",
]
