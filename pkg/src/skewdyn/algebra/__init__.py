"""Exact scalars, polynomials, series and linear algebra."""

from fractions import Fraction as Rat

from .linalg import nullspace, rank, rref
from .mpoly import MPoly
from .numberfield import NumberField, NumberFieldElem
from .parse import parse_fx, parse_mpoly, parse_sparse, parse_upoly
from .printing import format_poly, format_scalar
from .roots import (complex_roots, cyclotomic_detect, cyclotomic_polynomial,
                    rational_roots)
from .series import LaurentSeries
from .upoly import ZERO_DEGREE, UPoly, poly_compose, upoly_gcd, upoly_xgcd

LaurentTail = LaurentSeries.tail

__all__ = [
    "Rat", "UPoly", "MPoly", "NumberField", "NumberFieldElem", "LaurentSeries",
    "LaurentTail", "ZERO_DEGREE", "poly_compose", "upoly_gcd", "upoly_xgcd",
    "rational_roots", "cyclotomic_detect", "cyclotomic_polynomial", "complex_roots",
    "nullspace", "rank", "rref", "parse_sparse", "parse_upoly", "parse_fx",
    "parse_mpoly", "format_poly", "format_scalar",
]
