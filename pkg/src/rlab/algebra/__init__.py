"""Exact arithmetic: finite fields, polynomials, truncated series, projective groups."""

from .fields import (
    FiniteField,
    field_make,
    field_of_order,
    is_prime,
    legendre,
    prime_field,
    prime_power,
    sqrt_minus_one,
)
from .norms import TensorRing, norm_equation_finite, norm_equation_series, series_norm
from .poly import Poly, least_irreducible, poly_gcd
from .projective import MatrixGroup, ProjMatrix, group_closure, pgl_order, proj_canonical, psl_order
from .series import TruncSeries, smith_valuations

__all__ = [
    "FiniteField",
    "MatrixGroup",
    "Poly",
    "ProjMatrix",
    "TensorRing",
    "TruncSeries",
    "field_make",
    "field_of_order",
    "group_closure",
    "is_prime",
    "least_irreducible",
    "legendre",
    "norm_equation_finite",
    "norm_equation_series",
    "pgl_order",
    "poly_gcd",
    "prime_field",
    "prime_power",
    "proj_canonical",
    "psl_order",
    "series_norm",
    "smith_valuations",
    "sqrt_minus_one",
]
