"""Hahn-series model: truncated series over F_p, the perfect hull K and its
embedding, and valuations of polynomials at Hahn points."""

from .series import HahnApprox, h_add, h_invert, h_mul, h_neg, h_pth_root, h_valuation
from .field import KElem, iota, is_p_power
from .evaluation import (
    AlgebraicPoint,
    Point,
    RootSeries,
    artin_schreier_root,
    coset_key,
    difference_valuation,
    hahn_poly_valuation,
    point_sub,
    point_valuation,
)

__all__ = [
    "HahnApprox", "KElem", "iota", "is_p_power", "h_add", "h_mul", "h_neg",
    "h_valuation", "h_invert", "h_pth_root", "AlgebraicPoint", "Point",
    "RootSeries", "artin_schreier_root", "coset_key", "difference_valuation",
    "hahn_poly_valuation", "point_sub", "point_valuation",
]
