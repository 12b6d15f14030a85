"""Exact arithmetic substrate: rationals, polynomials, resultants, real roots."""

from fractions import Fraction as Rat

from .linalg import (
    det_int,
    det_poly,
    det_rat,
    nullspace_sparse,
    rank_sparse,
    resultant,
    resultant_numeric,
    solve_sparse,
    sylvester_matrix,
)
from .mpoly import MPoly, as_rat, rat_str, variables
from .upoly import (
    Interval,
    UPoly,
    interpolate,
    isolate_real_roots,
    refine_root,
    sturm_count,
    sturm_sequence,
)

__all__ = [
    "Rat",
    "MPoly",
    "UPoly",
    "Interval",
    "as_rat",
    "rat_str",
    "variables",
    "det_int",
    "det_rat",
    "det_poly",
    "sylvester_matrix",
    "resultant",
    "resultant_numeric",
    "rank_sparse",
    "nullspace_sparse",
    "solve_sparse",
    "sturm_sequence",
    "sturm_count",
    "isolate_real_roots",
    "refine_root",
    "interpolate",
]
