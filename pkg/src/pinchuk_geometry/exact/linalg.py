"""Exact determinants, Sylvester matrices, resultants and sparse rank over Q."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from ..errors import ZeroDegree, ZeroPolynomial
from .mpoly import MPoly, as_rat


# determinants ---------------------------------------------------------------

def det_int(matrix) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            a = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (pivot * rowi[j] - a * rowk[j]) // prev
            rowi[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_rat(matrix) -> Fraction:
    """Exact determinant of a rational matrix (rows cleared to integers)."""
    scale = Fraction(1)
    rows = []
    for row in matrix:
        row = [as_rat(c) for c in row]
        d = 1
        for c in row:
            d = lcm(d, c.denominator)
        rows.append([int(c * d) for c in row])
        scale /= d
    return det_int(rows) * scale


def det_poly(matrix) -> MPoly:
    """Bareiss determinant over Q[vars]; pivots chosen by fewest terms."""
    m = [[MPoly.coerce(c) for c in row] for row in matrix]
    n = len(m)
    if n == 0:
        return MPoly.const(1)
    sign = 1
    prev = MPoly.const(1)
    for k in range(n - 1):
        candidates = [r for r in range(k, n) if not m[r][k].is_zero()]
        if not candidates:
            return MPoly.const(0)
        best = min(candidates, key=lambda r: (m[r][k].num_terms(), r))
        if best != k:
            m[k], m[best] = m[best], m[k]
            sign = -sign
        pivot = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            a = rowi[k]
            for j in range(k + 1, n):
                num = pivot * rowi[j]
                if not a.is_zero() and not rowk[j].is_zero():
                    num = num - a * rowk[j]
                rowi[j] = num.exact_div(prev)
            rowi[k] = MPoly.const(0)
        prev = pivot
    result = m[n - 1][n - 1]
    return result if sign > 0 else -result


# Sylvester / resultant -------------------------------------------------------

def sylvester_matrix(fc: list, gc: list) -> list:
    """Sylvester matrix from coefficient lists (constant term first).

    Rows for f come first: deg g shifted copies of f's coefficients from the
    leading one down, then deg f copies of g's.
    """
    m, n = len(fc) - 1, len(gc) - 1
    size = m + n
    zero = fc[0] * 0 if fc else 0
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(fc)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(gc)):
            row[i + k] = c
        rows.append(row)
    return rows


def _coeff_list(p: MPoly, var: str) -> list:
    parts = p.coeffs_in(var)
    deg = max(parts) if parts else -1
    zero = MPoly.const(0, tuple(v for v in p.vars if v != var))
    return [parts.get(k, zero) for k in range(deg + 1)]


def resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Res_var(f, g): determinant of the Sylvester matrix, f's rows first."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    if f.degree(var) <= 0 or g.degree(var) <= 0:
        raise ZeroDegree(f"both polynomials need positive degree in {var!r}")
    _, f, g = f._align(g)
    fc, gc = _coeff_list(f, var), _coeff_list(g, var)
    res = det_poly(sylvester_matrix(fc, gc))
    rest = tuple(v for v in f.vars if v != var)
    if res.is_zero():
        return MPoly.const(0, rest)
    return res.with_vars(rest) if var not in res.used_vars() else res


def resultant_numeric(fc: list, gc: list) -> Fraction:
    """Resultant of two univariate coefficient lists over Q.

    A side of formal degree zero follows the usual convention
    Res(c, g) = c^deg g, so proper maps with linear components are allowed.
    """
    m, n = len(fc) - 1, len(gc) - 1
    if m == 0:
        return as_rat(fc[0]) ** n
    if n == 0:
        return as_rat(gc[0]) ** m
    return det_rat(sylvester_matrix([as_rat(c) for c in fc], [as_rat(c) for c in gc]))


# sparse exact elimination over Q -----------------------------------------------

def _to_sparse(columns):
    return [{r: as_rat(v) for r, v in col.items() if v} for col in columns]


def _axpy(dst: dict, f, src: dict):
    """dst -= f * src, dropping exact zeros."""
    for k, v in src.items():
        t = dst.get(k, 0) - f * v
        if t:
            dst[k] = t
        else:
            dst.pop(k, None)


def _eliminate(cols):
    """Incremental column echelon form with tracked combinations.

    Returns (pivots, null) where pivots maps a pivot row to
    (reduced column, combination of original columns) and null lists the
    combinations that reduced to zero.
    """
    pivots = {}
    null = []
    for j, col in enumerate(cols):
        col = dict(col)
        combo = {j: Fraction(1)}
        while col:
            r = min(col)
            if r not in pivots:
                break
            pcol, pcombo = pivots[r]
            f = col[r] / pcol[r]
            _axpy(col, f, pcol)
            _axpy(combo, f, pcombo)
        if col:
            pivots[min(col)] = (col, combo)
        else:
            null.append(combo)
    return pivots, null


def rank_sparse(columns) -> int:
    """Rank over Q of a matrix given as a list of sparse columns ({row: value})."""
    return len(_eliminate(_to_sparse(columns))[0])


def nullspace_sparse(columns) -> list:
    """Basis of {c : sum_j c_j col_j = 0} as sparse dicts {column index: value}."""
    return _eliminate(_to_sparse(columns))[1]


def solve_sparse(columns, target: dict):
    """A sparse solution x of sum_j x_j col_j = target, or None if inconsistent."""
    pivots, _ = _eliminate(_to_sparse(columns))
    rest = {r: as_rat(v) for r, v in target.items() if v}
    x = {}
    while rest:
        r = min(rest)
        if r not in pivots:
            return None
        pcol, pcombo = pivots[r]
        f = rest[r] / pcol[r]
        _axpy(rest, f, pcol)
        _axpy(x, -f, pcombo)
    return x
