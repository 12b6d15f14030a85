"""Certified real solutions of square polynomial systems in two variables.

Both coordinate eliminants are built by exact interpolation of Sylvester
determinants; their isolated real roots give candidate boxes, and each box is
either refuted (interval evaluation or Krawczyk exclusion) or certified to
hold exactly one solution (Krawczyk inclusion).  Boxes that stay undecided
after the refinement budget are reported, never silently counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import DegenerateElimination, InsufficientDegreeBound
from .linalg import resultant_numeric
from .mpoly import MPoly
from .upoly import Interval, UPoly, interpolate, isolate_real_roots, refine_root, sturm_count


# elimination by interpolation ------------------------------------------------

def coefficient_polys(p: MPoly, elim: str, keep: str, formal_degree=None) -> list:
    """Coefficients of p in ``elim`` as UPolys in ``keep`` (constant term first)."""
    parts = p.coeffs_in(elim)
    deg = p.degree(elim) if formal_degree is None else formal_degree
    out = []
    for k in range(deg + 1):
        c = parts.get(k)
        out.append(UPoly.from_mpoly(c, keep) if c is not None and not c.is_zero() else UPoly([], keep))
    return out


def bezout_bound(f: MPoly, g: MPoly, keep: str, elim: str) -> int:
    """deg_keep Res_elim(f, g) <= deg_elim(g) deg_keep(f) + deg_elim(f) deg_keep(g)."""
    return g.degree(elim) * f.degree(keep) + f.degree(elim) * g.degree(keep)


def interpolation_nodes(n: int) -> list:
    """0, 1, -1, 2, -2, ... (small integers keep determinants small)."""
    out = [Fraction(0)]
    k = 1
    while len(out) < n:
        out.append(Fraction(k))
        if len(out) < n:
            out.append(Fraction(-k))
        k += 1
    return out


def eliminant(f: MPoly, g: MPoly, keep: str, elim: str, degree_bound=None, pad: int = 5,
              checks: int = 4) -> UPoly:
    """Res_elim(f, g) as a polynomial in ``keep``, by exact interpolation.

    Each sample is the determinant of the Sylvester matrix at a rational node
    (formal degrees kept, so evaluation commutes with the determinant).  The
    ``checks`` extra nodes must reproduce the interpolant exactly.
    """
    fc = coefficient_polys(f, elim, keep)
    gc = coefficient_polys(g, elim, keep)
    if degree_bound is None:
        degree_bound = bezout_bound(f, g, keep, elim) + pad
    nodes = interpolation_nodes(degree_bound + 1 + checks)
    samples = [(x, resultant_numeric([c(x) for c in fc], [c(x) for c in gc])) for x in nodes]
    r = interpolate(samples, degree_bound, keep)
    for x, v in samples[degree_bound + 1:]:
        if r(x) != v:
            raise InsufficientDegreeBound(
                f"interpolant of degree <= {degree_bound} misses the check node {x}")
    return r


# rational interval arithmetic -----------------------------------------------------

class RI:
    """Closed interval with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = Fraction(lo)
        self.hi = Fraction(lo if hi is None else hi)

    @classmethod
    def of(cls, iv: Interval) -> "RI":
        return cls(iv.lo, iv.hi)

    def __add__(self, o):
        if not isinstance(o, RI):
            o = RI(o)
        return RI(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RI(-self.hi, -self.lo)

    def __sub__(self, o):
        if not isinstance(o, RI):
            o = RI(o)
        return RI(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, o):
        return RI(o) - self

    def __mul__(self, o):
        if not isinstance(o, RI):
            o = Fraction(o)
            return RI(self.lo * o, self.hi * o) if o >= 0 else RI(self.hi * o, self.lo * o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RI(min(ps), max(ps))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k == 0:
            return RI(1)
        if k % 2 == 1 or self.lo >= 0:
            return RI(self.lo**k, self.hi**k)
        if self.hi <= 0:
            return RI(self.hi**k, self.lo**k)
        return RI(0, max(self.lo**k, self.hi**k))

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def intersect(self, o):
        lo, hi = max(self.lo, o.lo), min(self.hi, o.hi)
        return RI(lo, hi) if lo <= hi else None

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def __repr__(self):
        return f"RI({float(self.lo):.6g}, {float(self.hi):.6g})"


def _pow_table(X: RI, n: int):
    table = [RI(1)]
    for k in range(1, n + 1):
        table.append(X**k)
    return table


def eval_box(p: MPoly, box: dict) -> RI:
    """Natural interval extension of p over a box {var: RI}."""
    tables = []
    for i, v in enumerate(p.vars):
        n = max((e[i] for e in p.terms), default=0)
        tables.append(_pow_table(box[v], n) if n else None)
    lo = hi = Fraction(0)
    for e, c in p.terms.items():
        term = RI(c)
        for i, k in enumerate(e):
            if k:
                term = term * tables[i][k]
        lo += term.lo
        hi += term.hi
    return RI(lo, hi)


# certified solving ----------------------------------------------------------------

@dataclass
class SolveResult:
    boxes: list
    certified: bool
    undecided: list = field(default_factory=list)
    eliminants: tuple = ()
    candidates: int = 0


class _System:
    def __init__(self, f: MPoly, g: MPoly, vars):
        self.vx, self.vy = vars
        self.f = f.with_vars(vars)
        self.g = g.with_vars(vars)
        self.fx, self.fy = self.f.diff(self.vx), self.f.diff(self.vy)
        self.gx, self.gy = self.g.diff(self.vx), self.g.diff(self.vy)

    def mean_value(self, p, px, py, X: RI, Y: RI) -> RI:
        mx, my = X.mid, Y.mid
        box = {self.vx: X, self.vy: Y}
        c = p.evaluate({self.vx: mx, self.vy: my})
        mv = RI(c) + eval_box(px, box) * (X - mx) + eval_box(py, box) * (Y - my)
        return mv.intersect(eval_box(p, box)) or mv

    def excluded(self, X: RI, Y: RI) -> bool:
        return (not self.mean_value(self.f, self.fx, self.fy, X, Y).contains_zero()
                or not self.mean_value(self.g, self.gx, self.gy, X, Y).contains_zero())

    def krawczyk(self, X: RI, Y: RI) -> str:
        """'in' (unique root, certified), 'out' (no root) or '?'."""
        mx, my = X.mid, Y.mid
        pt = {self.vx: mx, self.vy: my}
        F = (self.f.evaluate(pt), self.g.evaluate(pt))
        Jm = np.array([[float(self.fx.evaluate(pt)), float(self.fy.evaluate(pt))],
                       [float(self.gx.evaluate(pt)), float(self.gy.evaluate(pt))]])
        if not np.all(np.isfinite(Jm)) or abs(np.linalg.det(Jm)) == 0:
            return "?"
        try:
            Yf = np.linalg.inv(Jm)
        except np.linalg.LinAlgError:
            return "?"
        if not np.all(np.isfinite(Yf)):
            return "?"
        Yq = [[Fraction(float(v)) for v in row] for row in Yf]
        box = {self.vx: X, self.vy: Y}
        JB = [[eval_box(self.fx, box), eval_box(self.fy, box)],
              [eval_box(self.gx, box), eval_box(self.gy, box)]]
        D = (X - mx, Y - my)
        K = []
        for i in range(2):
            c = (mx, my)[i] - (Yq[i][0] * F[0] + Yq[i][1] * F[1])
            acc = RI(c)
            for j in range(2):
                # row i of (I - Y JB) applied to D
                m = RI(1 if i == j else 0) - (JB[0][j] * Yq[i][0] + JB[1][j] * Yq[i][1])
                acc = acc + m * D[j]
            K.append(acc)
        if K[0].intersect(X) is None or K[1].intersect(Y) is None:
            return "out"
        if X.lo < K[0].lo and K[0].hi < X.hi and Y.lo < K[1].lo and K[1].hi < Y.hi:
            return "in"
        return "?"

    def decide_degenerate(self, ix: Interval, iy: Interval) -> str:
        """Exact decision when one coordinate is a known rational root."""
        if ix.lo == ix.hi and iy.lo == iy.hi:
            pt = {self.vx: ix.lo, self.vy: iy.lo}
            return "in" if self.f.evaluate(pt) == 0 and self.g.evaluate(pt) == 0 else "out"
        if ix.lo == ix.hi:
            fixed, var, other = {self.vx: ix.lo}, self.vy, iy
        else:
            fixed, var, other = {self.vy: iy.lo}, self.vx, ix
        fu = _restrict(self.f, fixed, var)
        gu = _restrict(self.g, fixed, var)
        if fu.is_zero() and gu.is_zero():
            raise DegenerateElimination("a whole line of solutions")
        common = gu if fu.is_zero() else fu if gu.is_zero() else fu.gcd(gu)
        if common.degree <= 0:
            return "out"
        return "in" if sturm_count(common, other.lo, other.hi) > 0 else "out"


def _restrict(p: MPoly, fixed: dict, var: str) -> UPoly:
    parts = p.coeffs_in(var)
    deg = max(parts) if parts else -1
    return UPoly([parts[k].evaluate(fixed) if k in parts else 0 for k in range(deg + 1)], var)


def real_solutions(f: MPoly, g: MPoly, vars=("x", "y"), max_rounds: int = 200,
                   skip_diagonal: bool = False, eliminants=None) -> SolveResult:
    """Certified isolation of the real solutions of f = g = 0.

    ``skip_diagonal`` drops the boxes pairing a root interval with itself; it
    is only meaningful for symmetric systems whose two eliminants coincide.
    """
    vx, vy = vars
    sysm = _System(f, g, vars)
    if eliminants is None:
        rx = eliminant(sysm.f, sysm.g, keep=vx, elim=vy)
        ry = eliminant(sysm.f, sysm.g, keep=vy, elim=vx)
    else:
        rx, ry = eliminants
    if rx.is_zero() or ry.is_zero():
        raise DegenerateElimination("an eliminant vanishes identically (common component)")
    if rx.degree <= 0 or ry.degree <= 0:
        return SolveResult([], True, [], (rx, ry), 0)
    sx, sy = rx.squarefree(), ry.squarefree()
    xs, ys = isolate_real_roots(sx), isolate_real_roots(sy)
    symmetric = skip_diagonal and sx.coeffs == sy.coeffs
    pending = [(i, j) for i in range(len(xs)) for j in range(len(ys))
               if not (symmetric and i == j)]
    ncand = len(pending)
    found = []
    for _ in range(max_rounds):
        still = []
        for i, j in pending:
            ix, iy = xs[i], ys[j]
            if ix.lo == ix.hi or iy.lo == iy.hi:
                verdict = sysm.decide_degenerate(ix, iy)
            else:
                X, Y = RI.of(ix), RI.of(iy)
                if sysm.excluded(X, Y):
                    verdict = "out"
                else:
                    verdict = sysm.krawczyk(X, Y)
            if verdict == "in":
                found.append((i, j))
            elif verdict == "?":
                still.append((i, j))
        pending = still
        if not pending:
            break
        for i in {i for i, _ in pending}:
            iv = xs[i]
            xs[i] = refine_root(sx, iv, iv.width / 2)
        for j in {j for _, j in pending}:
            iv = ys[j]
            ys[j] = refine_root(sy, iv, iv.width / 2)
    boxes = [(xs[i], ys[j]) for i, j in sorted(found)]
    undecided = [(xs[i], ys[j]) for i, j in pending]
    return SolveResult(boxes, not pending, undecided, (rx, ry), ncand)
