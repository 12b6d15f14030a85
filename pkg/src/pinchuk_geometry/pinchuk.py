"""The degree-25 Pinchuk map and its asymptotic curve, built symbolically.

    t = xy - 1,  h = t(xt + 1),  f = (xt + 1)^2 (t^2 + y),  P = f + h,
    Q = -t^2 - 6th(h + 1) - 170fh - 91h^2 - 195fh^2 - 69h^3 - 75fh^3 - (75/4)h^4.

The asymptotic curve is s -> (s^2 - 1, q(s)) with the quintic ``q`` below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import MPoly, Rat, UPoly, as_rat, isolate_real_roots, refine_root
from .exact.system import real_solutions

#: both balanced readings of the printed sum-of-squares form of det J
JACOBIAN_READINGS = {
    "t^2 + (t + f*(13 + 15*h))^2 + f^2": lambda t, h, f: t**2 + (t + f * (13 + 15 * h)) ** 2 + f**2,
    "t^2 + (t + 13*f + 15*h)^2 + f^2": lambda t, h, f: t**2 + (t + f * 13 + 15 * h) ** 2 + f**2,
}

CURVE_Q = (Fraction(-163, 4), 0, Fraction(117, 2), -29, Fraction(345, 4), -75)


@dataclass(frozen=True)
class PinchukMap:
    t: MPoly
    h: MPoly
    f: MPoly
    P: MPoly
    Q: MPoly
    jac: MPoly

    @property
    def components(self):
        return self.P, self.Q

    def __call__(self, x, y):
        pt = {"x": x, "y": y}
        return self.P.evaluate(pt), self.Q.evaluate(pt)

    def degrees(self) -> dict:
        return {name: getattr(self, name).degree() for name in ("t", "h", "f", "P", "Q")}


def jacobian_determinant(P: MPoly, Q: MPoly, xv="x", yv="y") -> MPoly:
    return P.diff(xv) * Q.diff(yv) - P.diff(yv) * Q.diff(xv)


def build_map() -> PinchukMap:
    x, y = MPoly.var("x"), MPoly.var("y")
    t = x * y - 1
    u = x * t + 1
    h = t * u
    f = u**2 * (t**2 + y)
    P = f + h
    Q = (
        -(t**2)
        - 6 * t * h * (h + 1)
        - 170 * f * h
        - 91 * h**2
        - 195 * f * h**2
        - 69 * h**3
        - 75 * f * h**3
        - Rat(75, 4) * h**4
    )
    xy = ("x", "y")
    t, h, f, P, Q = (p.with_vars(xy) for p in (t, h, f, P, Q))
    return PinchukMap(t=t, h=h, f=f, P=P, Q=Q, jac=jacobian_determinant(P, Q))


def numeric_map(x, y):
    """Floating-point evaluation through t, h, f (far less cancellation than
    expanding P and Q).  Works elementwise on numpy arrays."""
    t = x * y - 1
    u = x * t + 1
    h = t * u
    f = u * u * (t * t + y)
    P = f + h
    Q = (
        -t * t
        - 6 * t * h * (h + 1)
        - 170 * f * h
        - 91 * h * h
        - 195 * f * h * h
        - 69 * h**3
        - 75 * f * h**3
        - 18.75 * h**4
    )
    return P, Q


@dataclass
class JacobianCheck:
    holds: bool
    reading: str
    residual: MPoly
    residuals: dict = field(default_factory=dict)


def verify_jacobian_identity(pmap: PinchukMap) -> JacobianCheck:
    """Compare det J with each balanced reading of the sum-of-squares form.

    The first reading with a zero residual is adopted; if none vanishes the
    check fails and the residual of the first reading is returned.
    """
    residuals = {}
    for name, form in JACOBIAN_READINGS.items():
        residuals[name] = pmap.jac - form(pmap.t, pmap.h, pmap.f)
    for name, res in residuals.items():
        if res.is_zero():
            return JacobianCheck(True, name, res, residuals)
    name = next(iter(residuals))
    return JacobianCheck(False, name, residuals[name], residuals)


def sample_jacobian(pmap: PinchukMap, n: int, seed: int, spread: int = 50):
    """Exact jac values at ``n`` seeded rational points with |coords| <= spread."""
    import random

    rng = random.Random(seed)
    out = []
    for _ in range(n):
        x = Fraction(rng.randint(-spread * 64, spread * 64), rng.randint(1, 64))
        y = Fraction(rng.randint(-spread * 64, spread * 64), rng.randint(1, 64))
        out.append(((x, y), pmap.jac.evaluate({"x": x, "y": y})))
    return out


# the asymptotic curve ------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticCurve:
    p: UPoly
    q: UPoly

    def __call__(self, s):
        return curve_eval(self, s)


def pinchuk_curve() -> AsymptoticCurve:
    return AsymptoticCurve(p=UPoly([-1, 0, 1], "s"), q=UPoly(CURVE_Q, "s"))


def curve_eval(c: AsymptoticCurve, s) -> tuple:
    s = as_rat(s)
    return c.p(s), c.q(s)


def curve_eval_float(c: AsymptoticCurve, s):
    """Vectorised float evaluation (numpy arrays welcome)."""
    p = sum(float(a) * s**k for k, a in enumerate(c.p.coeffs))
    q = sum(float(a) * s**k for k, a in enumerate(c.q.coeffs))
    return p, q


def _divided_difference(u: UPoly) -> MPoly:
    """(u(s) - u(w)) / (s - w) as a polynomial in s, w."""
    s, w = MPoly.var("s"), MPoly.var("w")
    out = MPoly.const(0, ("s", "w"))
    for k, c in enumerate(u.coeffs):
        for i in range(k):
            out = out + (s**i * w ** (k - 1 - i)) * c
    return out.with_vars(("s", "w"))


@dataclass
class CurveReport:
    injective: bool
    singular_params: list
    certified: bool
    offdiagonal_pairs: list

    def to_json(self):
        def enc(v):
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
            return v.to_json()

        return {
            "injective": self.injective,
            "singular_params": [enc(v) for v in self.singular_params],
            "certified": self.certified,
        }


def _simplest_in(lo: Fraction, hi: Fraction) -> Fraction:
    """Simplest rational in the closed interval [lo, hi] (Stern-Brocot)."""
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_in(-hi, -lo)
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    rest = _simplest_in(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / rest


def singular_parameters(c: AsymptoticCurve) -> list:
    """Real s with p'(s) = q'(s) = 0: rational ones exactly, others as intervals."""
    g = c.p.derivative().gcd(c.q.derivative())
    if g.degree <= 0:
        return []
    out = []
    for iv in isolate_real_roots(g):
        if iv.lo == iv.hi:
            out.append(iv.lo)
            continue
        iv = refine_root(g, iv, Fraction(1, 10**12))
        guess = _simplest_in(iv.lo, iv.hi)
        out.append(guess if g(guess) == 0 else iv)
    return out


def curve_checks(c: AsymptoticCurve) -> CurveReport:
    """Injectivity of s -> (p(s), q(s)) over R and its singular parameters.

    Pairs s != w with equal images solve (p(s)-p(w))/(s-w) = (q(s)-q(w))/(s-w)
    = 0.  Both eliminants of this symmetric system are the same polynomial,
    so a candidate box built from one root interval twice only holds the
    diagonal point (s, s); every other box is decided by the certified solver.
    """
    dp, dq = _divided_difference(c.p), _divided_difference(c.q)
    sing = singular_parameters(c)
    if dp.is_zero() or dq.is_zero():
        # a constant coordinate: injective iff the other is injective
        other = c.q if dp.is_zero() else c.p
        dd = dq if dp.is_zero() else dp
        return CurveReport(other.degree == 1 and dd.is_constant(), sing, True, [])
    sol = real_solutions(dp, dq, ("s", "w"), skip_diagonal=True)
    return CurveReport(
        injective=sol.certified and not sol.boxes,
        singular_params=sing,
        certified=sol.certified,
        offdiagonal_pairs=sol.boxes,
    )


def anchor_table(c: AsymptoticCurve):
    return [(Fraction(s), *curve_eval(c, s)) for s in (0, 1, -1)]


def resultant_degree_facts(pmap: PinchukMap) -> dict:
    return {
        "deg_y P": pmap.P.degree("y"),
        "deg_y Q": pmap.Q.degree("y"),
        "deg_x P": pmap.P.degree("x"),
        "deg_x Q": pmap.Q.degree("x"),
    }


__all__ = [
    "PinchukMap",
    "AsymptoticCurve",
    "JacobianCheck",
    "CurveReport",
    "build_map",
    "numeric_map",
    "jacobian_determinant",
    "verify_jacobian_identity",
    "sample_jacobian",
    "pinchuk_curve",
    "curve_eval",
    "curve_eval_float",
    "curve_checks",
    "singular_parameters",
    "anchor_table",
]
