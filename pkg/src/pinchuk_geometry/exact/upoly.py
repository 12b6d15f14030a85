"""Dense univariate polynomials over Q and the real-root toolbox.

Heavy routines (gcd, Sturm chains, Descartes bisection) work on primitive
integer coefficient lists internally; rescaling by positive constants never
changes a sign count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from ..errors import DuplicateAbscissa, InsufficientSamples, ZeroPolynomial
from .mpoly import MPoly, as_rat, rat_str


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rat(self.lo))
        object.__setattr__(self, "hi", as_rat(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def to_json(self):
        return [rat_str(self.lo), rat_str(self.hi)]


class UPoly:
    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs, var="x"):
        cs = [as_rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def from_mpoly(cls, p: MPoly, var=None) -> "UPoly":
        used = p.used_vars()
        if len(used) > 1:
            raise ValueError(f"polynomial uses several variables {used}")
        if var is None:
            var = used[0] if used else (p.vars[0] if p.vars else "x")
        parts = p.coeffs_in(var)
        deg = max(parts) if parts else -1
        return cls([parts[k].constant_value() if k in parts else 0 for k in range(deg + 1)], var)

    def to_mpoly(self) -> MPoly:
        return MPoly({(k,): c for k, c in enumerate(self.coeffs)}, (self.var,))

    # basics -------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UPoly({self.to_mpoly().to_string()!r}, var={self.var!r})"

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly([self.coeff(k) + other.coeff(k) for k in range(n)], self.var)

    def __neg__(self):
        return UPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            c = as_rat(other)
            return UPoly([a * c for a in self.coeffs], self.var)
        if self.is_zero() or other.is_zero():
            return UPoly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out, self.var)

    __rmul__ = __mul__

    def divmod(self, other: "UPoly"):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UPoly([], self.var), self
        quot = [Fraction(0)] * (dq + 1)
        lc = other.lc()
        ob = other.coeffs
        for k in range(dq, -1, -1):
            c = rem[k + len(ob) - 1] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(ob):
                    rem[k + j] -= c * b
        return UPoly(quot, self.var), UPoly(rem[: len(ob) - 1], self.var)

    def derivative(self) -> "UPoly":
        return UPoly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc())

    def compose_affine(self, a, b) -> "UPoly":
        """p(a*x + b)."""
        a, b = as_rat(a), as_rat(b)
        result = UPoly([], self.var)
        lin = UPoly([b, a], self.var)
        for c in reversed(self.coeffs):
            result = result * lin + UPoly([c], self.var)
        return result

    def gcd(self, other: "UPoly") -> "UPoly":
        """Monic gcd over Q (computed on primitive integer remainders)."""
        a, b = _primitive(_to_int(self.coeffs)), _primitive(_to_int(other.coeffs))
        g = _int_gcd(a, b)
        return UPoly(g, self.var).monic()

    def squarefree(self) -> "UPoly":
        if self.is_zero():
            raise ZeroPolynomial("square-free part of the zero polynomial")
        return UPoly(_squarefree_int(self.coeffs), self.var)

    def sign_at(self, x) -> int:
        v = self(as_rat(x))
        return (v > 0) - (v < 0)


# integer helpers ---------------------------------------------------------

def _to_int(coeffs) -> list:
    """Scale a rational coefficient list by the positive lcm of denominators."""
    coeffs = [as_rat(c) for c in coeffs]
    d = 1
    for c in coeffs:
        d = lcm(d, c.denominator)
    return [int(c * d) for c in coeffs]


def _primitive(a: list) -> list:
    """Divide by the positive content and strip trailing zeros."""
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        a = [c // g for c in a]
    return a


def _int_prem(a: list, b: list) -> list:
    """Remainder of a by b up to a positive factor (a, b integer lists)."""
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    sgn = 1 if lb > 0 else -1
    alb = abs(lb)
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        # a <- |lb| * a - sgn(lb) * la * x^shift * b keeps the sign convention
        a = [c * alb for c in a]
        f = sgn * la
        for j, cb in enumerate(b):
            a[shift + j] -= f * cb
        a.pop()
        while a and a[-1] == 0:
            a.pop()
        a = _primitive(a)
    return a


def _int_gcd(a: list, b: list) -> list:
    a, b = _primitive(a), _primitive(b)
    if not a:
        return b or [1]
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _int_prem(a, b)
        a, b = b, r
    return a


def _int_derivative(a: list) -> list:
    return [k * c for k, c in enumerate(a)][1:]


def _int_exact_div(a: list, b: list) -> list:
    """Exact quotient of integer polynomials known to divide (up to content)."""
    q, r = UPoly(a).divmod(UPoly(b))
    if not r.is_zero():
        raise ArithmeticError("non-exact polynomial division")
    return _primitive(_to_int(q.coeffs))


def _squarefree_int(coeffs) -> list:
    a = _primitive(_to_int(coeffs))
    if not a:
        raise ZeroPolynomial("zero polynomial")
    if len(a) <= 2:
        return a
    g = _int_gcd(a, _int_derivative(a))
    if len(g) <= 1:
        return a
    return _int_exact_div(a, g)


# Sturm sequences -----------------------------------------------------------

def sturm_sequence(u: UPoly) -> list:
    """Sturm chain of the square-free part, as primitive integer lists."""
    if u.is_zero():
        raise ZeroPolynomial("Sturm sequence of the zero polynomial")
    p0 = _squarefree_int(u.coeffs)
    seq = [p0]
    if len(p0) <= 1:
        return seq
    seq.append(_primitive(_int_derivative(p0)))
    while len(seq[-1]) > 1:
        r = _int_prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _eval_int(a: list, x: Fraction) -> Fraction:
    # homogenised Horner keeps everything in integers
    p, q = x.numerator, x.denominator
    acc = 0
    qk = 1
    for c in reversed(a):
        acc = acc * p + c * qk
        qk *= q
    # acc = q^(deg) * a(x) up to the positive factor; sign is what matters
    return acc


def _variations(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _signs_at(seq, x) -> list:
    if x == "+inf":
        return [_sign(a[-1]) for a in seq]
    if x == "-inf":
        return [_sign(a[-1]) * (-1 if (len(a) - 1) % 2 else 1) for a in seq]
    x = as_rat(x)
    # _eval_int scales by q^deg > 0, so the sign is exact
    return [_sign(_eval_int(a, x)) for a in seq]


def sturm_count(u: UPoly, lo=None, hi=None) -> int:
    """Number of distinct real roots in the open interval (lo, hi).

    ``None`` bounds mean -inf / +inf, so ``sturm_count(u)`` counts all real
    roots.  An :class:`Interval` may be passed as ``lo``.
    """
    if isinstance(lo, Interval):
        lo, hi = lo.lo, lo.hi
    seq = sturm_sequence(u)
    if len(seq) == 1:
        return 0
    a = "-inf" if lo is None else as_rat(lo)
    b = "+inf" if hi is None else as_rat(hi)
    if a != "-inf" and b != "+inf" and a >= b:
        return 0
    count = _variations(_signs_at(seq, a)) - _variations(_signs_at(seq, b))
    if b != "+inf" and _eval_int(seq[0], b) == 0:
        count -= 1
    return count


# Descartes / Vincent-Collins-Akritas isolation --------------------------------

def _descartes_bound(a: list) -> int:
    return _variations([_sign(c) for c in a])


def _taylor_shift1(a: list) -> list:
    """Coefficients of a(x + 1)."""
    a = list(a)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _var_after_mobius(a: list) -> int:
    """Sign variations of (x+1)^d a(1/(x+1)), i.e. Descartes count on (0, 1)."""
    return _descartes_bound(_taylor_shift1(list(reversed(a))))


def _deflate_half(a: list) -> list:
    """Exact quotient of a by (2x - 1), given a(1/2) == 0."""
    n = len(a) - 1
    q = [0] * n
    # a = (2x - 1) q  =>  synthetic division from the top
    carry = 0
    for k in range(n, 0, -1):
        q[k - 1] = (a[k] + carry) // 2
        carry = q[k - 1]
    return q


def _isolate_unit(a: list, lo: Fraction, hi: Fraction, out: list):
    """Isolate roots of a on the open interval (0,1) that maps to (lo, hi)."""
    stack = [(a, lo, hi)]
    while stack:
        a, lo, hi = stack.pop()
        v = _var_after_mobius(a)
        if v == 0:
            continue
        if v == 1:
            out.append(Interval(lo, hi))
            continue
        mid = (lo + hi) / 2
        n = len(a) - 1
        if sum(c << (n - k) for k, c in enumerate(a)) == 0:
            out.append(Interval(mid, mid))
            a = _deflate_half(a)
            n -= 1
        # left half: 2^n a(x/2); right half: 2^n a((x+1)/2)
        left = [c << (n - k) for k, c in enumerate(a)]
        right = _taylor_shift1(left)
        stack.append((left, lo, mid))
        stack.append((right, mid, hi))


def _root_bound(a: list) -> int:
    """Power of two strictly above |root| for every root (Cauchy bound)."""
    lead = abs(a[-1])
    m = max((abs(c) for c in a[:-1]), default=0)
    bound = Fraction(m, lead) + 1
    k = 0
    while (1 << k) <= bound:
        k += 1
    return 1 << k


def _isolate_positive(a: list) -> list:
    """Isolating intervals for the roots in (0, inf) of square-free a, a(0) != 0."""
    if len(a) <= 1:
        return []
    B = _root_bound(a)
    n = len(a) - 1
    scaled = [c * B ** k for k, c in enumerate(a)]
    out = []
    _isolate_unit(scaled, Fraction(0), Fraction(1), out)
    return [Interval(iv.lo * B, iv.hi * B) for iv in out]


def isolate_real_roots(u: UPoly, width=None) -> list:
    """Disjoint rational intervals, each holding exactly one distinct real root.

    Open-interval semantics: a non-degenerate [lo, hi] holds its root strictly
    inside; exact rational roots may come back as degenerate intervals.
    Sorted left to right.  ``width`` optionally refines each interval.
    """
    if u.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    a = _squarefree_int(u.coeffs)
    roots = []
    if a[0] == 0:
        roots.append(Interval(0, 0))
        a = _primitive(a[1:])
    roots += _isolate_positive(a)
    neg = [c if k % 2 == 0 else -c for k, c in enumerate(a)]
    roots += [Interval(-iv.hi, -iv.lo) for iv in _isolate_positive(neg)]
    roots.sort(key=lambda iv: (iv.lo, iv.hi))
    if width is not None:
        roots = [refine_root(a, iv, width) for iv in roots]
    return roots


def refine_root(u, iv: Interval, width) -> Interval:
    """Bisect an isolating interval of a square-free polynomial to ``width``."""
    a = u if isinstance(u, list) else _squarefree_int(u.coeffs)
    width = as_rat(width)
    lo, hi = iv.lo, iv.hi
    if lo == hi:
        return iv
    # the root is strictly inside; an endpoint may be a neighbouring root,
    # in which case the sign just inside comes from the derivative
    slo = _sign(_eval_int(a, lo))
    if slo == 0:
        slo = _sign(_eval_int(_int_derivative(a), lo))
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = _sign(_eval_int(a, mid))
        if s == 0:
            return Interval(mid, mid)
        if s == slo:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)


# interpolation -------------------------------------------------------------

def interpolate(samples, degree_bound: int, var="x") -> UPoly:
    """Unique polynomial of degree <= degree_bound through the samples.

    Uses the first ``degree_bound + 1`` samples (Newton divided differences)
    and returns the result without checking the remaining ones; callers that
    want a residual check evaluate the extra samples themselves.
    """
    samples = [(as_rat(x), as_rat(y)) for x, y in samples]
    xs = [x for x, _ in samples]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("interpolation nodes must be pairwise distinct")
    n = degree_bound + 1
    if len(samples) < n:
        raise InsufficientSamples(f"need {n} samples for degree {degree_bound}, got {len(samples)}")
    xs = xs[:n]
    dd = [y for _, y in samples[:n]]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    # Newton form -> monomial basis
    coeffs = [Fraction(0)] * n
    coeffs[0] = dd[n - 1]
    length = 1
    for k in range(n - 2, -1, -1):
        # coeffs <- coeffs * (x - xs[k]) + dd[k]
        xk = xs[k]
        new = [Fraction(0)] * (length + 1)
        for i in range(length):
            new[i + 1] += coeffs[i]
            new[i] -= coeffs[i] * xk
        new[0] += dd[k]
        length += 1
        coeffs[:length] = new
    return UPoly(coeffs[:length], var)
