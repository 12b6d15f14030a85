"""Sparse multivariate polynomials with exact rational coefficients.

An :class:`MPoly` is a map from exponent tuples to nonzero ``Fraction``
coefficients over an ordered tuple of variable names.  Binary operations
align the variable sets automatically (the union keeps the left operand's
order, then appends new names in order of appearance).
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from ..errors import NotExactlyDivisible

Rat = Fraction


def as_rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def rat_str(value: Fraction) -> str:
    value = as_rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _union(a: tuple, b: tuple) -> tuple:
    if a == b:
        return a
    extra = tuple(v for v in b if v not in a)
    return a + extra


def _grlex_key(exp):
    return (sum(exp), exp)


class MPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, terms=None, vars=()):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            n = len(self.vars)
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match variables {self.vars}")
                if c:
                    clean[exp] = as_rat(c)
        self.terms = clean

    @classmethod
    def _raw(cls, terms, vars):
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        return obj

    # construction ----------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls._raw({(1,): Fraction(1)}, (name,))

    @classmethod
    def const(cls, c, vars=()) -> "MPoly":
        c = as_rat(c)
        vars = tuple(vars)
        if not c:
            return cls._raw({}, vars)
        return cls._raw({(0,) * len(vars): c}, vars)

    @classmethod
    def coerce(cls, value, vars=()) -> "MPoly":
        if isinstance(value, MPoly):
            return value
        return cls.const(value, vars)

    def with_vars(self, vars) -> "MPoly":
        """Re-express over ``vars``, which must contain every variable in use."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = []
        for i, v in enumerate(self.vars):
            if v in vars:
                pos.append(vars.index(v))
            else:
                if any(e[i] for e in self.terms):
                    raise ValueError(f"variable {v!r} is used and cannot be dropped")
                pos.append(None)
        n = len(vars)
        out = {}
        for exp, c in self.terms.items():
            new = [0] * n
            for e, p in zip(exp, pos):
                if p is not None:
                    new[p] = e
            out[tuple(new)] = c
        return MPoly._raw(out, vars)

    def _align(self, other):
        other = MPoly.coerce(other, self.vars)
        vars = _union(self.vars, other.vars)
        return vars, self.with_vars(vars), other.with_vars(vars)

    # queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def used_vars(self) -> tuple:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def degree(self, var=None) -> int:
        """Total degree, or degree in ``var``; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def leading_term(self):
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def num_terms(self) -> int:
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            if isinstance(other, (int, Fraction, str)):
                other = MPoly.const(other)
            else:
                return NotImplemented
        _, a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self):
        used = self.used_vars()
        p = self.with_vars(tuple(sorted(used)))
        return hash((p.vars, frozenset(p.terms.items())))

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return MPoly._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __add__(self, other):
        if not isinstance(other, MPoly):
            other = as_rat(other)
            out = dict(self.terms)
            z = (0,) * len(self.vars)
            c = out.get(z, 0) + other
            if c:
                out[z] = c
            else:
                out.pop(z, None)
            return MPoly._raw(out, self.vars)
        vars, a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly._raw(out, vars)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            return self + (-as_rat(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MPoly":
        c = as_rat(c)
        if not c:
            return MPoly._raw({}, self.vars)
        return MPoly._raw({e: v * c for e, v in self.terms.items()}, self.vars)

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale(other)
        vars, a, b = self._align(other)
        out = {}
        bt = list(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bt:
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, 0) + ca * cb
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MPoly._raw(out, vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = MPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_div(self, other) -> "MPoly":
        """Exact quotient; raises NotExactlyDivisible if a remainder is left."""
        if not isinstance(other, MPoly):
            c = as_rat(other)
            return self.scale(1 / c)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        vars, a, b = self._align(other)
        if b.is_constant():
            return a.scale(1 / b.constant_value())
        lead_e, lead_c = b.leading_term()
        rem = dict(a.terms)
        quot = {}
        bt = list(b.terms.items())
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            qe = tuple(x - y for x, y in zip(e, lead_e))
            if min(qe) < 0:
                raise NotExactlyDivisible("polynomial division leaves a remainder")
            qc = c / lead_c
            quot[qe] = qc
            for eb, cb in bt:
                t = tuple(x + y for x, y in zip(qe, eb))
                s = rem.get(t, 0) - qc * cb
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return MPoly._raw(quot, vars)

    # calculus and substitution ------------------------------------------
    def diff(self, var: str) -> "MPoly":
        if var not in self.vars:
            return MPoly._raw({}, self.vars)
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return MPoly._raw(out, self.vars)

    def evaluate(self, point: dict) -> Fraction:
        """Exact value at a point assigning every used variable."""
        vals = []
        for v in self.vars:
            if v in point:
                vals.append(as_rat(point[v]))
            else:
                vals.append(None)
        total = Fraction(0)
        cache = {}
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise ValueError(f"no value for variable {self.vars[i]!r}")
                    key = (i, k)
                    if key not in cache:
                        cache[key] = vals[i] ** k
                    term *= cache[key]
            total += term
        return total

    def evaluate_float(self, point: dict) -> float:
        vals = [float(point[v]) if v in point else 0.0 for v in self.vars]
        total = 0.0
        for e, c in self.terms.items():
            term = float(c)
            for x, k in zip(vals, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def compose(self, substitutions: dict) -> "MPoly":
        """Substitute polynomials (or numbers) for variables."""
        subs = {v: MPoly.coerce(p) for v, p in substitutions.items()}
        keep = tuple(v for v in self.vars if v not in subs)
        vars = keep
        for p in subs.values():
            vars = _union(vars, p.vars)
        subs = {v: p.with_vars(vars) for v, p in subs.items()}
        powers = {}

        def power(v, k):
            key = (v, k)
            if key not in powers:
                powers[key] = subs[v] ** k
            return powers[key]

        keep_idx = [(i, vars.index(v)) for i, v in enumerate(self.vars) if v in keep]
        sub_idx = [(i, v) for i, v in enumerate(self.vars) if v in subs]
        result = MPoly._raw({}, vars)
        n = len(vars)
        for e, c in self.terms.items():
            mono = [0] * n
            for i, j in keep_idx:
                mono[j] = e[i]
            term = MPoly._raw({tuple(mono): c}, vars)
            for i, v in sub_idx:
                if e[i]:
                    term = term * power(v, e[i])
            result = result + term
        return result

    def coeffs_in(self, var: str) -> dict:
        """Split as sum_k c_k * var^k; returns {k: c_k} with c_k free of ``var``."""
        if var not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        parts = {}
        for e, c in self.terms.items():
            k = e[i]
            parts.setdefault(k, {})[e[:i] + e[i + 1:]] = c
        return {k: MPoly._raw(t, rest) for k, t in parts.items()}

    # serialization ------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def to_string(self) -> str:
        """``coeff * x^a * y^b`` terms joined by `` + ``/`` - ``, graded-lex descending."""
        if not self.terms:
            return "0"
        out = ""
        for i, (e, c) in enumerate(self.sorted_terms()):
            factors = [rat_str(abs(c))]
            for v, k in zip(self.vars, e):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            body = " * ".join(factors)
            if i == 0:
                out = body if c > 0 else "-" + body
            else:
                out += (" + " if c > 0 else " - ") + body
        return out

    __str__ = to_string

    def __repr__(self):
        return f"MPoly({self.to_string()!r}, vars={self.vars})"

    @classmethod
    def parse(cls, text: str, vars=None) -> "MPoly":
        """Inverse of :meth:`to_string` (also accepts ``-`` between terms)."""
        text = text.strip()
        if text == "0":
            return cls.const(0, vars or ())
        text = re.sub(r"(?<=[\w)])\s*-\s*", " + -", text)
        found = []
        terms = []
        for chunk in text.split("+"):
            chunk = chunk.strip()
            if not chunk:
                continue
            coeff = Fraction(1)
            mono = {}
            for factor in chunk.split("*"):
                factor = factor.strip()
                if re.fullmatch(r"-?\d+(/\d+)?", factor):
                    coeff *= Fraction(factor)
                    continue
                sign = 1
                if factor.startswith("-"):
                    sign, factor = -1, factor[1:].strip()
                coeff *= sign
                name, _, k = factor.partition("^")
                name = name.strip()
                if not re.fullmatch(r"[A-Za-z_]\w*", name):
                    raise ValueError(f"cannot parse factor {factor!r}")
                if name not in found:
                    found.append(name)
                mono[name] = mono.get(name, 0) + (int(k) if k else 1)
            terms.append((coeff, mono))
        vars = tuple(vars) if vars is not None else tuple(found)
        result = cls.const(0, vars)
        for coeff, mono in terms:
            exp = tuple(mono.get(v, 0) for v in vars)
            result = result + cls._raw({exp: coeff}, vars)
        return result


def variables(*names):
    return tuple(MPoly.var(n) for n in names)
