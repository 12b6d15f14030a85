"""The map, its Jacobian identity and the asymptotic curve."""

from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from pinchuk_geometry.exact import UPoly
from pinchuk_geometry.pinchuk import (
    AsymptoticCurve,
    build_map,
    curve_checks,
    curve_eval,
    numeric_map,
    pinchuk_curve,
    sample_jacobian,
    singular_parameters,
    verify_jacobian_identity,
)

X, Y = sp.symbols("x y")


@pytest.fixture(scope="module")
def pmap():
    return build_map()


@pytest.fixture(scope="module")
def sym():
    # independent expansion with sympy
    t = X * Y - 1
    h = t * (X * t + 1)
    f = (X * t + 1) ** 2 * (t**2 + Y)
    P = sp.expand(f + h)
    Q = sp.expand(-t**2 - 6 * t * h * (h + 1) - 170 * f * h - 91 * h**2 - 195 * f * h**2
                  - 69 * h**3 - 75 * f * h**3 - sp.Rational(75, 4) * h**4)
    return t, h, f, P, Q


def _to_sympy(p):
    out = 0
    for e, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator)
        for v, k in zip(p.vars, e):
            term *= {"x": X, "y": Y}[v] ** k
        out += term
    return sp.expand(out)


def test_components_match_sympy(pmap, sym):
    _, _, _, P, Q = sym
    assert sp.expand(_to_sympy(pmap.P) - P) == 0
    assert sp.expand(_to_sympy(pmap.Q) - Q) == 0


def test_published_degrees(pmap):
    d = pmap.degrees()
    assert (d["h"], d["f"], d["P"], d["Q"]) == (5, 10, 10, 25)
    assert pmap.P == pmap.f + pmap.h


def test_jacobian_matches_sympy(pmap, sym):
    _, _, _, P, Q = sym
    J = sp.expand(sp.diff(P, X) * sp.diff(Q, Y) - sp.diff(P, Y) * sp.diff(Q, X))
    assert sp.expand(_to_sympy(pmap.jac) - J) == 0


def test_jacobian_identity_reading(pmap, sym):
    chk = verify_jacobian_identity(pmap)
    assert chk.holds and chk.residual.is_zero()
    assert chk.reading == "t^2 + (t + f*(13 + 15*h))^2 + f^2"
    # the other balanced reading leaves a nonzero residual
    others = [r for name, r in chk.residuals.items() if name != chk.reading]
    assert others and all(not r.is_zero() for r in others)


def test_jacobian_positive_on_seeded_points(pmap):
    vals = sample_jacobian(pmap, 200, seed=7)
    assert all(v > 0 for _, v in vals)
    assert sample_jacobian(pmap, 5, seed=7) == vals[:5]


def test_jacobian_where_t_vanishes(pmap):
    # t = 0 forces h = 0 and f = y = 1/x, so det J = (13 f)^2 + f^2 there
    x = Fraction(3)
    y = 1 / x
    assert pmap.jac.evaluate({"x": x, "y": y}) == 170 * y**2


def test_numeric_map_agrees_with_exact(pmap):
    rng = np.random.default_rng(3)
    for a, b in rng.uniform(-1.5, 1.5, size=(20, 2)):
        fa, fb = Fraction(float(a)), Fraction(float(b))
        P, Q = pmap(fa, fb)
        p, q = numeric_map(a, b)
        assert p == pytest.approx(float(P), rel=1e-9, abs=1e-9)
        assert q == pytest.approx(float(Q), rel=1e-9, abs=1e-6)


# curve --------------------------------------------------------------------------

def test_curve_anchor_points():
    c = pinchuk_curve()
    assert curve_eval(c, 0) == (-1, Fraction(-163, 4))
    assert curve_eval(c, 1) == (0, 0)
    assert curve_eval(c, -1) == (0, 208)


def test_curve_is_injective_with_one_singular_parameter():
    rep = curve_checks(pinchuk_curve())
    assert rep.injective and rep.certified
    assert rep.singular_params == [0]
    assert rep.to_json()["singular_params"] == ["0"]


def test_cusp_is_injective_and_singular():
    c = AsymptoticCurve(UPoly([0, 0, 1], "s"), UPoly([0, 0, 0, 1], "s"))
    rep = curve_checks(c)
    assert rep.injective and rep.singular_params == [0]


def test_nodal_cubic_is_not_injective():
    c = AsymptoticCurve(UPoly([0, -1, 0, 1], "s"), UPoly([0, 0, 1], "s"))
    rep = curve_checks(c)
    assert not rep.injective and rep.certified
    # (s, w) = (1, -1) and its mirror both map to the node (0, 1)
    pairs = rep.offdiagonal_pairs
    assert len(pairs) == 2
    for bs, bw in pairs:
        assert {(bs.contains(1), bw.contains(-1)), (bs.contains(-1), bw.contains(1))} & {(True, True)}
    assert singular_parameters(c) == []


def test_line_is_injective():
    c = AsymptoticCurve(UPoly([0, 1], "s"), UPoly([5], "s"))
    assert curve_checks(c).injective
