"""Fiber counts, the degree-drop probe and the asymptotic tracer."""

from fractions import Fraction

import numpy as np
import pytest

from pinchuk_geometry.errors import EmptyCloud
from pinchuk_geometry.exact import isolate_real_roots, sturm_count, variables
from pinchuk_geometry.pinchuk import build_map, curve_eval, numeric_map, pinchuk_curve
from pinchuk_geometry.properness import (
    cluster_points,
    curve_distance,
    axis_line_map,
    fiber_count,
    generic_degree,
    identity_map,
    leading_coeff_probe,
    probe_eliminant,
    scaled,
    sphere_point,
    trace_asymptotic,
)

x, y = variables("x", "y")
SURROGATE = (x, x * y)     # (x, y) -> (x, xy): not proper over the line alpha = 0


@pytest.fixture(scope="module")
def pmap():
    return build_map()


# fibers ----------------------------------------------------------------------------

def test_surrogate_fibers():
    assert fiber_count(SURROGATE, (2, 5)).count == 1
    assert fiber_count(SURROGATE, (0, 5)).count == 0
    assert fiber_count(SURROGATE, (Fraction(-1, 3), 0)).count == 1


def test_fiber_report_json():
    rep = fiber_count(SURROGATE, (Fraction(1, 2), 3))
    js = rep.to_json()
    assert js["count"] == 1 and js["certified"] is True
    assert js["target"] == ["1/2", "3"]


# frozen values: certified counts, identical in both variable orders
@pytest.mark.parametrize("target,count", [
    ((Fraction(1), Fraction(1)), 2),
    ((Fraction(5), Fraction(-7)), 2),
])
def test_two_point_fibers_in_both_orders(pmap, target, count):
    a = fiber_count(pmap, target, ("x", "y"))
    b = fiber_count(pmap, target, ("y", "x"))
    assert a.certified and b.certified
    assert a.count == b.count == count


def test_two_preimages_map_to_the_target(pmap):
    rep = fiber_count(pmap, (1, 1))
    for bx, by in rep.boxes:
        p, q = numeric_map(float(bx.mid), float(by.mid))
        assert abs(p - 1) < 1e-6 and abs(q - 1) < 1e-4
    (ax, _), (bx, _) = rep.boxes
    assert ax.hi < bx.lo   # two distinct preimages: the map is not injective


def test_sturm_agrees_with_isolation_on_a_fiber_eliminant(pmap):
    r = probe_eliminant(pmap, curve_eval(pinchuk_curve(), 2), "x")
    assert r.degree == 59
    sq = r.squarefree()
    assert sturm_count(sq) == len(isolate_real_roots(sq))


# probe -------------------------------------------------------------------------------

def test_probe_on_surrogate_is_the_first_coordinate():
    # Res_x(x - a, xy - b) = +-(a y - b)
    for a, b in ((0, 3), (2, 5), (-3, 1)):
        assert abs(leading_coeff_probe(SURROGATE, (a, b), "y")) == abs(a)


def test_generic_degrees(pmap):
    assert generic_degree(pmap.P, pmap.Q, "x") == 60
    assert generic_degree(pmap.P, pmap.Q, "y") == 66


@pytest.mark.parametrize("s", [Fraction(0), Fraction(1), Fraction(-1), Fraction(3, 2)])
def test_probe_vanishes_on_the_curve(pmap, s):
    assert leading_coeff_probe(pmap, curve_eval(pinchuk_curve(), s), "x") == 0


@pytest.mark.parametrize("target,value", [
    ((1, 1), Fraction(1626867087169, 256)),
    ((5, -7), Fraction(366702156650390625, 256)),
    ((Fraction(1, 3), Fraction(2, 5)), Fraction(139057844013841, 12960000)),
])
def test_probe_frozen_values_off_the_curve(pmap, target, value):
    assert leading_coeff_probe(pmap, target, "x") == value


def test_probe_rejects_bad_direction(pmap):
    with pytest.raises(ValueError):
        leading_coeff_probe(pmap, (0, 0), "z")


# tracer ----------------------------------------------------------------------------------

def test_scaled_and_sphere_point():
    assert scaled(1.0) == 0.5 and scaled(-3.0) == -0.75
    for sign in (1, -1):
        p = sphere_point((0.3,), sign, 7.0, 2)
        assert np.linalg.norm(p) == pytest.approx(7.0)
        q = sphere_point((0.3, -0.8), sign, 2.0, 3)
        assert np.linalg.norm(q) == pytest.approx(2.0)


def test_cluster_points_groups_nearby_points():
    pts = [(0.0, 0.0), (0.001, 0.0), (1.0, 1.0), (1.002, 1.0), (5.0, 0.0)]
    reps = cluster_points(pts, 0.01)
    assert len(reps) == 3
    assert all(r in pts for r in reps)


def test_surrogate_trace_hugs_the_line():
    cloud = trace_asymptotic(lambda a, b: (a, a * b), [10, 100, 1000, 1e4],
                             samples_per_radius=2000, bound=10)
    assert cloud.points
    assert max(abs(p[0]) for p in cloud.points) <= 10 / 1e4 * 1.01


def test_identity_map_has_empty_cloud():
    with pytest.raises(EmptyCloud) as info:
        trace_asymptotic(identity_map, [10, 100, 1000], samples_per_radius=2000)
    assert info.value.cloud is not None and info.value.cloud.points == []


def test_radii_must_increase():
    with pytest.raises(ValueError):
        trace_asymptotic(identity_map, [100, 10])


@pytest.fixture(scope="module")
def pinchuk_cloud():
    return trace_asymptotic(numeric_map, [10.0, 100.0, 1000.0])


def test_pinchuk_trace_approaches_the_curve(pinchuk_cloud):
    c = pinchuk_curve()
    worst = [max(curve_distance(p, c) for p in pinchuk_cloud.clusters[R])
             for R in pinchuk_cloud.radius_schedule]
    assert worst[0] > worst[1] > worst[2]
    assert worst[2] <= 1e-2


def test_trace_json_shape(pinchuk_cloud):
    js = pinchuk_cloud.to_json()
    assert js["radius_schedule"] == [10.0, 100.0, 1000.0]
    assert len(js["points"]) == len(pinchuk_cloud.points)


def test_three_dimensional_example_lands_on_the_axis():
    cloud = trace_asymptotic(axis_line_map, [1e2, 1e6, 1e10, 1e14, 1e18],
                             samples_per_radius=900, dim=3, max_channels=8)
    assert cloud.points
    assert max(max(abs(p[0]), abs(p[1])) for p in cloud.points) <= 1e-6


def test_curve_distance_is_zero_on_the_curve():
    c = pinchuk_curve()
    for s in (-1.3, 0.0, 0.7, 1.9):
        p = (s * s - 1, float(c.q(Fraction(s))))
        # bounded Brent stops near sqrt(machine eps) in the parameter
        assert curve_distance(p, c) < 1e-6
    assert curve_distance((-2.0, 0.0), c) >= 1.0 - 1e-12


def test_frozen_fiber_count_matches_dense_root_finding(pmap):
    # numeric cross-check: all complex roots of both eliminants at 80 digits,
    # then every real (x, y) pair tested against the map itself
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 80

    def real_roots(u):
        c = [mp.mpf(k.numerator) / k.denominator for k in reversed(u.squarefree().coeffs)]
        roots = mp.polyroots(c, maxsteps=400, extraprec=800)
        return [mp.re(r) for r in roots if abs(mp.im(r)) < mp.mpf(10) ** -30]

    xs = real_roots(probe_eliminant(pmap, (1, 1), "x"))
    ys = real_roots(probe_eliminant(pmap, (1, 1), "y"))
    hits = []
    for a in xs:
        for b in ys:
            p, q = numeric_map(a, b)
            if abs(p - 1) + abs(q - 1) < mp.mpf(10) ** -40:
                hits.append((a, b))
    assert len(hits) == fiber_count(pmap, (1, 1)).count == 2
