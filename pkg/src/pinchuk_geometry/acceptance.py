"""The acceptance checks, shared by the ``report`` command and the test suite.

Each check returns a CheckResult; ``seconds`` is wall time and is kept out of
the report files so that reruns stay byte-identical.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import ihom, models
from .errors import EmptyCloud
from .pinchuk import build_map, curve_checks, curve_eval, pinchuk_curve, numeric_map
from .pinchuk import sample_jacobian, verify_jacobian_identity
from .properness import (
    curve_distance,
    axis_line_map,
    fiber_count,
    leading_coeff_probe,
    trace_asymptotic,
)

PINCHUK_RADII = (10.0, 100.0, 1000.0)
AXIS_RADII = (1e2, 1e6, 1e10, 1e14, 1e18)
PROBE_CURVE_PARAMS = (Fraction(0), Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2))
PROBE_OFF_CURVE = ((Fraction(1), Fraction(1)), (Fraction(5), Fraction(-7)),
                   (Fraction(1, 3), Fraction(2, 5)))
FIBER_PARAMS = (Fraction(2), Fraction(1, 2), Fraction(-2))


@dataclass
class CheckResult:
    key: str
    claim: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0
    limit: float = None

    def within_time(self) -> bool:
        return self.limit is None or self.seconds <= self.limit

    def line(self) -> str:
        ok = self.passed and self.within_time()
        t = f" [{self.seconds:.1f}s" + (f" / {self.limit:g}s]" if self.limit else "]")
        return f"{'PASS' if ok else 'FAIL'} {self.key}: {self.claim}{t}"


def _fmt(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _timed(fn):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def check_jacobian(seed: int = 0, samples: int = 1000) -> CheckResult:
    pmap = build_map()
    chk = verify_jacobian_identity(pmap)
    vals = sample_jacobian(pmap, samples, seed)
    positive = all(v > 0 for _, v in vals)
    return CheckResult(
        "1-jacobian", "det J equals the sum of three squares; positive at sampled points",
        chk.holds and positive,
        {"reading": chk.reading, "residual_zero": chk.residual.is_zero(),
         "samples": samples, "all_positive": positive,
         "jac(1,1)": _fmt(pmap.jac.evaluate({"x": 1, "y": 1}))},
        limit=10.0)


@_timed
def check_degrees() -> CheckResult:
    pmap = build_map()
    d = pmap.degrees()
    return CheckResult("2-degrees", "deg P = 10 and deg Q = 25",
                       d["P"] == 10 and d["Q"] == 25, {k: v for k, v in d.items()})


@_timed
def check_curve() -> CheckResult:
    c = pinchuk_curve()
    want = {0: (Fraction(-1), Fraction(-163, 4)), 1: (Fraction(0), Fraction(0)),
            -1: (Fraction(0), Fraction(208))}
    got = {s: curve_eval(c, s) for s in want}
    rep = curve_checks(c)
    ok = got == want and rep.singular_params == [0] and rep.injective and rep.certified
    return CheckResult(
        "3-curve", "anchors (-1,-163/4), (0,0), (0,208); singular set {0}; injective", ok,
        {"anchors": {str(s): [_fmt(a), _fmt(b)] for s, (a, b) in got.items()},
         **rep.to_json()})


@_timed
def check_fibers(pmap=None) -> CheckResult:
    pmap = pmap or build_map()
    c = pinchuk_curve()
    targets = [((Fraction(0), Fraction(0)), 0), ((Fraction(-1), Fraction(-163, 4)), 0)]
    targets += [(curve_eval(c, s), 1) for s in FIBER_PARAMS]
    rows, ok, worst = [], True, 0.0
    for tgt, want in targets:
        t0 = time.perf_counter()
        rep = fiber_count(pmap, tgt)
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        good = rep.certified and rep.count == want
        ok &= good
        rows.append({"target": [_fmt(v) for v in tgt], "count": rep.count, "expected": want,
                     "certified": rep.certified})
    res = CheckResult("4-fibers", "no preimage at (0,0) and (-1,-163/4); one at s = 2, 1/2, -2",
                      ok, {"targets": rows})
    res.worst_point_seconds = worst
    return res


@_timed
def check_probe(pmap=None) -> CheckResult:
    pmap = pmap or build_map()
    c = pinchuk_curve()
    rows, ok = [], True
    for s in PROBE_CURVE_PARAMS:
        tgt = curve_eval(c, s)
        lx = leading_coeff_probe(pmap, tgt, "x")
        ly = leading_coeff_probe(pmap, tgt, "y")
        vanish = lx == 0 or ly == 0
        ok &= vanish
        rows.append({"s": _fmt(s), "target": [_fmt(v) for v in tgt], "lc_x": _fmt(lx),
                     "lc_y": _fmt(ly), "vanishes": vanish})
    for tgt in PROBE_OFF_CURVE:
        lx = leading_coeff_probe(pmap, tgt, "x")
        ok &= lx != 0
        rows.append({"target": [_fmt(v) for v in tgt], "lc_x": _fmt(lx), "vanishes": lx == 0})
    return CheckResult("5-probe", "leading coefficient vanishes on the curve, not off it",
                       ok, {"rows": rows}, limit=900.0)


@_timed
def check_tracer(samples: int = 20000) -> CheckResult:
    c = pinchuk_curve()
    cloud = trace_asymptotic(numeric_map, PINCHUK_RADII, samples_per_radius=samples)
    reps = cloud.final_clusters()
    dists = [curve_distance(p, c) for p in reps]
    worst = max(dists) if dists else float("inf")
    try:
        ex = trace_asymptotic(axis_line_map, AXIS_RADII, samples_per_radius=900, dim=3,
                              max_channels=8)
        off = max(max(abs(p[0]), abs(p[1])) for p in ex.points)
        n_ex = len(ex.points)
    except EmptyCloud:
        off, n_ex = float("inf"), 0
    ok = bool(reps) and worst <= 1e-2 and n_ex > 0 and off <= 1e-6
    res = CheckResult(
        "6-tracer", "clusters within 1e-2 of the curve at R = 1e3; 3-d example on alpha = beta = 0",
        ok, {"pinchuk_clusters": len(reps), "max_scaled_distance": round(worst, 12),
             "example_points": n_ex, "example_max_offset": off})
    res.cloud = cloud
    return res


@_timed
def check_ih_calibration() -> CheckResult:
    rows, ok = {}, True
    oracles = models.oracle_models()
    for name, K in oracles.items():
        for sub in (False, True):
            L = ihom.barycentric_subdivide(K) if sub else K
            for mode in (ihom.COMPACT, ihom.CLOSED):
                ordinary = ihom.ordinary_betti(L, mode)
                for p in ihom.all_perversities(L.dim):
                    b = ihom.ih_betti(L, p, mode).betti
                    rows[f"{name}{'/sd' if sub else ''}/{mode}/{p}"] = b
                    if name == "pinched_torus":
                        ok &= b == [1, 0, 1] and ordinary == [1, 1, 1]
                    elif name == "interval_line":
                        ok &= b == ([1, 0] if mode == ihom.COMPACT else [0, 1])
                    else:
                        ok &= b == ordinary
    return CheckResult("7-ih-calibration",
                       "IH = ordinary on manifolds; pinched torus (1,0,1); line (1,0)/(0,1)",
                       ok, {"betti": rows}, limit=60.0)


@_timed
def check_glued_model() -> CheckResult:
    K = models.pinchuk_model()
    S = ihom.barycentric_subdivide(K)
    p = ihom.zero_perversity(2)
    vals = {}
    for tag, L in (("model", K), ("subdivided", S)):
        for mode in (ihom.COMPACT, ihom.CLOSED):
            vals[f"{tag}/{mode}"] = ihom.ih_betti(L, p, mode).betti
    ok = all(b[1] == 0 for b in vals.values())
    return CheckResult("8-glued-model", "IH_1 of the glued model vanishes for both supports",
                       ok, {"betti": vals}, limit=120.0)


CHECKS = (check_jacobian, check_degrees, check_curve, check_fibers, check_probe,
          check_tracer, check_ih_calibration, check_glued_model)
