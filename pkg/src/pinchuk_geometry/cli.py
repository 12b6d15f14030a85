"""Command-line front end: ``pinchuk-geometry <command> ...``.

Exit codes: 0 success, 1 computation error, 2 usage error.  Rationals are
written as "num/den" strings; JSON goes to stdout unless a path is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__, ihom, models
from .errors import EmptyCloud, GeometryError
from .exact import as_rat, rat_str


class UsageError(Exception):
    pass


def _rat(text: str) -> Fraction:
    try:
        return as_rat(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _enc(v):
    return rat_str(Fraction(v)) if isinstance(v, (int, Fraction)) else v


# commands ---------------------------------------------------------------------------

def cmd_verify_jacobian(args):
    from .pinchuk import build_map, sample_jacobian, verify_jacobian_identity

    pmap = build_map()
    chk = verify_jacobian_identity(pmap)
    vals = sample_jacobian(pmap, args.samples, args.seed)
    _emit({
        "holds": chk.holds,
        "reading": chk.reading,
        "residual": str(chk.residual),
        "residual_terms": {k: v.num_terms() for k, v in chk.residuals.items()},
        "degrees": pmap.degrees(),
        "jac_at_1_1": _enc(pmap.jac.evaluate({"x": 1, "y": 1})),
        "samples": args.samples,
        "seed": args.seed,
        "all_positive": all(v > 0 for _, v in vals),
        "min_sample": _enc(min((v for _, v in vals), default=0)),
    }, args.out)
    return 0 if chk.holds else 1


def cmd_eval(args):
    from .pinchuk import build_map, curve_eval, pinchuk_curve

    if args.s is not None:
        if args.x is not None or args.y is not None:
            raise UsageError("give either --s or --x/--y")
        p, q = curve_eval(pinchuk_curve(), args.s)
        _emit({"s": _enc(args.s), "p": _enc(p), "q": _enc(q)}, args.out)
        return 0
    if args.x is None or args.y is None:
        raise UsageError("eval needs --s, or both --x and --y")
    pmap = build_map()
    P, Q = pmap(args.x, args.y)
    _emit({"x": _enc(args.x), "y": _enc(args.y), "P": _enc(P), "Q": _enc(Q),
           "jac": _enc(pmap.jac.evaluate({"x": args.x, "y": args.y}))}, args.out)
    return 0


def curve_rows(samples: int, lo: Fraction, hi: Fraction):
    from .pinchuk import curve_eval, pinchuk_curve

    c = pinchuk_curve()
    ss = {Fraction(0), Fraction(1), Fraction(-1)}
    if samples == 1:
        ss.add(lo)
    elif samples > 1:
        step = (hi - lo) / (samples - 1)
        ss.update(lo + k * step for k in range(samples))
    return [(s, *curve_eval(c, s)) for s in sorted(ss)]


def _curve_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "p", "q"])
    for row in rows:
        w.writerow([rat_str(v) for v in row])
    return buf.getvalue()


def cmd_curve(args):
    from .pinchuk import curve_checks, pinchuk_curve

    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    if args.hi <= args.lo:
        raise UsageError("--hi must exceed --lo")
    rows = curve_rows(args.samples, args.lo, args.hi)
    text = _curve_csv(rows)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        from .plotting import curve_figure

        anchors = [(p, q) for s, p, q in rows if s in (0, 1, -1)]
        curve_figure(pinchuk_curve(), (float(args.lo), float(args.hi)), path=args.svg,
                     anchors=anchors)
    if args.checks:
        _emit(curve_checks(pinchuk_curve()).to_json(), args.checks)
    return 0


def cmd_fiber(args):
    from .pinchuk import build_map
    from .properness import fiber_count

    order = ("x", "y") if args.order == "xy" else ("y", "x")
    rep = fiber_count(build_map(), (args.a, args.b), order)
    _emit(rep.to_json(), args.out)
    return 0 if rep.certified else 1


def _probe_target(args):
    from .pinchuk import curve_eval, pinchuk_curve

    if args.s is not None:
        if args.a is not None or args.b is not None:
            raise UsageError("give either --s or --a/--b")
        return curve_eval(pinchuk_curve(), args.s)
    if args.a is None or args.b is None:
        raise UsageError("probe needs --s, or both --a and --b")
    return args.a, args.b


def cmd_probe(args):
    from .pinchuk import build_map
    from .properness import leading_coeff_probe

    target = _probe_target(args)
    pmap = build_map()
    dirs = ("x", "y") if args.direction == "both" else (args.direction,)
    out = {"target": [_enc(v) for v in target]}
    if args.s is not None:
        out["s"] = _enc(args.s)
    lcs = {}
    for d in dirs:
        lcs[d] = leading_coeff_probe(pmap, target, d)
        out[f"lc_{d}"] = _enc(lcs[d])
    out["vanishes"] = any(v == 0 for v in lcs.values())
    _emit(out, args.out)
    return 0


_TRACE_MAPS = {"pinchuk": 2, "axis-line": 3, "identity": 2}


def cmd_trace(args):
    from .pinchuk import numeric_map, pinchuk_curve
    from .properness import (curve_distance, axis_line_map, identity_map,
                             trace_asymptotic)

    fmap = {"pinchuk": numeric_map, "axis-line": axis_line_map,
            "identity": identity_map}[args.map]
    dim = _TRACE_MAPS[args.map]
    radii = args.radii or ([1e2, 1e6, 1e10, 1e14, 1e18] if args.map == "axis-line"
                           else [10.0, 100.0, 1000.0])
    samples = args.samples or (900 if dim == 3 else 20000)
    try:
        cloud = trace_asymptotic(fmap, radii, samples_per_radius=samples, bound=args.bound,
                                 dim=dim, cluster_radius=args.cluster_radius,
                                 max_channels=8 if dim == 3 else 40)
    except EmptyCloud as exc:
        _emit({"map": args.map, "empty": True, "message": str(exc),
               "radius_schedule": radii, "bound": args.bound}, args.out)
        return 0
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    summary = {"map": args.map, "empty": False, **cloud.to_json()}
    summary.pop("points")
    summary["n_points"] = len(cloud.points)
    if args.map == "pinchuk":
        c = pinchuk_curve()
        summary["max_scaled_distance"] = {
            repr(R): max((curve_distance(p, c) for p in reps), default=None)
            for R, reps in cloud.clusters.items()}
    _emit(summary, args.out)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"F{k + 1}" for k in range(len(cloud.points[0]))])
            for p in cloud.points:
                w.writerow([repr(float(v)) for v in p])
    if args.svg and args.map == "pinchuk":
        from .plotting import trace_figure

        trace_figure(pinchuk_curve(), cloud, args.svg)
    return 0


def _load_model(name: str):
    if os.path.exists(name):
        with open(name, encoding="utf-8") as fh:
            return ihom.from_json(json.load(fh))
    try:
        return models.get_model(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def cmd_ih(args):
    K = _load_model(args.model)
    for _ in range(args.subdivide):
        K = ihom.barycentric_subdivide(K)
    try:
        pbar = ihom.parse_perversity(args.perversity, K.dim)
        mode = ihom.support_mode(args.support)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = ihom.ih_betti(K, pbar, mode)
    out = res.to_json()
    out["model"] = args.model
    out["ordinary_betti"] = ihom.ordinary_betti(K, mode)
    out["subdivisions"] = args.subdivide
    out["flagged_vertices"] = [K.vertices[v] for v in K.diagnostics.get("flagged_vertices", [])]
    _emit(out, args.out)
    return 0


def cmd_models(args):
    if args.action == "list":
        _emit({"models": models.model_names()}, None)
        return 0
    if not args.name:
        raise UsageError("models export needs a model name")
    K = _load_model(args.name)
    text = ihom.dumps(K) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        if args.name != "pinchuk":
            raise UsageError("the gluing schematic exists only for the pinchuk model")
        from .plotting import gluing_figure

        gluing_figure(models.pinchuk_spec(), args.svg)
    return 0


def cmd_report(args):
    from . import acceptance
    from .pinchuk import pinchuk_curve
    from .plotting import curve_figure, gluing_figure, trace_figure

    os.makedirs(args.out_dir, exist_ok=True)
    results = []
    checks = list(acceptance.CHECKS)
    for check in checks:
        if check is acceptance.check_jacobian:
            res = check(seed=args.seed)
        else:
            res = check()
        results.append(res)
        print(res.line(), file=sys.stderr)
    table = ["| criterion | claim | result |", "|---|---|---|"]
    for r in results:
        table.append(f"| {r.key} | {r.claim} | {'PASS' if r.passed else 'FAIL'} |")
    table.append("| 9-determinism | identical outputs for identical seeds | checked by the test suite |")
    with open(os.path.join(args.out_dir, "report.md"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(table) + "\n")
    _emit({"seed": args.seed, "version": __version__,
           "criteria": [{"key": r.key, "claim": r.claim, "passed": r.passed, "detail": r.detail}
                        for r in results]},
          os.path.join(args.out_dir, "report.json"))
    rows = curve_rows(args.curve_samples, Fraction(-2), Fraction(2))
    with open(os.path.join(args.out_dir, "curve.csv"), "w", encoding="utf-8") as fh:
        fh.write(_curve_csv(rows))
    c = pinchuk_curve()
    curve_figure(c, (-2.2, 2.2), path=os.path.join(args.out_dir, "curve.svg"),
                 anchors=[(p, q) for s, p, q in rows if s in (0, 1, -1)])
    tracer = next(r for r in results if r.key.startswith("6-"))
    cloud = getattr(tracer, "cloud", None)
    if cloud is not None:
        with open(os.path.join(args.out_dir, "trace.csv"), "w", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["alpha", "beta"])
            for p in cloud.points:
                w.writerow([repr(float(v)) for v in p])
        trace_figure(c, cloud, os.path.join(args.out_dir, "trace.svg"))
    gluing_figure(models.pinchuk_spec(), os.path.join(args.out_dir, "gluing.svg"))
    sys.stdout.write("\n".join(table) + "\n")
    return 0 if all(r.passed for r in results) else 1


# parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pinchuk-geometry",
                                 description="Exact and numeric checks for the Pinchuk map.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-jacobian", help="symbolic Jacobian identity and positivity")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_jacobian)

    p = sub.add_parser("eval", help="exact map or curve evaluation")
    p.add_argument("--x", type=_rat)
    p.add_argument("--y", type=_rat)
    p.add_argument("--s", type=_rat)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("curve", help="CSV samples of the asymptotic curve")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--lo", type=_rat, default=Fraction(-2))
    p.add_argument("--hi", type=_rat, default=Fraction(2))
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--checks", help="write the injectivity/singularity report here")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("fiber", help="certified count of real preimages of (a, b)")
    p.add_argument("--a", type=_rat, required=True)
    p.add_argument("--b", type=_rat, required=True)
    p.add_argument("--order", choices=("xy", "yx"), default="xy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("probe", help="leading coefficient of the fiber eliminant")
    p.add_argument("--s", type=_rat)
    p.add_argument("--a", type=_rat)
    p.add_argument("--b", type=_rat)
    p.add_argument("--direction", choices=("x", "y", "both"), default="both")
    p.add_argument("--out")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("trace", help="numeric scan for bounded images at large radii")
    p.add_argument("--map", choices=sorted(_TRACE_MAPS), default="pinchuk")
    p.add_argument("--radii", type=_positive_float, nargs="+")
    p.add_argument("--bound", type=_positive_float, default=1e4)
    p.add_argument("--samples", type=int)
    p.add_argument("--cluster-radius", type=_positive_float, default=1e-2)
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--out")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("ih", help="intersection homology Betti numbers")
    p.add_argument("--model", required=True, help="bundled model name or JSON file")
    p.add_argument("--perversity", default="zero")
    p.add_argument("--support", choices=("c", "cl", "compact", "closed"), default="c")
    p.add_argument("--subdivide", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ih)

    p = sub.add_parser("models", help="list or export bundled complexes")
    p.add_argument("action", choices=("list", "export"))
    p.add_argument("name", nargs="?")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("report", help="run every acceptance check and write artifacts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="report")
    p.add_argument("--curve-samples", type=int, default=201)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
