"""Deterministic SVG figures (matplotlib, Agg backend)."""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .pinchuk import curve_eval_float  # noqa: E402
from .properness import scaled  # noqa: E402

_RC = {"svg.hashsalt": "pinchuk-geometry", "svg.fonttype": "none", "path.simplify": False}


def _save(fig, path=None) -> str:
    buf = io.StringIO()
    with matplotlib.rc_context(_RC):
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def curve_figure(curve, s_range=(-2.2, 2.2), n=801, path=None, anchors=()) -> str:
    """The asymptotic curve in (alpha, beta / (1 + |beta|)) coordinates."""
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        s = np.linspace(*s_range, n)
        p, q = curve_eval_float(curve, s)
        ax.plot(p, q / (1 + np.abs(q)), lw=1.2, color="tab:blue", label="curve")
        for a, b in anchors:
            ax.plot([float(a)], [scaled(float(b))], "o", color="tab:red", ms=4)
        ax.set_xlabel("alpha")
        ax.set_ylabel("beta / (1 + |beta|)")
        ax.set_title("asymptotic curve")
        ax.legend(loc="best")
        return _save(fig, path)


def trace_figure(curve, cloud, path=None) -> str:
    """Final-radius cloud and cluster points over the curve (scaled)."""
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        pts = np.array(cloud.points, dtype=float)
        lo = float(min(-1.5, pts[:, 0].min())) if len(pts) else -1.5
        hi = float(max(2.0, pts[:, 0].max())) if len(pts) else 2.0
        smax = float(np.sqrt(max(hi, 0.0) + 1.0)) + 0.1
        s = np.linspace(-smax, smax, 1201)
        p, q = curve_eval_float(curve, s)
        keep = (p >= lo - 0.5) & (p <= hi + 0.5)
        ax.plot(p[keep], (q / (1 + np.abs(q)))[keep], lw=1.0, color="tab:blue", label="curve")
        if len(pts):
            ax.plot(pts[:, 0], pts[:, 1] / (1 + np.abs(pts[:, 1])), ".", ms=2,
                    color="tab:gray", label="bounded images")
        reps = np.array(cloud.final_clusters(), dtype=float)
        if len(reps):
            ax.plot(reps[:, 0], reps[:, 1] / (1 + np.abs(reps[:, 1])), "x", ms=4,
                    color="tab:red", label="clusters")
        ax.set_xlabel("alpha")
        ax.set_ylabel("beta / (1 + |beta|)")
        ax.set_title(f"bounded images at R = {cloud.radius_schedule[-1]:g}")
        ax.legend(loc="best")
        return _save(fig, path)


def gluing_figure(spec, path=None) -> str:
    """Patch adjacency graph: patches as nodes, arcs as labelled edges."""
    names = sorted(spec.patches)
    angle = {n: 2 * np.pi * k / len(names) for k, n in enumerate(names)}
    xy = {n: (np.cos(a), np.sin(a)) for n, a in angle.items()}
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        for g in spec.gluings:
            arc, a, b = g[0], g[1], g[2]
            (x0, y0), (x1, y1) = xy[a], xy[b]
            ax.plot([x0, x1], [y0, y1], color="tab:blue", lw=1.5)
            ax.text((x0 + x1) / 2, (y0 + y1) / 2, arc, color="tab:blue", ha="center",
                    va="bottom", fontsize=9)
        for n, (x, y) in xy.items():
            ax.plot([x], [y], "o", ms=22, color="white", mec="black")
            ax.text(x, y, f"F({n})", ha="center", va="center", fontsize=8)
        ax.set_xlim(-1.5, 1.5)
        ax.set_ylim(-1.5, 1.5)
        ax.set_aspect("equal")
        ax.axis("off")
        ax.set_title("patch gluing")
        return _save(fig, path)
