"""Combinatorial models: the glued Pinchuk surface, the parabola line and
small calibration spaces for the IH engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidGluing, NonMatchingArcLengths
from .ihom import FilteredComplex, build_complex


# patches and gluing specs ------------------------------------------------------------

@dataclass
class Patch:
    """A triangulated disk with named boundary paths (lists of local vertices)."""

    name: str
    triangles: list
    sides: dict


def grid_patch(name: str, nx: int = 5, ny: int = 5) -> Patch:
    """An nx-by-ny vertex grid, each square split along its rising diagonal.

    Sides run bottom/top left to right and left/right bottom to top.
    """
    if nx < 2 or ny < 2:
        raise ValueError("a grid patch needs at least 2x2 vertices")
    tris = []
    for i in range(nx - 1):
        for j in range(ny - 1):
            a, b, c, d = (i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)
            tris += [(a, b, c), (a, c, d)]
    sides = {
        "bottom": [(i, 0) for i in range(nx)],
        "top": [(i, ny - 1) for i in range(nx)],
        "left": [(0, j) for j in range(ny)],
        "right": [(nx - 1, j) for j in range(ny)],
    }
    return Patch(name, tris, sides)


@dataclass
class Arc:
    name: str
    start: str      # endpoint vertex names
    end: str


@dataclass
class GluingSpec:
    patches: dict                                  # name -> Patch
    arcs: dict                                     # name -> Arc
    gluings: list                                  # (arc, patch, patch[, ...])
    sides: dict                                    # (arc, patch) -> side name in that patch
    singular_vertices: list = field(default_factory=list)
    ideal_segments: list = field(default_factory=list)   # (patch, side) pairs
    metadata: dict = field(default_factory=dict)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if ra[0] == "pt" and rb[0] == "pt":
            raise InvalidGluing(f"gluing identifies the distinct points {ra[1]!r} and {rb[1]!r}")
        # named points stay representatives so their labels survive
        rank = (lambda r: (r[0] != "pt", r[0] != "arc", repr(r)))
        lo, hi = sorted((ra, rb), key=rank)
        self.parent[hi] = lo


def gluing_build(spec: GluingSpec) -> FilteredComplex:
    """Quotient of the patches by the arc identifications.

    Each arc is glued to exactly two patches along boundary paths of equal
    length, vertex by vertex; the first and last arc vertices become the
    arc's named endpoints.  V_0 is the set of singular vertices and the
    ideal boundary is the union of the ideal segments.
    """
    uf = _UnionFind()
    glued = {}
    for g in spec.gluings:
        arc, patches = g[0], list(g[1:])
        if arc not in spec.arcs:
            raise InvalidGluing(f"unknown arc {arc!r}")
        glued.setdefault(arc, []).extend(patches)
    for arc, patches in glued.items():
        if len(patches) != 2 or patches[0] == patches[1]:
            raise InvalidGluing(f"arc {arc!r} is glued to {len(patches)} patch sides; "
                                "a pseudomanifold needs exactly two distinct patches")
    for arc in spec.arcs:
        if arc not in glued:
            raise InvalidGluing(f"arc {arc!r} is not glued")

    arc_vertices = {}
    for arc, patches in sorted(glued.items()):
        paths = []
        for p in patches:
            if p not in spec.patches:
                raise InvalidGluing(f"unknown patch {p!r}")
            side = spec.sides.get((arc, p))
            if side is None or side not in spec.patches[p].sides:
                raise InvalidGluing(f"patch {p!r} has no side assigned to arc {arc!r}")
            paths.append([(p, v) for v in spec.patches[p].sides[side]])
        if len(paths[0]) != len(paths[1]):
            raise NonMatchingArcLengths(
                f"arc {arc!r}: {patches[0]} gives {len(paths[0])} vertices, "
                f"{patches[1]} gives {len(paths[1])}")
        a = spec.arcs[arc]
        names = [("arc", arc, k) for k in range(len(paths[0]))]
        names[0], names[-1] = ("pt", a.start), ("pt", a.end)
        for k, nm in enumerate(names):
            uf.union(paths[0][k], nm)
            uf.union(paths[1][k], nm)
        arc_vertices[arc] = names

    # canonical labels: named points keep their name, others get an index
    label = {}
    order = []

    def lab(key):
        root = uf.find(key)
        if root not in label:
            if root[0] == "pt":
                label[root] = root[1]
            else:
                label[root] = f"v{len(order)}"
            order.append(label[root])
        return label[root]

    triangles = []
    patch_of = {}
    for pname in sorted(spec.patches):
        patch = spec.patches[pname]
        for tri in patch.triangles:
            t = tuple(lab((pname, v)) for v in tri)
            if len(set(t)) != 3:
                raise InvalidGluing(f"gluing collapses a triangle of patch {pname!r}")
            key = tuple(sorted(t))
            if key in patch_of:
                raise InvalidGluing(f"gluing makes two triangles coincide ({key})")
            patch_of[key] = pname
            triangles.append(t)

    ideal = []
    for pname, side in spec.ideal_segments:
        path = spec.patches[pname].sides[side]
        for u, v in zip(path, path[1:]):
            ideal.append((lab((pname, u)), lab((pname, v))))
    for name in spec.singular_vertices:
        if label.get(uf.find(("pt", name))) != name:
            raise InvalidGluing(f"singular vertex {name!r} is not an arc endpoint")
    filtration = {0: [(name,) for name in spec.singular_vertices]}
    arcs_meta = {arc: [label[uf.find(nm)] for nm in names] for arc, names in arc_vertices.items()}
    meta = dict(spec.metadata)
    meta["arcs"] = arcs_meta
    meta["patch_of_triangle"] = {"|".join(k): v for k, v in sorted(patch_of.items())}
    names = {name: name for name in sorted({a.start for a in spec.arcs.values()}
                                           | {a.end for a in spec.arcs.values()})}
    return build_complex(triangles, filtration, ideal, vertices=tuple(order), names=names,
                         metadata=meta)


def _free_sides(patch: Patch, used: set):
    return [s for s in ("bottom", "right", "top", "left") if s not in used]


def pinchuk_spec(n: int = 5) -> GluingSpec:
    """Four grid patches glued along C1 (free end to L), C2 (L to O), C3 (O to free end).

    C1 joins F(A2) and F(B1), C2 joins F(A2) and F(B2), C3 joins F(A1) and
    F(B1).  F(B1) carries C1 on its bottom side and C3 on its top side.
    Every side not carrying an arc is an ideal segment.
    """
    patches = {p: grid_patch(p, n, n) for p in ("A1", "A2", "B1", "B2")}
    arcs = {
        "C1": Arc("C1", "free1", "L"),
        "C2": Arc("C2", "L", "O"),
        "C3": Arc("C3", "O", "free3"),
    }
    sides = {
        ("C1", "A2"): "bottom", ("C2", "A2"): "right",
        ("C1", "B1"): "bottom", ("C3", "B1"): "top",
        ("C2", "B2"): "left",
        ("C3", "A1"): "bottom",
    }
    gluings = [("C1", "A2", "B1"), ("C2", "A2", "B2"), ("C3", "A1", "B1")]
    used = {}
    for (arc, p), side in sides.items():
        used.setdefault(p, set()).add(side)
    ideal = [(p, s) for p in sorted(patches) for s in _free_sides(patches[p], used.get(p, set()))]
    return GluingSpec(
        patches=patches, arcs=arcs, gluings=gluings, sides=sides,
        singular_vertices=["L", "O"], ideal_segments=ideal,
        metadata={"model": "pinchuk", "regions": ["A1", "A2", "B1", "B2"],
                  "embedding_dimension": 6},
    )


def pinchuk_model(n: int = 5) -> FilteredComplex:
    return gluing_build(pinchuk_spec(n))


def patch_adjacency(spec: GluingSpec) -> list:
    """(arc, patch, patch) edges of the patch adjacency graph."""
    return [tuple(g) for g in spec.gluings]


# the parabola --------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingSample:
    x: float
    image: tuple


def valette_embed(x) -> EmbeddingSample:
    """(x^2, x/(1+x^2), -x/(1+x^2)); exact for int/Fraction input."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
    psi = x / (1 + x * x)
    return EmbeddingSample(x, (x * x, psi, -psi))


def parabola_model(n: int = 6) -> FilteredComplex:
    """A segment of n vertices with both ends ideal: the line R, truncated."""
    if n < 2:
        raise ValueError("need at least two vertices")
    verts = [f"p{k}" for k in range(n)]
    return build_complex(list(zip(verts, verts[1:])), {}, [(verts[0],), (verts[-1],)],
                         vertices=tuple(verts), metadata={"model": "parabola"})


# calibration spaces ---------------------------------------------------------------------

def circle() -> FilteredComplex:
    return build_complex([(0, 1), (1, 2), (0, 2)], metadata={"model": "circle"})


def sphere() -> FilteredComplex:
    tet = (0, 1, 2, 3)
    return build_complex([tuple(v for v in tet if v != k) for k in tet],
                         metadata={"model": "sphere"})


def _torus_triangles(n: int, m: int):
    tris = []
    for i in range(n):
        for j in range(m):
            a = i * m + j
            b = ((i + 1) % n) * m + j
            c = ((i + 1) % n) * m + (j + 1) % m
            d = i * m + (j + 1) % m
            tris += [(a, b, c), (a, c, d)]
    return tris


def torus(n: int = 3) -> FilteredComplex:
    return build_complex(_torus_triangles(n, n), metadata={"model": "torus"})


def pinched_torus(rows: int = 3, ring: int = 3) -> FilteredComplex:
    """A cylinder with both boundary circles coned to one vertex v = 0.

    The result is a torus with a meridian collapsed to a point; V_0 = {v}.
    """
    tris = []

    def vid(i, j):
        return 1 + i * ring + (j % ring)

    for i in range(rows - 1):
        for j in range(ring):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            tris += [(a, b, c), (a, c, d)]
    for j in range(ring):
        tris.append((0, vid(0, j), vid(0, j + 1)))
        tris.append((0, vid(rows - 1, j), vid(rows - 1, j + 1)))
    return build_complex(tris, {0: [(0,)]}, names={"pinch": 0},
                         metadata={"model": "pinched_torus"})


def interval_line(n: int = 4) -> FilteredComplex:
    verts = list(range(n))
    return build_complex(list(zip(verts, verts[1:])), {}, [(0,), (n - 1,)],
                         metadata={"model": "interval_line"})


def oracle_models() -> dict:
    return {
        "circle": circle(),
        "sphere": sphere(),
        "torus": torus(),
        "pinched_torus": pinched_torus(),
        "interval_line": interval_line(),
    }


MODEL_BUILDERS = {
    "pinchuk": pinchuk_model,
    "parabola": parabola_model,
    "circle": circle,
    "sphere": sphere,
    "torus": torus,
    "pinched_torus": pinched_torus,
    "interval_line": interval_line,
}


def model_names() -> list:
    return sorted(MODEL_BUILDERS)


def get_model(name: str) -> FilteredComplex:
    try:
        return MODEL_BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown model {name!r}; known: {', '.join(model_names())}") from None


__all__ = [
    "Patch",
    "Arc",
    "GluingSpec",
    "EmbeddingSample",
    "grid_patch",
    "gluing_build",
    "pinchuk_spec",
    "pinchuk_model",
    "patch_adjacency",
    "valette_embed",
    "parabola_model",
    "circle",
    "sphere",
    "torus",
    "pinched_torus",
    "interval_line",
    "oracle_models",
    "model_names",
    "get_model",
]
