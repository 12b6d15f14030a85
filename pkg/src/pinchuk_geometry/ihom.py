"""Intersection homology of filtered simplicial complexes over Q.

A complex carries a filtration V_0 ⊆ V_1 ⊆ ... ⊆ V_m = K by closed
subcomplexes and an optional ideal boundary.  Compact supports use absolute
chains; closed supports use chains relative to the ideal boundary, the
finite stand-in for locally finite chains on the non-compact space.

Ranks are exact (sparse elimination over Fraction), so every Betti number is
a rank over Q.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .errors import (
    DanglingSimplex,
    DimensionViolation,
    FiltrationNotClosed,
    InvalidPerversity,
)
from .exact.linalg import nullspace_sparse, rank_sparse, solve_sparse

COMPACT = "compact"
CLOSED = "closed"
_SUPPORT_ALIASES = {"c": COMPACT, "compact": COMPACT, "cl": CLOSED, "closed": CLOSED,
                    "bm": CLOSED}

NEG_INF = float("-inf")


def support_mode(name: str) -> str:
    try:
        return _SUPPORT_ALIASES[name]
    except KeyError:
        raise ValueError(f"unknown support mode {name!r} (use c or cl)") from None


# perversities -------------------------------------------------------------------

@dataclass(frozen=True)
class Perversity:
    entries: tuple

    @property
    def m(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, r):
        return self.entries[r]

    def __str__(self):
        return "(" + ",".join(map(str, self.entries)) + ")"


def validate_perversity(entries) -> Perversity:
    """Check p_0 = p_1 = p_2 = 0 and p_{r+1} - p_r in {0, 1} for r >= 2."""
    entries = tuple(entries)
    if not entries:
        raise InvalidPerversity("a perversity needs at least one entry", 0)
    for k, v in enumerate(entries):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise InvalidPerversity(f"entry {k} must be a nonnegative integer", k)
    for k in range(min(3, len(entries))):
        if entries[k] != 0:
            raise InvalidPerversity(f"p_{k} must be 0", k)
    for r in range(2, len(entries) - 1):
        if entries[r + 1] - entries[r] not in (0, 1):
            raise InvalidPerversity(f"p_{r + 1} - p_{r} must be 0 or 1", r + 1)
    return Perversity(entries)


def zero_perversity(m: int) -> Perversity:
    return Perversity((0,) * (m + 1))


def all_perversities(m: int) -> list:
    """Every valid perversity of length m + 1, in lexicographic order."""
    out = [(0,) * min(m + 1, 3)]
    for _ in range(3, m + 1):
        out = [p + (p[-1] + d,) for p in out for d in (0, 1)]
    return [Perversity(p) for p in sorted(out)]


def parse_perversity(text: str, m: int) -> Perversity:
    if text in ("zero", "0"):
        return zero_perversity(m)
    if text == "top":
        return Perversity((0, 0) + tuple(max(0, r - 2) for r in range(2, m + 1))) if m >= 1 \
            else zero_perversity(m)
    return validate_perversity(int(v) for v in text.replace("(", "").replace(")", "").split(","))


# complexes ------------------------------------------------------------------------

def faces(simplex):
    """All nonempty faces of a simplex (itself included)."""
    for k in range(1, len(simplex) + 1):
        yield from combinations(simplex, k)


def boundary(simplex):
    """(sign, face) pairs of the simplicial boundary of a sorted simplex."""
    if len(simplex) == 1:
        return []
    return [((-1) ** k, simplex[:k] + simplex[k + 1:]) for k in range(len(simplex))]


@dataclass(eq=False)
class FilteredComplex:
    vertices: tuple                 # vertex labels; simplices use indices into this
    simplices: dict                 # dim -> sorted list of simplices
    dim: int
    depth: dict                     # simplex -> least i with simplex in V_i
    ideal: frozenset
    names: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {d: {s: k for k, s in enumerate(ss)} for d, ss in self.simplices.items()}

    def all_simplices(self):
        for d in range(self.dim + 1):
            yield from self.simplices.get(d, [])

    def count(self, d) -> int:
        return len(self.simplices.get(d, []))

    def stratum(self, i) -> list:
        """Simplices of V_i."""
        return [s for s in self.all_simplices() if self.depth[s] <= i]

    def filtration_sets(self) -> dict:
        return {i: self.stratum(i) for i in range(self.dim + 1)}

    def vertex(self, label):
        return self.vertices.index(label)

    def simplex(self, *labels):
        return tuple(sorted(self.vertex(v) for v in labels))

    def star(self, v) -> list:
        return [s for s in self.all_simplices() if v in s]

    def link(self, v) -> list:
        return [tuple(u for u in s if u != v) for s in self.star(v) if len(s) > 1]

    def singular_vertices(self) -> list:
        return [s[0] for s in self.simplices.get(0, []) if self.depth[s] < self.dim]


def _close(simplices):
    out = set()
    for s in simplices:
        s = tuple(sorted(s))
        if len(set(s)) != len(s):
            raise ValueError(f"repeated vertex in simplex {s}")
        out.update(faces(s))
    return out


def build_complex(simplices, filtration=None, ideal_boundary=(), vertices=None, names=None,
                  metadata=None, check_diagnostics: bool = True) -> FilteredComplex:
    """Validate and assemble a filtered complex.

    ``simplices`` are vertex tuples (labels), closed under faces here.
    ``filtration`` maps i to the simplices of V_i; V_i is the union of the
    given sets for all j <= i and must already be a closed subcomplex of
    dimension <= i.  Indices not mentioned inherit from below, and V_m is
    the whole complex.
    """
    simplices = [tuple(s) for s in simplices]
    if vertices is None:
        vertices = sorted({v for s in simplices for v in s}, key=_label_key)
    vertices = tuple(vertices)
    pos = {v: k for k, v in enumerate(vertices)}

    def conv(s):
        try:
            return tuple(sorted(pos[v] for v in s))
        except KeyError as exc:
            raise FiltrationNotClosed(f"simplex {s} uses an unknown vertex {exc}") from None

    K = _close(conv(s) for s in simplices)
    if not K:
        raise ValueError("empty complex")
    m = max(len(s) for s in K) - 1

    depth = {s: m for s in K}
    filtration = dict(filtration or {})
    given = {}
    for i, ss in filtration.items():
        i = int(i)
        if i < 0:
            raise DimensionViolation(f"filtration index {i} is negative")
        given[i] = {conv(s) for s in ss}
    acc = set()
    for i in range(m):
        acc |= given.get(i, set())
        missing = [s for s in acc if s not in K]
        if missing:
            raise FiltrationNotClosed(f"V_{i} contains {missing[0]}, which is not in the complex")
        top = max((len(s) - 1 for s in acc), default=-1)
        if top > i:
            raise DimensionViolation(f"V_{i} has dimension {top} > {i}")
        for s in acc:
            for f in faces(s):
                if f not in acc:
                    raise FiltrationNotClosed(f"V_{i} contains {s} but not its face {f}")
        for s in acc:
            depth[s] = min(depth[s], i)
    for i in given:
        if i >= m:
            bad = [s for s in given[i] if s not in K]
            if bad:
                raise FiltrationNotClosed(f"V_{i} contains {bad[0]}, which is not in the complex")

    # density: every simplex is a face of an m-simplex
    covered = set()
    for s in K:
        if len(s) == m + 1:
            covered.update(faces(s))
    dangling = sorted(s for s in K if s not in covered)
    if dangling:
        raise DanglingSimplex(f"simplex {dangling[0]} is not a face of any {m}-simplex")

    ideal_in = [conv(s) for s in ideal_boundary]
    ideal = _close(ideal_in)
    bad = [s for s in ideal if s not in K]
    if bad:
        raise FiltrationNotClosed(f"ideal boundary simplex {bad[0]} is not in the complex")

    by_dim = {}
    for s in K:
        by_dim.setdefault(len(s) - 1, []).append(s)
    for d in by_dim:
        by_dim[d].sort()
    names = {k: pos[v] if v in pos else v for k, v in (names or {}).items()}
    cx = FilteredComplex(vertices, by_dim, m, depth, frozenset(ideal), names, dict(metadata or {}))
    if check_diagnostics:
        cx.diagnostics = diagnose(cx)
        if cx.diagnostics["unpaired_faces"]:
            warnings.warn(
                f"{len(cx.diagnostics['unpaired_faces'])} codimension-one faces outside the "
                "ideal boundary are not shared by exactly two top simplices",
                stacklevel=2)
    return cx


def _label_key(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


# diagnostics ------------------------------------------------------------------------

def stratum_dimensions(K: FilteredComplex) -> list:
    """Dimensions i with V_i strictly larger than V_{i-1}."""
    return sorted({K.depth[s] for s in K.all_simplices()})


def _is_sphere_like(link, d) -> bool:
    """Does a link complex have the rational homology of S^d?"""
    if not link:
        return False
    cx = {}
    closed = _close(link)
    for s in closed:
        cx.setdefault(len(s) - 1, []).append(s)
    for k in cx:
        cx[k].sort()
    top = max(cx)
    if top != d:
        return False
    betti = _betti_from(cx, top, set())
    want = [1] + [0] * (d - 1) + [1] if d > 0 else [2]
    return betti == want


def diagnose(K: FilteredComplex) -> dict:
    """Warning-level pseudomanifold diagnostics.

    Face pairing counts the (m-1)-simplices outside the ideal boundary that
    are not faces of exactly two m-simplices.  Link analysis flags vertices
    (outside the ideal boundary, or on a singular stratum) whose link is not
    a rational homology (m-1)-sphere; a disconnected or interval-shaped link
    marks a candidate singular point.
    """
    m = K.dim
    cofaces = {}
    for s in K.simplices.get(m, []):
        for _, f in boundary(s):
            cofaces[f] = cofaces.get(f, 0) + 1
    unpaired = [f for f in K.simplices.get(m - 1, []) if f not in K.ideal and cofaces.get(f, 0) != 2] \
        if m >= 1 else []
    flagged = []
    links = {}
    for (v,) in K.simplices.get(0, []):
        if (v,) in K.ideal and K.depth[(v,)] == m:
            continue
        lk = [s for s in K.link(v) if len(s) == m]
        ok = _is_sphere_like(lk, m - 1) if m >= 1 else True
        links[v] = {"components": _components_count(K.link(v)), "sphere": ok}
        if not ok:
            flagged.append(v)
    return {
        "stratum_dimensions": stratum_dimensions(K),
        "unpaired_faces": unpaired,
        "flagged_vertices": flagged,
        "links": links,
    }


def _components_count(simplices) -> int:
    parent = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for s in simplices:
        for v in s:
            find(v)
        for a, b in zip(s, s[1:]):
            parent[find(a)] = find(b)
    return len({find(v) for v in parent})


# allowability --------------------------------------------------------------------

def intersection_dimension(K: FilteredComplex, simplex, level: int) -> float:
    """Largest dimension of a face of ``simplex`` lying in V_level (-inf if none)."""
    best = NEG_INF
    for f in faces(simplex):
        if K.depth[f] <= level and len(f) - 1 > best:
            best = len(f) - 1
    return best


def is_allowable_simplex(K: FilteredComplex, simplex, i: int, pbar: Perversity) -> bool:
    for r in range(1, K.dim + 1):
        d = intersection_dimension(K, simplex, K.dim - r)
        if d > i - r + pbar[r]:
            return False
    return True


def _check_perversity(K, pbar):
    if pbar.m != K.dim:
        raise InvalidPerversity(
            f"perversity has length {len(pbar.entries)} but the complex needs {K.dim + 1}",
            min(len(pbar.entries), K.dim + 1) - 1)


def allowable_basis(K: FilteredComplex, i: int, pbar: Perversity) -> list:
    """The i-simplices whose support meets every V_{m-r} within the bound."""
    _check_perversity(K, pbar)
    return [s for s in K.simplices.get(i, []) if is_allowable_simplex(K, s, i, pbar)]


# chain complexes ------------------------------------------------------------------

def _chain_groups(K, pbar, mode):
    """A_i (ordered lists) and the set of 'live' simplices for the boundary."""
    ideal = K.ideal if mode == CLOSED else frozenset()
    A = {}
    for i in range(K.dim + 1):
        ss = K.simplices.get(i, [])
        if pbar is not None:
            ss = [s for s in ss if is_allowable_simplex(K, s, i, pbar)]
        A[i] = [s for s in ss if s not in ideal]
    return A, ideal


def _boundary_columns(simplices, ideal):
    cols = []
    for s in simplices:
        col = {}
        for sign, f in boundary(s):
            if f not in ideal:
                col[f] = col.get(f, 0) + sign
        cols.append(col)
    return cols


def _betti_from(by_dim, m, ideal, allowed=None):
    """Betti numbers of the complex generated by ``allowed`` (all if None)."""
    betti = []
    A = {i: [s for s in by_dim.get(i, []) if s not in ideal and (allowed is None or s in allowed[i])]
         for i in range(m + 2)}
    rank_full = {}
    rank_bad = {}
    for i in range(m + 2):
        cols = _boundary_columns(A[i], ideal)
        rank_full[i] = rank_sparse(_index_rows(cols)) if cols else 0
        if allowed is None or i == 0:
            rank_bad[i] = 0
        else:
            ok = set(allowed[i - 1])
            bad_cols = [{f: v for f, v in c.items() if f not in ok} for c in cols]
            rank_bad[i] = rank_sparse(_index_rows(bad_cols)) if cols else 0
    for i in range(m + 1):
        betti.append(len(A[i]) - rank_full[i] - rank_full[i + 1] + rank_bad[i + 1])
    return betti


def _index_rows(cols):
    """Sparse columns keyed by simplex -> keyed by a stable row index."""
    rows = {}
    for c in cols:
        for f in c:
            if f not in rows:
                rows[f] = None
    order = {f: k for k, f in enumerate(sorted(rows, key=lambda s: (len(s), s)))}
    return [{order[f]: v for f, v in c.items() if v} for c in cols]


@dataclass
class IHResult:
    perversity: Perversity
    support_mode: str
    betti: list

    def to_json(self) -> dict:
        out = {"perversity": list(self.perversity.entries), "support": self.support_mode,
               "betti": list(self.betti)}
        for i, b in enumerate(self.betti):
            out[f"betti{i}"] = b
        return out


def ih_betti(K: FilteredComplex, pbar: Perversity, mode: str = COMPACT) -> IHResult:
    """Betti numbers of IC^p(K) (absolute or relative to the ideal boundary).

    With A_i the allowable i-chains, IC_i = {c in A_i : dc in A_{i-1}}.  Then
        dim IC_i         = |A_i| - rank N_i,
        dim ker d|IC_i   = |A_i| - rank d|A_i,
    where N_i collects the rows of d|A_i at non-allowable faces, and
        b_i = |A_i| - rank d|A_i - rank d|A_{i+1} + rank N_{i+1}.
    """
    mode = support_mode(mode)
    _check_perversity(K, pbar)
    A, ideal = _chain_groups(K, pbar, mode)
    allowed = {i: set(A[i]) for i in A}
    allowed[K.dim + 1] = set()
    betti = _betti_from(K.simplices, K.dim, ideal, allowed)
    return IHResult(pbar, mode, betti)


def ordinary_betti(K: FilteredComplex, mode: str = COMPACT) -> list:
    """Simplicial (or relative simplicial) Betti numbers, filtration ignored."""
    mode = support_mode(mode)
    ideal = K.ideal if mode == CLOSED else frozenset()
    return _betti_from(K.simplices, K.dim, ideal)


def euler_characteristic(K: FilteredComplex) -> int:
    return sum((-1) ** d * K.count(d) for d in range(K.dim + 1))


# explicit chains --------------------------------------------------------------------

def chain_boundary(chain: dict, ideal=frozenset()) -> dict:
    out = {}
    for s, c in chain.items():
        for sign, f in boundary(s):
            if f in ideal:
                continue
            v = out.get(f, 0) + sign * c
            if v:
                out[f] = v
            else:
                out.pop(f, None)
    return out


def is_allowable_chain(K: FilteredComplex, chain: dict, pbar: Perversity) -> bool:
    return all(is_allowable_simplex(K, s, len(s) - 1, pbar) for s, c in chain.items() if c)


def is_intersection_chain(K, chain, pbar, mode=COMPACT) -> bool:
    """c and its boundary are both allowable (boundary taken relative in closed mode)."""
    ideal = K.ideal if support_mode(mode) == CLOSED else frozenset()
    return is_allowable_chain(K, chain, pbar) and is_allowable_chain(
        K, chain_boundary(chain, ideal), pbar)


def ic_basis(K: FilteredComplex, i: int, pbar: Perversity, mode: str = COMPACT) -> list:
    """A basis of IC_i as chains {simplex: Fraction}."""
    mode = support_mode(mode)
    _check_perversity(K, pbar)
    A, ideal = _chain_groups(K, pbar, mode)
    cols = A[i]
    ok = set(A[i - 1]) if i > 0 else set()
    bad = [{f: v for f, v in c.items() if f not in ok} for c in _boundary_columns(cols, ideal)] \
        if i > 0 else [{} for _ in cols]
    basis = nullspace_sparse(_index_rows(bad))
    return [{cols[j]: Fraction(v) for j, v in combo.items()} for combo in basis]


def is_ih_boundary(K: FilteredComplex, chain: dict, pbar: Perversity, mode: str = COMPACT) -> bool:
    """Is ``chain`` the boundary of an element of IC_{i+1}?"""
    mode = support_mode(mode)
    ideal = K.ideal if mode == CLOSED else frozenset()
    chain = {s: c for s, c in chain.items() if c and s not in ideal}
    if not chain:
        return True
    i = len(next(iter(chain))) - 1
    if i + 1 > K.dim:
        return False
    basis = ic_basis(K, i + 1, pbar, mode)
    cols = [chain_boundary(b, ideal) for b in basis]
    keys = sorted({f for c in cols for f in c} | set(chain), key=lambda s: (len(s), s))
    order = {f: k for k, f in enumerate(keys)}
    sol = solve_sparse([{order[f]: v for f, v in c.items()} for c in cols],
                       {order[f]: v for f, v in chain.items()})
    return sol is not None


def boundary_squares_to_zero(K: FilteredComplex) -> bool:
    for d in range(2, K.dim + 1):
        for s in K.simplices.get(d, []):
            if chain_boundary(chain_boundary({s: 1})):
                return False
    return True


# subdivision -------------------------------------------------------------------------

def barycentric_subdivide(K: FilteredComplex) -> FilteredComplex:
    """First barycentric subdivision with the induced filtration and ideal boundary.

    New vertices are the simplices of K; a flag s_0 < s_1 < ... < s_k is a new
    simplex whose carrier is s_k, and it lies in V_i or in the ideal boundary
    exactly when its carrier does.
    """
    old = sorted(K.all_simplices(), key=lambda s: (len(s), s))
    label = {s: _bary_label(K, s) for s in old}
    top = K.simplices.get(K.dim, [])
    flags = set()
    for s in top:
        for perm in permutations(s):
            flags.add(tuple(tuple(sorted(perm[:k])) for k in range(1, len(perm) + 1)))
    new_simplices = [tuple(label[f] for f in flag) for flag in flags]
    filtration = {}
    ideal = []
    for flag in flags:
        for sub in faces(tuple(range(len(flag)))):
            chain = tuple(flag[k] for k in sub)
            carrier = chain[-1]
            labels = tuple(label[f] for f in chain)
            if K.depth[carrier] < K.dim:
                filtration.setdefault(K.depth[carrier], set()).add(labels)
            if carrier in K.ideal:
                ideal.append(labels)
    vertices = tuple(label[s] for s in old)
    names = {k: label[(v,)] for k, v in K.names.items() if isinstance(v, int)}
    meta = dict(K.metadata)
    meta["subdivisions"] = meta.get("subdivisions", 0) + 1
    for key in ("arcs",):
        meta.pop(key, None)
    return build_complex(new_simplices, filtration, ideal, vertices=vertices, names=names,
                         metadata=meta)


def _bary_label(K, s):
    if len(s) == 1:
        return str(K.vertices[s[0]])
    return "[" + ",".join(str(K.vertices[v]) for v in s) + "]"


# JSON interchange --------------------------------------------------------------------

def maximal_simplices(K: FilteredComplex) -> list:
    return list(K.simplices.get(K.dim, []))


def to_json(K: FilteredComplex) -> dict:
    lab = K.vertices

    def named(s):
        return [lab[v] for v in s]

    filt = {}
    for i in range(K.dim):
        ss = [s for s in K.all_simplices() if K.depth[s] == i]
        if ss:
            filt[str(i)] = [named(s) for s in sorted(ss, key=lambda s: (len(s), s))]
    ideal_max = _maximal_of(K.ideal)
    return {
        "vertices": list(lab),
        "maximal_simplices": [named(s) for s in maximal_simplices(K)],
        "filtration": filt,
        "ideal_boundary": [named(s) for s in ideal_max],
        "names": {k: lab[v] for k, v in sorted(K.names.items())},
        "metadata": K.metadata,
    }


def _maximal_of(simplices):
    ss = set(simplices)
    out = []
    for s in ss:
        if not any(len(t) > len(s) and set(s) <= set(t) for t in ss):
            out.append(s)
    return sorted(out, key=lambda s: (len(s), s))


def from_json(data) -> FilteredComplex:
    if isinstance(data, str):
        data = json.loads(data)
    verts = [v if not isinstance(v, list) else tuple(v) for v in data["vertices"]]
    filt = {int(i): [tuple(s) for s in ss] for i, ss in data.get("filtration", {}).items()}
    return build_complex(
        [tuple(s) for s in data["maximal_simplices"]],
        filt,
        [tuple(s) for s in data.get("ideal_boundary", [])],
        vertices=verts,
        names=data.get("names", {}),
        metadata=data.get("metadata", {}),
    )


def dumps(K: FilteredComplex) -> str:
    return json.dumps(to_json(K), indent=2, sort_keys=True)


__all__ = [
    "COMPACT",
    "CLOSED",
    "Perversity",
    "FilteredComplex",
    "IHResult",
    "validate_perversity",
    "zero_perversity",
    "all_perversities",
    "parse_perversity",
    "support_mode",
    "build_complex",
    "diagnose",
    "stratum_dimensions",
    "allowable_basis",
    "intersection_dimension",
    "is_allowable_simplex",
    "ih_betti",
    "ordinary_betti",
    "euler_characteristic",
    "chain_boundary",
    "is_allowable_chain",
    "is_intersection_chain",
    "ic_basis",
    "is_ih_boundary",
    "boundary_squares_to_zero",
    "barycentric_subdivide",
    "to_json",
    "from_json",
    "dumps",
]
