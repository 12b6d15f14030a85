"""Filtered complexes, perversities and intersection homology.

The oracle below rebuilds the intersection chain complex densely with sympy
(allowability straight from the dimension inequality, IC_i as a nullspace)
and shares no code with the sparse engine.
"""

import json
import warnings
from itertools import combinations

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from pinchuk_geometry import ihom, models
from pinchuk_geometry.errors import (
    DanglingSimplex,
    DimensionViolation,
    FiltrationNotClosed,
    InvalidPerversity,
)
from pinchuk_geometry.ihom import CLOSED, COMPACT


# dense oracle ------------------------------------------------------------------------

def _oracle_allowable(K, s, pbar):
    i, m = len(s) - 1, K.dim
    for r in range(1, m + 1):
        dims = [len(f) - 1 for k in range(1, len(s) + 1)
                for f in combinations(s, k) if K.depth[f] <= m - r]
        if dims and max(dims) > i - r + pbar[r]:
            return False
    return True


def _dense_boundary(rows, cols):
    pos = {f: k for k, f in enumerate(rows)}
    M = sp.zeros(len(rows), len(cols))
    for j, s in enumerate(cols):
        for k in range(len(s)):
            f = s[:k] + s[k + 1:]
            if f in pos:
                M[pos[f], j] += (-1) ** k
    return M


def oracle_betti(K, pbar=None, mode=COMPACT):
    ideal = K.ideal if mode == CLOSED else frozenset()
    S = {i: [s for s in K.simplices.get(i, []) if s not in ideal] for i in range(K.dim + 2)}
    ok = {i: [s for s in S[i] if pbar is None or _oracle_allowable(K, s, pbar)] for i in S}
    basis = {}
    for i in range(K.dim + 2):
        if i == 0 or not ok[i]:
            basis[i] = sp.eye(len(ok[i]))
            continue
        bad_rows = [f for f in S[i - 1] if f not in set(ok[i - 1])]
        D = _dense_boundary(bad_rows, ok[i])
        ns = D.nullspace() if bad_rows else [sp.eye(len(ok[i]))[:, j] for j in range(len(ok[i]))]
        basis[i] = sp.Matrix.hstack(*ns) if ns else sp.zeros(len(ok[i]), 0)

    def rank_of(i):
        if i == 0 or not ok[i] or basis[i].shape[1] == 0:
            return 0
        return (_dense_boundary(ok[i - 1], ok[i]) * basis[i]).rank()

    return [basis[i].shape[1] - rank_of(i) - rank_of(i + 1) for i in range(K.dim + 1)]


# perversities -------------------------------------------------------------------------

def test_only_zero_perversity_in_dimension_two():
    assert ihom.all_perversities(2) == [ihom.Perversity((0, 0, 0))]


def test_dimension_four_perversities():
    got = {p.entries for p in ihom.all_perversities(4)}
    assert got == {(0, 0, 0, 0, 0), (0, 0, 0, 0, 1), (0, 0, 0, 1, 1), (0, 0, 0, 1, 2)}
    for p in got:
        assert ihom.validate_perversity(p).entries == p


@pytest.mark.parametrize("entries,index", [
    ((0, 1, 0), 1),
    ((0, 0, 1), 2),
    ((0, 0, 0, 2), 3),
    ((0, 0, 0, 1, 0), 4),
    ((0, 0, 0, 0, -1), 4),
])
def test_invalid_perversity_reports_index(entries, index):
    with pytest.raises(InvalidPerversity) as info:
        ihom.validate_perversity(entries)
    assert info.value.index == index


def test_parse_perversity():
    assert ihom.parse_perversity("zero", 2).entries == (0, 0, 0)
    assert ihom.parse_perversity("top", 4).entries == (0, 0, 0, 1, 2)
    assert ihom.parse_perversity("0,0,0,1", 3).entries == (0, 0, 0, 1)


def test_support_aliases():
    assert ihom.support_mode("c") == COMPACT
    assert ihom.support_mode("cl") == CLOSED
    with pytest.raises(ValueError):
        ihom.support_mode("open")


def test_perversity_length_must_match():
    K = models.circle()
    with pytest.raises(InvalidPerversity):
        ihom.ih_betti(K, ihom.zero_perversity(2))


# building complexes ----------------------------------------------------------------------

def test_hollow_triangle():
    K = ihom.build_complex([("a", "b"), ("b", "c"), ("a", "c")])
    assert K.dim == 1 and K.count(0) == 3 and K.count(1) == 3
    assert ihom.ordinary_betti(K) == [1, 1]


def test_solid_triangle_with_marked_vertex():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        K = ihom.build_complex([("a", "b", "c")], {0: [("a",)]})
    assert ihom.stratum_dimensions(K) == [0, 2]
    assert K.singular_vertices() == [K.vertex("a")]


def test_unpaired_faces_warn():
    with pytest.warns(UserWarning, match="codimension-one"):
        ihom.build_complex([("a", "b", "c")])


def test_two_simplex_in_v1_is_a_dimension_violation():
    with pytest.raises(DimensionViolation):
        ihom.build_complex([("a", "b", "c"), ("b", "c", "d")], {1: [("a", "b", "c")]})


def test_filtration_simplex_outside_the_complex():
    with pytest.raises(FiltrationNotClosed):
        ihom.build_complex([("a", "b", "c"), ("b", "c", "d")], {1: [("a", "d")]})


def test_filtration_needs_its_faces():
    # V_1 holds the edge ab but not its endpoints
    with pytest.raises(FiltrationNotClosed):
        ihom.build_complex([("a", "b", "c"), ("b", "c", "d")], {1: [("a", "b")]})


def test_ideal_boundary_must_lie_in_the_complex():
    with pytest.raises(FiltrationNotClosed):
        ihom.build_complex([("a", "b", "c"), ("b", "c", "d")], ideal_boundary=[("a", "d")])


def test_dangling_edge_is_rejected():
    with pytest.raises(DanglingSimplex):
        ihom.build_complex([("a", "b", "c"), ("c", "d")])


# allowability -------------------------------------------------------------------------------

def test_allowability_near_a_point_stratum():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        K = ihom.build_complex([("v", "a", "b"), ("v", "b", "c")], {0: [("v",)]})
    p = ihom.zero_perversity(2)
    assert not ihom.is_allowable_simplex(K, K.simplex("v", "a"), 1, p)
    assert ihom.is_allowable_simplex(K, K.simplex("a", "b"), 1, p)
    assert ihom.is_allowable_simplex(K, K.simplex("v", "a", "b"), 2, p)
    assert not ihom.is_allowable_simplex(K, K.simplex("v"), 0, p)
    assert ihom.intersection_dimension(K, K.simplex("a", "b"), 0) == float("-inf")


def test_everything_allowable_without_singular_strata():
    K = models.torus()
    p = ihom.zero_perversity(2)
    for i in range(3):
        assert ihom.allowable_basis(K, i, p) == K.simplices[i]


# homology ------------------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["circle", "sphere", "torus", "pinched_torus", "interval_line"])
def test_engine_matches_dense_oracle(name):
    K = models.oracle_models()[name]
    for mode in (COMPACT, CLOSED):
        assert ihom.ordinary_betti(K, mode) == oracle_betti(K, None, mode)
        for p in ihom.all_perversities(K.dim):
            assert ihom.ih_betti(K, p, mode).betti == oracle_betti(K, p, mode)


def test_known_betti_numbers():
    om = models.oracle_models()
    assert ihom.ordinary_betti(om["sphere"]) == [1, 0, 1]
    assert ihom.ordinary_betti(om["torus"]) == [1, 2, 1]
    assert ihom.ih_betti(om["circle"], ihom.zero_perversity(1), CLOSED).betti == [1, 1]
    p = ihom.zero_perversity(2)
    assert ihom.ih_betti(om["pinched_torus"], p).betti == [1, 0, 1]
    assert ihom.ordinary_betti(om["pinched_torus"]) == [1, 1, 1]
    line = om["interval_line"]
    q = ihom.zero_perversity(1)
    assert ihom.ih_betti(line, q, COMPACT).betti == [1, 0]
    assert ihom.ih_betti(line, q, CLOSED).betti == [0, 1]


def test_compact_equals_closed_without_ideal_boundary():
    for name in ("circle", "sphere", "torus", "pinched_torus"):
        K = models.oracle_models()[name]
        p = ihom.zero_perversity(K.dim)
        assert ihom.ih_betti(K, p, COMPACT).betti == ihom.ih_betti(K, p, CLOSED).betti


def test_result_json():
    K = models.circle()
    js = ihom.ih_betti(K, ihom.zero_perversity(1)).to_json()
    assert js["betti"] == [1, 1] and js["betti1"] == 1 and js["support"] == COMPACT


@st.composite
def cones(draw):
    """Cone over a random union of cycles, with the apex possibly singular."""
    n = draw(st.integers(3, 7))
    extra = draw(st.integers(0, 2))
    ring = [(k, (k + 1) % n) for k in range(n)]
    if extra:
        m = 3 + extra
        ring += [(n + k, n + (k + 1) % m) for k in range(m)]
    tris = [("apex", a, b) for a, b in ring]
    singular = draw(st.booleans())
    return tris, ({0: [("apex",)]} if singular else None)


@settings(max_examples=15, deadline=None)
@given(cones())
def test_cones_against_oracle(data):
    tris, filt = data
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        K = ihom.build_complex(tris, filt)
    p = ihom.zero_perversity(2)
    assert ihom.ih_betti(K, p).betti == oracle_betti(K, p)


# chains --------------------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["sphere", "torus", "pinched_torus"])
def test_boundary_squares_to_zero(name):
    assert ihom.boundary_squares_to_zero(models.oracle_models()[name])


def test_intersection_chains_are_closed_under_boundary():
    K = models.pinched_torus()
    p = ihom.zero_perversity(2)
    for mode in (COMPACT, CLOSED):
        for i in range(3):
            for c in ihom.ic_basis(K, i, p, mode):
                assert ihom.is_intersection_chain(K, c, p, mode)
                assert ihom.is_allowable_chain(K, ihom.chain_boundary(c), p)


def test_euler_characteristic_matches_betti():
    for K in models.oracle_models().values():
        b = ihom.ordinary_betti(K)
        assert ihom.euler_characteristic(K) == sum((-1) ** i * v for i, v in enumerate(b))


# subdivision and interchange ---------------------------------------------------------------------

def test_subdividing_a_triangle_gives_six():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        K = ihom.build_complex([("a", "b", "c")])
        S = ihom.barycentric_subdivide(K)
    assert S.count(2) == 6 and S.count(0) == 7
    assert S.metadata["subdivisions"] == 1


def test_subdividing_the_hollow_triangle_gives_a_hexagon():
    K = ihom.build_complex([("a", "b"), ("b", "c"), ("a", "c")])
    S = ihom.barycentric_subdivide(K)
    assert (S.count(0), S.count(1)) == (6, 6)
    assert ihom.ordinary_betti(S) == [1, 1]


def test_subdivision_invariance_on_oracle_models():
    for K in models.oracle_models().values():
        S = ihom.barycentric_subdivide(K)
        for mode in (COMPACT, CLOSED):
            for p in ihom.all_perversities(K.dim):
                assert ihom.ih_betti(S, p, mode).betti == ihom.ih_betti(K, p, mode).betti


def test_subdivision_keeps_filtration_and_ideal():
    K = models.pinched_torus()
    S = ihom.barycentric_subdivide(K)
    assert len(S.singular_vertices()) == 1
    L = models.interval_line()
    T = ihom.barycentric_subdivide(L)
    assert len([s for s in T.ideal if len(s) == 1]) == 2


def test_json_roundtrip():
    K = models.pinched_torus()
    back = ihom.from_json(ihom.dumps(K))
    assert back.vertices == tuple(json.loads(json.dumps(list(K.vertices))))
    assert {d: back.count(d) for d in range(3)} == {d: K.count(d) for d in range(3)}
    p = ihom.zero_perversity(2)
    assert ihom.ih_betti(back, p).betti == ihom.ih_betti(K, p).betti
    assert back.singular_vertices() == K.singular_vertices()
