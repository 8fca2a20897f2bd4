import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_force_facets, scipy_normalized_volume
from fanoqh.polytope import (
    Atom,
    Facet,
    LatticePolytope,
    PolytopeError,
    Product,
    atoms,
    convex_hull_product,
    dual,
    enumerate_facets,
    is_facet_symmetric,
    is_reflexive,
    is_smooth,
    make_del_pezzo,
    make_pseudo_del_pezzo,
    make_segment,
    normalized_volume,
    parse_family,
    realize,
)

SEG = make_segment()
DIAMOND = {(1, 0), (-1, 0), (0, 1), (0, -1)}


def vset(p):
    return set(p.vertices)


def unit(n, i, s=1):
    return tuple(s if j == i else 0 for j in range(n))


# ---------------------------------------------------------------- generators


def test_segment():
    assert SEG.dim == 1
    assert vset(SEG) == {(1,), (-1,)}
    assert is_reflexive(SEG)
    assert normalized_volume(SEG) == 2


def test_pdp1_vertices():
    p = make_pseudo_del_pezzo(1)
    assert p.dim == 2
    assert vset(p) == {(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)}


def test_dp1_hexagon():
    p = make_del_pezzo(1)
    assert vset(p) == {(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)}
    assert normalized_volume(p) == 6


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_family_vertex_counts(k):
    n = 2 * k
    pdp = make_pseudo_del_pezzo(k)
    dp = make_del_pezzo(k)
    assert len(pdp.vertices) == 4 * k + 1
    assert len(dp.vertices) == 4 * k + 2
    expected = {unit(n, i, s) for i in range(n) for s in (1, -1)} | {(1,) * n}
    assert vset(pdp) == expected
    assert vset(dp) == expected | {(-1,) * n}


@pytest.mark.parametrize("bad", [0, -1, 1.5, "2", True])
def test_generators_reject_bad_k(bad):
    with pytest.raises(PolytopeError):
        make_del_pezzo(bad)
    with pytest.raises(PolytopeError):
        make_pseudo_del_pezzo(bad)


# ---------------------------------------------------------------- construction errors


def test_rejects_redundant_vertex():
    with pytest.raises(PolytopeError):
        LatticePolytope([(1, 0), (-1, 0), (0, 1), (0, -1), (0, 0)])


def test_rejects_lower_dimensional():
    with pytest.raises(PolytopeError):
        LatticePolytope([(1, 0), (-1, 0), (2, 0)])


def test_rejects_duplicates_and_ragged():
    with pytest.raises(PolytopeError):
        LatticePolytope([(1,), (1,), (-1,)])
    with pytest.raises(PolytopeError):
        LatticePolytope([(1, 0), (-1,), (0, 1)])


def test_json_roundtrip_and_validation():
    p = make_pseudo_del_pezzo(2)
    assert LatticePolytope.from_json(p.to_json()) == p
    with pytest.raises(PolytopeError):
        LatticePolytope.from_json("{not json")
    with pytest.raises(PolytopeError):
        LatticePolytope.from_json(json.dumps({"dim": 3, "vertices": [[1, 0], [0, 1], [-1, -1]]}))
    with pytest.raises(PolytopeError):
        LatticePolytope.from_json(json.dumps({"dim": 1, "vertices": [[0.5], [-1]]}))


# ---------------------------------------------------------------- facets vs brute force


BRUTE_CASES = {
    "seg": SEG,
    "pdp(1)": make_pseudo_del_pezzo(1),
    "dp(1)": make_del_pezzo(1),
    "seg*seg*seg": realize(parse_family("seg*seg*seg")),
    "pdp(2)": make_pseudo_del_pezzo(2),
    "dp(2)": make_del_pezzo(2),
    "seg*pdp(1)": realize(parse_family("seg*pdp(1)")),
    "odd": LatticePolytope([(2, 0, 0), (0, 3, 0), (0, 0, 1), (-1, -1, -1), (1, -2, 1)]),
}


@pytest.mark.parametrize("name", sorted(BRUTE_CASES))
def test_facets_match_brute_force(name):
    p = BRUTE_CASES[name]
    got = {(f.normal, f.offset) for f in enumerate_facets(p)}
    assert got == brute_force_facets(p.vertices)


def test_segment_and_hexagon_facets():
    assert set(enumerate_facets(SEG)) == {Facet((1,), 1), Facet((-1,), 1)}
    hexf = enumerate_facets(make_del_pezzo(1))
    assert len(hexf) == 6 and all(f.offset == 1 for f in hexf)
    cross = enumerate_facets(LatticePolytope(sorted(DIAMOND)))
    assert {f.normal for f in cross} == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
    assert all(f.offset == 1 for f in cross)


def test_facet_incidence_and_primitivity():
    from math import gcd
    from functools import reduce

    for p in BRUTE_CASES.values():
        for i, f in enumerate(p.facets):
            assert abs(reduce(gcd, f.normal)) == 1
            on = p.facet_vertices(i)
            assert len(on) >= p.dim
            for v in p.vertices:
                assert sum(a * b for a, b in zip(v, f.normal)) <= f.offset
        for v in p.vertices:
            incident = [f for f in p.facets if sum(a * b for a, b in zip(v, f.normal)) == f.offset]
            assert len(incident) >= p.dim


# ---------------------------------------------------------------- products


def test_cross_polytope_product():
    q = convex_hull_product(SEG, SEG)
    assert vset(q) == DIAMOND
    # |x| + |y| <= 1 has area 2, so 2! * 2 = 4; Qhull agrees
    assert normalized_volume(q) == 4
    assert round(scipy_normalized_volume(q.vertices)) == 4
    assert vset(dual(q)) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


def test_seg_dp1_product_vertices():
    assert len(convex_hull_product(SEG, make_del_pezzo(1)).vertices) == 8


PRODUCT_PAIRS = [
    ("seg", "seg"),
    ("seg", "dp(1)"),
    ("dp(1)", "pdp(1)"),
    ("pdp(1)", "pdp(1)"),
    ("seg", "pdp(2)"),
    ("dp(2)", "seg*seg"),
    ("pdp(1)", "dp(2)"),
]


@pytest.mark.parametrize("left,right", PRODUCT_PAIRS)
def test_product_vertex_identity(left, right):
    q, q2 = realize(parse_family(left)), realize(parse_family(right))
    p = convex_hull_product(q, q2)
    expected = {v + (0,) * q2.dim for v in q.vertices} | {(0,) * q.dim + v for v in q2.vertices}
    assert vset(p) == expected


@pytest.mark.parametrize("left,right", PRODUCT_PAIRS)
def test_dual_of_product_is_cartesian_product(left, right):
    q, q2 = realize(parse_family(left)), realize(parse_family(right))
    dq, dq2 = dual(q), dual(q2)
    assert vset(dual(convex_hull_product(q, q2))) == {a + b for a in dq.vertices for b in dq2.vertices}


@pytest.mark.parametrize("left,right", PRODUCT_PAIRS)
def test_product_volume_is_multiplicative(left, right):
    q, q2 = realize(parse_family(left)), realize(parse_family(right))
    assert normalized_volume(convex_hull_product(q, q2)) == normalized_volume(q) * normalized_volume(q2)


def test_seg_pdp1_volume_frozen():
    # computed by the fan triangulation and by scipy's Qhull volume
    p = realize(parse_family("seg*pdp(1)"))
    assert normalized_volume(p) == 10
    assert round(scipy_normalized_volume(p.vertices)) == 10


def test_product_requires_interior_origin():
    off = LatticePolytope([(0,), (2,)])
    with pytest.raises(PolytopeError):
        convex_hull_product(off, SEG)


# ---------------------------------------------------------------- volume


FROZEN_VOLUMES = {
    "seg": 2,
    "dp(1)": 6, "dp(2)": 30, "dp(3)": 140, "dp(4)": 630,
    "pdp(1)": 5, "pdp(2)": 23, "pdp(3)": 102, "pdp(4)": 443,
}


@pytest.mark.parametrize("name", sorted(FROZEN_VOLUMES))
def test_family_volumes(name):
    p = realize(parse_family(name))
    assert normalized_volume(p) == FROZEN_VOLUMES[name]


@pytest.mark.parametrize("name", ["dp(1)", "dp(2)", "dp(3)", "pdp(1)", "pdp(2)", "pdp(3)", "seg*dp(1)", "odd"])
def test_volume_matches_qhull(name):
    p = BRUTE_CASES.get(name) or realize(parse_family(name))
    assert normalized_volume(p) == round(scipy_normalized_volume(p.vertices))


def test_volume_without_interior_origin():
    tri = LatticePolytope([(0, 0), (3, 0), (0, 2)])
    assert normalized_volume(tri) == 6


def _random_unimodular(rng, d):
    m = np.eye(d, dtype=np.int64)
    for _ in range(3 * d if d > 1 else 0):
        i, j = rng.choice(d, 2, replace=False)
        m[i] += int(rng.integers(-2, 3)) * m[j]
    if rng.random() < 0.5:
        m[0] = -m[0]
    perm = rng.permutation(d)
    return m[perm]


@pytest.mark.parametrize("name", ["seg", "dp(1)", "pdp(1)", "seg*seg*seg", "dp(2)", "pdp(2)", "seg*pdp(2)", "dp(3)"])
def test_volume_unimodular_invariance(name):
    rng = np.random.default_rng(7)
    p = realize(parse_family(name))
    base = normalized_volume(p)
    for _ in range(3):
        m = _random_unimodular(rng, p.dim)
        assert round(abs(np.linalg.det(m))) == 1
        img = LatticePolytope([tuple(int(x) for x in m @ np.array(v)) for v in p.vertices])
        assert normalized_volume(img) == base


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=4, max_size=9, unique=True))
def test_volume_of_random_hulls(points):
    from scipy.spatial import ConvexHull, QhullError

    try:
        hull = ConvexHull(np.array(points, dtype=float))
    except QhullError:
        return
    verts = [points[i] for i in sorted(hull.vertices)]
    p = LatticePolytope(verts)
    assert normalized_volume(p) == round(hull.volume * 6)
    assert {(f.normal, f.offset) for f in p.facets} == brute_force_facets(verts)


# ---------------------------------------------------------------- predicates and duality


DIM8_PRODUCTS = [
    "seg*seg", "seg*dp(1)", "dp(1)*pdp(1)", "pdp(1)*pdp(1)", "seg*dp(2)", "seg*seg*seg*seg*seg",
    "dp(2)*dp(2)", "pdp(2)*dp(1)*seg", "seg*pdp(3)", "dp(1)*dp(1)*dp(1)*dp(1)",
]


@pytest.mark.parametrize("name", ["seg"] + [f"{f}({k})" for f in ("dp", "pdp") for k in (1, 2, 3, 4)] + DIM8_PRODUCTS)
def test_families_reflexive_and_smooth(name):
    p = realize(parse_family(name))
    assert is_reflexive(p)
    assert is_smooth(p)
    assert all(f.offset == 1 for f in p.facets)


@pytest.mark.parametrize("name", ["seg", "dp(1)", "pdp(1)", "dp(2)", "pdp(2)", "seg*pdp(1)", "dp(3)"])
def test_dual_involution(name):
    p = realize(parse_family(name))
    assert dual(dual(p)) == p


def test_dual_of_segment():
    assert dual(SEG) == SEG


def test_non_reflexive():
    wide = LatticePolytope([(2,), (-2,)])
    assert not is_reflexive(wide)
    with pytest.raises(PolytopeError):
        dual(wide)
    with pytest.raises(PolytopeError):
        is_smooth(wide)


def test_interior_origin_required():
    with pytest.raises(PolytopeError):
        is_reflexive(LatticePolytope([(0, 0), (1, 0), (0, 1)]))


def test_not_smooth():
    # reflexive square with vertices (+-1, +-1): its dual is the diamond, whose cones are not unimodular
    sq = LatticePolytope([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert is_reflexive(sq)
    assert not is_smooth(sq)


def test_non_simple_moment_vertex_errors():
    # octahedron: its facets are triangles, so take the cube (facets have 4 vertices in dim 3)
    cube = LatticePolytope(list(itertools.product((1, -1), repeat=3)))
    assert is_reflexive(cube)
    with pytest.raises(PolytopeError, match="not simple"):
        is_smooth(cube)


def test_facet_symmetry():
    assert is_facet_symmetric(make_pseudo_del_pezzo(1))
    assert is_facet_symmetric(make_del_pezzo(1))
    tri = LatticePolytope([(1, 0), (0, 1), (-1, -1)])
    assert not is_facet_symmetric(tri)
    pentagon_facets = set(make_pseudo_del_pezzo(1).facets)
    assert any(Facet(tuple(-x for x in f.normal), f.offset) in pentagon_facets for f in pentagon_facets)


# ---------------------------------------------------------------- family expressions


def test_parse_atoms_and_products():
    assert parse_family("seg") == Atom("seg")
    assert parse_family(" dp( 2 ) ") == Atom("dp", 2)
    e = parse_family("seg*dp(1)*pdp(1)")
    assert e == Product(Product(Atom("seg"), Atom("dp", 1)), Atom("pdp", 1))
    assert [str(a) for a in atoms(e)] == ["seg", "dp(1)", "pdp(1)"]
    assert e.dim == 5
    assert str(e) == "seg*dp(1)*pdp(1)"


@pytest.mark.parametrize("text", ["", "seg*", "*seg", "dp()", "dp(0)", "pdp(-1)", "foo", "seg seg", "dp(1)**seg"])
def test_parse_errors(text):
    with pytest.raises(PolytopeError):
        parse_family(text)


def test_parse_error_reports_position():
    with pytest.raises(PolytopeError, match="position 4"):
        parse_family("seg*xyz")


def test_realize_examples():
    assert realize(parse_family("seg")) == SEG
    assert vset(realize(parse_family("seg*seg"))) == DIAMOND
    p = realize(parse_family("dp(1)*pdp(1)"))
    assert p.dim == 4 and len(p.vertices) == 11
