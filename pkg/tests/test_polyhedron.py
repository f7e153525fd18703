import itertools

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from polyembed.fixtures import complex_fixture
from polyembed.polyhedron import (
    ComplexError,
    barycentric_subdivision,
    complex_from_dict,
    euler_characteristic,
    first_homology,
    link_graph,
    singular_structure,
    validate_complex,
)


def betti_over_q(K):
    """b_0, b_1, b_2 from boundary-matrix ranks (sympy)."""
    V, E, T = len(K.vertices), len(K.edges), len(K.triangles)
    eidx = {e: k for k, e in enumerate(K.edges)}
    d1 = sympy.zeros(V, E)
    for k, (a, b) in enumerate(K.edges):
        d1[a, k], d1[b, k] = -1, 1
    d2 = sympy.zeros(E, T)
    for k, (a, b, c) in enumerate(K.triangles):
        d2[eidx[(b, c)], k] += 1
        d2[eidx[(a, c)], k] -= 1
        d2[eidx[(a, b)], k] += 1
    r1, r2 = d1.rank(), d2.rank() if T else 0
    return V - r1, E - r1 - r2, T - r2


def test_parse_completes_faces():
    K = complex_from_dict({"triangles": [["a", "b", "c"]]})
    assert len(K.vertices) == 3 and len(K.edges) == 3
    assert K.name(0) == "a"


@pytest.mark.parametrize(
    "data, message",
    [
        ({"edges": []}, "missing field 'triangles'"),
        ({"triangles": [["a", "a", "b"]]}, "degenerate triangle"),
        ({"triangles": [["a", "b", "c"], ["c", "b", "a"]]}, "duplicate triangle"),
        ({"triangles": [["a", "b", "c"]], "edges": [["a", "b"], ["b", "c"]]}, r"edge \[a, c\] of a triangle is missing"),
        ({"triangles": [["a", "b", "c"]], "vertices": ["a", "b"]}, "vertex c is missing"),
    ],
)
def test_parse_errors(data, message):
    with pytest.raises(ComplexError, match=message):
        complex_from_dict(data)


def test_validation_errors():
    with pytest.raises(ComplexError, match="not pure 2-dimensional"):
        validate_complex({"triangles": [["a", "b", "c"]], "edges": [["a", "b"], ["b", "c"], ["a", "c"], ["c", "d"]]})
    with pytest.raises(ComplexError, match="disconnected"):
        validate_complex({"triangles": [["a", "b", "c"], ["x", "y", "z"]]})


def test_wedge_vertex_reported():
    C = validate_complex(complex_fixture("wedge"))
    assert [C.complex.name(v) for v in C.wedge_vertices] == ["[o]"]


def test_subdivision_counts():
    K = complex_from_dict(complex_fixture("torus"))
    S = barycentric_subdivision(K)
    V, E, T = len(K.vertices), len(K.edges), len(K.triangles)
    assert len(S.vertices) == V + E + T
    assert len(S.edges) == 2 * E + 6 * T
    assert len(S.triangles) == 6 * T
    assert euler_characteristic(S) == euler_characteristic(K) == 0


@pytest.mark.parametrize(
    "name, h1, chi",
    [
        ("disk", "0", 1),
        ("annulus", "Z", 0),
        ("torus", "Z^2", 0),
        ("mobius", "Z", 0),
        ("yxi", "0", 1),
        ("yxs1", "Z", 0),
        ("thetaxs1", "Z^3", 0),
        ("k4xs1", "Z^4", 0),
        ("k5xs1", "Z^7", 0),
    ],
)
def test_fixture_homology(name, h1, chi):
    K = complex_from_dict(complex_fixture(name))
    assert str(first_homology(K)) == h1
    assert euler_characteristic(K) == chi
    b0, b1, b2 = betti_over_q(K)
    assert b0 - b1 + b2 == chi
    assert b1 == first_homology(K).free_rank


def test_link_kinds():
    C = validate_complex(complex_fixture("yxi"))
    K = C.complex
    S = singular_structure(K)
    kinds = sorted(S.vertex_kind.values())
    assert kinds.count("other") == 2  # the two ends of the triple line
    assert kinds.count("theta") == 1  # its midpoint after subdivision
    for v in S.branch_points:
        assert link_graph(K, v).kind == "other"


def test_circle_of_triple_points():
    C = validate_complex(complex_fixture("yxs1"))
    S = singular_structure(C.complex)
    assert S.branch_points == ()
    assert len(S.base_points) == 1 and len(S.arcs) == 1
    arc = S.arcs[0]
    assert arc.is_loop and arc.pages == 3
    assert arc.start == S.base_points[0]


def test_theta_paths_match_pages():
    C = validate_complex(complex_fixture("thetaxs1"))
    K = C.complex
    S = singular_structure(K)
    assert len(S.arcs) == 2
    for arc in S.arcs:
        assert sorted(dict(arc.page_map)) == sorted(K.pages(arc.path[0], arc.path[1]))
        assert sorted(dict(arc.page_map).values()) == sorted(K.pages(arc.path[-2], arc.path[-1]))


def test_surfaces_have_no_singular_set():
    for name in ("disk", "torus", "mobius", "annulus"):
        S = singular_structure(validate_complex(complex_fixture(name)).complex)
        assert S.singular_edges == () and S.base_points == ()


@st.composite
def random_complexes(draw):
    n = draw(st.integers(4, 7))
    all_tris = list(itertools.combinations(range(n), 3))
    tris = draw(st.lists(st.sampled_from(all_tris), min_size=2, max_size=9, unique=True))
    return {"triangles": [list(t) for t in tris]}


@settings(max_examples=40, deadline=None)
@given(random_complexes())
def test_subdivision_preserves_homology(data):
    K = complex_from_dict(data)
    S = barycentric_subdivision(K)
    assert first_homology(S) == first_homology(K)
    assert euler_characteristic(S) == euler_characteristic(K)
    assert betti_over_q(K)[1] == first_homology(K).free_rank
