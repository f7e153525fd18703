from collections import Counter

import pytest
from hypothesis import given, strategies as st

from polyembed.fixtures import complex_fixture, graph_times_circle
from polyembed.graphprod import named_graph
from polyembed.polyhedron import euler_characteristic, validate_complex
from polyembed.thickening import (
    ThickeningRejected,
    boundary_surface,
    canonical_cycle,
    enumerate_se,
    thicken_all,
)

from oracles import count_orientable_thickenings, face_counts


def twisted_y_bundle():
    """Mapping torus of the letter Y whose monodromy swaps two legs."""
    swap = {"x": "y", "y": "x", "c": "c", "z": "z"}
    tris = []
    for i in range(3):
        j = (i + 1) % 3
        s = swap if i == 2 else {a: a for a in swap}
        for u, v in (("c", "x"), ("c", "y"), ("c", "z")):
            tris += [[f"{u}.{i}", f"{v}.{i}", f"{s[v]}.{j}"], [f"{u}.{i}", f"{s[u]}.{j}", f"{s[v]}.{j}"]]
    return {"triangles": tris}


def cone_over(edges):
    return {"triangles": [["apex", a, b] for a, b in edges]}


@given(st.lists(st.integers(0, 20), min_size=1, max_size=7, unique=True), st.integers(0, 6))
def test_canonical_cycle(seq, shift):
    k = shift % len(seq)
    rotated = seq[k:] + seq[:k]
    c = canonical_cycle(seq)
    assert canonical_cycle(rotated) == c
    assert canonical_cycle(c) == c
    assert c[0] == min(seq)


@pytest.mark.parametrize("name", ["yxi", "book:4", "yxs1", "thetaxs1", "k4xs1"])
def test_se_count_matches_brute_force(name):
    data = complex_fixture(name)
    assert len(enumerate_se(data)) == count_orientable_thickenings(data["triangles"])


def test_known_counts():
    assert len(enumerate_se(complex_fixture("yxi"))) == 2
    assert len(enumerate_se(complex_fixture("book:4"))) == 6
    assert len(enumerate_se(complex_fixture("yxs1"))) == 2
    assert len(enumerate_se(complex_fixture("thetaxs1"))) == 4
    assert len(enumerate_se(complex_fixture("k4xs1"))) == 16


def test_twisted_bundle_has_no_orientable_thickening():
    data = twisted_y_bundle()
    res = enumerate_se(data)
    assert list(res) == []
    assert res.reason == "no 3-thickening exists: no orientably faithful collection"
    assert count_orientable_thickenings(data["triangles"]) == 0
    assert thicken_all(data).reason == res.reason


def test_non_planar_link():
    K5 = [(a, b) for a in "pqrst" for b in "pqrst" if a < b]
    res = enumerate_se(cone_over(K5))
    assert list(res) == []
    assert res.reason == "no 3-thickening exists: link of [apex] does not embed in S^2"
    # the cone over K4 is fine
    K4 = [(a, b) for a in "pqrs" for b in "pqrs" if a < b]
    assert len(enumerate_se(cone_over(K4))) == count_orientable_thickenings(cone_over(K4)["triangles"]) == 2


def test_wedge_rejected():
    with pytest.raises(ThickeningRejected, match="disconnected link"):
        thicken_all(complex_fixture("wedge"))


@pytest.mark.parametrize(
    "name, genera",
    [("disk", (0,)), ("annulus", (1,)), ("torus", (1, 1)), ("mobius", (1,))],
)
def test_surfaces_have_one_thickening(name, genera):
    T = thicken_all(complex_fixture(name))
    assert len(T) == 1
    assert T[0].boundary_genera == genera


@pytest.mark.parametrize("name", ["disk", "torus", "yxi", "yxs1", "thetaxs1", "k4xs1", "mobius", "book:4"])
def test_boundary_euler_relation(name):
    C = validate_complex(complex_fixture(name))
    chi = euler_characteristic(C.original)
    for d in thicken_all(C):
        assert d.boundary.orientable
        assert sum(2 - 2 * g for g in d.boundary_genera) == 2 * chi
        assert d.boundary.euler_characteristic == 2 * chi


@pytest.mark.parametrize("name", ["yxi", "yxs1", "thetaxs1", "k4xs1"])
def test_incremental_assembly_matches_full(name):
    C = validate_complex(complex_fixture(name))
    for col, d in zip(enumerate_se(C), thicken_all(C)):
        assert boundary_surface(C, col) == d.boundary


@pytest.mark.parametrize("graph", ["theta", "k4"])
def test_graph_products_match_rotation_systems(graph):
    # thickenings of L x S^1 are (surface with rotation) x S^1: one boundary
    # torus per face of the rotation system
    L = named_graph(graph)
    data = complex_fixture(f"{graph}xs1")
    comps = sorted(d.boundary_components for d in thicken_all(data))
    assert comps == sorted(face_counts(L.n, list(L.edges)))
    assert all(g == 1 for d in thicken_all(data) for g in d.boundary_genera)


def test_y_product_by_hand():
    T = thicken_all(graph_times_circle([("c", "x"), ("c", "y"), ("c", "z")]))
    assert len(T) == 2
    assert all(d.boundary_genera == (1,) and str(d.h1) == "Z" for d in T)


def test_output_is_canonical_and_sorted():
    cols = enumerate_se(complex_fixture("k4xs1"))
    keys = [c.key() for c in cols]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    again = enumerate_se(complex_fixture("k4xs1"))
    assert [c.key() for c in again] == keys


def test_descriptor_serialization_is_stable():
    C = validate_complex(complex_fixture("thetaxs1"))
    a = [d.to_dict(C.complex) for d in thicken_all(C)]
    b = [d.to_dict(C.complex) for d in thicken_all(C)]
    assert a == b
    assert Counter(len(d["boundary_genera"]) for d in a) == Counter({1: 2, 3: 2})
