import itertools

import pytest
from hypothesis import given, settings, strategies as st

from polyembed.abelian import FGAbelianGroup, PrimeField, Rationals
from polyembed.closure import SearchCapExceeded, validate_hlhd
from polyembed.fixtures import complex_fixture
from polyembed.graphprod import (
    Graph,
    RotationSystem,
    build_surface,
    crosscap_graph,
    graph_genus,
    min_closed_h1_dim,
    minimum_genus,
    named_graph,
    product_presentation,
    surface_graph,
    trace_faces,
)
from polyembed.polyhedron import first_homology

from oracles import face_counts, genus_by_faces


def all_rotations(L):
    per = []
    for v in range(L.n):
        ds = L.darts_at(v)
        per.append([(ds[0],) + p for p in itertools.permutations(ds[1:])] if ds else [()])
    return [RotationSystem(tuple(c)) for c in itertools.product(*per)]


def switchable(L, twists):
    for signs in itertools.product((0, 1), repeat=L.n):
        if all((signs[u] ^ signs[v]) == twists[e] for e, (u, v) in enumerate(L.edges)):
            return True
    return False


@pytest.mark.parametrize("name, genus", [("c3", 0), ("theta", 0), ("k4", 0), ("k5", 1), ("k33", 1), ("petersen", 1)])
def test_named_genera(name, genus):
    L = named_graph(name)
    assert graph_genus(L) == genus


@pytest.mark.parametrize("name", ["k4", "k33", "k5", "petersen"])
def test_genus_matches_face_count_oracle(name):
    L = named_graph(name)
    assert graph_genus(L) == genus_by_faces(L.n, list(L.edges))


def test_search_cap():
    with pytest.raises(SearchCapExceeded):
        minimum_genus(named_graph("petersen"), cap=10)


def test_search_cap_from_environment(monkeypatch):
    monkeypatch.setenv("POLYEMBED_GENUS_CAP", "5")
    with pytest.raises(SearchCapExceeded):
        graph_genus(named_graph("k5"))


def test_trace_faces_matches_oracle_on_k4():
    L = named_graph("k4")
    assert sorted(trace_faces(L, r) for r in all_rotations(L)) == sorted(face_counts(L.n, list(L.edges)))


def test_adjacency_input():
    L = Graph.from_dict({"adjacency": {"a": ["b", "b", "a", "a"], "b": ["a", "a"]}})
    assert L.num_edges == 3  # a double edge and a loop
    assert L.girth() == 1
    with pytest.raises(ValueError, match="listed twice"):
        Graph.from_dict({"adjacency": {"a": ["a", "b"], "b": ["a"]}})
    with pytest.raises(ValueError, match="not symmetric"):
        Graph.from_dict({"adjacency": {"a": ["b", "b"], "b": ["a"]}})
    with pytest.raises(ValueError, match="disconnected"):
        Graph.from_edges([("a", "b"), ("c", "d")])


def test_girth_and_shapes():
    assert named_graph("petersen").girth() == 5
    assert named_graph("k33").girth() == 4
    assert named_graph("theta").girth() == 2
    assert Graph.from_edges([(0, 1), (1, 2)]).is_path_or_cycle()
    assert named_graph("c3").is_path_or_cycle()
    assert not named_graph("theta").is_path_or_cycle()


@pytest.mark.parametrize("g, h", [(0, 1), (0, 3), (1, 1), (2, 2), (3, 3)])
def test_surface_graph_family(g, h):
    L, rot = surface_graph(g, h)
    K = build_surface(L, rot)
    assert K.orientable and K.genus == g and K.boundary_components == h


@pytest.mark.parametrize("k, h", [(1, 1), (2, 1), (3, 2), (4, 3)])
def test_crosscap_family(k, h):
    L, rot, tw = crosscap_graph(k, h)
    K = build_surface(L, rot, tw)
    assert not K.orientable and K.genus == k and K.boundary_components == h


def test_untwisted_boundaries_are_faces():
    L = named_graph("k4")
    for rot in all_rotations(L):
        assert build_surface(L, rot).boundary_components == trace_faces(L, rot)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["k4", "theta", "k33"]), st.data())
def test_twisted_band_surfaces(name, data):
    L = named_graph(name)
    rot = data.draw(st.sampled_from(all_rotations(L)))
    tw = data.draw(st.lists(st.integers(0, 1), min_size=L.num_edges, max_size=L.num_edges))
    K = build_surface(L, rot, tw)
    assert K.orientable == switchable(L, tw)
    k = 2 - K.euler_characteristic - K.boundary_components
    assert k >= 0
    if K.orientable:
        assert k % 2 == 0
        assert sum(len(c) for c in K.boundary_curves) == 2 * L.num_edges
    else:
        assert k >= 1
    M = product_presentation(K)
    validate_hlhd(M)


@pytest.mark.parametrize("name", ["theta", "k4"])
def test_product_homology_matches_triangulation(name):
    L = named_graph(name)
    K = build_surface(L, RotationSystem.default(L))
    M = product_presentation(K)
    assert M.h1 == first_homology_of_product(name)
    assert M.h1 == FGAbelianGroup(L.betti_1() + 1)


def first_homology_of_product(name):
    from polyembed.polyhedron import complex_from_dict

    return first_homology(complex_from_dict(complex_fixture(f"{name}xs1")))


@pytest.mark.parametrize(
    "name, value", [("k4", 0), ("k5", 2), ("k33", 2), ("petersen", 2), ("c3", 0), ("theta", 0)]
)
def test_min_closed_h1_dim(name, value):
    for F in (Rationals, PrimeField(2), PrimeField(3)):
        assert min_closed_h1_dim(named_graph(name), F) == value


def test_path_gives_zero():
    assert min_closed_h1_dim(Graph.from_edges([(0, 1), (1, 2), (2, 3)]), Rationals) == 0


def test_unknown_graph():
    with pytest.raises(ValueError, match="unknown graph"):
        named_graph("k7")
