"""Built-in complexes, manifold presentations and graphs.

Names are used as ``fixture:NAME`` on the command line. Parametrized
families take arguments after a colon, e.g. ``surface-product:2,1``.
"""

from __future__ import annotations

import itertools
import random
from math import gcd
from typing import Callable, Dict, List, Sequence, Tuple

from .closure import ManifoldPresentation
from .graphprod import (
    Graph,
    build_surface,
    crosscap_graph,
    named_graph,
    NAMED_GRAPHS,
    product_presentation,
    surface_graph,
)
from .symplectic import transvection_matrix

__all__ = [
    "complex_fixture",
    "manifold_fixture",
    "graph_fixture",
    "list_fixtures",
    "graph_times_circle",
    "random_presentation",
    "random_lagrangian",
    "COMPLEX_FIXTURES",
    "MANIFOLD_FIXTURES",
]


# -- complexes ------------------------------------------------------------


def _disk() -> dict:
    rim = [f"r{k}" for k in range(6)]
    return {"triangles": [["c", rim[k], rim[(k + 1) % 6]] for k in range(6)]}


def _annulus() -> dict:
    tris = []
    for i in range(3):
        j = (i + 1) % 3
        tris += [[f"o{i}", f"o{j}", f"i{j}"], [f"o{i}", f"i{j}", f"i{i}"]]
    return {"triangles": tris}


def _torus() -> dict:
    tris = []
    for i, j in itertools.product(range(3), repeat=2):
        a, b = (i + 1) % 3, (j + 1) % 3
        tris += [[f"{i}{j}", f"{a}{j}", f"{a}{b}"], [f"{i}{j}", f"{i}{b}", f"{a}{b}"]]
    return {"triangles": tris}


def _mobius() -> dict:
    return {"triangles": [[k, (k + 1) % 5, (k + 2) % 5] for k in range(5)]}


def _book(pages: int = 3) -> dict:
    """Y x I: ``pages`` squares sharing the edge c0-c1."""
    tris = []
    for k in range(pages):
        tris += [["c0", f"l{k}0", f"l{k}1"], ["c0", "c1", f"l{k}1"]]
    return {"triangles": tris}


def _wedge() -> dict:
    return {"triangles": [["o", "a1", "a2"], ["o", "b1", "b2"]]}


def graph_times_circle(edges: Sequence[Tuple], m: int = 3) -> dict:
    """Triangulate L x S^1 for a simplicial graph L, the circle having m edges."""
    tris = []
    for u, v in edges:
        for i in range(m):
            j = (i + 1) % m
            tris += [
                [f"{u}.{i}", f"{v}.{i}", f"{v}.{j}"],
                [f"{u}.{i}", f"{u}.{j}", f"{v}.{j}"],
            ]
    return {"triangles": tris}


def _simplicial_edges(L: Graph) -> List[Tuple[str, str]]:
    """Subdivide loops and parallel edges so the graph becomes simplicial."""
    out = []
    seen = set()
    for e, (u, v) in enumerate(L.edges):
        a, b = L.label(u), L.label(v)
        key = tuple(sorted((a, b)))
        if u == v:
            out += [(a, f"e{e}p"), (f"e{e}p", f"e{e}q"), (f"e{e}q", a)]
        elif key in seen:
            out += [(a, f"e{e}m"), (f"e{e}m", b)]
        else:
            seen.add(key)
            out.append((a, b))
    return out


def _graph_product(name: str) -> Callable[[], dict]:
    return lambda: graph_times_circle(_simplicial_edges(named_graph(name)))


COMPLEX_FIXTURES: Dict[str, Callable[[], dict]] = {
    "disk": _disk,
    "annulus": _annulus,
    "torus": _torus,
    "mobius": _mobius,
    "solid-torus-spine": _mobius,
    "yxi": _book,
    "yxs1": lambda: graph_times_circle([("c", "x"), ("c", "y"), ("c", "z")]),
    "thetaxs1": _graph_product("theta"),
    "k4xs1": _graph_product("k4"),
    "k5xs1": _graph_product("k5"),
    "k33xs1": _graph_product("k33"),
    "wedge": _wedge,
}


def complex_fixture(name: str) -> dict:
    key, _, arg = name.lower().partition(":")
    if key == "xi":
        g, h = _two_ints(arg, name)
        L, _ = surface_graph(g, h)
        return graph_times_circle(_simplicial_edges(L))
    if key == "book":
        return _book(int(arg or 3))
    if key not in COMPLEX_FIXTURES:
        raise KeyError(name)
    return COMPLEX_FIXTURES[key]()


# -- manifolds ------------------------------------------------------------


def _lemma31() -> ManifoldPresentation:
    # H_1 = Z<l> + Z/2<m>, i(a) = 2l, i(b) = m
    return ManifoldPresentation(2, ((0, 2),), (1,), ((2, 0), (0, 1)), True, "lemma31")


def _solid_torus() -> ManifoldPresentation:
    # meridian a dies, longitude b generates
    return ManifoldPresentation(1, (), (1,), ((0, 1),), True, "solid-torus")


def _torus_x_interval() -> ManifoldPresentation:
    return ManifoldPresentation(2, (), (1, 1), ((1, 0, 1, 0), (0, 1, 0, -1)), True, "torus-x-i")


def _two_ints(arg: str, name: str) -> Tuple[int, int]:
    try:
        a, b = (int(x) for x in arg.split(","))
    except ValueError:
        raise KeyError(f"{name} (expected two integers, e.g. {name.split(':')[0]}:1,2)") from None
    return a, b


def surface_product(g: int, h: int) -> ManifoldPresentation:
    L, rot = surface_graph(g, h)
    M = product_presentation(build_surface(L, rot))
    return ManifoldPresentation(M.generators, M.relations, M.boundary_genera, M.inclusion, True, f"surface-product:{g},{h}")


def crosscap_product(k: int, h: int) -> ManifoldPresentation:
    L, rot, tw = crosscap_graph(k, h)
    M = product_presentation(build_surface(L, rot, tw))
    return ManifoldPresentation(M.generators, M.relations, M.boundary_genera, M.inclusion, False, f"crosscap-product:{k},{h}")


MANIFOLD_FIXTURES: Dict[str, Callable[[], ManifoldPresentation]] = {
    "lemma31": _lemma31,
    "solid-torus": _solid_torus,
    "torus-x-i": _torus_x_interval,
}


def manifold_fixture(name: str) -> ManifoldPresentation:
    key, _, arg = name.lower().partition(":")
    if key == "surface-product":
        return surface_product(*_two_ints(arg, name))
    if key == "crosscap-product":
        return crosscap_product(*_two_ints(arg, name))
    if key not in MANIFOLD_FIXTURES:
        raise KeyError(name)
    return MANIFOLD_FIXTURES[key]()


def graph_fixture(name: str) -> Graph:
    try:
        return named_graph(name)
    except ValueError:
        raise KeyError(name) from None


def list_fixtures() -> Dict[str, List[str]]:
    return {
        "complexes": sorted(COMPLEX_FIXTURES) + ["book:N", "xi:G,H"],
        "manifolds": sorted(MANIFOLD_FIXTURES) + ["surface-product:G,H", "crosscap-product:K,H"],
        "graphs": sorted(NAMED_GRAPHS),
    }


# -- random realizable presentations --------------------------------------


def _handlebody(h: int) -> ManifoldPresentation:
    inc = [[0] * (2 * h) for _ in range(h)]
    for j in range(h):
        inc[j][2 * j + 1] = 1
    return ManifoldPresentation(h, (), (h,), tuple(map(tuple, inc)))


def _seifert(a1: int, b1: int, a2: int, b2: int) -> ManifoldPresentation:
    """Seifert fibred over the disk with fibres of type (a1, b1), (a2, b2).

    Generators c1, c2, t (t the regular fibre); boundary basis: the fibre
    and the boundary of the base, which is c1 + c2.
    """
    return ManifoldPresentation(
        3, ((a1, 0, b1), (0, a2, b2)), (1,), ((0, 1), (0, 1), (1, 0))
    )


def _sum(A: ManifoldPresentation, B: ManifoldPresentation, merge: bool) -> ManifoldPresentation:
    """Connected sum, or boundary-connected sum along the adjacent components."""
    n = A.generators + B.generators
    rels = [r + (0,) * B.generators for r in A.relations]
    rels += [(0,) * A.generators + r for r in B.relations]
    wa, wb = 2 * A.genus, 2 * B.genus
    inc = [r + (0,) * wb for r in A.inclusion] + [(0,) * wa + r for r in B.inclusion]
    genera = list(A.boundary_genera) + list(B.boundary_genera)
    if merge and A.boundary_genera and B.boundary_genera:
        k = len(A.boundary_genera) - 1
        genera[k : k + 2] = [genera[k] + genera[k + 1]]
    return ManifoldPresentation(n, tuple(rels), tuple(genera), tuple(inc))


def _lens(n: int) -> ManifoldPresentation:
    return ManifoldPresentation(1, ((n,),), (), ((),))


def _random_unimodular(rng: random.Random, n: int, steps: int) -> List[List[int]]:
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        P[i] = [x + c * y for x, y in zip(P[i], P[j])]
    if n and rng.random() < 0.5:
        k = rng.randrange(n)
        P[k] = [-x for x in P[k]]
    return P


def _random_symplectic(rng: random.Random, g: int, steps: int) -> List[List[int]]:
    n2 = 2 * g
    S = [[int(i == j) for j in range(n2)] for i in range(n2)]
    for _ in range(steps):
        v = [rng.choice((-1, 0, 0, 1)) for _ in range(n2)]
        if not any(v):
            continue
        T = transvection_matrix(v, rng.choice((-1, 1)))
        S = [[sum(S[i][k] * T[k][j] for k in range(n2)) for j in range(n2)] for i in range(n2)]
    return S


def random_presentation(
    rng: random.Random, max_genus: int = 3, max_exponent: int = 8
) -> ManifoldPresentation:
    """A presentation of an actual compact orientable 3-manifold.

    Built from handlebodies, Seifert fibred pieces over the disk with two
    exceptional fibres, surface products and lens-space summands, combined
    by (boundary) connected sums, then disguised by random symplectic
    changes of each boundary basis and unimodular changes of generators.
    """
    budget = rng.randint(1, max_genus)
    pieces = []
    while budget > 0:
        kind = rng.choice(("handlebody", "seifert", "seifert", "product"))
        if kind == "handlebody":
            h = rng.randint(1, budget)
            pieces.append(_handlebody(h))
            budget -= h
        elif kind == "seifert":
            fib = []
            for _ in range(2):
                a = rng.randint(1, max_exponent)
                b = rng.choice([x for x in range(-a, a + 1) if x and gcd(a, x) == 1] or [1])
                fib += [a, b]
            pieces.append(_seifert(*fib))
            budget -= 1
        else:
            h = rng.randint(1, budget)
            g = rng.randint(0, 1)
            L, rot = surface_graph(g, h)
            pieces.append(product_presentation(build_surface(L, rot)))
            budget -= h
    for _ in range(rng.randint(0, 2) if max_exponent >= 2 else 0):
        pieces.insert(rng.randrange(len(pieces) + 1), _lens(rng.randint(2, max_exponent)))
    M = pieces[0]
    for P in pieces[1:]:
        M = _sum(M, P, merge=rng.random() < 0.5)

    # disguise: per-component symplectic basis change, generator change
    n2 = 2 * M.genus
    S = [[0] * n2 for _ in range(n2)]
    for (lo, hi), g in zip(M.component_blocks(), M.boundary_genera):
        block = _random_symplectic(rng, g, rng.randint(0, 4))
        for i in range(2 * g):
            for j in range(2 * g):
                S[lo + i][lo + j] = block[i][j]
    inc = [[sum(r[k] * S[k][j] for k in range(n2)) for j in range(n2)] for r in M.inclusion]
    n = M.generators
    P = _random_unimodular(rng, n, rng.randint(0, 4))
    inc = [[sum(P[i][k] * inc[k][j] for k in range(n)) for j in range(n2)] for i in range(n)]
    rels = [[sum(P[i][k] * r[k] for k in range(n)) for i in range(n)] for r in M.relations]
    U = _random_unimodular(rng, len(rels), rng.randint(0, 3))
    rels = [[sum(U[i][k] * rels[k][j] for k in range(len(rels))) for j in range(n)] for i in range(len(rels))]
    return ManifoldPresentation(n, tuple(map(tuple, rels)), M.boundary_genera, tuple(map(tuple, inc)), True, "random")



def random_lagrangian(rng: random.Random, M: ManifoldPresentation, steps: int = 6) -> List[List[int]]:
    """Rows spanning a Z-Lagrangian of H_1(dM) that splits over the components.

    On each component the e-columns of a random symplectic matrix (a product
    of random transvections) are taken.
    """
    n2 = 2 * M.genus
    rows = []
    for (lo, hi), g in zip(M.component_blocks(), M.boundary_genera):
        S = _random_symplectic(rng, g, rng.randint(0, steps))
        for j in range(g):
            v = [0] * n2
            for i in range(2 * g):
                v[lo + i] = S[i][2 * j]
            rows.append(v)
    return rows
