"""Graphs, rotation systems and the products L x S^1.

Edge ``e = (u, v)`` has darts ``2e`` (leaving u) and ``2e + 1`` (leaving v);
loops and multi-edges are allowed. A rotation system lists, for each vertex,
the cyclic order of the darts leaving it. Faces are the orbits of
``d -> rot_next(d ^ 1)``.

A rotation system plus a twist bit per edge defines a surface built from
one disk per vertex and one band per edge; it deformation retracts to the
graph. Its boundary curves are traced on *flags* ``(d, s)``: the side ``s``
of the band end at dart ``d``, where side 0 faces the next dart
counter-clockwise.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .abelian import CoefficientRing
from .closure import ManifoldPresentation, SearchCapExceeded, lower_bound_field

__all__ = [
    "Graph",
    "RotationSystem",
    "SurfaceDescriptor",
    "GenusResult",
    "trace_faces",
    "graph_genus",
    "minimum_genus",
    "build_surface",
    "product_presentation",
    "min_closed_h1_dim",
    "surface_graph",
    "crosscap_graph",
    "named_graph",
    "NAMED_GRAPHS",
    "DEFAULT_GENUS_CAP",
]

DEFAULT_GENUS_CAP = 10_000_000


def _genus_cap() -> int:
    return int(os.environ.get("POLYEMBED_GENUS_CAP", DEFAULT_GENUS_CAP))


@dataclass(frozen=True)
class Graph:
    n: int
    edges: Tuple[Tuple[int, int], ...]
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
        if self.n == 0:
            raise ValueError("empty graph")
        if not self.is_connected():
            raise ValueError("graph is disconnected")

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence], names: Optional[Sequence] = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        labels = list(names) if names is not None else sorted({x for e in edges for x in e}, key=lambda x: (isinstance(x, str), x))
        ids = {x: k for k, x in enumerate(labels)}
        return cls(len(labels), tuple((ids[u], ids[v]) for u, v in edges), tuple(str(x) for x in labels))

    @classmethod
    def from_dict(cls, data: Mapping) -> "Graph":
        """``{"edges": [[u, v], ...]}`` or ``{"adjacency": {u: [v, ...]}}``.

        In an adjacency list every edge appears at both ends; a loop at u
        appears twice in the list of u.
        """
        if "edges" in data:
            return cls.from_edges(data["edges"], data.get("vertices"))
        if "adjacency" not in data:
            raise ValueError("graph needs 'edges' or 'adjacency'")
        adj = {str(k): [str(x) for x in v] for k, v in data["adjacency"].items()}
        labels = sorted(adj, key=lambda x: (not x.lstrip("-").isdigit(), int(x) if x.lstrip("-").isdigit() else 0, x))
        edges = []
        for u in labels:
            for v in adj[u]:
                if v not in adj:
                    raise ValueError(f"vertex {v} listed as neighbour of {u} but has no entry")
        for i, u in enumerate(labels):
            for v in labels[i:]:
                a = adj[u].count(v)
                b = adj[v].count(u)
                if u == v:
                    if a % 2:
                        raise ValueError(f"loop at {u} must be listed twice")
                    edges += [(u, u)] * (a // 2)
                elif a != b:
                    raise ValueError(f"adjacency of {u} and {v} is not symmetric")
                else:
                    edges += [(u, v)] * a
        return cls.from_edges(edges, labels)

    def to_dict(self) -> dict:
        return {"vertices": list(self.label(v) for v in range(self.n)), "edges": [[self.label(u), self.label(v)] for u, v in self.edges]}

    def label(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def darts_at(self, v: int) -> Tuple[int, ...]:
        out = []
        for e, (a, b) in enumerate(self.edges):
            if a == v:
                out.append(2 * e)
            if b == v:
                out.append(2 * e + 1)
        return tuple(out)

    def tail(self, d: int) -> int:
        return self.edges[d >> 1][d & 1]

    def degree(self, v: int) -> int:
        return len(self.darts_at(v))

    def is_connected(self) -> bool:
        adj: Dict[int, List[int]] = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def betti_1(self) -> int:
        return self.num_edges - self.n + 1

    def girth(self) -> Optional[int]:
        """Length of a shortest cycle (loops count 1, parallel edges 2)."""
        if any(u == v for u, v in self.edges):
            return 1
        if len({tuple(sorted(e)) for e in self.edges}) < len(self.edges):
            return 2
        adj: Dict[int, List[int]] = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        best = None
        for s in range(self.n):
            dist = {s: 0}
            parent = {s: -1}
            q = deque([s])
            while q:
                x = q.popleft()
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        parent[y] = x
                        q.append(y)
                    elif parent[x] != y:
                        c = dist[x] + dist[y] + 1
                        if best is None or c < best:
                            best = c
        return best

    def is_path_or_cycle(self) -> bool:
        """Homeomorphic to a point, I or S^1 (after forgetting degree-2 vertices)."""
        return self.betti_1() <= 1 and all(self.degree(v) <= 2 for v in range(self.n))

    def spanning_tree(self) -> Tuple[int, ...]:
        """Edges of a deterministic DFS spanning tree."""
        inc: Dict[int, List[Tuple[int, int]]] = {v: [] for v in range(self.n)}
        for e, (u, v) in enumerate(self.edges):
            inc[u].append((e, v))
            inc[v].append((e, u))
        seen = {0}
        tree = []

        def dfs(x):
            for e, y in inc[x]:
                if y not in seen:
                    seen.add(y)
                    tree.append(e)
                    dfs(y)

        dfs(0)
        return tuple(sorted(tree))


@dataclass(frozen=True)
class RotationSystem:
    """``rotation[v]`` is the counter-clockwise cyclic order of darts at v."""

    rotation: Tuple[Tuple[int, ...], ...]

    @classmethod
    def default(cls, L: Graph) -> "RotationSystem":
        return cls(tuple(L.darts_at(v) for v in range(L.n)))

    def successor_map(self) -> Dict[int, int]:
        nxt = {}
        for cyc in self.rotation:
            for k, d in enumerate(cyc):
                nxt[d] = cyc[(k + 1) % len(cyc)]
        return nxt

    def validate(self, L: Graph) -> None:
        for v in range(L.n):
            if sorted(self.rotation[v]) != sorted(L.darts_at(v)):
                raise ValueError(f"rotation at vertex {L.label(v)} does not list its darts exactly once")


def _face_count(nxt: Mapping[int, int], ndarts: int) -> int:
    seen = bytearray(ndarts)
    faces = 0
    for d in range(ndarts):
        if seen[d]:
            continue
        faces += 1
        x = d
        while not seen[x]:
            seen[x] = 1
            x = nxt[x ^ 1]
    return faces


def trace_faces(L: Graph, rot: RotationSystem) -> int:
    """Number of faces of the embedding given by ``rot``."""
    rot.validate(L)
    return _face_count(rot.successor_map(), 2 * L.num_edges)


def _cyclic_orders(darts: Sequence[int], mirror_free: bool = False) -> List[Tuple[int, ...]]:
    if len(darts) <= 1:
        return [tuple(darts)]
    first, *rest = darts
    out = []
    for p in itertools.permutations(rest):
        if mirror_free and len(darts) >= 3 and p[0] > p[-1]:
            continue
        out.append((first,) + p)
    return out


@dataclass(frozen=True)
class GenusResult:
    genus: int
    rotation: RotationSystem
    faces: int
    examined: int


def minimum_genus(L: Graph, cap: Optional[int] = None) -> GenusResult:
    """Exhaustive minimum-genus search with mirror pruning at a max-degree vertex."""
    cap = _genus_cap() if cap is None else cap
    V, E = L.n, L.num_edges
    if E == 0:
        return GenusResult(0, RotationSystem.default(L), 1, 1)
    degs = [L.degree(v) for v in range(V)]
    pivot = max(range(V), key=lambda v: (degs[v], -v))
    total = 1
    for v in range(V):
        c = factorial(max(degs[v] - 1, 0))
        if v == pivot and degs[v] >= 3:
            c //= 2
        total *= c
    if total > cap:
        raise SearchCapExceeded(f"{total} rotation systems exceed the search cap {cap}")
    girth = L.girth()
    max_faces = 2 * E // girth if girth else 1
    floor_genus = max(0, -(-(2 - V + E - max_faces) // 2))
    choices = [_cyclic_orders(L.darts_at(v), mirror_free=(v == pivot)) for v in range(V)]
    best = None
    examined = 0
    nd = 2 * E
    for combo in itertools.product(*choices):
        examined += 1
        nxt = {}
        for cyc in combo:
            for k, d in enumerate(cyc):
                nxt[d] = cyc[(k + 1) % len(cyc)]
        f = _face_count(nxt, nd)
        if best is None or f > best[0]:
            best = (f, combo)
            if (2 - V + E - f) // 2 == floor_genus:
                break
    f, combo = best
    return GenusResult((2 - V + E - f) // 2, RotationSystem(tuple(combo)), f, examined)


def graph_genus(L: Graph, cap: Optional[int] = None) -> int:
    return minimum_genus(L, cap).genus


# -- disks and bands ------------------------------------------------------


@dataclass(frozen=True)
class SurfaceDescriptor:
    graph: Graph
    rotation: RotationSystem
    twists: Tuple[int, ...]
    orientable: bool
    boundary_curves: Tuple[Tuple[Tuple[int, int], ...], ...]  # per curve: (edge, +-1) traversals

    @property
    def euler_characteristic(self) -> int:
        return self.graph.n - self.graph.num_edges

    @property
    def boundary_components(self) -> int:
        return len(self.boundary_curves)

    @property
    def genus(self) -> int:
        """Orientable genus, or the number of crosscaps when non-orientable."""
        k = 2 - self.boundary_components - self.euler_characteristic
        return k // 2 if self.orientable else k

    def to_dict(self) -> dict:
        return {
            "orientable": self.orientable,
            "genus" if self.orientable else "crosscaps": self.genus,
            "boundary_components": self.boundary_components,
            "euler_characteristic": self.euler_characteristic,
        }


def _switching(L: Graph, twists: Sequence[int]) -> Optional[List[int]]:
    """Vertex signs s with s_u + s_v = a_e for every edge, if they exist."""
    inc: Dict[int, List[Tuple[int, int]]] = {v: [] for v in range(L.n)}
    for e, (u, v) in enumerate(L.edges):
        inc[u].append((v, twists[e]))
        inc[v].append((u, twists[e]))
    sign = [None] * L.n
    sign[0] = 0
    stack = [0]
    while stack:
        x = stack.pop()
        for y, a in inc[x]:
            want = sign[x] ^ a
            if sign[y] is None:
                sign[y] = want
                stack.append(y)
            elif sign[y] != want:
                return None
    return sign


def build_surface(L: Graph, rot: RotationSystem, twists: Optional[Sequence[int]] = None) -> SurfaceDescriptor:
    """The disks-and-bands surface of ``(L, rot, twists)``."""
    rot.validate(L)
    tw = tuple(int(bool(a)) for a in (twists or [0] * L.num_edges))
    if len(tw) != L.num_edges:
        raise ValueError("one twist bit per edge is required")
    signs = _switching(L, tw)
    orientable = signs is not None
    if orientable:
        # flip the disks with sign 1; every band becomes untwisted, and
        # walks started on side-0 flags follow the induced boundary orientation
        eff = RotationSystem(
            tuple(tuple(reversed(c)) if signs[v] else c for v, c in enumerate(rot.rotation))
        )
        eff_tw = (0,) * L.num_edges
    else:
        eff, eff_tw = rot, tw
    nxt = eff.successor_map()
    prv = {b: a for a, b in nxt.items()}
    nd = 2 * L.num_edges

    def corner(f):
        d, s = f
        return (nxt[d], 1) if s == 0 else (prv[d], 0)

    def band(f):
        d, s = f
        return (d ^ 1, s) if eff_tw[d >> 1] else (d ^ 1, 1 - s)

    seen = set()
    curves = []
    for s in (0, 1):
        for d in range(nd):
            f = (d, s)
            if f in seen:
                continue
            walk = []
            x = f
            while x not in seen:
                y = band(x)
                seen.add(x)
                seen.add(y)
                walk.append((x[0] >> 1, 1 if x[0] % 2 == 0 else -1))
                x = corner(y)
            curves.append(tuple(walk))
    if not nd:
        curves.append(())  # a lone disk
    return SurfaceDescriptor(L, rot, tw, orientable, tuple(curves))


def surface_graph(g: int, h: int) -> Tuple[Graph, RotationSystem]:
    """One vertex with g interleaved loop pairs and h - 1 separate loops.

    Its band surface is orientable of genus g with h boundary curves.
    """
    if h < 1:
        raise ValueError("need at least one boundary component")
    m = 2 * g + h - 1
    L = Graph(1, tuple((0, 0) for _ in range(m)), ("o",))
    order = []
    for i in range(g):
        x, y = 2 * i, 2 * i + 1
        order += [2 * x, 2 * y, 2 * x + 1, 2 * y + 1]
    for e in range(2 * g, m):
        order += [2 * e, 2 * e + 1]
    return L, RotationSystem((tuple(order),))


def crosscap_graph(k: int, h: int) -> Tuple[Graph, RotationSystem, Tuple[int, ...]]:
    """One vertex with k twisted loops and h - 1 untwisted ones (k crosscaps, h holes)."""
    if h < 1 or k < 1:
        raise ValueError("need k >= 1 crosscaps and h >= 1 boundary components")
    m = k + h - 1
    L = Graph(1, tuple((0, 0) for _ in range(m)), ("o",))
    order = []
    for e in range(m):
        order += [2 * e, 2 * e + 1]
    twists = tuple(1 if e < k else 0 for e in range(m))
    return L, RotationSystem((tuple(order),)), twists


def product_presentation(K: SurfaceDescriptor) -> ManifoldPresentation:
    """K x S^1: H_1 = H_1(K) + Z<t>, one torus per boundary curve of K.

    H_1(K) = H_1(L) has the fundamental cycles of a DFS spanning tree as
    basis; a cycle's coordinates are its coefficients on non-tree edges.
    """
    if not K.boundary_curves:
        raise ValueError("K has no boundary")
    L = K.graph
    tree = set(L.spanning_tree())
    cotree = [e for e in range(L.num_edges) if e not in tree]
    col = {e: k for k, e in enumerate(cotree)}
    n = len(cotree) + 1
    columns = []
    for curve in K.boundary_curves:
        a = [0] * n
        for e, sgn in curve:
            if e in col:
                a[col[e]] += sgn
        t = [0] * n
        t[-1] = 1
        columns += [a, t]
    inc = [[c[r] for c in columns] for r in range(n)]
    genera = [1] * len(K.boundary_curves)
    return ManifoldPresentation(n, (), tuple(genera), tuple(map(tuple, inc)), K.orientable)


def min_closed_h1_dim(L: Graph, F: CoefficientRing, cap: Optional[int] = None) -> int:
    """Least dim H_1(Q; F) over closed orientable Q containing L x S^1.

    Equals twice the genus of L; the value is cross-checked against the
    lower bound of the product presentation of a minimum-genus band surface.
    """
    if not F.is_field:
        raise ValueError("a field is required")
    if L.is_path_or_cycle():
        return 0
    res = minimum_genus(L, cap)
    K = build_surface(L, res.rotation)
    bound = lower_bound_field(product_presentation(K), F)
    if bound != 2 * res.genus:
        raise AssertionError(f"lower bound {bound} disagrees with 2 * genus = {2 * res.genus}")
    return 2 * res.genus


# -- named graphs ---------------------------------------------------------


def _complete(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def _k33() -> Graph:
    return Graph(6, tuple((i, j) for i in range(3) for j in range(3, 6)))


def _petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


NAMED_GRAPHS = {
    "k4": lambda: _complete(4),
    "k5": lambda: _complete(5),
    "k33": _k33,
    "petersen": _petersen,
    "theta": lambda: Graph(2, ((0, 1), (0, 1), (0, 1))),
    "c3": lambda: _complete(3),
}


def named_graph(name: str) -> Graph:
    try:
        return NAMED_GRAPHS[name.lower()]()
    except KeyError:
        raise ValueError(f"unknown graph {name!r}; known: {', '.join(sorted(NAMED_GRAPHS))}") from None
