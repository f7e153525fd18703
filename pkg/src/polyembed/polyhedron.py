"""Finite 2-dimensional simplicial complexes and their singular structure.

A vertex is classified by its link graph:

* a circle or an arc: the vertex has a disk neighbourhood (interior or
  boundary point of a surface);
* a theta graph with n >= 3 parallel paths: the vertex sits on the binding
  of an n-page book;
* anything else: a branch point.

The singular graph is the union of edges carrying three or more triangles.
Base points are the branch points plus the smallest vertex of every
component of the singular graph that contains no branch point.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import _matrix as mx
from .abelian import FGAbelianGroup

__all__ = [
    "ComplexError",
    "SimplicialComplex2",
    "CheckedComplex",
    "LinkGraph",
    "Arc",
    "SingularStructure",
    "complex_from_dict",
    "validate_complex",
    "barycentric_subdivision",
    "link_graph",
    "singular_structure",
    "euler_characteristic",
    "first_homology",
]


class ComplexError(ValueError):
    """Raised for malformed or unsupported input complexes."""


def _label_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


@dataclass(frozen=True)
class SimplicialComplex2:
    """Vertices are 0..n-1; ``names`` keeps the user-facing labels."""

    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]
    triangles: Tuple[Tuple[int, int, int], ...]
    names: Tuple[str, ...] = ()

    @cached_property
    def edge_index(self) -> Dict[Tuple[int, int], int]:
        return {e: k for k, e in enumerate(self.edges)}

    @cached_property
    def edge_triangles(self) -> Dict[Tuple[int, int], Tuple[int, ...]]:
        out: Dict[Tuple[int, int], List[int]] = defaultdict(list)
        for k, (a, b, c) in enumerate(self.triangles):
            out[(a, b)].append(k)
            out[(a, c)].append(k)
            out[(b, c)].append(k)
        return {e: tuple(out.get(e, ())) for e in self.edges}

    @cached_property
    def vertex_triangles(self) -> Dict[int, Tuple[int, ...]]:
        out: Dict[int, List[int]] = defaultdict(list)
        for k, t in enumerate(self.triangles):
            for v in t:
                out[v].append(k)
        return {v: tuple(out.get(v, ())) for v in self.vertices}

    @cached_property
    def neighbours(self) -> Dict[int, Tuple[int, ...]]:
        out: Dict[int, List[int]] = defaultdict(list)
        for a, b in self.edges:
            out[a].append(b)
            out[b].append(a)
        return {v: tuple(sorted(out.get(v, ()))) for v in self.vertices}

    def name(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    def pages(self, a: int, b: int) -> Tuple[int, ...]:
        """Triangles containing the edge ab."""
        return self.edge_triangles[(a, b) if a < b else (b, a)]

    def third_vertex(self, t: int, a: int, b: int) -> int:
        (x,) = [v for v in self.triangles[t] if v != a and v != b]
        return x

    def to_dict(self) -> dict:
        return {
            "vertices": [self.name(v) for v in self.vertices],
            "edges": [[self.name(a), self.name(b)] for a, b in self.edges],
            "triangles": [[self.name(v) for v in t] for t in self.triangles],
        }


def complex_from_dict(data: Mapping) -> SimplicialComplex2:
    """Build a complex from ``{"triangles": [...], "edges": [...], "vertices": [...]}``.

    ``edges`` and ``vertices`` are optional; when they are given the face
    closure is checked rather than completed.
    """
    if "triangles" not in data:
        raise ComplexError("missing field 'triangles'")
    tris_raw = [tuple(t) for t in data["triangles"]]
    for t in tris_raw:
        if len(t) != 3 or len(set(t)) != 3:
            raise ComplexError(f"degenerate triangle {list(t)}")
    edges_raw = [tuple(e) for e in data["edges"]] if "edges" in data else None
    if edges_raw is not None:
        for e in edges_raw:
            if len(e) != 2 or e[0] == e[1]:
                raise ComplexError(f"degenerate edge {list(e)}")
    verts_raw = list(data["vertices"]) if "vertices" in data else None

    labels = set()
    for t in tris_raw:
        labels.update(t)
    for e in edges_raw or ():
        labels.update(e)
    labels.update(verts_raw or ())
    order = sorted(labels, key=_label_key)
    ids = {x: k for k, x in enumerate(order)}

    tris = [tuple(sorted(ids[x] for x in t)) for t in tris_raw]
    if len(set(tris)) != len(tris):
        raise ComplexError("duplicate triangle")
    needed_edges = {e for a, b, c in tris for e in ((a, b), (a, c), (b, c))}
    if edges_raw is None:
        edges = sorted(needed_edges)
    else:
        edges = [tuple(sorted((ids[a], ids[b]))) for a, b in edges_raw]
        if len(set(edges)) != len(edges):
            raise ComplexError("duplicate edge")
        missing = needed_edges - set(edges)
        if missing:
            a, b = min(missing)
            raise ComplexError(
                f"face closure violated: edge [{order[a]}, {order[b]}] of a triangle is missing"
            )
        edges = sorted(edges)
    if verts_raw is not None:
        listed = {ids[x] for x in verts_raw}
        if len(listed) != len(verts_raw):
            raise ComplexError("duplicate vertex")
        used = {v for e in edges for v in e}
        if used - listed:
            v = min(used - listed)
            raise ComplexError(f"face closure violated: vertex {order[v]} is missing")
    return SimplicialComplex2(
        tuple(range(len(order))),
        tuple(edges),
        tuple(sorted(tris)),
        tuple(str(x) for x in order),
    )


def barycentric_subdivision(K: SimplicialComplex2) -> SimplicialComplex2:
    """First barycentric subdivision; new vertex names are ``[v]``, ``[a,b]``, ``[a,b,c]``."""
    simplices: List[Tuple[int, ...]] = [(v,) for v in K.vertices]
    simplices += list(K.edges) + list(K.triangles)
    ids = {s: k for k, s in enumerate(simplices)}
    names = tuple("[" + ",".join(K.name(v) for v in s) + "]" for s in simplices)

    def faces(s):
        return [f for r in range(1, len(s)) for f in combinations(s, r)]

    edges = set()
    tris = []
    for s in simplices:
        for f in faces(s):
            edges.add(tuple(sorted((ids[f], ids[s]))))
    for t in K.triangles:
        for a, b, c in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
            v = t[a]
            for w in (t[b], t[c]):
                e = tuple(sorted((v, w)))
                tris.append(tuple(sorted((ids[(v,)], ids[e], ids[t]))))
    return SimplicialComplex2(
        tuple(range(len(simplices))), tuple(sorted(edges)), tuple(sorted(tris)), names
    )


@dataclass(frozen=True)
class CheckedComplex:
    """A validated, connected, pure 2-complex (normally subdivided once)."""

    complex: SimplicialComplex2
    original: SimplicialComplex2
    wedge_vertices: Tuple[int, ...] = ()


def _components(vertices: Iterable[int], edges: Iterable[Tuple[int, int]]) -> List[List[int]]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: Dict[int, List[int]] = defaultdict(list)
    for v in parent:
        groups[find(v)].append(v)
    return sorted(sorted(g) for g in groups.values())


def validate_complex(P, subdivide: bool = True) -> CheckedComplex:
    """Check closure, purity and connectedness; subdivide once.

    Vertices whose link is disconnected are reported in ``wedge_vertices``
    rather than rejected here; the thickening enumeration rejects them.
    """
    K = P if isinstance(P, SimplicialComplex2) else complex_from_dict(P)
    if not K.triangles:
        raise ComplexError("complex has no triangles")
    for e, ts in K.edge_triangles.items():
        if not ts:
            raise ComplexError(
                f"edge [{K.name(e[0])}, {K.name(e[1])}] lies in no triangle (complex is not pure 2-dimensional)"
            )
    for v in K.vertices:
        if not K.vertex_triangles[v]:
            raise ComplexError(f"vertex {K.name(v)} lies in no triangle")
    if len(_components(K.vertices, K.edges)) != 1:
        raise ComplexError("complex is disconnected")
    S = barycentric_subdivision(K) if subdivide else K
    wedges = tuple(v for v in S.vertices if not link_graph(S, v).is_connected())
    return CheckedComplex(S, K, wedges)


# -- links ----------------------------------------------------------------


@dataclass(frozen=True)
class LinkGraph:
    """Link of ``center``: vertices are neighbours, edges are triangles.

    Every link edge is labelled by the index of the triangle it comes from,
    so rotations around a link vertex w are cyclic orders of the pages at
    the edge ``center``-w.
    """

    center: int
    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int], ...]  # (triangle, w, x) with w < x

    @cached_property
    def incident(self) -> Dict[int, Tuple[int, ...]]:
        out: Dict[int, List[int]] = {w: [] for w in self.vertices}
        for t, w, x in self.edges:
            out[w].append(t)
            out[x].append(t)
        return {w: tuple(sorted(ts)) for w, ts in out.items()}

    @cached_property
    def ends(self) -> Dict[int, Tuple[int, int]]:
        return {t: (w, x) for t, w, x in self.edges}

    def other_end(self, t: int, w: int) -> int:
        a, b = self.ends[t]
        return b if a == w else a

    def degree(self, w: int) -> int:
        return len(self.incident[w])

    def is_connected(self) -> bool:
        return len(_components(self.vertices, [(w, x) for _, w, x in self.edges])) <= 1

    def branch_vertices(self) -> Tuple[int, ...]:
        return tuple(w for w in self.vertices if self.degree(w) >= 3)

    @cached_property
    def kind(self) -> str:
        """One of ``circle``, ``arc``, ``theta``, ``disconnected``, ``other``."""
        if not self.is_connected():
            return "disconnected"
        degs = [self.degree(w) for w in self.vertices]
        if all(d == 2 for d in degs):
            return "circle"
        if sorted(degs)[:2] == [1, 1] and all(d == 2 for d in sorted(degs)[2:]):
            return "arc"
        big = [w for w in self.vertices if self.degree(w) != 2]
        if len(big) == 2 and self.degree(big[0]) == self.degree(big[1]) >= 3:
            if self.theta_paths(big[0], big[1]) is not None:
                return "theta"
        return "other"

    def theta_paths(self, u: int, w: int) -> Optional[Dict[int, int]]:
        """Follow each link edge at u through degree-2 vertices.

        Returns ``{first triangle: last triangle}`` when every path ends at w,
        else None.
        """
        out = {}
        for t in self.incident[u]:
            prev, cur, edge = u, self.other_end(t, u), t
            while cur != w:
                if self.degree(cur) != 2 or cur == u:
                    return None
                (edge,) = [s for s in self.incident[cur] if s != edge]
                prev, cur = cur, self.other_end(edge, cur)
            out[t] = edge
        return out


def link_graph(P: SimplicialComplex2, v: int) -> LinkGraph:
    edges = []
    for t in P.vertex_triangles[v]:
        w, x = [u for u in P.triangles[t] if u != v]
        edges.append((t, w, x))
    return LinkGraph(v, P.neighbours[v], tuple(sorted(edges)))


# -- singular structure ---------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """Closure of a component of P' minus P''.

    ``path`` lists the vertices from ``start`` to ``end`` (equal for loop
    arcs). ``page_map`` sends each triangle on the first edge of the path to
    the triangle of the same sheet on the last edge.
    """

    start: int
    end: int
    path: Tuple[int, ...]
    pages: int
    page_map: Tuple[Tuple[int, int], ...]

    @property
    def first_link_vertex(self) -> int:
        return self.path[1]

    @property
    def last_link_vertex(self) -> int:
        return self.path[-2]

    @property
    def is_loop(self) -> bool:
        return self.start == self.end


@dataclass(frozen=True)
class SingularStructure:
    singular_edges: Tuple[Tuple[int, int], ...]
    singular_vertices: Tuple[int, ...]  # P'
    branch_points: Tuple[int, ...]  # P''
    base_points: Tuple[int, ...]  # F
    arcs: Tuple[Arc, ...]
    vertex_kind: Mapping[int, str] = field(default_factory=dict, compare=False)

    def to_dict(self, P: SimplicialComplex2) -> dict:
        n = P.name
        return {
            "singular_edges": [[n(a), n(b)] for a, b in self.singular_edges],
            "branch_points": [n(v) for v in self.branch_points],
            "base_points": [n(v) for v in self.base_points],
            "arcs": [
                {"start": n(a.start), "end": n(a.end), "length": len(a.path) - 1, "pages": a.pages}
                for a in self.arcs
            ],
        }


def singular_structure(P: SimplicialComplex2) -> SingularStructure:
    links = {v: link_graph(P, v) for v in P.vertices}
    kinds = {v: links[v].kind for v in P.vertices}
    sing_edges = tuple(e for e in P.edges if len(P.edge_triangles[e]) >= 3)
    on_edges = {v for e in sing_edges for v in e}
    odd = {v for v in P.vertices if kinds[v] not in ("circle", "arc", "theta")}
    p1 = sorted(on_edges | odd)
    p2 = sorted(v for v in p1 if kinds[v] != "theta")
    base = set(p2)
    for comp in _components(p1, sing_edges):
        if not base.intersection(comp):
            base.add(min(comp))
    F = tuple(sorted(base))

    sing_adj: Dict[int, List[int]] = defaultdict(list)
    for a, b in sing_edges:
        sing_adj[a].append(b)
        sing_adj[b].append(a)
    used = set()
    arcs = []
    for A in F:
        for x1 in sorted(sing_adj[A]):
            e0 = (min(A, x1), max(A, x1))
            if e0 in used:
                continue
            used.add(e0)
            path = [A, x1]
            mapping = {t: t for t in P.pages(A, x1)}
            prev, cur = A, x1
            while cur not in base:
                nxt_candidates = [y for y in sing_adj[cur] if y != prev]
                if len(nxt_candidates) != 1:
                    raise ComplexError(f"vertex {P.name(cur)} is not a book point")
                nxt = nxt_candidates[0]
                through = links[cur].theta_paths(prev, nxt)
                if through is None:
                    raise ComplexError(f"link of {P.name(cur)} is not a theta graph")
                mapping = {s: through[t] for s, t in mapping.items()}
                prev, cur = cur, nxt
                used.add((min(prev, cur), max(prev, cur)))
                path.append(cur)
            arcs.append(
                Arc(A, cur, tuple(path), len(mapping), tuple(sorted(mapping.items())))
            )
    return SingularStructure(sing_edges, tuple(p1), tuple(p2), F, tuple(arcs), kinds)


# -- homology -------------------------------------------------------------


def euler_characteristic(P: SimplicialComplex2) -> int:
    return len(P.vertices) - len(P.edges) + len(P.triangles)


def first_homology(P: SimplicialComplex2) -> FGAbelianGroup:
    """H_1(P; Z) from the simplicial chain complex."""
    E = len(P.edges)
    d1 = [[0] * E for _ in P.vertices]
    for k, (a, b) in enumerate(P.edges):
        d1[a][k] -= 1
        d1[b][k] += 1
    d2 = [[0] * len(P.triangles) for _ in range(E)]
    idx = P.edge_index
    for k, (a, b, c) in enumerate(P.triangles):
        d2[idx[(b, c)]][k] += 1
        d2[idx[(a, c)]][k] -= 1
        d2[idx[(a, b)]][k] += 1
    r1 = mx.integer_rank(d1, E)
    diag = mx.smith_diagonal(d2, len(P.triangles))
    free = E - r1 - len(diag)
    return FGAbelianGroup(free, tuple(d for d in diag if d != 1))
