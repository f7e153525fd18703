"""Orientable 3-thickenings of 2-polyhedra, one per class of SE(P).

A thickening is described by planar rotation systems on the links of the
base points. Along each singular arc the cyclic order of pages seen from one
end must arrive reversed at the other end (orientable faithfulness).

The boundary of a thickening is assembled as a polygon complex:

* two hexagonal *plates* per triangle, one on each side;
* one rectangular *strip* between cyclically consecutive pages at every edge
  (a single strip wraps a free edge);
* one *cap* per face of the planar link embedding at every vertex.

A 0-cell is a corner ``(t, side, v, w)``: the side ``side`` of triangle ``t``
near vertex ``v`` on the edge towards ``w``. Rotations at book vertices are
propagated from the base points, rotations around edges with at most two
pages are trivial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .abelian import FGAbelianGroup
from .polyhedron import (
    CheckedComplex,
    LinkGraph,
    SimplicialComplex2,
    SingularStructure,
    first_homology,
    link_graph,
    singular_structure,
    validate_complex,
)

__all__ = [
    "ThickeningRejected",
    "AssemblyInconsistency",
    "RotationEmbedding",
    "FaithfulCollection",
    "Enumeration",
    "BoundarySurface",
    "ThickeningDescriptor",
    "planar_rotations",
    "enumerate_se",
    "boundary_surface",
    "thicken_all",
    "canonical_cycle",
]


class ThickeningRejected(ValueError):
    """Input outside the supported class (e.g. a disconnected link)."""


class AssemblyInconsistency(RuntimeError):
    pass


def canonical_cycle(seq: Sequence[int]) -> Tuple[int, ...]:
    """Rotate a cyclic sequence so that its least element comes first."""
    seq = tuple(seq)
    if not seq:
        return seq
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


def _reverse(seq: Sequence[int]) -> Tuple[int, ...]:
    return canonical_cycle(tuple(reversed(seq)))


@dataclass(frozen=True)
class RotationEmbedding:
    """A genus-0 rotation system on a link graph.

    ``rotation`` maps each link vertex to the cyclic order of its incident
    link edges (i.e. of the pages around the corresponding edge).
    """

    link: LinkGraph = field(compare=False, repr=False)
    rotation: Tuple[Tuple[int, Tuple[int, ...]], ...]

    def at(self, w: int) -> Tuple[int, ...]:
        return dict(self.rotation)[w]

    def as_dict(self) -> Dict[int, Tuple[int, ...]]:
        return dict(self.rotation)

    def key(self):
        return self.rotation


def _trace_link_faces(link: LinkGraph, rot: Dict[int, Tuple[int, ...]]) -> List[List[Tuple[int, int]]]:
    """Faces as lists of corners ``(w, t)``: the sector at w after link edge t."""
    succ = {}
    for w, cyc in rot.items():
        for k, t in enumerate(cyc):
            succ[(w, t)] = cyc[(k + 1) % len(cyc)]
    seen = set()
    faces = []
    for start in sorted(succ):
        if start in seen:
            continue
        face = []
        c = start
        while c not in seen:
            seen.add(c)
            face.append(c)
            w, t = c
            t2 = succ[c]
            c = (link.other_end(t2, w), t2)
        faces.append(face)
    return faces


def _link_genus_zero(link: LinkGraph, rot: Dict[int, Tuple[int, ...]]) -> bool:
    nf = len(_trace_link_faces(link, rot))
    return len(link.vertices) - len(link.edges) + nf == 2


def planar_rotations(link: LinkGraph) -> List[RotationEmbedding]:
    """All genus-0 rotation systems of a connected link, in canonical order."""
    if not link.is_connected():
        raise ThickeningRejected(f"disconnected link at vertex {link.center}")
    fixed = {w: link.incident[w] for w in link.vertices if link.degree(w) < 3}
    free = [w for w in link.vertices if link.degree(w) >= 3]
    choices = []
    for w in free:
        first, *rest = link.incident[w]
        choices.append([(first,) + p for p in itertools.permutations(rest)])
    out = []
    for combo in itertools.product(*choices):
        rot = dict(fixed)
        rot.update(zip(free, combo))
        if _link_genus_zero(link, rot):
            out.append(RotationEmbedding(link, tuple(sorted(rot.items()))))
    out.sort(key=RotationEmbedding.key)
    return out


@dataclass(frozen=True)
class FaithfulCollection:
    """One planar rotation embedding per base point plus per-arc certificates."""

    assignment: Tuple[Tuple[int, RotationEmbedding], ...]
    orientably_faithful: Tuple[bool, ...]

    def embedding(self, A: int) -> RotationEmbedding:
        return dict(self.assignment)[A]

    def key(self):
        return tuple((A, e.rotation) for A, e in self.assignment)

    def to_dict(self, P: SimplicialComplex2) -> dict:
        """Pages around each singular edge A-w, named by their third vertex."""
        out = {}
        for A, emb in self.assignment:
            out[P.name(A)] = {
                P.name(w): [P.name(P.third_vertex(t, A, w)) for t in cyc]
                for w, cyc in emb.rotation
                if len(cyc) >= 3
            }
        return out


class Enumeration(list):
    """A list of results carrying a ``reason`` when it is empty by necessity."""

    def __init__(self, items: Iterable = (), reason: Optional[str] = None):
        super().__init__(items)
        self.reason = reason


def _as_checked(P) -> CheckedComplex:
    return P if isinstance(P, CheckedComplex) else validate_complex(P)


def _arc_orientably_faithful(arc, emb_start: RotationEmbedding, emb_end: RotationEmbedding) -> bool:
    pm = dict(arc.page_map)
    sigma = emb_start.at(arc.first_link_vertex)
    arrived = tuple(pm[t] for t in sigma)
    return canonical_cycle(emb_end.at(arc.last_link_vertex)) == _reverse(arrived)


def enumerate_se(P, structure: Optional[SingularStructure] = None) -> Enumeration:
    """All orientably faithful collections, one per SE(P) class."""
    C = _as_checked(P)
    K = C.complex
    if C.wedge_vertices:
        raise ThickeningRejected(f"disconnected link at vertex {K.name(C.wedge_vertices[0])}")
    S = structure or singular_structure(K)
    F = list(S.base_points)
    options = []
    for A in F:
        rots = planar_rotations(link_graph(K, A))
        if not rots:
            return Enumeration(
                [], reason=f"no 3-thickening exists: link of {K.name(A)} does not embed in S^2"
            )
        options.append(rots)
    pos = {A: k for k, A in enumerate(F)}
    ready: Dict[int, List[int]] = {k: [] for k in range(len(F))}
    for j, arc in enumerate(S.arcs):
        ready[max(pos[arc.start], pos[arc.end])].append(j)

    found = []
    chosen: List[RotationEmbedding] = []

    def extend(k):
        if k == len(F):
            found.append(list(chosen))
            return
        for emb in options[k]:
            chosen.append(emb)
            if all(
                _arc_orientably_faithful(S.arcs[j], chosen[pos[S.arcs[j].start]], chosen[pos[S.arcs[j].end]])
                for j in ready[k]
            ):
                extend(k + 1)
            chosen.pop()

    extend(0)
    out = Enumeration(
        FaithfulCollection(tuple(zip(F, embs)), tuple(True for _ in S.arcs)) for embs in found
    )
    out.sort(key=FaithfulCollection.key)
    if not out:
        out.reason = "no 3-thickening exists: no orientably faithful collection"
    return out


# -- boundary assembly ----------------------------------------------------

_PAIRS = ((0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2))


def _perm_sign(a: int, b: int, c: int) -> int:
    """Sign of (a, b, c) relative to increasing order."""
    inv = (a > b) + (a > c) + (b > c)
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class BoundarySurface:
    components: int
    genera: Tuple[int, ...]
    orientable: bool
    euler_characteristics: Tuple[int, ...]

    @property
    def euler_characteristic(self) -> int:
        return sum(self.euler_characteristics)

    @property
    def total_genus(self) -> int:
        return sum(self.genera)


class _UnionFind:
    """Union-find over polygons with orientation parity and per-class weights."""

    __slots__ = ("parent", "parity", "weight", "bad", "roots")

    def __init__(self, parent, parity, weight, bad, roots):
        self.parent, self.parity, self.weight, self.bad, self.roots = parent, parity, weight, bad, roots

    def copy(self) -> "_UnionFind":
        return _UnionFind(self.parent[:], self.parity[:], self.weight[:], self.bad[:], set(self.roots))

    def add(self, w: int) -> int:
        k = len(self.parent)
        self.parent.append(k)
        self.parity.append(0)
        self.weight.append(w)
        self.bad.append(False)
        self.roots.add(k)
        return k

    def find(self, x: int) -> Tuple[int, int]:
        path = []
        par = 0
        while self.parent[x] != x:
            path.append(x)
            par ^= self.parity[x]
            x = self.parent[x]
        # compress
        acc = par
        for y in path:
            nxt_par = acc ^ self.parity[y]
            self.parent[y] = x
            self.parity[y] = acc
            acc = nxt_par
        return x, par

    def union(self, a: int, b: int, rel: int) -> None:
        """Record orient(a) xor orient(b) == rel."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            if pa ^ pb != rel:
                self.bad[ra] = True
            return
        if rb < ra:
            # keep older (static) roots on top so paths stay short
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ rel
        self.weight[ra] += self.weight[rb]
        self.bad[ra] = self.bad[ra] or self.bad[rb]
        self.roots.discard(rb)


class _Assembler:
    """Builds boundary surfaces; class-independent cells are glued once."""

    def __init__(self, K: SimplicialComplex2, S: SingularStructure, split_static: bool = True):
        self.K = K
        self.S = S
        self.sing_edges = set(S.singular_edges)
        self.split = split_static
        self.dynamic_vertices = {v for e in S.singular_edges for v in e} if split_static else set(K.vertices)
        self.links = {v: link_graph(K, v) for v in K.vertices}
        self._corner_id = {}
        self._ccw = {}
        for t, tri in enumerate(K.triangles):
            for k, (i, j) in enumerate(_PAIRS):
                v, w = tri[i], tri[j]
                x = tri[3 - i - j]
                self._corner_id[(t, v, w)] = 12 * t + k
                self._ccw[(t, v, w)] = 0 if _perm_sign(v, w, x) > 0 else 1
        self._steps = self._arc_steps() if S.arcs else []
        self._cache: Dict[tuple, list] = {}

        uf = _UnionFind([], [], [], [], set())
        self.open: Dict[Tuple[int, int], Tuple[int, int]] = {}
        closed = set()
        for poly, w in self._static_polygons(split_static):
            self._glue(uf, self.open, closed, poly, w)
        for x in range(len(uf.parent)):
            uf.find(x)
        self.base = uf
        self.closed_static = closed

    # corners
    def corner(self, t: int, side: int, v: int, w: int) -> int:
        return self._corner_id[(t, v, w)] + 6 * side

    def ccw_side(self, t: int, v: int, w: int) -> int:
        return self._ccw[(t, v, w)]

    def _arc_steps(self):
        out = []
        for arc in self.S.arcs:
            steps = []
            path = arc.path
            for i in range(1, len(path) - 1):
                prev, cur, nxt = path[i - 1], path[i], path[i + 1]
                steps.append((cur, prev, nxt, self.links[cur].theta_paths(prev, nxt)))
            out.append(steps)
        return out

    def _rotations(self, collection: Optional["FaithfulCollection"]) -> Dict[Tuple[int, int], Tuple[int, ...]]:
        rot: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        if collection is not None:
            for A, emb in collection.assignment:
                for w, cyc in emb.rotation:
                    if len(cyc) >= 3:
                        rot[(A, w)] = cyc
        for arc, steps in zip(self.S.arcs, self._steps):
            cur_rot = rot[(arc.start, arc.first_link_vertex)]
            for cur, prev, nxt, through in steps:
                rot[(cur, prev)] = _reverse(cur_rot)
                cur_rot = canonical_cycle(tuple(through[t] for t in cur_rot))
                rot[(cur, nxt)] = cur_rot
        return rot

    def _strip_polys(self, v: int, w: int, cyc: Sequence[int]):
        k = len(cyc)
        for j in range(k):
            t, t2 = cyc[j], cyc[(j + 1) % k]
            s1 = self.ccw_side(t, v, w)
            s2 = 1 - self.ccw_side(t2, v, w)
            yield [
                self.corner(t, s1, v, w),
                self.corner(t, s1, w, v),
                self.corner(t2, s2, w, v),
                self.corner(t2, s2, v, w),
            ]

    def _cap_polys(self, v: int, rot_at: Dict[int, Tuple[int, ...]]):
        link = self.links[v]
        for face in _trace_link_faces(link, rot_at):
            poly = []
            for w, t in face:
                cyc = rot_at[w]
                t2 = cyc[(cyc.index(t) + 1) % len(cyc)]
                poly.append(self.corner(t, self.ccw_side(t, v, w), v, w))
                poly.append(self.corner(t2, 1 - self.ccw_side(t2, v, w), v, w))
            yield poly

    def _edge_rotation(self, rot, v, w):
        if (v, w) in rot:
            return rot[(v, w)]
        return self.K.pages(v, w)

    def _static_polygons(self, split_static: bool):
        K = self.K
        for t in range(len(K.triangles)):
            for s in (0, 1):
                yield [12 * t + 6 * s + k for k in range(6)], 1
        if not split_static:
            return
        for (v, w) in K.edges:
            if (v, w) not in self.sing_edges:
                for poly in self._strip_polys(v, w, K.pages(v, w)):
                    yield poly, -1
        for v in K.vertices:
            if v not in self.dynamic_vertices:
                rot_at = dict(self.links[v].incident)
                for poly in self._cap_polys(v, rot_at):
                    yield poly, 1

    def _entry(self, weight: int, poly) -> tuple:
        """Summarize a dynamic polygon against the (fully compressed) static part.

        Returns ``(weight, links, cells, static_keys)``: ``links`` are
        ``(static root, parity)`` constraints, ``cells`` the 1-cells still to
        be paired with other dynamic polygons.
        """
        base = self.base
        n = len(poly)
        links = set()
        cells = []
        skeys = []
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            key = (a, b) if a < b else (b, a)
            fwd = int(a < b)
            other = self.open.get(key)
            if other is not None:
                j, ofwd = other
                links.add((base.parent[j], int(ofwd == fwd) ^ base.parity[j]))
                skeys.append(key)
            elif key in self.closed_static:
                raise AssemblyInconsistency(f"1-cell {key} lies on more than two polygons")
            else:
                cells.append((key, fwd))
        return weight, tuple(sorted(links)), tuple(cells), frozenset(skeys)

    def _dynamic_cells(self, rot):
        """Summaries of the rotation-dependent polygons, cached per local rotation."""
        K = self.K
        cache = self._cache
        out = []
        edges = self.sing_edges if self.split else K.edges
        for (v, w) in sorted(edges):
            cyc = self._edge_rotation(rot, v, w)
            key = ("s", v, w, cyc)
            if key not in cache:
                cache[key] = [self._entry(-1, p) for p in self._strip_polys(v, w, cyc)]
            out.extend(cache[key])
        for v in sorted(self.dynamic_vertices):
            rot_at = tuple((w, self._edge_rotation(rot, v, w)) for w in self.links[v].vertices)
            key = ("c", v, rot_at)
            if key not in cache:
                cache[key] = [self._entry(1, p) for p in self._cap_polys(v, dict(rot_at))]
            out.extend(cache[key])
        return out

    @staticmethod
    def _glue(uf, open_cells, closed, poly, weight, frozen=frozenset()):
        k = uf.add(weight)
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            key = (a, b) if a < b else (b, a)
            fwd = int(a < b)
            other = open_cells.pop(key, None)
            if other is None:
                if key in closed or key in frozen:
                    raise AssemblyInconsistency(f"1-cell {key} lies on more than two polygons")
                open_cells[key] = (k, fwd)
            else:
                closed.add(key)
                j, ofwd = other
                # equal traversal directions force opposite orientations
                uf.union(k, j, int(ofwd == fwd))

    def surface(self, collection: Optional["FaithfulCollection"]) -> BoundarySurface:
        uf = self.base.copy()
        pending: Dict[Tuple[int, int], Tuple[int, int]] = {}
        union = uf.union
        add = uf.add
        static_sets = []
        static_count = 0
        for weight, links, cells, skeys in self._dynamic_cells(self._rotations(collection)):
            k = add(weight)
            for r, par in links:
                union(k, r, par)
            static_sets.append(skeys)
            static_count += len(skeys)
            for key, fwd in cells:
                other = pending.pop(key, None)
                if other is None:
                    pending[key] = (k, fwd)
                else:
                    # equal traversal directions force opposite orientations
                    union(k, other[0], int(other[1] == fwd))
        covered = len(frozenset().union(*static_sets)) if static_sets else 0
        if covered != static_count:
            raise AssemblyInconsistency("a 1-cell lies on more than two polygons")
        unmatched = len(pending) + len(self.open) - covered
        if unmatched:
            raise AssemblyInconsistency(f"{unmatched} unmatched 1-cells in the boundary surface")
        roots = sorted(uf.roots)
        comps = sorted(((uf.weight[r], uf.bad[r]) for r in roots), key=lambda c: (-c[0], c[1]))
        genera = tuple((2 - c) // 2 if not bad else 2 - c for c, bad in comps)
        orientable = not any(bad for _, bad in comps)
        return BoundarySurface(len(comps), genera, orientable, tuple(c for c, _ in comps))


def boundary_surface(P, collection: Optional[FaithfulCollection] = None) -> BoundarySurface:
    """Assemble the boundary surface of the thickening given by ``collection``.

    Every cell is glued from scratch here; :func:`thicken_all` uses the
    faster incremental assembly and is tested against this function.
    """
    C = _as_checked(P)
    S = singular_structure(C.complex)
    if S.base_points and collection is None:
        raise ValueError("a faithful collection is required when F is non-empty")
    return _Assembler(C.complex, S, split_static=False).surface(collection)


@dataclass(frozen=True)
class ThickeningDescriptor:
    se_class: FaithfulCollection
    h1: FGAbelianGroup
    boundary: BoundarySurface
    orientable: bool = True

    @property
    def boundary_components(self) -> int:
        return self.boundary.components

    @property
    def boundary_genera(self) -> Tuple[int, ...]:
        return self.boundary.genera

    @property
    def boundary_genus(self) -> int:
        return self.boundary.total_genus

    def to_dict(self, P: SimplicialComplex2) -> dict:
        return {
            "rotations": self.se_class.to_dict(P),
            "h1": str(self.h1),
            "boundary_components": self.boundary.components,
            "boundary_genera": list(self.boundary.genera),
            "boundary_orientable": self.boundary.orientable,
        }


def thicken_all(P) -> Enumeration:
    """One descriptor per orientable thickening of ``P``."""
    C = _as_checked(P)
    K = C.complex
    S = singular_structure(K)
    classes = enumerate_se(C, S)
    if not classes:
        return Enumeration([], reason=classes.reason)
    h1 = first_homology(C.original)
    asm = _Assembler(K, S)
    out = Enumeration()
    for col in classes:
        surf = asm.surface(col if S.base_points else None)
        out.append(ThickeningDescriptor(col, h1, surf))
    return out
