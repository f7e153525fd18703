"""Homology-level closures of 3-manifolds with boundary.

A compact 3-manifold M is represented by a :class:`ManifoldPresentation`:
a presentation of H_1(M; Z), the genera of the boundary components, and the
matrix of i: H_1(dM) -> H_1(M) in a symplectic boundary basis
``(a_1, b_1, a_2, b_2, ...)`` grouped by component.

Closing M by handlebodies whose meridians span a Z-Lagrangian B gives a
closed manifold Q with ``H_1(Q) = H_1(M) / i(B)``. The functions here give
the lower bounds for dim H_1(Q) and build closures that attain them.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import _matrix as mx
from ._matrix import Matrix
from .abelian import (
    CoefficientRing,
    FGAbelianGroup,
    Integers,
    PrimeField,
    Presentation,
    Rationals,
    as_int_matrix,
    dim_over_field,
    group_from_relations,
    is_quotient_of,
)
from .symplectic import (
    NotLagrangian,
    Submodule,
    SymplecticModule,
    is_lagrangian,
    lagrangian_complement,
    lift_lagrangian,
    omega,
    transvection_matrix,
    unit,
)

__all__ = [
    "NotRealizable",
    "HypothesisViolation",
    "SearchCapExceeded",
    "ManifoldPresentation",
    "ScanResult",
    "validate_hlhd",
    "kernel_of_inclusion",
    "relevant_primes",
    "c_of",
    "glue_handlebodies",
    "lower_bound_field",
    "minimal_closure_field",
    "minimal_closure_integral",
    "sphere_embeddable",
    "obstruction_scan",
]


class NotRealizable(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class HypothesisViolation(ValueError):
    pass


class SearchCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ManifoldPresentation:
    """H_1(M) = Z^generators / rows(relations); column j of ``inclusion`` is i(basis_j)."""

    generators: int
    relations: Tuple[Tuple[int, ...], ...]
    boundary_genera: Tuple[int, ...]
    inclusion: Tuple[Tuple[int, ...], ...]
    orientable: bool = True
    name: str = ""

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relations)
        inc = tuple(tuple(int(x) for x in r) for r in self.inclusion)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "inclusion", inc)
        object.__setattr__(self, "boundary_genera", tuple(int(g) for g in self.boundary_genera))
        if any(g < 0 for g in self.boundary_genera):
            raise ValueError("negative boundary genus")
        for r in rels:
            if len(r) != self.generators:
                raise ValueError(f"relation row of length {len(r)}, expected {self.generators}")
        if len(inc) != self.generators:
            raise ValueError(
                f"inclusion matrix has {len(inc)} rows, expected one per H_1 generator ({self.generators})"
            )
        for r in inc:
            if len(r) != 2 * self.genus:
                raise ValueError(
                    f"inclusion row of length {len(r)}, expected 2g = {2 * self.genus}"
                )

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> "ManifoldPresentation":
        genera = [int(g) for g in data["boundary_genera"]]
        inc = as_int_matrix(data["inclusion_matrix"])
        rels = as_int_matrix(data.get("h1_relations", []))
        if "h1_generators" in data:
            n = int(data["h1_generators"])
        elif inc:
            n = len(inc)
        elif rels:
            n = len(rels[0])
        else:
            n = 0
        if not inc and sum(genera) == 0:
            inc = [[] for _ in range(n)]
        return cls(n, rels, genera, inc, bool(data.get("orientable", True)), name)

    def to_dict(self) -> dict:
        return {
            "h1_generators": self.generators,
            "h1_relations": [list(r) for r in self.relations],
            "boundary_genera": list(self.boundary_genera),
            "inclusion_matrix": [list(r) for r in self.inclusion],
            "orientable": self.orientable,
        }

    @property
    def genus(self) -> int:
        return sum(self.boundary_genera)

    @property
    def h1(self) -> FGAbelianGroup:
        return group_from_relations(self.generators, self.relations)

    @property
    def presentation(self) -> Presentation:
        return Presentation(self.generators, self.relations)

    @property
    def module(self) -> SymplecticModule:
        return SymplecticModule(self.genus, Integers)

    def component_blocks(self) -> List[Tuple[int, int]]:
        """Coordinate ranges ``[start, stop)`` of each boundary component."""
        out, k = [], 0
        for g in self.boundary_genera:
            out.append((2 * k, 2 * (k + g)))
            k += g
        return out

    def image(self, v: Sequence[int]) -> List[int]:
        """Coordinates of i(v) in the H_1 generators."""
        return [sum(a * b for a, b in zip(row, v)) for row in self.inclusion]

    def matrix(self) -> Matrix:
        return [list(r) for r in self.inclusion]


# -- kernels and validation -----------------------------------------------


def kernel_of_inclusion(M: ManifoldPresentation, F: CoefficientRing) -> Submodule:
    """ker(i) over F, or over Z (a saturated sublattice) when F is Z."""
    n2 = 2 * M.genus
    # x in ker i  iff  I x = R^T y for some y
    block = [list(M.inclusion[j]) + [-r[j] for r in M.relations] for j in range(M.generators)]
    width = n2 + len(M.relations)
    if F.kind == "Zp":
        ker = mx.kernel_mod(block, F.p, width) if block else mx.identity(width)
    else:
        ker = mx.integer_kernel(block, width) if block else mx.identity(width)
    proj = [row[:n2] for row in ker]
    if F.kind == "Z":
        proj = mx.saturation(proj, n2) if any(any(r) for r in proj) else []
    return Submodule(SymplecticModule(M.genus, F), proj)


def relevant_primes(M: ManifoldPresentation) -> List[int]:
    """{2} and every prime where a mod-p rank can differ from the rational rank."""
    ps = {2}
    ps.update(M.h1.primes())
    n2 = 2 * M.genus
    mats = []
    if M.inclusion and n2:
        mats.append(([list(r) for r in M.inclusion], n2))
        block = [list(M.inclusion[j]) + [r[j] for r in M.relations] for j in range(M.generators)]
        mats.append((block, n2 + len(M.relations)))
    for m, cols in mats:
        for d in mx.smith_diagonal(m, cols):
            ps.update(mx.prime_factors(d))
    return sorted(ps)


def _check_fields(M: ManifoldPresentation) -> List[CoefficientRing]:
    fields = [PrimeField(p) for p in relevant_primes(M)]
    return ([Rationals] if M.orientable else []) + fields


def validate_hlhd(M: ManifoldPresentation) -> ManifoldPresentation:
    """Check that ker i is a Lagrangian over Q and the relevant Z/p.

    Non-orientable M is only checked over Z/2, where the statement holds.
    """
    g = M.genus
    fields = _check_fields(M) if M.orientable else [PrimeField(2)]
    for F in fields:
        K = kernel_of_inclusion(M, F)
        if K.rank != g:
            raise NotRealizable(
                f"not realizable: half-lives-half-dies fails over F={F} "
                f"(dim ker i = {K.rank}, expected {g})",
                witness=K.rows(),
            )
        for x, y in itertools.combinations(K.rows(), 2):
            w = omega(x, y)
            if (w % F.p if F.p else w) != 0:
                raise NotRealizable(
                    f"not realizable: half-lives-half-dies fails over F={F} "
                    f"(intersection form does not vanish on ker i)",
                    witness=[x, y],
                )
    return M


def c_of(M: ManifoldPresentation) -> FGAbelianGroup:
    """Z^(rk H_1 - g) + Tors H_1."""
    h = M.h1
    if h.free_rank < M.genus:
        raise ValueError("presentation inconsistent: rank H_1(M) < g")
    return FGAbelianGroup(h.free_rank - M.genus, h.invariant_factors)


def _check_componentwise(M: ManifoldPresentation, B: Submodule) -> None:
    rows = B.rows()
    for c, (lo, hi) in enumerate(M.component_blocks()):
        outside = [r[:lo] + r[hi:] for r in rows]
        width = 2 * M.genus - (hi - lo)
        r_out = mx.integer_rank(outside, width) if outside and width else 0
        if B.rank - r_out != M.boundary_genera[c]:
            raise ValueError(
                f"Lagrangian does not split over boundary component {c}: "
                f"rank inside is {B.rank - r_out}, expected {M.boundary_genera[c]}"
            )


def glue_handlebodies(M: ManifoldPresentation, B: Submodule) -> FGAbelianGroup:
    """H_1 of M closed by handlebodies whose meridian classes span B."""
    if B.ring.kind != "Z" or B.genus != M.genus:
        raise ValueError("B must be a Z-submodule of the boundary module")
    if not is_lagrangian(B):
        raise NotLagrangian("B is not a Z-Lagrangian")
    _check_componentwise(M, B)
    return M.presentation.quotient([M.image(b) for b in B.rows()])


def _require_closure_hypothesis(M: ManifoldPresentation, F: CoefficientRing) -> None:
    if not F.is_field:
        raise ValueError("a field is required (q, z2 or zp:P)")
    if not M.orientable and F != PrimeField(2):
        raise HypothesisViolation("non-orientable M needs F = Z/2")


def lower_bound_field(M: ManifoldPresentation, F: CoefficientRing) -> int:
    """dim H_1(M; F) - g."""
    _require_closure_hypothesis(M, F)
    return dim_over_field(M.h1, F) - M.genus


def _blockwise(M: ManifoldPresentation, A: Submodule) -> List[Submodule]:
    """Split a coordinate Lagrangian into one Lagrangian per component."""
    out = []
    for (lo, hi), g in zip(M.component_blocks(), M.boundary_genera):
        rows = [r[lo:hi] for r in A.rows() if any(r[lo:hi])]
        out.append(Submodule(SymplecticModule(g, A.ring), rows))
    return out


def _assemble(M: ManifoldPresentation, parts: Sequence[Submodule]) -> Submodule:
    n2 = 2 * M.genus
    rows = []
    for (lo, hi), part in zip(M.component_blocks(), parts):
        for r in part.rows():
            v = [0] * n2
            v[lo:hi] = r
            rows.append(v)
    return Submodule(M.module, rows)


def minimal_closure_field(M: ManifoldPresentation, F: CoefficientRing):
    """A Z-Lagrangian B transverse to ker i over F, and H_1(Q; Z).

    Returns ``(B, h1q)`` with dim H_1(Q; F) equal to the lower bound.
    """
    _require_closure_hypothesis(M, F)
    validate_hlhd(M)
    K = kernel_of_inclusion(M, F)
    A = lagrangian_complement(K) if M.genus else K
    parts = [lift_lagrangian(a) if a.genus else Submodule(SymplecticModule(0), []) for a in _blockwise(M, A)]
    B = _assemble(M, parts)
    h1q = glue_handlebodies(M, B)
    if dim_over_field(h1q, F) != lower_bound_field(M, F):
        raise AssertionError("closure does not attain the lower bound")
    return B, h1q


# -- integral closures ----------------------------------------------------


def _solve_integer(A: Matrix, b: Sequence[int], cols: int) -> List[int]:
    """Some integer x with A x = b (raises if none)."""
    U, D, V = mx.smith(A, cols)
    c = mx.matvec(U, b)
    y = [0] * cols
    for t in range(len(A)):
        d = D[t][t] if t < cols else 0
        if d == 0:
            if c[t] != 0:
                raise ValueError("no integer solution")
        else:
            if c[t] % d:
                raise ValueError("no integer solution")
            y[t] = c[t] // d
    return mx.matvec(V, y)


def _symplectic_complement_z(K: Matrix, g: int) -> Matrix:
    """Rows w_1..w_g with omega(k_i, w_j) = delta_ij and omega(w_i, w_j) = 0."""
    n2 = 2 * g
    KJ = [[omega(k, unit(n2, c)) for c in range(n2)] for k in K]
    W = []
    for j in range(g):
        W.append(_solve_integer(KJ, unit(g, j), n2))
    for j in range(g):
        for m in range(j):
            c = omega(W[m], W[j])
            if c:
                W[j] = [x + c * y for x, y in zip(W[j], K[m])]
    return W


@lru_cache(maxsize=None)
def _lagrangian_orbit(h: int, limit: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """Z-Lagrangians of genus h, breadth-first from the coordinate ones.

    Moves are transvections along vectors with entries in {-1, 0, 1} and at
    most two nonzero entries; these generate Sp(2h, Z).
    """
    n2 = 2 * h
    vecs = []
    for i, j in itertools.combinations_with_replacement(range(n2), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * n2
            v[i] += si
            v[j] += sj
            if any(v) and next(x for x in v if x) > 0 and max(map(abs, v)) == 1:
                vecs.append(tuple(v))
    moves = sorted(set(vecs))
    mod = SymplecticModule(h, Integers)
    start = []
    for choice in itertools.product((0, 1), repeat=h):
        start.append(Submodule(mod, [unit(n2, 2 * i + c) for i, c in enumerate(choice)]).generators)
    seen = set(start)
    order = list(start)
    queue = deque(start)
    while queue and len(order) < limit:
        L = queue.popleft()
        for v in moves:
            for lam in (1, -1):
                T = transvection_matrix(v, lam)
                new = Submodule(mod, [mx.matvec(T, r) for r in L]).generators
                if new not in seen:
                    seen.add(new)
                    order.append(new)
                    queue.append(new)
                    if len(order) >= limit:
                        break
    return tuple(order[:limit])


def _is_direct_summand(rows: Matrix, cols: int) -> bool:
    if not rows:
        return True
    diag = mx.smith_diagonal(rows, cols)
    return len(diag) == len(rows) and all(d == 1 for d in diag)


def minimal_closure_integral(M: ManifoldPresentation, search_limit: int = 2000):
    """A closure with H_1(Q; Z) = Z^(m - g) when H_1(M; Z) = Z^m.

    For connected boundary the complement of ker i is built directly; for
    several components a Lagrangian split over the components is searched
    breadth-first, ``search_limit`` candidates per component.
    """
    if not M.orientable:
        raise HypothesisViolation("integral closure needs orientable M")
    h = M.h1
    if not h.is_free:
        raise HypothesisViolation(
            f"integral closure hypothesis violated: H_1(M; Z) = {h} is not free"
        )
    validate_hlhd(M)
    g = M.genus
    K = kernel_of_inclusion(M, Integers)
    target = c_of(M)
    if g == 0:
        return Submodule(M.module, []), h
    if len(M.boundary_genera) == 1:
        B = Submodule(M.module, _symplectic_complement_z(K.rows(), g))
    else:
        B = _componentwise_complement(M, K.rows(), search_limit)
    h1q = glue_handlebodies(M, B)
    if h1q != target:
        raise AssertionError(f"integral closure gave {h1q}, expected {target}")
    return B, h1q


def _componentwise_complement(M: ManifoldPresentation, K: Matrix, limit: int) -> Submodule:
    n2 = 2 * M.genus
    blocks = M.component_blocks()
    chosen: List[Matrix] = []

    def embed(rows, lo):
        out = []
        for r in rows:
            v = [0] * n2
            v[lo : lo + len(r)] = r
            out.append(v)
        return out

    def search(c: int, acc: Matrix) -> bool:
        if c == len(blocks):
            return True
        g_c = M.boundary_genera[c]
        if g_c == 0:
            chosen.append([])
            if search(c + 1, acc):
                return True
            chosen.pop()
            return False
        for L in _lagrangian_orbit(g_c, limit):
            rows = embed(L, blocks[c][0])
            if _is_direct_summand(acc + rows, n2):
                chosen.append(rows)
                if search(c + 1, acc + rows):
                    return True
                chosen.pop()
        return False

    if not search(0, [list(r) for r in K]):
        raise SearchCapExceeded(
            f"no component-wise complement of ker i among {limit} Lagrangians per component"
        )
    return Submodule(M.module, [r for rows in chosen for r in rows])


# -- homology spheres and obstructions ------------------------------------


def sphere_embeddable(h1m: FGAbelianGroup, boundary_rank: int, G: CoefficientRing) -> bool:
    """Whether H_1(M; G) + H_1(M; G) = H_1(dM; G)."""
    if boundary_rank % 2:
        raise ValueError("boundary rank must be even")
    g = boundary_rank // 2
    if G.kind == "Z":
        return h1m == FGAbelianGroup(g)
    return dim_over_field(h1m, G) == g


@dataclass(frozen=True)
class ScanResult:
    verdict: str  # "excluded" or "witness_found"
    bound: int
    candidates: int
    witness: Optional[Tuple[Tuple[int, ...], ...]] = None
    quotient: Optional[FGAbelianGroup] = None

    @property
    def excluded(self) -> bool:
        return self.verdict == "excluded"

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "bound": self.bound, "candidates": self.candidates}
        if self.witness is not None:
            out["witness"] = [list(r) for r in self.witness]
            out["quotient"] = str(self.quotient)
        else:
            out["note"] = "bounded search; not a proof for coefficients beyond the bound"
        return out


def _embeds_into(R: FGAbelianGroup, T: FGAbelianGroup) -> bool:
    return R.free_rank <= T.free_rank and is_quotient_of(R.torsion(), T.torsion())


def _rank_one(N: int):
    from math import gcd

    out = []
    for p in range(0, N + 1):
        for q in range(-N, N + 1):
            if gcd(p, q) != 1 or (p == 0 and q <= 0):
                continue
            out.append((max(abs(p), abs(q)), p, q))
    out.sort()
    return [(p, q) for _, p, q in out]


def obstruction_scan(M: ManifoldPresentation, target: FGAbelianGroup, bound: int) -> ScanResult:
    """Search sublattices L of H_1(dM) = Z^2 with H_1(M)/i(L) embeddable in target.

    L plays the role of ker(H_1(dX) -> H_1(X)) for the complement X.
    Candidates: L = 0; L = <pa + qb> with gcd(p, q) = 1, |p|, |q| <= bound;
    L of rank 2 in Hermite form [[x, y], [0, z]] with x, z <= bound and xz
    even. (Rank 2 forces X non-orientable, and half-lives-half-dies over
    Z/2 for X then forbids L from surjecting onto (Z/2)^2.) The first
    witness in that order is returned.
    """
    if M.genus != 1 or len(M.boundary_genera) != 1:
        raise ValueError("obstruction_scan needs a single torus boundary component")
    pres = M.presentation
    count = 0
    cands = [()] + [(v,) for v in _rank_one(bound)]
    cands += [
        ((x, y), (0, z))
        for x in range(1, bound + 1)
        for z in range(1, bound + 1)
        if (x * z) % 2 == 0
        for y in range(z)
    ]
    for L in cands:
        count += 1
        R = pres.quotient([M.image(v) for v in L])
        if _embeds_into(R, target):
            return ScanResult("witness_found", bound, count, tuple(tuple(v) for v in L), R)
    return ScanResult("excluded", bound, count)
