"""Finitely generated abelian groups and exact Smith normal form.

Every homology answer in the package is an :class:`FGAbelianGroup` in
invariant-factor form, so isomorphism testing is plain equality::

    >>> group_from_relations(2, [[0, 2]])
    FGAbelianGroup(free_rank=1, invariant_factors=(2,))
    >>> str(_)
    'Z + Z/2'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from . import _matrix as mx
from ._matrix import Matrix, prime_factors

__all__ = [
    "CoefficientRing",
    "Integers",
    "Rationals",
    "PrimeField",
    "FGAbelianGroup",
    "Presentation",
    "smith_normal_form",
    "group_from_relations",
    "dim_over_field",
    "quotient_by_subgroup",
    "is_quotient_of",
    "as_int_matrix",
]


class DimensionMismatch(ValueError):
    pass


def as_int_matrix(data, cols: Optional[int] = None) -> Matrix:
    """Normalize a matrix given as nested sequences of ints or decimal strings."""
    rows = []
    for r in data:
        rows.append([int(x) for x in r])
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        if cols is not None and width != cols:
            raise DimensionMismatch(f"expected {cols} columns, got {width}")
    return rows


# -- coefficient rings ----------------------------------------------------


@dataclass(frozen=True)
class CoefficientRing:
    """One of Z, Q or Z/p. ``characteristic`` is 0 for Z and Q."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zp"):
            raise ValueError(f"unknown coefficient ring {self.kind!r}")
        if self.kind == "Zp" and not mx.is_prime(self.p):
            raise ValueError(f"{self.p} is not a prime")
        if self.kind != "Zp" and self.p != 0:
            raise ValueError("only prime fields carry p")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p

    @classmethod
    def parse(cls, text: str) -> "CoefficientRing":
        """Parse ``z``, ``q``, ``z2``, ``zp:P`` (also ``zP``)."""
        t = text.strip().lower()
        if t == "z":
            return Integers
        if t == "q":
            return Rationals
        m = re.fullmatch(r"zp?:?(\d+)", t)
        if m:
            return PrimeField(int(m.group(1)))
        raise ValueError(f"bad coefficient spec {text!r} (use z, q, z2 or zp:P)")

    def __str__(self) -> str:
        return {"Z": "Z", "Q": "Q"}.get(self.kind, f"Z/{self.p}")

    def tag(self) -> str:
        return {"Z": "z", "Q": "q"}.get(self.kind, f"zp:{self.p}")


Integers = CoefficientRing("Z")
Rationals = CoefficientRing("Q")


def PrimeField(p: int) -> CoefficientRing:
    return CoefficientRing("Zp", p)


# -- groups ---------------------------------------------------------------


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank + Z/d1 + ... + Z/dt with d1 | d2 | ... and every di >= 2."""

    free_rank: int = 0
    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        ds = self.invariant_factors
        if any(d < 2 for d in ds):
            raise ValueError("invariant factors must be >= 2")
        if any(b % a for a, b in zip(ds, ds[1:])):
            raise ValueError(f"invariant factors {ds} do not form a divisor chain")

    @classmethod
    def from_cyclic_orders(cls, free_rank: int, orders: Iterable[int]) -> "FGAbelianGroup":
        """Canonicalize an arbitrary direct sum of cyclic groups (0 means Z)."""
        orders = list(orders)
        n = len(orders)
        diag = [[orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return group_from_relations(free_rank + n, [row + [0] * free_rank for row in diag])

    @classmethod
    def parse(cls, text: str) -> "FGAbelianGroup":
        """Inverse of ``str``: accepts e.g. ``Z^2 + Z/2 + Z/4``, ``Z``, ``0``."""
        t = text.replace(" ", "").replace("⊕", "+")
        if t in ("0", ""):
            return cls()
        free = 0
        orders = []
        for part in t.split("+"):
            m = re.fullmatch(r"Z(?:\^(\d+))?", part)
            if m:
                free += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z(?:/|_)(\d+)(?:\^(\d+))?", part)
            if m:
                orders.extend([int(m.group(1))] * int(m.group(2) or 1))
                continue
            raise ValueError(f"cannot parse group summand {part!r}")
        return cls.from_cyclic_orders(free, orders)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    @property
    def num_generators(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    @property
    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def torsion(self) -> "FGAbelianGroup":
        return FGAbelianGroup(0, self.invariant_factors)

    def direct_sum(self, other: "FGAbelianGroup") -> "FGAbelianGroup":
        return FGAbelianGroup.from_cyclic_orders(
            self.free_rank + other.free_rank, self.invariant_factors + other.invariant_factors
        )

    def presentation(self) -> "Presentation":
        """Standard presentation: free generators first, then the cyclic ones."""
        n = self.num_generators
        rels = []
        for k, d in enumerate(self.invariant_factors):
            row = [0] * n
            row[self.free_rank + k] = d
            rels.append(row)
        return Presentation(n, tuple(tuple(r) for r in rels))

    def prime_power_profile(self, p: int) -> List[int]:
        """Exponents e with p^e exactly dividing some invariant factor, descending."""
        out = []
        for d in self.invariant_factors:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                out.append(e)
        return sorted(out, reverse=True)

    def primes(self) -> List[int]:
        ps = set()
        for d in self.invariant_factors:
            ps.update(prime_factors(d))
        return sorted(ps)


@dataclass(frozen=True)
class Presentation:
    """An abelian group given by generators and integer relation rows."""

    generators: int
    relations: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relations)
        for r in rels:
            if len(r) != self.generators:
                raise DimensionMismatch(
                    f"relation has {len(r)} entries, expected {self.generators}"
                )
        object.__setattr__(self, "relations", rels)

    def group(self) -> FGAbelianGroup:
        return group_from_relations(self.generators, self.relations)

    def quotient(self, vectors: Sequence[Sequence[int]]) -> FGAbelianGroup:
        return quotient_by_subgroup(self, vectors)

    def with_relations(self, vectors: Sequence[Sequence[int]]) -> "Presentation":
        return Presentation(self.generators, self.relations + tuple(tuple(v) for v in vectors))


# -- operations -----------------------------------------------------------


def smith_normal_form(m: Sequence[Sequence[int]], cols: Optional[int] = None):
    """Return ``(U, D, V)`` with ``D = U @ m @ V``.

    U and V are unimodular, D is diagonal with non-negative entries and each
    nonzero diagonal entry divides the next one.

    >>> U, D, V = smith_normal_form([[2, 4], [6, 8]])
    >>> D
    [[2, 0], [0, 4]]
    """
    m = as_int_matrix(m)
    return mx.smith(m, cols)


def group_from_relations(generators: int, relations: Sequence[Sequence[int]]) -> FGAbelianGroup:
    """Cokernel of the relation matrix (rows are relations) in canonical form."""
    rels = as_int_matrix(relations)
    if rels and len(rels[0]) != generators:
        raise DimensionMismatch(
            f"relation matrix has {len(rels[0])} columns but {generators} generators"
        )
    diag = mx.smith_diagonal(rels, generators) if rels else []
    free = generators - len(diag)
    return FGAbelianGroup(free, tuple(d for d in diag if d != 1))


def dim_over_field(G: FGAbelianGroup, F: CoefficientRing) -> int:
    """dim of G (x) F: the free rank plus, over Z/p, the cyclic factors divisible by p."""
    if not F.is_field:
        raise ValueError("dim_over_field needs a field, got Z")
    if F.kind == "Q":
        return G.free_rank
    return G.free_rank + sum(1 for d in G.invariant_factors if d % F.p == 0)


def quotient_by_subgroup(
    G: Union[FGAbelianGroup, Presentation], sub: Sequence[Sequence[int]]
) -> FGAbelianGroup:
    """G / <sub>, where sub vectors are written in G's presentation generators."""
    pres = G.presentation() if isinstance(G, FGAbelianGroup) else G
    vecs = as_int_matrix(sub)
    for v in vecs:
        if len(v) != pres.generators:
            raise DimensionMismatch(
                f"subgroup vector of length {len(v)} for {pres.generators} generators"
            )
    return group_from_relations(pres.generators, [list(r) for r in pres.relations] + vecs)


def is_quotient_of(target: FGAbelianGroup, source: FGAbelianGroup) -> bool:
    """True iff some homomorphism source -> target is onto.

    Prime-locally: the surplus free generators of the source can cover any
    cyclic p-power factors that the source torsion cannot.
    """
    spare = source.free_rank - target.free_rank
    if spare < 0:
        return False
    for p in target.primes():
        t = target.prime_power_profile(p)
        s = source.prime_power_profile(p)
        for j in range(1, (t[0] if t else 0) + 1):
            need = sum(1 for e in t if e >= j)
            have = sum(1 for e in s if e >= j)
            if need > have + spare:
                return False
    return True
