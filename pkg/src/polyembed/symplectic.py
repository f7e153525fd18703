"""Symplectic lattices and vector spaces over Z, Q and Z/p.

Coordinates are interleaved: a vector of a genus-g module is
``(e1, f1, e2, f2, ..., eg, fg)`` with ``omega(e_i, f_i) = 1``. This matches
the per-component ``(a_1, b_1, ...)`` boundary bases used by
:mod:`polyembed.closure`, so a boundary component is a contiguous block.

The lifting of Lagrangians from Z/p to Z goes through explicit symplectic
transvections ``T(x) = x + lam * omega(x, v) * v``: a mod-p symplectic matrix
is factored into transvections, each factor is lifted entrywise, and the
product is an integral symplectic matrix reducing to the original.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from . import _matrix as mx
from ._matrix import Matrix
from .abelian import CoefficientRing, Integers, Rationals

__all__ = [
    "SymplecticModule",
    "Submodule",
    "SymplecticMap",
    "NotLagrangian",
    "NotSymplectic",
    "omega",
    "standard_form",
    "transvection_matrix",
    "is_lagrangian",
    "lagrangian_complement",
    "transvection_factorization",
    "lift_symplectic",
    "lift_lagrangian",
    "rational_lagrangian",
    "lift_lagrangian_by_transvections",
]


class NotLagrangian(ValueError):
    pass


class NotSymplectic(ValueError):
    pass


def omega(x: Sequence[int], y: Sequence[int]) -> int:
    s = 0
    for i in range(0, len(x), 2):
        s += x[i] * y[i + 1] - x[i + 1] * y[i]
    return s


def standard_form(g: int) -> Matrix:
    J = mx.zeros(2 * g, 2 * g)
    for i in range(g):
        J[2 * i][2 * i + 1] = 1
        J[2 * i + 1][2 * i] = -1
    return J


def unit(n: int, k: int) -> List[int]:
    v = [0] * n
    v[k] = 1
    return v


def _reduce(v, p):
    return [x % p for x in v] if p else list(v)


def _symmetric(x: int, p: int) -> int:
    x %= p
    return x - p if x > p // 2 else x


@dataclass(frozen=True)
class SymplecticModule:
    genus: int
    ring: CoefficientRing = Integers

    @property
    def rank(self) -> int:
        return 2 * self.genus


def _canonical_rows(rows, ring: CoefficientRing, n: int) -> Tuple[Tuple[int, ...], ...]:
    if ring.kind == "Z":
        out = mx.hermite_rows(rows, n)
    elif ring.kind == "Zp":
        out = mx.rref_mod(rows, ring.p, n)
    else:
        out = [mx.primitive(r) for r in mx.rref_q(rows, n)]
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True, init=False)
class Submodule:
    """A submodule given by generator rows, stored in canonical form.

    Over Z the rows are Hermite-reduced, over Z/p they are in reduced echelon
    form, over Q they are the primitive integer multiples of the reduced
    echelon rows. Equal submodules therefore compare equal.
    """

    ambient: SymplecticModule
    generators: Tuple[Tuple[int, ...], ...]

    def __init__(self, ambient: SymplecticModule, generators: Sequence[Sequence] = ()):
        n = ambient.rank
        rows = []
        for r in generators:
            if len(r) != n:
                raise ValueError(f"generator of length {len(r)} in a rank-{n} module")
            if ambient.ring.kind == "Q":
                rows.append(mx.primitive(r))
            else:
                rows.append([int(x) for x in r])
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "generators", _canonical_rows(rows, ambient.ring, n))

    @property
    def ring(self) -> CoefficientRing:
        return self.ambient.ring

    @property
    def genus(self) -> int:
        return self.ambient.genus

    @property
    def rank(self) -> int:
        if self.ring.kind == "Zp":
            return len(self.generators)
        return mx.integer_rank([list(r) for r in self.generators], self.ambient.rank) if self.generators else 0

    def rows(self) -> Matrix:
        return [list(r) for r in self.generators]

    def is_isotropic(self) -> bool:
        p = self.ring.p
        for x, y in itertools.combinations(self.generators, 2):
            w = omega(x, y)
            if (w % p if p else w) != 0:
                return False
        return True

    def reduce_mod(self, p: int) -> "Submodule":
        """Image under coordinatewise reduction mod p."""
        return Submodule(SymplecticModule(self.genus, CoefficientRing("Zp", p)), self.rows())

    def rational_span(self) -> "Submodule":
        return Submodule(SymplecticModule(self.genus, Rationals), self.rows())

    def to_dict(self) -> dict:
        return {
            "ring": self.ring.tag(),
            "genus": self.genus,
            "generators": [list(r) for r in self.generators],
        }


@dataclass(frozen=True)
class SymplecticMap:
    """A 2g x 2g matrix (acting on column vectors) preserving omega."""

    matrix: Tuple[Tuple[int, ...], ...]
    ring: CoefficientRing = Integers

    def __post_init__(self):
        p = self.ring.p
        m = tuple(tuple(int(x) % p if p else int(x) for x in r) for r in self.matrix)
        object.__setattr__(self, "matrix", m)
        n = len(m)
        if n % 2 or any(len(r) != n for r in m):
            raise NotSymplectic("matrix must be square of even size")
        if not is_symplectic_matrix(m, p):
            raise NotSymplectic("M^T J M != J")

    @property
    def genus(self) -> int:
        return len(self.matrix) // 2

    def rows(self) -> Matrix:
        return [list(r) for r in self.matrix]

    def column(self, k: int) -> List[int]:
        return [r[k] for r in self.matrix]


def is_symplectic_matrix(m: Sequence[Sequence[int]], p: int = 0) -> bool:
    n = len(m)
    J = standard_form(n // 2)
    lhs = mx.matmul(mx.matmul(mx.transpose(m), J), m)
    if p:
        return all((a - b) % p == 0 for ra, rb in zip(lhs, J) for a, b in zip(ra, rb))
    return lhs == J


def transvection_matrix(v: Sequence[int], lam: int, p: int = 0) -> Matrix:
    """Matrix of x -> x + lam * omega(x, v) * v."""
    n = len(v)
    # omega(x, v) = sum_k x_k * w_k with w = J v
    w = [0] * n
    for i in range(0, n, 2):
        w[i] = v[i + 1]
        w[i + 1] = -v[i]
    m = [[int(i == j) + lam * v[i] * w[j] for j in range(n)] for i in range(n)]
    if p:
        m = [[x % p for x in r] for r in m]
    return m


def _apply_transvection(M: Matrix, v, lam, p) -> None:
    """M <- T_{v,lam} M in place (mod p)."""
    n = len(M)
    cols = list(zip(*M))
    for k, c in enumerate(cols):
        s = lam * omega(c, v)
        if s % p:
            for i in range(n):
                M[i][k] = (M[i][k] + s * v[i]) % p


def is_lagrangian(B: Submodule) -> bool:
    """omega vanishes on B and the quotient is free of rank g (dim g over a field)."""
    g = B.genus
    if not B.is_isotropic():
        return False
    rows = B.rows()
    if B.ring.kind == "Zp":
        return len(rows) == g
    if B.ring.kind == "Q":
        return B.rank == g
    diag = mx.smith_diagonal(rows, 2 * g) if rows else []
    return len(diag) == g and all(d == 1 for d in diag)


def _field_p(ring: CoefficientRing) -> int:
    if not ring.is_field:
        raise ValueError("expected a field")
    return ring.p


def lagrangian_complement(A: Submodule) -> Submodule:
    """A Lagrangian meeting A only in 0, chosen among the coordinate Lagrangians.

    Candidates span one of e_i, f_i for each i and are tried in
    lexicographic order with e_i before f_i. Some candidate is always
    transverse to a Lagrangian, so the search never fails.
    """
    if not A.ring.is_field:
        raise ValueError("lagrangian_complement works over Q or Z/p")
    if not is_lagrangian(A):
        raise NotLagrangian("input is not a Lagrangian")
    g, p = A.genus, A.ring.p
    n = 2 * g
    base = A.rows()
    for choice in itertools.product((0, 1), repeat=g):
        cand = [unit(n, 2 * i + c) for i, c in enumerate(choice)]
        if mx.rank_over(base + cand, p, n) == n:
            return Submodule(A.ambient, cand)
    raise AssertionError("no transverse coordinate Lagrangian found")


def transvection_factorization(h: SymplecticMap) -> List[Tuple[Tuple[int, ...], int]]:
    """Factor ``h`` over Z/p into transvections.

    Returns ``[(v1, l1), ..., (vk, lk)]`` with ``h = T1 @ T2 @ ... @ Tk``,
    ``Ti = transvection_matrix(vi, li, p)``.
    """
    if h.ring.kind != "Zp":
        raise ValueError("transvection_factorization works over Z/p")
    p = h.ring.p
    g = h.genus
    n = 2 * g
    M = h.rows()
    applied: List[Tuple[List[int], int]] = []

    def push(a, b):
        # transvection sending a to b; needs omega(a, b) != 0
        w = omega(a, b) % p
        v = [(y - x) % p for x, y in zip(a, b)]
        lam = pow(w, -1, p)
        _apply_transvection(M, v, lam, p)
        applied.append((v, lam))

    for i in range(g):
        e, f = unit(n, 2 * i), unit(n, 2 * i + 1)
        x = [r[2 * i] for r in M]
        if x != e:
            if omega(x, e) % p:
                push(x, e)
            else:
                z = list(f)
                if omega(x, f) % p == 0:
                    u = next(
                        k for k in range(2 * i + 2, n) if omega(x, unit(n, k)) % p
                    )
                    z[u] = 1
                push(x, z)
                push(z, e)
        y = [r[2 * i + 1] for r in M]
        if y != f:
            if omega(y, f) % p:
                push(y, f)
            else:
                z = [(a + b) % p for a, b in zip(e, f)]
                push(y, z)
                push(z, f)
    assert M == mx.identity(n), "transvection reduction did not reach the identity"
    return [(tuple(v), (-lam) % p) for v, lam in applied]


def lift_symplectic(h: SymplecticMap) -> SymplecticMap:
    """An integral symplectic matrix reducing to ``h`` mod p."""
    p = h.ring.p
    n = 2 * h.genus
    H = mx.identity(n)
    for v, lam in transvection_factorization(h):
        vz = [_symmetric(x, p) for x in v]
        H = mx.matmul(H, transvection_matrix(vz, _symmetric(lam, p)))
    return SymplecticMap(tuple(tuple(r) for r in H), Integers)


def _inverse_mod(m: Matrix, p: int) -> Matrix:
    n = len(m)
    aug = [list(r) + unit(n, i) for i, r in enumerate(m)]
    red = mx.rref_mod(aug, p, 2 * n)
    if len(red) < n or any(red[i][i] != 1 for i in range(n)):
        raise ValueError("matrix not invertible mod p")
    return [r[n:] for r in red]


def symplectic_completion_mod(A: Submodule) -> SymplecticMap:
    """Some h in Sp(2g, Z/p) with h(span{e_i}) = A."""
    p, g = A.ring.p, A.genus
    n = 2 * g
    a = A.rows()
    c = lagrangian_complement(A).rows()
    P = [[omega(ai, cj) % p for cj in c] for ai in a]
    Pinv = _inverse_mod(P, p)
    b = [[sum(c[k][t] * Pinv[k][j] for k in range(g)) % p for t in range(n)] for j in range(g)]
    cols = []
    for i in range(g):
        cols.append(a[i])
        cols.append(b[i])
    return SymplecticMap(tuple(tuple(r) for r in mx.transpose(cols)), A.ring)


def lift_lagrangian(A: Submodule) -> Submodule:
    """A Z-Lagrangian B whose reduction mod p is A (Z/p input), or whose
    rational span is A (Q input)."""
    if not A.ring.is_field:
        raise ValueError("lift_lagrangian expects a Q or Z/p Lagrangian")
    if not is_lagrangian(A):
        raise NotLagrangian("input is not a Lagrangian")
    Z = SymplecticModule(A.genus, Integers)
    if A.ring.kind == "Q":
        return Submodule(Z, mx.saturation(A.rows(), 2 * A.genus))
    direct = Submodule(Z, [[_symmetric(x, A.ring.p) for x in r] for r in A.rows()])
    if is_lagrangian(direct):
        return direct
    return lift_lagrangian_by_transvections(A)


def lift_lagrangian_by_transvections(A: Submodule) -> Submodule:
    """Complete A to a symplectic basis mod p, lift that matrix, keep the e-columns."""
    h = symplectic_completion_mod(A)
    H = lift_symplectic(h)
    return Submodule(SymplecticModule(A.genus, Integers), [H.column(2 * i) for i in range(A.genus)])


def rational_lagrangian(genus: int, generators: Sequence[Sequence]) -> Submodule:
    """Convenience constructor accepting Fractions or ints."""
    return Submodule(SymplecticModule(genus, Rationals), [[Fraction(x) for x in r] for r in generators])
