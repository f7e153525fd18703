"""Exact integer and prime-field matrix routines.

Matrices are plain lists of lists of Python ints (row-major); nothing here
ever touches floating point. Empty matrices are represented by ``[]`` (no
rows) and the column count is passed explicitly where it cannot be inferred.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def copy(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(row) for row in m]


def transpose(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Matrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> List[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = copy(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# -- Smith normal form ---------------------------------------------------


def _smith(a: Matrix, rows: int, cols: int, track: bool):
    """Diagonalize ``a`` in place. Returns (U, V) when tracking, else None.

    Pivots are always the smallest nonzero absolute value available, which
    keeps intermediate entries small on random input.
    """
    U = identity(rows) if track else None
    V = identity(cols) if track else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        rs, rd = a[src], a[dst]
        for k in range(cols):
            if rs[k]:
                rd[k] -= q * rs[k]
        if track:
            us, ud = U[src], U[dst]
            for k in range(rows):
                if us[k]:
                    ud[k] -= q * us[k]

    def add_col(dst, src, q):
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            row = a[i]
            for j in range(t, cols):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            clean = True
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, a[i][t] // p)
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
                    if a[t][j]:
                        clean = False
            if not clean:
                # move the smallest remainder in row/column t onto the pivot
                best = (abs(a[t][t]), t, t)
                for i in range(t + 1, rows):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, cols):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if track:
                U[t] = [-x for x in U[t]]
    return (U, V) if track else None


def smith(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Tuple[Matrix, Matrix, Matrix]:
    rows = len(m)
    if cols is None:
        cols = len(m[0]) if rows else 0
    a = copy(m)
    U, V = _smith(a, rows, cols, True)
    return U, a, V


def smith_diagonal(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> List[int]:
    """Nonzero diagonal entries of the Smith form, ascending by divisibility."""
    rows = len(m)
    if cols is None:
        cols = len(m[0]) if rows else 0
    a = copy(m)
    _smith(a, rows, cols, False)
    out = []
    for t in range(min(rows, cols)):
        if a[t][t] == 0:
            break
        out.append(a[t][t])
    return out


def integer_rank(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> int:
    return len(smith_diagonal(m, cols))


def integer_kernel(m: Sequence[Sequence[int]], cols: int) -> Matrix:
    """Z-basis (as rows) of {x : m x = 0}."""
    if not m:
        return identity(cols)
    U, D, V = smith(m, cols)
    r = sum(1 for t in range(min(len(m), cols)) if D[t][t] != 0)
    return [[V[i][j] for i in range(cols)] for j in range(r, cols)]


def hermite_rows(rows: Sequence[Sequence[int]], cols: int) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped; pivots are positive and entries above a pivot are
    reduced into [0, pivot).
    """
    a = [list(r) for r in rows if any(r)]
    out: Matrix = []
    col = 0
    while a and col < cols:
        nz = [r for r in a if r[col] != 0]
        if not nz:
            col += 1
            continue
        rest = [r for r in a if r[col] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        a = rest
        col += 1
    # reduce above pivots
    for i, row in enumerate(out):
        c = next(k for k, x in enumerate(row) if x)
        for j in range(i):
            q = out[j][c] // row[c]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], row)]
    return out


def saturation(rows: Sequence[Sequence[int]], cols: int) -> Matrix:
    """Z-basis of (Q-span of rows) ∩ Z^cols, in Hermite form."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    perp = integer_kernel(rows, cols)
    if not perp:
        return identity(cols)
    return hermite_rows(integer_kernel(perp, cols), cols)


# -- prime fields --------------------------------------------------------


def rref_mod(rows: Sequence[Sequence[int]], p: int, cols: int) -> Matrix:
    """Reduced row echelon form over Z/p with entries in [0, p)."""
    a = [[x % p for x in r] for r in rows]
    out_rows = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return a[:r]


def rank_mod(rows: Sequence[Sequence[int]], p: int, cols: int) -> int:
    return len(rref_mod(rows, p, cols))


def kernel_mod(m: Sequence[Sequence[int]], p: int, cols: int) -> Matrix:
    """Basis (rows) of the right kernel of ``m`` over Z/p."""
    red = rref_mod(m, p, cols)
    pivots = [next(k for k, x in enumerate(r) if x) for r in red]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for r, pc in zip(red, pivots):
            v[pc] = (-r[f]) % p
        basis.append(v)
    return basis


def rref_q(rows: Sequence[Sequence], cols: int) -> List[List[Fraction]]:
    a = [[Fraction(x) for x in r] for r in rows]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return a[:r]


def primitive(v: Sequence) -> List[int]:
    """Clear denominators and divide out the content of a rational vector."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


def rank_over(rows: Sequence[Sequence[int]], p: int, cols: int) -> int:
    """Rank over Q (p == 0) or Z/p."""
    if p == 0:
        return integer_rank([list(r) for r in rows], cols) if rows else 0
    return rank_mod(rows, p, cols)


def kernel_over(m: Sequence[Sequence[int]], p: int, cols: int) -> Matrix:
    """Right kernel over Q (integer primitive rows, p == 0) or Z/p."""
    if p:
        return kernel_mod(m, p, cols)
    if not m:
        return identity(cols)
    return saturation(integer_kernel(m, cols), cols)


def prime_factors(n: int) -> List[int]:
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]
