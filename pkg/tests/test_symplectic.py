import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from polyembed.abelian import Integers, PrimeField, Rationals
from polyembed.symplectic import (
    NotLagrangian,
    NotSymplectic,
    Submodule,
    SymplecticMap,
    SymplecticModule,
    is_lagrangian,
    is_symplectic_matrix,
    lagrangian_complement,
    lift_lagrangian,
    lift_lagrangian_by_transvections,
    lift_symplectic,
    omega,
    rational_lagrangian,
    standard_form,
    symplectic_completion_mod,
    transvection_factorization,
    transvection_matrix,
)
from polyembed._matrix import identity, matmul, rank_mod

from oracles import is_z_lagrangian


def product_mod(factors, n, p):
    M = identity(n)
    for v, lam in factors:
        M = [[x % p for x in r] for r in matmul(M, transvection_matrix(v, lam, p))]
    return M


def sp_elements(g, p, max_len=8):
    vec = st.lists(st.integers(0, p - 1), min_size=2 * g, max_size=2 * g)
    lam = st.integers(1, p - 1)
    return st.lists(st.tuples(vec, lam), max_size=max_len).map(lambda fs: product_mod(fs, 2 * g, p))


def test_omega_standard_basis():
    e1, f1, e2, f2 = ([int(i == k) for i in range(4)] for k in range(4))
    assert omega(e1, f1) == 1 and omega(f1, e1) == -1
    assert omega(e1, e2) == 0 and omega(e1, f2) == 0
    J = sympy.Matrix(standard_form(2))
    assert (J.T == -J) and J.det() == 1


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.integers(-3, 3))
def test_transvections_are_symplectic(v, lam):
    assert is_symplectic_matrix(transvection_matrix(v, lam))


def test_non_symplectic_rejected():
    with pytest.raises(NotSymplectic):
        SymplecticMap(((2, 0), (0, 1)))


@settings(max_examples=60, deadline=None)
@given(sp_elements(2, 3))
def test_factorization_reproduces_matrix(h):
    fs = transvection_factorization(SymplecticMap(tuple(map(tuple, h)), PrimeField(3)))
    assert product_mod(fs, 4, 3) == h


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), sp_elements(2, p))))
def test_lift_symplectic(case):
    p, h = case
    H = lift_symplectic(SymplecticMap(tuple(map(tuple, h)), PrimeField(p))).rows()
    Hs, J = sympy.Matrix(H), sympy.Matrix(standard_form(2))
    assert Hs.T * J * Hs == J
    assert [[x % p for x in r] for r in H] == h


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_every_line_lifts_when_g_is_one(p):
    V = SymplecticModule(1, PrimeField(p))
    lines = [(1, k) for k in range(p)] + [(0, 1)]
    assert len(lines) == p + 1
    for line in lines:
        A = Submodule(V, [line])
        assert is_lagrangian(A)
        for lift in (lift_lagrangian, lift_lagrangian_by_transvections):
            B = lift(A)
            assert is_z_lagrangian(B.rows(), 1)
            assert B.reduce_mod(p) == A


@settings(max_examples=40, deadline=None)
@given(sp_elements(2, 3))
def test_random_lagrangians_lift(h):
    V = SymplecticModule(2, PrimeField(3))
    A = Submodule(V, [[r[0] for r in h], [r[2] for r in h]])
    assert is_lagrangian(A)
    for lift in (lift_lagrangian, lift_lagrangian_by_transvections):
        B = lift(A)
        assert is_lagrangian(B) and is_z_lagrangian(B.rows(), 2)
        assert B.reduce_mod(3) == A


@settings(max_examples=40, deadline=None)
@given(sp_elements(2, 5))
def test_completion_and_complement(h):
    V = SymplecticModule(2, PrimeField(5))
    A = Submodule(V, [[r[0] for r in h], [r[2] for r in h]])
    C = lagrangian_complement(A)
    assert is_lagrangian(C)
    assert rank_mod(A.rows() + C.rows(), 5, 4) == 4
    S = symplectic_completion_mod(A)
    assert Submodule(V, [S.column(0), S.column(2)]) == A


def test_non_lagrangian_inputs():
    V = SymplecticModule(2, PrimeField(3))
    with pytest.raises(NotLagrangian):
        lift_lagrangian(Submodule(V, [[1, 0, 0, 0], [0, 1, 0, 0]]))
    with pytest.raises(NotLagrangian):
        lift_lagrangian(Submodule(V, [[1, 0, 0, 0]]))
    Z = SymplecticModule(1, Integers)
    assert not is_lagrangian(Submodule(Z, [[2, 0]]))
    assert is_lagrangian(Submodule(Z, [[2, 3]]))


def test_rational_lift_saturates():
    A = rational_lagrangian(1, [[Fraction(1, 2), 1]])
    assert A.ring == Rationals
    B = lift_lagrangian(A)
    assert B.rows() == [[1, 2]]


def test_submodule_canonical_form():
    Z = SymplecticModule(2, Integers)
    a = Submodule(Z, [[1, 0, 1, 0], [0, 0, 0, 1]])
    b = Submodule(Z, [[1, 0, 1, 1], [0, 0, 0, -1]])
    assert a == b
    with pytest.raises(ValueError):
        Submodule(Z, [[1, 0]])


def test_exhaustive_g2_mod2_lagrangians():
    # all 15 Lagrangian planes of (Z/2)^4 lift
    V = SymplecticModule(2, PrimeField(2))
    vecs = [v for v in itertools.product(range(2), repeat=4) if any(v)]
    seen = set()
    for a, b in itertools.combinations(vecs, 2):
        A = Submodule(V, [a, b])
        if A.rank == 2 and is_lagrangian(A):
            seen.add(A)
    assert len(seen) == 15
    for A in seen:
        assert lift_lagrangian(A).reduce_mod(2) == A
