import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from polyembed.abelian import (
    CoefficientRing,
    DimensionMismatch,
    FGAbelianGroup,
    Integers,
    PrimeField,
    Rationals,
    as_int_matrix,
    dim_over_field,
    group_from_relations,
    is_quotient_of,
    quotient_by_subgroup,
    smith_normal_form,
)
from polyembed._matrix import matmul, det

from oracles import fingerprint, quotient_fingerprints

small_ints = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


groups = st.builds(
    FGAbelianGroup.from_cyclic_orders,
    st.integers(0, 3),
    st.lists(st.integers(1, 12), max_size=4),
)


def test_parse_and_render():
    G = FGAbelianGroup.parse("Z^2 + Z/2 + Z/4")
    assert G == FGAbelianGroup(2, (2, 4))
    assert str(G) == "Z^2 + Z/2 + Z/4"
    assert str(FGAbelianGroup()) == "0"
    assert FGAbelianGroup.from_cyclic_orders(0, [6, 4]) == FGAbelianGroup(0, (2, 12))


@given(groups)
def test_render_round_trip(G):
    assert FGAbelianGroup.parse(str(G)) == G


def test_coefficient_grammar():
    assert CoefficientRing.parse("z") == Integers
    assert CoefficientRing.parse("Q") == Rationals
    assert CoefficientRing.parse("z2") == PrimeField(2)
    assert CoefficientRing.parse("zp:7") == PrimeField(7)
    assert str(PrimeField(3)) == "Z/3"
    with pytest.raises(ValueError, match="not a prime"):
        CoefficientRing.parse("zp:4")
    with pytest.raises(ValueError):
        CoefficientRing.parse("r")


def test_ragged_matrix_rejected():
    with pytest.raises(DimensionMismatch):
        as_int_matrix([[1, 2], [3]])


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_smith_form_matches_sympy(m):
    U, D, V = smith_normal_form(m)
    assert matmul(matmul(U, m), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    theirs = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    theirs = [abs(int(theirs[i, i])) for i in range(min(theirs.shape))]
    assert sorted(diag) == sorted(theirs)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_group_from_relations_order(m):
    n = len(m[0])
    G = group_from_relations(n, m)
    M = sympy.Matrix(m)
    assert G.free_rank == n - M.rank()
    if len(m) == n and M.det() != 0:
        assert G.order == abs(int(M.det()))


@settings(max_examples=60, deadline=None)
@given(groups, st.sampled_from([Rationals, PrimeField(2), PrimeField(3), PrimeField(5)]))
def test_dim_over_field(G, F):
    p = F.characteristic
    expected = G.free_rank + sum(1 for d in G.invariant_factors if p and d % p == 0)
    assert dim_over_field(G, F) == expected


def test_quotient_by_subgroup():
    assert quotient_by_subgroup(FGAbelianGroup(2), [[2, 0]]) == FGAbelianGroup(1, (2,))
    assert quotient_by_subgroup(FGAbelianGroup(1, (2,)), [[2, 0]]) == FGAbelianGroup(0, (2, 2))
    with pytest.raises(DimensionMismatch):
        quotient_by_subgroup(FGAbelianGroup(2), [[1, 0, 0]])


def test_quotient_examples():
    Z, Z2, Z4 = FGAbelianGroup(1), FGAbelianGroup(0, (2,)), FGAbelianGroup(0, (4,))
    assert is_quotient_of(Z2, Z)
    assert is_quotient_of(Z2, Z4)
    assert not is_quotient_of(Z4, FGAbelianGroup(0, (2, 2)))
    assert not is_quotient_of(Z, Z4)
    assert is_quotient_of(FGAbelianGroup(0, (2, 2)), FGAbelianGroup(1, (2,)))
    assert not is_quotient_of(FGAbelianGroup(0, (2, 2, 2)), FGAbelianGroup(1, (2,)))
    assert is_quotient_of(FGAbelianGroup(0, (3, 9)), FGAbelianGroup(2))


def test_quotient_matches_subgroup_oracle_small():
    # cyclic-prime-power lists of all groups of order <= 16
    from oracles import abelian_groups_of_order

    gs = [G for n in range(1, 17) for G in abelian_groups_of_order(n)]
    for S in gs:
        quots = quotient_fingerprints(S)
        for T in gs:
            expect = fingerprint(T) in quots
            got = is_quotient_of(FGAbelianGroup.from_cyclic_orders(0, T), FGAbelianGroup.from_cyclic_orders(0, S))
            assert got == expect, (T, S)


@given(groups, groups)
def test_summands_are_quotients(A, B):
    S = A.direct_sum(B)
    assert is_quotient_of(A, S)
    assert is_quotient_of(B, S)
    assert is_quotient_of(FGAbelianGroup(), S)
