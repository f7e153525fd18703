"""Acceptance suite: one test per criterion, each timed against its budget.

Every test prints a single ``ACCEPTANCE n: PASS`` or ``FAIL`` line.
"""

import random
import time
from contextlib import contextmanager

import pytest
import sympy

from polyembed.abelian import FGAbelianGroup, PrimeField, Rationals, dim_over_field, is_quotient_of
from polyembed.cli import execute
from polyembed.closure import (
    c_of,
    glue_handlebodies,
    lower_bound_field,
    minimal_closure_field,
    obstruction_scan,
    validate_hlhd,
)
from polyembed.fixtures import complex_fixture, manifold_fixture, random_lagrangian, random_presentation
from polyembed.graphprod import min_closed_h1_dim, named_graph
from polyembed.polyhedron import euler_characteristic, validate_complex
from polyembed.symplectic import (
    Submodule,
    SymplecticMap,
    SymplecticModule,
    is_lagrangian,
    lift_lagrangian,
    lift_symplectic,
    standard_form,
    transvection_matrix,
)
from polyembed.thickening import enumerate_se, thicken_all
from polyembed._matrix import identity, matmul

from oracles import (
    abelian_groups_of_order,
    count_orientable_thickenings,
    fingerprint,
    genus_by_faces,
    is_z_lagrangian,
    quotient_fingerprints,
)

FIELDS = [Rationals, PrimeField(2), PrimeField(3), PrimeField(5)]


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(n, budget):
        start = time.perf_counter()
        try:
            yield
            elapsed = time.perf_counter() - start
            assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
        except BaseException:
            with capsys.disabled():
                print(f"\nACCEPTANCE {n}: FAIL ({time.perf_counter() - start:.2f}s)")
            raise
        with capsys.disabled():
            print(f"\nACCEPTANCE {n}: PASS ({elapsed:.2f}s, budget {budget}s)")

    return run


def random_sp4_mod3(rng):
    M = identity(4)
    for _ in range(rng.randint(0, 10)):
        v = [rng.randrange(3) for _ in range(4)]
        T = transvection_matrix(v, rng.randrange(1, 3), 3)
        M = [[x % 3 for x in r] for r in matmul(M, T)]
    return M


def test_criterion_1_obstruction_scan(criterion):
    with criterion(1, 10):
        M = manifold_fixture("lemma31")
        assert c_of(M) == FGAbelianGroup(0, (2,))
        res = obstruction_scan(M, FGAbelianGroup(0, (2,)), 50)
        assert res.excluded and res.witness is None
        assert obstruction_scan(M, FGAbelianGroup(0, (2, 2)), 50).witness == ((1, 0),)
        assert obstruction_scan(M, FGAbelianGroup(1), 50).witness == ((0, 1),)


def test_criterion_2_fixture_closures(criterion):
    with criterion(2, 1):
        M = manifold_fixture("lemma31")
        for F, dim in ((PrimeField(2), 1), (PrimeField(3), 0), (Rationals, 0)):
            B, h1 = minimal_closure_field(M, F)
            assert is_lagrangian(B)
            assert dim_over_field(h1, F) == dim == lower_bound_field(M, F)


def closure_dim(M, F):
    B, h1 = minimal_closure_field(M, F)
    d = dim_over_field(h1, F)
    assert d == lower_bound_field(M, F)
    return d


def test_criterion_3_surface_products(criterion):
    with criterion(3, 5):
        for g in range(4):
            for h in range(1, 4):
                M = validate_hlhd(manifold_fixture(f"surface-product:{g},{h}"))
                for F in (Rationals, PrimeField(2), PrimeField(3)):
                    assert closure_dim(M, F) == 2 * g, (g, h, F)
        for k in range(1, 5):
            for h in range(1, 4):
                M = validate_hlhd(manifold_fixture(f"crosscap-product:{k},{h}"))
                assert closure_dim(M, PrimeField(2)) == k, (k, h)


def test_criterion_4_graph_products(criterion):
    with criterion(4, 120):
        expected = {"k4": 0, "k5": 2, "k33": 2, "petersen": 2}
        for name, value in expected.items():
            L = named_graph(name)
            for F in (Rationals, PrimeField(2)):
                assert min_closed_h1_dim(L, F) == value, (name, F)
        P = named_graph("petersen")
        assert genus_by_faces(P.n, list(P.edges)) == 1
        # the value for a nonplanar graph is twice its genus
        assert 2 * genus_by_faces(P.n, list(P.edges)) == min_closed_h1_dim(P, Rationals)


def test_criterion_5_lagrangian_lifts(criterion):
    with criterion(5, 30):
        for p in (2, 3, 5):
            V = SymplecticModule(1, PrimeField(p))
            lines = [(1, k) for k in range(p)] + [(0, 1)]
            assert len({Submodule(V, [v]) for v in lines}) == p + 1
            for v in lines:
                A = Submodule(V, [v])
                B = lift_lagrangian(A)
                assert is_z_lagrangian(B.rows(), 1) and B.reduce_mod(p) == A
        rng = random.Random(2024)
        V = SymplecticModule(2, PrimeField(3))
        J = sympy.Matrix(standard_form(2))
        for _ in range(100):
            h = random_sp4_mod3(rng)
            A = Submodule(V, [[r[0] for r in h], [r[2] for r in h]])
            assert is_lagrangian(A)
            B = lift_lagrangian(A)
            assert is_lagrangian(B) and is_z_lagrangian(B.rows(), 2)
            assert B.reduce_mod(3) == A
        for _ in range(100):
            h = random_sp4_mod3(rng)
            H = lift_symplectic(SymplecticMap(tuple(map(tuple, h)), PrimeField(3))).rows()
            Hs = sympy.Matrix(H)
            assert Hs.T * J * Hs == J
            assert [[x % 3 for x in r] for r in H] == h


def test_criterion_6_thickenings(criterion):
    with criterion(6, 300):
        for name in ("disk", "torus", "yxi", "thetaxs1", "k4xs1"):
            C = validate_complex(complex_fixture(name))
            chi = euler_characteristic(C.original)
            T = thicken_all(C)
            assert len(T) > 0
            for d in T:
                assert d.boundary.orientable
                assert sum(2 - 2 * g for g in d.boundary_genera) == 2 * chi
        for name in ("yxi", "thetaxs1", "yxs1"):
            data = complex_fixture(name)
            assert len(enumerate_se(data)) == count_orientable_thickenings(data["triangles"]), name


def test_criterion_7_embed_sphere(criterion):
    with criterion(7, 300):
        for name in ("torus", "annulus"):
            code, rep = execute(["embed-sphere", f"fixture:{name}", "--coeff", "z"])
            assert code == 0 and rep["verdict"] == "embeddable", name
        code, rep = execute(["embed-sphere", "fixture:solid-torus-spine", "--coeff", "z"])
        assert code == 0 and rep["verdict"] == "embeddable"
        for coeff in ("z", "z2", "z3", "z5"):
            code, rep = execute(["embed-sphere", "fixture:k5xs1", "--coeff", coeff])
            assert code == 1 and rep["verdict"] == "not embeddable", coeff
            assert rep["classes"] == len(rep["conditions"]) > 0
            assert not any(c["holds"] for c in rep["conditions"])


def test_criterion_8_property_suite(criterion):
    with criterion(8, 120):
        rng = random.Random(8)
        violations = 0
        for _ in range(200):
            M = validate_hlhd(random_presentation(rng, max_genus=3, max_exponent=8))
            assert M.orientable and M.genus <= 3
            B = Submodule(M.module, random_lagrangian(rng, M))
            assert is_lagrangian(B)
            G = glue_handlebodies(M, B)
            for F in FIELDS:
                if dim_over_field(G, F) < dim_over_field(M.h1, F) - M.genus:
                    violations += 1
            if not is_quotient_of(c_of(M), G):
                violations += 1
        assert violations == 0

        groups = [orders for n in range(1, 65) for orders in abelian_groups_of_order(n)]
        lib = {orders: FGAbelianGroup.from_cyclic_orders(0, orders) for orders in groups}
        prints = {orders: fingerprint(orders) for orders in groups}
        for S in groups:
            quots = quotient_fingerprints(S)
            for T in groups:
                assert is_quotient_of(lib[T], lib[S]) == (prints[T] in quots), (T, S)
