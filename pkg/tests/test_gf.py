import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stringrank import gf
from stringrank.errors import AmbientMismatch, DegreeMismatch, NotMonic, NotPrime, ReducibleModulus

FIELDS = [gf.field_make(2), gf.field_make(3), gf.field_make(2, 2, [1, 1, 1])]


def test_field_make_prime():
    F = gf.field_make(2)
    assert F.p == 2 and F.k == 1


def test_field_make_extension():
    F = gf.field_make(2, 2, [1, 1, 1])
    assert F.p == 2 and F.k == 2
    elems = range(4)
    # every nonzero element is invertible
    for a in elems:
        if a:
            assert any(int(F.mul(a, b)) == 1 for b in elems)


def test_field_make_errors():
    with pytest.raises(NotPrime):
        gf.field_make(4)
    with pytest.raises(ReducibleModulus):
        gf.field_make(2, 2, [1, 0, 1])
    with pytest.raises(DegreeMismatch):
        gf.field_make(2, 3, [1, 1, 1])


def test_auto_modulus_is_least_irreducible():
    F = gf.field_make(2, 2)
    assert F.modulus.to_list() == [1, 1, 1]
    F8 = gf.field_make(2, 3)
    assert F8.modulus.to_list() == [1, 1, 0, 1]


def test_field_axioms_spot_check():
    rng = np.random.default_rng(0)
    for F in FIELDS + [gf.field_make(2, 3), gf.field_make(3, 2)]:
        q = F.p ** F.k
        for _ in range(100):
            a, b, c = (int(x) for x in rng.integers(0, q, 3))
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
            assert F.add(a, b) == F.add(b, a)


def test_irreducibility():
    F2, F3 = gf.field_make(2), gf.field_make(3)
    assert gf.poly_is_irreducible([1, 1, 1], F2)
    assert gf.poly_is_irreducible([1, 0, 1], F3)
    assert not gf.poly_is_irreducible([0, 1, 0, 1], F2)
    with pytest.raises(NotMonic):
        gf.poly_is_irreducible([1, 1, 2], F3)


def test_polynomial_canonical_form():
    f = gf.FieldPolynomial([1, 0, 0])
    assert f.to_list() == [1]
    assert gf.FieldPolynomial([]).degree < 0


def test_monic_irreducible_counts():
    # number of monic irreducibles of degree d over GF(q) (necklace formula)
    F2, F3 = gf.field_make(2), gf.field_make(3)
    assert len(gf.monic_irreducibles(F2, 2)) == 1
    assert len(gf.monic_irreducibles(F2, 3)) == 2
    assert len(gf.monic_irreducibles(F3, 2)) == 3


def test_poly_divmod_roundtrip():
    F = gf.field_make(3)
    f = gf.FieldPolynomial([2, 0, 1, 1])
    g = gf.FieldPolynomial([1, 1])
    q, r = gf.poly_divmod(f, g, F)
    assert gf.poly_add(gf.poly_mul(q, g, F), r, F) == f


def test_companion_charpoly():
    F = gf.field_make(3)
    f = gf.FieldPolynomial([1, 2, 0, 1])
    assert gf.charpoly(gf.companion_matrix(f, F), F) == f


def test_rank_examples(F2):
    assert gf.mat_rank(F2, gf.identity(3)) == 3
    assert gf.mat_rank(F2, gf.zeros(2, 5)) == 0
    assert gf.mat_rank(F2, [[1, 1], [1, 1]]) == 1


def test_kernel_examples(F2):
    assert gf.mat_kernel_basis(F2, gf.identity(4)).shape[1] == 0
    assert gf.mat_kernel_basis(F2, gf.zeros(2, 3)).shape[1] == 3
    K = gf.mat_kernel_basis(F2, [[1, 1]])
    assert K.shape[1] == 1 and K[:, 0].tolist() == [1, 1]


def test_subspace_examples(F2):
    U = np.array([[1], [0]])
    V = np.array([[0], [1]])
    assert gf.subspace_sum(F2, U, V).shape[1] == 2
    assert gf.subspace_intersect(F2, U, V).shape[1] == 0
    assert gf.subspace_equal(F2, gf.subspace_sum(F2, U, U), U)
    assert gf.subspace_equal(F2, gf.subspace_intersect(F2, U, U), U)
    with pytest.raises(AmbientMismatch):
        gf.subspace_sum(F2, U, np.array([[1], [0], [0]]))


@pytest.mark.parametrize("F", FIELDS, ids=["gf2", "gf3", "gf4"])
def test_rank_properties(F):
    rng = np.random.default_rng(1)
    for _ in range(200):
        r, k, c = (int(x) for x in rng.integers(1, 7, 3))
        A = gf.random_matrix(F, r, k, rng)
        B = gf.random_matrix(F, k, c, rng)
        ra, rb = gf.mat_rank(F, A), gf.mat_rank(F, B)
        assert ra == gf.mat_rank(F, A.T)
        assert gf.mat_rank(F, gf.matmul(F, A, B)) <= min(ra, rb)
        assert gf.mat_rank(F, gf.block_diag(A, B)) == ra + rb
        K = gf.mat_kernel_basis(F, A)
        assert not gf.matmul(F, A, K).any()
        assert K.shape[1] == k - ra
        assert gf.mat_rank(F, K) == K.shape[1]


@pytest.mark.parametrize("F", FIELDS, ids=["gf2", "gf3", "gf4"])
def test_modular_identity(F):
    rng = np.random.default_rng(2)
    for _ in range(200):
        U = gf.random_matrix(F, 5, int(rng.integers(1, 5)), rng)
        V = gf.random_matrix(F, 5, int(rng.integers(1, 5)), rng)
        s = gf.subspace_sum(F, U, V).shape[1]
        i = gf.subspace_intersect(F, U, V).shape[1]
        assert s + i == gf.mat_rank(F, U) + gf.mat_rank(F, V)


def test_batched_rank_matches(F3):
    rng = np.random.default_rng(3)
    stack = np.stack([gf.random_matrix(F3, 4, 6, rng) for _ in range(20)])
    got = gf.batched_rank(F3, stack)
    assert list(got) == [gf.mat_rank(F3, A) for A in stack]


def test_solve_and_inverse(F3):
    rng = np.random.default_rng(4)
    for _ in range(20):
        A = gf.random_matrix(F3, 4, 4, rng)
        if gf.mat_rank(F3, A) < 4:
            continue
        Ai = gf.inverse(F3, A)
        assert (gf.matmul(F3, A, Ai) == gf.identity(4)).all()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=1, max_size=5))
def test_rref_is_idempotent(rows):
    F = gf.field_make(3)
    A = np.array(rows)
    E, piv = gf.rref(F, A)
    E2, piv2 = gf.rref(F, E)
    assert (E == E2).all() and piv == piv2
    assert len(piv) == gf.mat_rank(F, A)
