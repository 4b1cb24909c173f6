import numpy as np
import pytest

from ttcodes import gf2


def naive_rank(M):
    """Plain row-reduction oracle, no packing."""
    A = np.array(M, dtype=np.uint8) % 2
    m, n = A.shape
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        for i in range(m):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        r += 1
    return r


def test_rank_identity_and_zero():
    assert gf2.rank(np.eye(7, dtype=np.uint8)) == 7
    assert gf2.rank(np.zeros((4, 9), dtype=np.uint8)) == 0


def test_rank_agrees_with_naive_oracle():
    rng = np.random.default_rng(7)
    for _ in range(60):
        m = rng.integers(1, 65)
        n = rng.integers(1, 65)
        A = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
        assert gf2.rank(A) == naive_rank(A)


def test_kernel_basis_identity_empty():
    assert gf2.kernel_basis(np.eye(5, dtype=np.uint8)).shape == (0, 5)


def test_kernel_basis_zero_matrix_full():
    B = gf2.kernel_basis(np.zeros((3, 6), dtype=np.uint8))
    assert B.shape == (6, 6)
    assert gf2.rank(B) == 6


def test_kernel_vectors_annihilated():
    rng = np.random.default_rng(11)
    for _ in range(25):
        A = rng.integers(0, 2, size=(rng.integers(1, 40), rng.integers(1, 40)), dtype=np.uint8)
        B = gf2.kernel_basis(A)
        assert B.shape[0] == A.shape[1] - gf2.rank(A)
        if B.size:
            assert not (gf2.matmul(A, B.T)).any()


def test_rowspace_member_rows_and_zero():
    rng = np.random.default_rng(3)
    A = rng.integers(0, 2, size=(8, 20), dtype=np.uint8)
    for row in A:
        assert gf2.rowspace_member(A, row)
    assert gf2.rowspace_member(A, np.zeros(20, dtype=np.uint8))


def test_rowspace_member_rank_oracle():
    rng = np.random.default_rng(5)
    for _ in range(40):
        A = rng.integers(0, 2, size=(10, 24), dtype=np.uint8)
        v = rng.integers(0, 2, size=24, dtype=np.uint8)
        expected = naive_rank(np.vstack([A, v])) == naive_rank(A)
        assert gf2.rowspace_member(A, v) == expected


def test_rowspace_member_length_mismatch():
    with pytest.raises(ValueError):
        gf2.rowspace_member(np.eye(3, dtype=np.uint8), np.zeros(4, dtype=np.uint8))


def test_kernel_intersection_single_identity_empty():
    assert gf2.kernel_intersection([np.eye(6, dtype=np.uint8)]).shape[0] == 0


def test_kernel_intersection_zero_matrices_full_space():
    B = gf2.kernel_intersection([np.zeros((2, 5), dtype=np.uint8)] * 3)
    assert B.shape[0] == 5


def test_kernel_intersection_annihilated_by_all():
    rng = np.random.default_rng(13)
    mats = [rng.integers(0, 2, size=(6, 30), dtype=np.uint8) for _ in range(3)]
    B = gf2.kernel_intersection(mats)
    for M in mats:
        if B.size:
            assert not gf2.matmul(M, B.T).any()


def test_kernel_intersection_shape_mismatch():
    with pytest.raises(ValueError):
        gf2.kernel_intersection([np.eye(3, dtype=np.uint8), np.eye(4, dtype=np.uint8)])


def test_solve_round_trip():
    rng = np.random.default_rng(17)
    for _ in range(30):
        A = rng.integers(0, 2, size=(12, 20), dtype=np.uint8)
        x = rng.integers(0, 2, size=20, dtype=np.uint8)
        s = gf2.matvec(A, x)
        got = gf2.solve(A, s)
        assert got is not None
        assert np.array_equal(gf2.matvec(A, got), s)


def test_solve_inconsistent_returns_none():
    A = np.zeros((2, 3), dtype=np.uint8)
    assert gf2.solve(A, [1, 0]) is None


def test_pack_unpack_round_trip():
    rng = np.random.default_rng(23)
    for n in (1, 63, 64, 65, 130):
        A = rng.integers(0, 2, size=(5, n), dtype=np.uint8)
        assert np.array_equal(gf2.unpack_rows(gf2.pack_rows(A), n), A)
