"""Exact GF(2) linear algebra on dense 0/1 numpy arrays.

Matrices are plain uint8 arrays with entries in {0, 1}.  Hot elimination
paths run on a bit-packed (uint64) copy via the numba kernels; everything
returned to callers is unpacked 0/1 again.
"""

from __future__ import annotations

import numpy as np

from ._kernels import packed_reduce_vector, packed_rref


def as_gf2(M) -> np.ndarray:
    """Coerce to a 2-D uint8 array reduced mod 2."""
    A = np.atleast_2d(np.asarray(M))
    return (A & 1).astype(np.uint8) if A.dtype.kind in "iub" else (A.astype(np.int64) & 1).astype(np.uint8)


def pack_rows(M: np.ndarray) -> np.ndarray:
    """Pack the rows of a 0/1 matrix into uint64 words (64 cols per word)."""
    A = as_gf2(M)
    m, n = A.shape
    nwords = max(1, (n + 63) // 64)
    padded = np.zeros((m, nwords * 64), dtype=np.uint8)
    padded[:, :n] = A
    # packbits uses big-endian bit order within bytes; flip to get bit c of
    # word c>>6 at position c&63
    bits = padded.reshape(m, nwords, 8, 8)[:, :, :, ::-1]
    packed_bytes = np.packbits(bits.reshape(m, -1), axis=1)
    return packed_bytes.view(np.uint64).reshape(m, nwords)


def unpack_rows(words: np.ndarray, ncols: int) -> np.ndarray:
    """Inverse of pack_rows."""
    m, nwords = words.shape
    if m == 0:
        return np.zeros((0, ncols), dtype=np.uint8)
    as_bytes = words.reshape(m, -1).view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=1).reshape(m, nwords, 8, 8)[:, :, :, ::-1]
    return bits.reshape(m, -1)[:, :ncols].astype(np.uint8)


class Rref:
    """Reduced row echelon form of a matrix, kept packed for reuse.

    Supports fast rank queries, row-space membership tests and reduction of
    further vectors against the basis.
    """

    def __init__(self, M: np.ndarray):
        A = as_gf2(M)
        self.ncols = A.shape[1]
        words = pack_rows(A) if A.size else np.zeros((0, 1), dtype=np.uint64)
        if A.shape[0] == 0:
            self.rank = 0
            self.pivot_cols = np.zeros(0, dtype=np.int64)
            self.words = np.zeros((0, max(1, (self.ncols + 63) // 64)), dtype=np.uint64)
            return
        rank, pivots = packed_rref(words, self.ncols)
        self.rank = int(rank)
        self.pivot_cols = np.asarray(pivots, dtype=np.int64)
        self.words = words[: self.rank].copy()

    def contains(self, v) -> bool:
        """True iff v lies in the row space."""
        vec = pack_rows(np.asarray(v).reshape(1, -1))[0].copy()
        return bool(packed_reduce_vector(vec, self.words, self.pivot_cols))

    def reduce(self, v) -> np.ndarray:
        """Return v reduced modulo the row space (as 0/1 vector)."""
        vec = pack_rows(np.asarray(v).reshape(1, -1))[0].copy()
        packed_reduce_vector(vec, self.words, self.pivot_cols)
        return unpack_rows(vec.reshape(1, -1), self.ncols)[0]

    def rows(self) -> np.ndarray:
        return unpack_rows(self.words, self.ncols)


class IncrementalRref:
    """Row-space basis that accepts rows one at a time.

    add(v) reduces v against the current basis; independent vectors extend
    the basis and return True.  contains(v) is a pure membership test.
    """

    def __init__(self, ncols: int, seed_rows=None):
        self.ncols = ncols
        self.nwords = max(1, (ncols + 63) // 64)
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []
        if seed_rows is not None:
            for r in as_gf2(seed_rows):
                self.add(r)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, v) -> np.ndarray:
        vec = pack_rows(np.asarray(v).reshape(1, -1))[0].copy()
        for row, piv in zip(self.rows, self.pivots):
            if (vec[piv >> 6] >> np.uint64(piv & 63)) & np.uint64(1):
                vec ^= row
        return vec

    def contains(self, v) -> bool:
        return not self._reduce(v).any()

    def add(self, v) -> bool:
        vec = self._reduce(v)
        if not vec.any():
            return False
        # leading bit = pivot
        for w in range(self.nwords):
            if vec[w]:
                vi = int(vec[w])
                piv = w * 64 + (vi & -vi).bit_length() - 1
                break
        self.rows.append(vec)
        self.pivots.append(piv)
        return True


def rank(M) -> int:
    """GF(2) rank via packed elimination."""
    return Rref(M).rank


def rref(M) -> tuple[np.ndarray, list[int]]:
    """Return (rref matrix with zero rows dropped, pivot columns)."""
    R = Rref(M)
    return R.rows(), list(R.pivot_cols)


def kernel_basis(M) -> np.ndarray:
    """Basis of the right null space, one basis vector per row.

    Size is cols - rank; the zero matrix yields the full standard basis.
    """
    A = as_gf2(M)
    m, n = A.shape
    R = Rref(A)
    pivots = list(R.pivot_cols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(n) if c not in pivot_set]
    rows = R.rows()
    basis = np.zeros((len(free_cols), n), dtype=np.uint8)
    for b, f in enumerate(free_cols):
        basis[b, f] = 1
        for r, c in enumerate(pivots):
            if rows[r, f]:
                basis[b, c] = 1
    return basis


def rowspace_member(M, v) -> bool:
    """True iff v is an F2 combination of the rows of M."""
    A = as_gf2(M)
    vec = np.asarray(v).ravel()
    if vec.shape[0] != A.shape[1]:
        raise ValueError(f"length mismatch: vector {vec.shape[0]} vs {A.shape[1]} columns")
    return Rref(A).contains(vec)


def kernel_intersection(mats) -> np.ndarray:
    """Basis of the common right kernel of a list of matrices.

    Computed as the kernel of the stacked matrix; all inputs must share a
    column count.
    """
    mats = [as_gf2(M) for M in mats]
    if not mats:
        raise ValueError("need at least one matrix")
    ncols = mats[0].shape[1]
    for M in mats:
        if M.shape[1] != ncols:
            raise ValueError("column count mismatch in kernel_intersection")
    return kernel_basis(np.vstack(mats))


def solve(M, s) -> np.ndarray | None:
    """One solution x of M x = s over GF(2), or None when inconsistent."""
    A = as_gf2(M)
    svec = (np.asarray(s).ravel() & 1).astype(np.uint8)
    aug = np.hstack([A, svec.reshape(-1, 1)])
    R = Rref(aug)
    n = A.shape[1]
    x = np.zeros(n, dtype=np.uint8)
    rows = R.rows()
    for r, c in zip(range(R.rank), R.pivot_cols):
        if c == n:
            return None
        x[c] = rows[r, n]
    return x


def matmul(A, B) -> np.ndarray:
    """Matrix product mod 2."""
    return (as_gf2(A).astype(np.int64) @ as_gf2(B).astype(np.int64) & 1).astype(np.uint8)


def matvec(A, v) -> np.ndarray:
    return (as_gf2(A).astype(np.int64) @ (np.asarray(v).ravel().astype(np.int64)) & 1).astype(np.uint8)
