"""Numba-compiled kernels for bit-packed GF(2) elimination and BP decoding.

Matrices are packed row-wise into uint64 words, 64 columns per word, column c
living in word c >> 6 at bit c & 63.  Set TTCODES_NO_NUMBA=1 to fall back to
the pure-Python versions (slow, for debugging).
"""

from __future__ import annotations

import os

import numpy as np

_USE_NUMBA = os.environ.get("TTCODES_NO_NUMBA", "0") != "1"

if _USE_NUMBA:
    from numba import njit
else:  # pragma: no cover - debugging escape hatch
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def packed_rref(words, ncols):
    """In-place reduced row echelon form of a packed matrix.

    Returns (rank, pivot_cols) where pivot_cols[:rank] are the pivot column
    indices in increasing order.
    """
    nrows = words.shape[0]
    pivot_cols = np.full(min(nrows, ncols), -1, dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        pivot = -1
        for i in range(r, nrows):
            if words[i, w] & bit:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            for k in range(words.shape[1]):
                tmp = words[r, k]
                words[r, k] = words[pivot, k]
                words[pivot, k] = tmp
        for i in range(nrows):
            if i != r and (words[i, w] & bit):
                for k in range(words.shape[1]):
                    words[i, k] ^= words[r, k]
        pivot_cols[r] = c
        r += 1
    return r, pivot_cols[:r]


@njit(cache=True)
def packed_reduce_vector(vec, rref_words, pivot_cols):
    """Reduce a packed row vector against an RREF basis, in place.

    Returns True when the vector lies in the row space (reduces to zero).
    """
    for r in range(len(pivot_cols)):
        c = pivot_cols[r]
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        if vec[w] & bit:
            for k in range(vec.shape[0]):
                vec[k] ^= rref_words[r, k]
    for k in range(vec.shape[0]):
        if vec[k]:
            return False
    return True


@njit(cache=True)
def osd_elimination(words, ncols, col_order):
    """Gaussian elimination with column pivoting in a prescribed order.

    `words` is the packed [H | extra] matrix and is reduced in place; pivots
    are searched along `col_order` (indices into the first ncols columns).
    Returns (rank, pivot_positions) where pivot_positions[j] is the index
    into col_order of the j-th pivot.
    """
    nrows = words.shape[0]
    pivot_pos = np.full(min(nrows, len(col_order)), -1, dtype=np.int64)
    r = 0
    for j in range(len(col_order)):
        if r >= nrows:
            break
        c = col_order[j]
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        pivot = -1
        for i in range(r, nrows):
            if words[i, w] & bit:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            for k in range(words.shape[1]):
                tmp = words[r, k]
                words[r, k] = words[pivot, k]
                words[pivot, k] = tmp
        for i in range(nrows):
            if i != r and (words[i, w] & bit):
                for k in range(words.shape[1]):
                    words[i, k] ^= words[r, k]
        pivot_pos[r] = j
        r += 1
    return r, pivot_pos[:r]


@njit(cache=True)
def bp_product_sum(check_edges, var_edges, edge_var, edge_check, edge_of_var,
                   edge_of_check, prior_llr, syndrome, max_iters, min_iters,
                   damping, llr_out, llr_final_out, hard_out):
    """Product-sum BP with a parallel (flooding) schedule, one syndrome.

    Edge arrays describe the sparse Tanner graph in CSR-like form:
      edge_of_check[check_edges[c]:check_edges[c+1]] = edges touching check c
      edge_of_var[var_edges[v]:var_edges[v+1]]       = edges touching var v
    Returns the number of iterations used; 0 means the zero syndrome was
    satisfied immediately.  Convergence = hard decision satisfies syndrome.
    """
    n_checks = len(check_edges) - 1
    n_vars = len(var_edges) - 1
    n_edges = len(edge_var)

    var_to_check = np.empty(n_edges, dtype=np.float64)
    check_to_var = np.zeros(n_edges, dtype=np.float64)
    prev_msg = np.zeros(n_edges, dtype=np.float64)
    llr_sum = np.zeros(n_vars, dtype=np.float64)

    for e in range(n_edges):
        var_to_check[e] = prior_llr[edge_var[e]]

    for it in range(1, max_iters + 1):
        if damping > 0.0 and it > 1:
            for e in range(n_edges):
                prev_msg[e] = check_to_var[e]
        # check update
        for c in range(n_checks):
            lo = check_edges[c]
            hi = check_edges[c + 1]
            sign = -1.0 if syndrome[c] else 1.0
            prod = sign
            for t in range(lo, hi):
                e = edge_of_check[t]
                x = np.tanh(0.5 * var_to_check[e])
                if x > 0.9999999999:
                    x = 0.9999999999
                elif x < -0.9999999999:
                    x = -0.9999999999
                elif -1e-12 < x < 1e-12:
                    x = 1e-12 if x >= 0 else -1e-12
                check_to_var[e] = x
                prod *= x
            for t in range(lo, hi):
                e = edge_of_check[t]
                ratio = prod / check_to_var[e]
                # guard arctanh's domain: saturation can push |ratio| past 1
                if ratio > 0.9999999999:
                    ratio = 0.9999999999
                elif ratio < -0.9999999999:
                    ratio = -0.9999999999
                fresh = 2.0 * np.arctanh(ratio)
                if it > 1 and damping > 0.0:
                    check_to_var[e] = damping * prev_msg[e] + (1.0 - damping) * fresh
                else:
                    check_to_var[e] = fresh
        # variable update + hard decision
        satisfied = True
        for v in range(n_vars):
            lo = var_edges[v]
            hi = var_edges[v + 1]
            total = prior_llr[v]
            for t in range(lo, hi):
                total += check_to_var[edge_of_var[t]]
            llr_out[v] = total
            llr_sum[v] += total
            hard_out[v] = 1 if total < 0.0 else 0
            for t in range(lo, hi):
                e = edge_of_var[t]
                var_to_check[e] = total - check_to_var[e]
        # syndrome check
        for c in range(n_checks):
            par = 0
            for t in range(check_edges[c], check_edges[c + 1]):
                par ^= hard_out[edge_var[edge_of_check[t]]]
            if par != syndrome[c]:
                satisfied = False
                break
        if satisfied and (it >= min_iters or it == max_iters):
            return it
    # not converged: report iteration-averaged marginals, which rank faults
    # far more reliably than the final state of an oscillating trajectory;
    # the raw final-iteration marginals stay available separately
    for v in range(n_vars):
        llr_final_out[v] = llr_out[v]
        llr_out[v] = llr_sum[v] / max_iters
        hard_out[v] = 1 if llr_out[v] < 0.0 else 0
    return -max_iters


@njit(cache=True)
def xor_columns_into(synd_row, col_indptr, col_indices, fault_ids):
    """XOR the detector columns of the given faults into a syndrome row."""
    for f in fault_ids:
        for t in range(col_indptr[f], col_indptr[f + 1]):
            synd_row[col_indices[t]] ^= 1
