"""Belief propagation + ordered statistics decoding, and the overlapping
window decoder for spacetime detector models.

BP is product-sum with a parallel (flooding) schedule over the fault graph.
OSD-0 solves the syndrome on the most-suspicious information set; the
combination-sweep variant (CS-lambda) additionally tries single and pair
flips of the lambda most suspicious non-pivot faults and keeps the solution
with the best weighted likelihood.  Every returned correction reproduces the
syndrome exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._kernels import bp_product_sum, osd_elimination, packed_rref


@dataclass
class DecodeResult:
    correction: np.ndarray
    converged: bool
    osd_invoked: bool
    iterations: int
    llrs: np.ndarray | None = None
    llrs_final: np.ndarray | None = None


def _to_csc(H) -> sp.csc_matrix:
    M = sp.csc_matrix(H, dtype=np.uint8)
    M.data %= 2
    M.eliminate_zeros()
    return M


class BpOsd:
    """Reusable decoder for a fixed check matrix and priors."""

    def __init__(self, H, priors, max_iters: int = 30, osd_order: int = 0,
                 osd_method: str = "cs", damping: float = 0.0):
        self.H = _to_csc(H)
        self.m, self.n = self.H.shape
        self.priors = np.clip(np.asarray(priors, dtype=np.float64), 1e-12, 0.5)
        if self.priors.shape != (self.n,):
            raise ValueError("priors length must equal fault count")
        self.prior_llr = np.log((1.0 - self.priors) / self.priors)
        self.max_iters = int(max_iters)
        self.osd_order = int(osd_order)
        self.osd_method = osd_method
        self.damping = float(damping)

        # CSR-like edge structure for the BP kernel
        coo = self.H.tocoo()
        order_by_check = np.lexsort((coo.col, coo.row))
        self.edge_check = coo.row[order_by_check].astype(np.int64)
        self.edge_var = coo.col[order_by_check].astype(np.int64)
        n_edges = len(self.edge_var)
        self.check_edges = np.zeros(self.m + 1, dtype=np.int64)
        np.add.at(self.check_edges, self.edge_check + 1, 1)
        self.check_edges = np.cumsum(self.check_edges)
        self.edge_of_check = np.arange(n_edges, dtype=np.int64)
        by_var = np.argsort(self.edge_var, kind="stable")
        self.var_edges = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(self.var_edges, self.edge_var[by_var] + 1, 1)
        self.var_edges = np.cumsum(self.var_edges)
        self.edge_of_var = by_var.astype(np.int64)
        self._packed = None
        self._H_rank = None

    @property
    def _packed_H(self) -> np.ndarray:
        """Bit-packed rows of H, built lazily from the sparse structure."""
        if self._packed is None:
            coo = self.H.tocoo()
            nwords = max(1, (self.n + 63) // 64)
            words = np.zeros((self.m, nwords), dtype=np.uint64)
            np.bitwise_or.at(words, (coo.row, coo.col >> 6),
                             np.uint64(1) << (coo.col.astype(np.uint64) & np.uint64(63)))
            self._packed = words
        return self._packed

    # -- belief propagation ------------------------------------------------

    def bp_decode(self, syndrome, min_iters: int = 1) -> DecodeResult:
        """Product-sum BP; convergence means the hard decision satisfies the
        syndrome.  Non-convergence is reported, not an error.  The all-zero
        syndrome short-circuits to the zero correction with prior LLRs."""
        s = np.asarray(syndrome, dtype=np.uint8).ravel()
        if not s.any():
            return DecodeResult(np.zeros(self.n, dtype=np.uint8), True, False, 0,
                                self.prior_llr.copy())
        llrs = np.empty(self.n, dtype=np.float64)
        llrs_final = np.empty(self.n, dtype=np.float64)
        hard = np.empty(self.n, dtype=np.uint8)
        its = bp_product_sum(self.check_edges, self.var_edges, self.edge_var,
                             self.edge_check, self.edge_of_var, self.edge_of_check,
                             self.prior_llr, s, self.max_iters, min_iters,
                             self.damping, llrs, llrs_final, hard)
        if its > 0:
            llrs_final = llrs
        return DecodeResult(hard, its > 0, False, abs(int(its)), llrs, llrs_final)

    # -- ordered statistics ------------------------------------------------

    @property
    def _rank(self) -> int:
        if self._H_rank is None:
            words = self._packed_H.copy()
            r, _ = packed_rref(words, self.n)
            self._H_rank = int(r)
        return self._H_rank

    def osd_postprocess(self, llrs, syndrome) -> np.ndarray:
        """Syndrome-consistent correction from BP soft output.

        Faults are ranked most-suspicious first (ascending LLR); Gaussian
        elimination over that order picks the information set.  With
        osd_order > 0 a combination sweep over single and pair flips of the
        top-ranked non-pivot faults is applied, scored by the channel priors.

        Elimination runs on the top-K column submatrix, growing K until it
        carries the full matrix rank plus the sweep width; the result is
        identical to eliminating over all columns in order.
        """
        s = np.asarray(syndrome, dtype=np.uint8).ravel()
        col_order = np.argsort(llrs, kind="stable").astype(np.int64)
        target_rank = self._rank
        K = min(self.n, max(2 * target_rank, self.m, 4 * self.osd_order, 256))
        Hc = self.H
        while True:
            sub = col_order[:K]
            nw = max(1, (K + 63) // 64)
            aug = np.zeros((self.m, nw + 1), dtype=np.uint64)
            subH = Hc[:, sub].tocoo()
            np.bitwise_or.at(aug[:, :nw], (subH.row, subH.col >> 6),
                             np.uint64(1) << (subH.col.astype(np.uint64) & np.uint64(63)))
            aug[:, nw] = s.astype(np.uint64)
            rank, pivot_pos = osd_elimination(aug, K, np.arange(K, dtype=np.int64))
            if K >= self.n or (rank == target_rank and K - rank >= self.osd_order):
                break
            K = min(self.n, 2 * K)
        pivot_cols = sub[pivot_pos]
        if (aug[rank:, nw] & 1).any():
            # impossible for models built here; signals corruption upstream
            raise ValueError("syndrome is not in the column space of the fault matrix")

        e = np.zeros(self.n, dtype=np.uint8)
        piv_bits = (aug[:rank, nw] & 1).astype(np.uint8)
        e[pivot_cols] = piv_bits

        if self.osd_order <= 0:
            return e

        weights = self.prior_llr
        in_pivot = np.zeros(K, dtype=bool)
        in_pivot[pivot_pos] = True
        nonpiv_local = np.flatnonzero(~in_pivot)[: self.osd_order]
        if nonpiv_local.size == 0:
            return e
        # reduced columns over pivot rows, straight from the eliminated matrix
        cols_bits = np.empty((len(nonpiv_local), rank), dtype=np.uint8)
        for idx, c in enumerate(nonpiv_local):
            w, b = divmod(int(c), 64)
            cols_bits[idx] = (aug[:rank, w] >> np.uint64(b)).astype(np.uint8) & 1
        nonpiv_cols = sub[nonpiv_local]

        # vectorized candidate scoring: singles then pairs of top non-pivots
        n_np = len(nonpiv_local)
        singles = [(i,) for i in range(n_np)]
        pairs = [(i, j) for i in range(n_np) for j in range(i + 1, n_np)]
        candidates = singles + pairs
        deltas = np.zeros((len(candidates), rank), dtype=np.uint8)
        extra_w = np.zeros(len(candidates))
        for ci, cand in enumerate(candidates):
            for i in cand:
                deltas[ci] ^= cols_bits[i]
                extra_w[ci] += weights[nonpiv_cols[i]]
        piv_w = weights[pivot_cols]
        base = piv_bits[None, :] ^ deltas
        scores = base @ piv_w + extra_w
        best_score = float(piv_bits @ piv_w)
        ci_best = int(np.argmin(scores)) if len(candidates) else -1
        if ci_best >= 0 and scores[ci_best] < best_score:
            cand = candidates[ci_best]
            e = np.zeros(self.n, dtype=np.uint8)
            e[pivot_cols] = base[ci_best]
            for i in cand:
                e[nonpiv_cols[i]] = 1
        return e

    def decode(self, syndrome) -> DecodeResult:
        """BP, then OSD when BP fails to converge.

        OSD runs a deterministic multi-start over the available reliability
        orderings (iteration-averaged marginals, final-iteration marginals,
        channel priors) and keeps the best prior-scored solution.
        """
        res = self.bp_decode(syndrome)
        if res.converged:
            return res
        orderings = [res.llrs]
        if res.llrs_final is not None and not np.array_equal(res.llrs_final, res.llrs):
            orderings.append(res.llrs_final)
        orderings.append(self.prior_llr)
        best, best_score = None, np.inf
        for llrs in orderings:
            corr = self.osd_postprocess(llrs, syndrome)
            score = float(self.prior_llr[corr.astype(bool)].sum())
            if score < best_score:
                best, best_score = corr, score
        return DecodeResult(best, False, True, res.iterations, res.llrs, res.llrs_final)

    def decode_batch(self, syndromes) -> tuple[np.ndarray, np.ndarray]:
        """Decode rows of a (shots x detectors) batch.

        Returns (corrections, osd_flags).
        """
        S = np.atleast_2d(np.asarray(syndromes, dtype=np.uint8))
        out = np.zeros((S.shape[0], self.n), dtype=np.uint8)
        osd_flags = np.zeros(S.shape[0], dtype=bool)
        for i in range(S.shape[0]):
            res = self.decode(S[i])
            out[i] = res.correction
            osd_flags[i] = res.osd_invoked
        return out, osd_flags


def bp_decode(H, priors, syndrome, max_iters: int = 30) -> DecodeResult:
    return BpOsd(H, priors, max_iters=max_iters).bp_decode(syndrome)


def osd_postprocess(H, priors, syndrome, bp_llrs=None, order: int = 0) -> np.ndarray:
    dec = BpOsd(H, priors, osd_order=order)
    llrs = dec.prior_llr if bp_llrs is None else np.asarray(bp_llrs, dtype=np.float64)
    return dec.osd_postprocess(llrs, syndrome)


def bposd_decode(H, priors, syndrome, max_iters: int = 30, osd_order: int = 0) -> DecodeResult:
    return BpOsd(H, priors, max_iters=max_iters, osd_order=osd_order).decode(syndrome)


# -- overlapping window decoding --------------------------------------------


class WindowDecoder:
    """(w, c) overlapping-window decoder over a round-structured model.

    Decodes the detectors of w consecutive rounds at a time, commits the
    correction components assigned to the first c rounds, propagates the
    committed correction onto the remaining syndrome, and slides by c.  The
    final window commits everything.  (w, c) = (rounds, rounds) reproduces
    whole-history decoding exactly.
    """

    def __init__(self, model, w: int, c: int, max_iters: int = 30,
                 osd_order: int = 0, damping: float = 0.0):
        if not (1 <= c <= w):
            raise ValueError("need 1 <= c <= w")
        self.model = model
        self.w, self.c = int(w), int(c)
        rounds = int(model.rounds)
        self.rounds = rounds
        Fcsr = model.fault_matrix.tocsr()
        self._Fcsc = model.fault_matrix.tocsc()
        self.windows = []
        start = 0
        while True:
            stop = min(start + self.w, rounds)
            commit_stop = stop if stop >= rounds else min(start + self.c, rounds)
            det_idx = np.flatnonzero((model.detector_round >= start) & (model.detector_round < stop))
            fault_idx = np.flatnonzero((model.fault_round >= start) & (model.fault_round < stop))
            commit_mask = model.fault_round[fault_idx] < commit_stop
            Hw = Fcsr[det_idx].tocsc()[:, fault_idx]
            dec = BpOsd(Hw, model.priors[fault_idx], max_iters=max_iters,
                        osd_order=osd_order, damping=damping)
            self.windows.append((det_idx, fault_idx, commit_mask, dec))
            if stop >= rounds:
                break
            start += self.c

    def decode(self, syndrome) -> np.ndarray:
        S = np.asarray(syndrome, dtype=np.uint8).ravel().copy()
        total = np.zeros(self.model.n_faults, dtype=np.uint8)
        for det_idx, fault_idx, commit_mask, dec in self.windows:
            corr = dec.decode(S[det_idx]).correction
            committed = fault_idx[(corr & commit_mask).astype(bool)]
            if committed.size:
                total[committed] ^= 1
                # erase the committed correction's detector image
                image = np.asarray(self._Fcsc[:, committed].sum(axis=1)).ravel() % 2
                S ^= image.astype(np.uint8)
        return total

    def decode_batch(self, syndromes) -> np.ndarray:
        S = np.atleast_2d(np.asarray(syndromes, dtype=np.uint8)).copy()
        FT = self.model.fault_matrix.T.tocsr()
        total = np.zeros((S.shape[0], self.model.n_faults), dtype=np.uint8)
        for det_idx, fault_idx, commit_mask, dec in self.windows:
            corr, _ = dec.decode_batch(S[:, det_idx])
            committed = (corr & commit_mask[None, :]).astype(np.uint8)
            if committed.any():
                rows, cols = np.nonzero(committed)
                full = sp.coo_matrix((np.ones(len(rows), dtype=np.int64),
                                      (rows, fault_idx[cols])),
                                     shape=(S.shape[0], self.model.n_faults))
                total[:, fault_idx] ^= committed
                image = (full.tocsr() @ FT).toarray() % 2
                S ^= image.astype(np.uint8)
        return total


def window_decode(model, syndrome, w: int, c: int, max_iters: int = 30,
                  osd_order: int = 0) -> np.ndarray:
    """One-shot (w, c) windowed decode; see WindowDecoder."""
    return WindowDecoder(model, w, c, max_iters=max_iters, osd_order=osd_order).decode(syndrome)


class TwoStageDecoder:
    """Experimental alternative for phenomenological Z memory: repair each
    round's measured Z-check record via the meta-check redundancy, then
    decode the repaired per-round differences spatially.

    Returns predicted observable flips directly (stage two works on the
    repaired record rather than on model fault columns).  Not the default
    path; windows decode the spacetime model directly.
    """

    def __init__(self, model, code, max_iters: int = 30, osd_order: int = 0):
        if model.meta.get("basis") != "Z" or model.meta.get("kind") != "phenomenological":
            raise ValueError("two-stage decoding targets phenomenological Z memory")
        self.model = model
        self.code = code
        self.n_checks = code.H_Z.shape[0]
        self.rounds = model.rounds - 1   # measurement rounds
        p = model.meta["p"]
        self.repair = BpOsd(code.M_Z, np.full(self.n_checks, max(p, 1e-6)),
                            max_iters=max_iters, osd_order=osd_order)
        # stage two decodes [H_Z | I]: data errors plus residual measurement
        # errors the meta repair could not see (meta-valid but outside im H_Z)
        spatial_H = sp.hstack([sp.csc_matrix(code.H_Z),
                               sp.identity(self.n_checks, dtype=np.uint8, format="csc")])
        priors = np.concatenate([np.full(code.n, max(p, 1e-6)),
                                 np.full(self.n_checks, max(p, 1e-6) / 2)])
        self.spatial = BpOsd(spatial_H, priors, max_iters=max_iters,
                             osd_order=osd_order)
        self.L = model.meta["logical_basis"]

    def predict_observables(self, syndrome) -> np.ndarray:
        s = np.asarray(syndrome, dtype=np.uint8).reshape(self.model.rounds, self.n_checks)
        record = np.cumsum(s, axis=0) % 2   # measured check record per round
        repaired = record.copy()
        for r in range(self.rounds):
            meta = (self.code.M_Z.astype(np.int64) @ record[r]) % 2
            fix = self.repair.decode(meta.astype(np.uint8)).correction
            repaired[r] ^= fix
        total = np.zeros(self.code.n, dtype=np.uint8)
        prev = np.zeros(self.n_checks, dtype=np.uint8)
        for r in range(self.rounds + 1):
            # the last row is the readout-derived record and needs no repair
            cur = repaired[r] if r < self.rounds else record[self.rounds]
            corr = self.spatial.decode(cur ^ prev).correction
            total ^= corr[: self.code.n]
            prev = cur
        return (total.astype(np.int64) @ self.L.T.astype(np.int64) % 2).astype(np.uint8)
