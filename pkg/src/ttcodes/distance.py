"""Distance certification and search for TT codes.

Three bases are supported:
  Z: min weight of ker(H_X) \\ rs(H_Z)      (Z-type logical operators)
  X: min weight of ker(H_Z) \\ rs(H_X)      (X-type logical operators)
  M: min weight of ker(M_Z) \\ cs(H_Z)      (meta-check distance)

Search bounds combine (a) algebraic candidates from the f / (g,h,j)
polynomial spaces, (b) decoder-probe searches that BP+OSD-decode each dual
logical as a syndrome-free target under random channel weightings, and (c)
random-information-set sampling over the kernel.  Certification enumerates
all vectors up to a weight cap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .code import TTCode
from .decoder import BpOsd
from .groupalg import GroupPolynomial
from .logicals import coset_logical_basis, dual_basis, find_ghj_triples
from ._kernels import packed_rref

BASES = ("Z", "X", "M")


def basis_spaces(code: TTCode, basis: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(H_ker, H_mod, H_dual_ker) for the requested distance basis."""
    if basis == "Z":
        return code.H_X, code.H_Z, code.H_Z
    if basis == "X":
        return code.H_Z, code.H_X, code.H_X
    if basis == "M":
        return code.M_Z, code.H_Z.T, code.H_Z.T
    raise ValueError(f"basis must be one of {BASES}")


@dataclass
class DistanceBound:
    basis: str
    weight: int | None
    certified: bool
    method: str
    budget: dict = field(default_factory=dict)
    vector: np.ndarray | None = None

    def __str__(self) -> str:
        if self.weight is None:
            return f"d_{self.basis} > {self.budget.get('w_max', '?')} (searched)"
        rel = "=" if self.certified else "<="
        return f"d_{self.basis} {rel} {self.weight}"


# -- exhaustive certification --------------------------------------------------


def certify_distance_exhaustive(code: TTCode, basis: str, w_max: int,
                                budget: int = 10_000_000) -> DistanceBound:
    """Exact distance by enumerating every vector of weight <= w_max.

    Returns a certified bound when a logical is found; weight=None records
    that no logical of weight <= w_max exists (so d > w_max).  Raises when
    the enumeration would exceed the candidate budget.
    """
    H_ker, H_mod, _ = basis_spaces(code, basis)
    n = H_ker.shape[1]
    total = sum(math.comb(n, w) for w in range(1, w_max + 1))
    if total > budget:
        raise ValueError(f"enumeration needs {total} candidates; budget is {budget}")
    col_masks = []
    for c in range(n):
        mask = 0
        for r in np.flatnonzero(H_ker[:, c]):
            mask |= 1 << int(r)
        col_masks.append(mask)
    mod_rref = gf2.Rref(H_mod)
    for w in range(1, w_max + 1):
        for combo in itertools.combinations(range(n), w):
            acc = 0
            for c in combo:
                acc ^= col_masks[c]
            if acc:
                continue
            v = np.zeros(n, dtype=np.uint8)
            v[list(combo)] = 1
            if not mod_rref.contains(v):
                return DistanceBound(basis, w, True, "exhaustive",
                                     {"w_max": w_max, "candidates": total}, v)
    return DistanceBound(basis, None, True, "exhaustive",
                         {"w_max": w_max, "candidates": total})


# -- search --------------------------------------------------------------------


def _algebraic_candidates(code: TTCode, basis: str, rng=None):
    """Low-weight candidates from structured subspaces of the kernel.

    Block-restricted supports (one block or a pair of blocks) give small
    kernels that are enumerated fully when affordable and information-set
    polished otherwise; the (g,h,j) space supplies full-support candidates.
    """
    if basis == "M":  # map Z candidates through the antipode (the d_M = d_Z map)
        return [antipode_blocks(code, v) for v in _algebraic_candidates(code, "Z", rng)]
    rng = rng or np.random.default_rng(12345)
    H_ker = basis_spaces(code, basis)[0]
    n = H_ker.shape[1]
    g = n // 3
    cands: list[np.ndarray] = []

    def lift(cols, vec_small):
        v = np.zeros(n, dtype=np.uint8)
        v[cols] = vec_small
        return v

    for blocks in ([0], [1], [2], [0, 1], [0, 2], [1, 2]):
        cols = np.concatenate([np.arange(b * g, (b + 1) * g) for b in blocks])
        K = gf2.kernel_basis(H_ker[:, cols])
        dim = K.shape[0]
        if dim == 0:
            continue
        if dim <= 14:
            # full span enumeration via Gray code
            acc = np.zeros(len(cols), dtype=np.uint8)
            prev = 0
            for t in range(1, 1 << dim):
                gray = t ^ (t >> 1)
                acc = acc ^ K[(prev ^ gray).bit_length() - 1]
                prev = gray
                cands.append(lift(cols, acc))
        else:
            for v in K:
                cands.append(lift(cols, v))
            for _ in range(200):
                perm = rng.permutation(len(cols))
                words = gf2.pack_rows(K[:, perm])
                packed_rref(words, len(cols))
                rows = gf2.unpack_rows(words, len(cols))
                weights = rows.sum(axis=1)
                r = int(np.argmin(weights))
                vec_small = np.zeros(len(cols), dtype=np.uint8)
                vec_small[perm] = rows[r]
                cands.append(lift(cols, vec_small))

    # full-support candidates from the (g,h,j) family
    ghjs = find_ghj_triples(code)
    triples = list(ghjs) + [tuple(x + y for x, y in zip(a, b))
                            for a, b in itertools.combinations(ghjs, 2)]
    for (gp, hp, jp) in triples:
        if basis == "X":
            parts = (gp, hp, jp)
        else:
            parts = (hp.transpose(), gp.transpose(), GroupPolynomial(code.dims))
        v = np.concatenate([P.to_vector() for P in parts])
        if v.any():
            cands.append(v)
    return cands


def antipode_blocks(code: TTCode, v: np.ndarray) -> np.ndarray:
    """Apply the per-block antipode permutation (monomial inversion).

    Maps Z-type logicals bijectively onto meta-check logicals and back,
    preserving weight.
    """
    dims = code.dims
    g = dims.order
    perm = np.empty(g, dtype=np.int64)
    for idx in range(g):
        i, j, k = dims.exponents(idx)
        perm[idx] = dims.index(-i, -j, -k)
    out = np.empty_like(np.asarray(v))
    for b in range(3):
        out[b * g:(b + 1) * g][perm] = v[b * g:(b + 1) * g]
    return out


def _information_set_trials(H_ker, mod_rref, trials, rng, best_w, on_hit):
    """Random column permutations + RREF over the kernel basis; rows of the
    reduced basis are low-weight codeword candidates."""
    K = gf2.kernel_basis(H_ker)
    if K.shape[0] == 0:
        return
    n = K.shape[1]
    for _ in range(trials):
        perm = rng.permutation(n)
        words = gf2.pack_rows(K[:, perm])
        packed_rref(words, n)
        weights = np.bitwise_count(words).sum(axis=1)
        for r in np.flatnonzero(weights < best_w[0]):
            row = gf2.unpack_rows(words[r:r + 1], n)[0]
            v = np.zeros(n, dtype=np.uint8)
            v[perm] = row
            if not mod_rref.contains(v):
                on_hit(int(weights[r]), v)


def _decoder_probes(H_ker, mod_rref, duals, weightings, rng, best_w, on_hit,
                    max_iters=40, osd_order=8):
    """BP+OSD probe: decode each dual logical as a syndrome-free error."""
    m, n = H_ker.shape
    for d in duals:
        aug = np.vstack([H_ker, d.reshape(1, -1)])
        target = np.zeros(m + 1, dtype=np.uint8)
        target[m] = 1
        for _ in range(weightings):
            priors = rng.uniform(0.01, 0.3, size=n)
            dec = BpOsd(aug, priors, max_iters=max_iters, osd_order=osd_order)
            res = dec.decode(target)
            v = res.correction
            w = int(v.sum())
            if w and w < best_w[0] and not mod_rref.contains(v):
                on_hit(w, v)


def estimate_distance(code: TTCode, basis: str, info_trials: int = 10_000,
                      probe_weightings: int = 20, seed: int = 0,
                      algebraic: bool = True) -> DistanceBound:
    """Upper bound on the distance from the three search strategies combined.

    Deterministic given (code, basis, budgets, seed).  Requires k >= 1.
    """
    H_ker, H_mod, H_dual_ker = basis_spaces(code, basis)
    mod_rref = gf2.Rref(H_mod)
    L = coset_logical_basis(H_ker, H_mod)
    if L.shape[0] == 0:
        raise ValueError("code has no logical qubits in this basis (k = 0)")
    duals = dual_basis(L, H_dual_ker)
    rng = np.random.default_rng(seed)

    best = [np.inf, None]

    def on_hit(w, v):
        if w < best[0]:
            best[0], best[1] = w, v.copy()

    for v in L:
        on_hit(int(v.sum()), v)
    if algebraic:
        cands = _algebraic_candidates(code, basis, rng)
        weights = np.array([int(v.sum()) for v in cands])
        for idx in np.argsort(weights, kind="stable"):
            w = int(weights[idx])
            if w == 0 or w >= best[0]:
                break
            if not mod_rref.contains(cands[idx]):
                assert not gf2.matvec(H_ker, cands[idx]).any()
                on_hit(w, cands[idx])
                break
    _decoder_probes(H_ker, mod_rref, duals, probe_weightings, rng, best, on_hit)
    # probe random dual combinations as well
    k = duals.shape[0]
    if k > 1:
        combos = []
        for _ in range(min(probe_weightings, 2 * k)):
            mask = rng.integers(0, 2, size=k, dtype=np.uint8)
            if mask.sum() >= 2:
                combos.append(mask.astype(np.int64) @ duals.astype(np.int64) % 2)
        if combos:
            _decoder_probes(H_ker, mod_rref, np.array(combos, dtype=np.uint8),
                            max(1, probe_weightings // 2), rng, best, on_hit)
    _information_set_trials(H_ker, mod_rref, info_trials, rng, best, on_hit)

    budget = {"info_trials": info_trials, "probe_weightings": probe_weightings, "seed": seed}
    return DistanceBound(basis, int(best[0]), False, "search", budget, best[1])


# -- minimum-weight logical bases ------------------------------------------------


def min_weight_logical_basis(code: TTCode, basis: str = "Z", seed: int = 0,
                             info_trials: int = 2000, probe_weightings: int = 12,
                             extra_probe_rounds: int = 4) -> np.ndarray:
    """A full logical basis assembled greedily from low-weight candidates.

    Rows are sorted heaviest first (ties broken by support pattern), so the
    lightest logical sits last; intersection-number reports are stated in
    this basis.
    """
    H_ker, H_mod, H_dual_ker = basis_spaces(code, basis)
    mod_rref = gf2.Rref(H_mod)
    L = coset_logical_basis(H_ker, H_mod)
    k = L.shape[0]
    duals = dual_basis(L, H_dual_ker)
    rng = np.random.default_rng(seed)

    candidates: list[np.ndarray] = [v for v in L]
    sink = [np.inf, None]

    def collect(w, v):
        candidates.append(v.copy())

    candidates.extend(_algebraic_candidates(code, basis, rng))
    _decoder_probes(H_ker, mod_rref, duals, probe_weightings, rng, sink, collect)
    _information_set_trials(H_ker, mod_rref, info_trials, rng, [np.inf, None], collect)
    # probe shifted combinations to diversify representatives
    for _ in range(extra_probe_rounds):
        masks = rng.integers(0, 2, size=(k, k), dtype=np.uint8)
        np.fill_diagonal(masks, 1)
        combo = (masks.astype(np.int64) @ duals.astype(np.int64) % 2).astype(np.uint8)
        _decoder_probes(H_ker, mod_rref, combo, max(2, probe_weightings // 2),
                        rng, sink, collect)

    candidates.sort(key=lambda v: (int(v.sum()), v.tobytes()))
    chosen: list[np.ndarray] = []
    span = gf2.IncrementalRref(H_ker.shape[1], seed_rows=H_mod)
    for v in candidates:
        if len(chosen) == k:
            break
        if not v.any():
            continue
        if span.add(v):
            assert not gf2.matvec(H_ker, v).any()
            chosen.append(v)
    if len(chosen) < k:
        raise RuntimeError("failed to assemble a complete logical basis")
    chosen.sort(key=lambda v: (-int(v.sum()), v.tobytes()))
    return np.array(chosen, dtype=np.uint8)
