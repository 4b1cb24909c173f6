import itertools, time, sys
import numpy as np
from ttcodes import catalog, gf2
from ttcodes.groupalg import Monomial
from ttcodes.code import BLOCKS
from ttcodes.nonclifford import (partition_preorientation, CCZCircuit, conjugate_x_basis,
                                 intersection_tensor, verify_ccz_stabilizer)
from ttcodes.distance import (basis_spaces, min_weight_logical_basis, _algebraic_candidates,
                              _decoder_probes, _information_set_trials)
from ttcodes.logicals import coset_logical_basis, dual_basis

def build_set(code, pos):
    om = {"L": pos[0], "C": pos[1], "R": pos[2]}
    dims, g = code.dims, code.g
    gates = set()
    for Q1, Q2, Q3 in itertools.permutations(BLOCKS):
        in1, out2, in2, out3 = om[Q1].in_terms, om[Q2].out_terms, om[Q2].in_terms, om[Q3].out_terms
        off1, off2, off3 = (BLOCKS.index(Q) * g for Q in (Q1, Q2, Q3))
        for idx in range(g):
            alpha = Monomial(dims, *dims.exponents(idx))
            betas = {t2 * s1.transpose() * alpha for t2, s1 in itertools.product(out2, in1)}
            for beta in betas:
                gammas = {t3 * s2.transpose() * beta for t3, s2 in itertools.product(out3, in2)}
                gates.update((off1 + alpha.index, off2 + beta.index, off3 + gamma.index) for gamma in gammas)
    return sorted(gates)

def candidate_pool(code, seed=0):
    H_ker, H_mod, H_dual = basis_spaces(code, "Z")
    mod_rref = gf2.Rref(H_mod)
    L = coset_logical_basis(H_ker, H_mod)
    duals = dual_basis(L, H_dual)
    rng = np.random.default_rng(seed)
    pool = [v for v in L]
    sink = [np.inf, None]
    collect = lambda w, v: pool.append(v.copy())
    pool.extend(v for v in _algebraic_candidates(code, "Z", rng) if not mod_rref.contains(v))
    _decoder_probes(H_ker, mod_rref, duals, 16, rng, sink, collect)
    _information_set_trials(H_ker, mod_rref,3000, rng, [np.inf, None], collect)
    uniq = {v.tobytes(): v for v in pool}
    return list(uniq.values()), L.shape[0]

def greedy_basis(pool, k, H_mod, target_weights, rng):
    by_w = {}
    for v in pool:
        by_w.setdefault(int(v.sum()), []).append(v)
    span = gf2.IncrementalRref(H_mod.shape[1], seed_rows=H_mod)
    chosen = []
    for w in sorted(target_weights):   # ascending build
        cands = by_w.get(w, [])
        order = rng.permutation(len(cands))
        got = None
        for i in order:
            if span.add(cands[i]):
                got = cands[i]; break
        if got is None:
            return None
        chosen.append(got)
    chosen.sort(key=lambda v: (-int(v.sum()), v.tobytes()))
    return np.array(chosen, dtype=np.uint8)

targets = {"ccz_48_6_2": 10, "ccz_54_9_2": 36, "ccz_108_18_2": 114,
           "ccz_108_18_2_442": 204, "ccz_108_60_2_444": 552}
for name, want in targets.items():
    t0 = time.time()
    e = catalog.entry(name)
    code = e.build()
    facts = (catalog.FACTORED_A.get(name), catalog.FACTORED_B.get(name), catalog.FACTORED_C.get(name))
    pos = [partition_preorientation(P, "auto", factored=f) for P, f in zip(code.polys, facts)]
    gates = build_set(code, pos)
    Lz0 = min_weight_logical_basis(code, "Z", seed=0)
    weights = [int(v.sum()) for v in Lz0]
    pool, k = candidate_pool(code, seed=0)
    low = [v for v in pool if int(v.sum()) <= max(weights)]
    print(f"{name}: k={k} pool={len(pool)} low-weight pool={len(low)} weights={weights}", flush=True)
    rng = np.random.default_rng(2024)
    counts_seen = {}
    hit = None
    for trial in range(400):
        B = greedy_basis(low, k, code.H_Z, weights, rng)
        if B is None:
            continue
        if [int(v.sum()) for v in B] != weights:
            continue
        Lx = conjugate_x_basis(code, B)
        c = int(intersection_tensor(Lx, gates).sum())
        counts_seen[c] = counts_seen.get(c, 0) + 1
        if c == want:
            hit = (trial, B)
            break
    print(f"   counts seen: {sorted(counts_seen.items())} hit={hit is not None} "
          f"[{time.time()-t0:.0f}s]", flush=True)
    if hit is not None:
        np.save(f"/tmp/basis_{name}.npy", hit[1])
