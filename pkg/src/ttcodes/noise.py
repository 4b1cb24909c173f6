"""Noise models and detector-model construction.

A DetectorModel is the decoding problem: a sparse fault-to-detector matrix,
a fault-to-observable matrix, per-fault priors, and round coordinates for
windowed decoding.  Detectors compare two measurements of the same check in
consecutive rounds (or a check against the known initial state / final data
readout); they fire deterministically zero in the absence of faults.

Phenomenological model: per round, each data qubit suffers the memory-basis-
relevant Pauli with probability p (the classic phenomenological convention,
which reproduces the published memory-experiment numbers) and every
measurement -- check readouts and the final per-qubit data readout alike --
is flipped with probability p.  Passing depolarizing_split=True instead
draws the harmful component from a strength-p depolarizing channel (rate
2p/3).

Circuit-level model: bit/phase flips after resets, single-qubit depolarizing
on idling qubits, two-qubit depolarizing after every CNOT, and measurement
flips before each readout, all at strength p.  X-measure resets are
noiseless; idle slots created by omitted third-term gates carry no noise;
post-measurement slots awaiting a reset carry no noise (the state is
discarded).  Every elementary Pauli outcome is propagated through the
circuit to its flipped detectors and observables, and identical columns are
merged with odd-probability combination.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .circuits import DEPTH, MEASURE_LAYER, RESET_LAYER, Circuit, build_memory_circuit
from .code import TTCode
from .logicals import coset_logical_basis


@dataclass
class DetectorModel:
    fault_matrix: sp.csc_matrix
    observable_matrix: sp.csc_matrix
    priors: np.ndarray
    detector_round: np.ndarray
    fault_round: np.ndarray
    rounds: int
    detector_meta: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def n_detectors(self) -> int:
        return self.fault_matrix.shape[0]

    @property
    def n_faults(self) -> int:
        return self.fault_matrix.shape[1]

    def validate(self):
        cols_f = np.diff(self.fault_matrix.tocsc().indptr)
        cols_o = np.diff(self.observable_matrix.tocsc().indptr)
        if ((cols_f == 0) & (cols_o == 0)).any():
            raise ValueError("empty fault column survived merging")
        if not ((self.priors > 0) & (self.priors <= 0.5)).all():
            raise ValueError("priors must lie in (0, 0.5]")
        return self


def _merge_columns(columns, obs_columns, priors, n_det, n_obs, rounds,
                   detector_round, detector_meta, meta):
    """Merge identical (detectors, observables) signatures; p' = a+b-2ab."""
    merged: dict[bytes, int] = {}
    dets: list[np.ndarray] = []
    obss: list[np.ndarray] = []
    probs: list[float] = []
    for det_ids, obs_ids, p in zip(columns, obs_columns, priors):
        if p <= 0:
            continue
        det_ids = np.asarray(sorted(det_ids), dtype=np.int64)
        obs_ids = np.asarray(sorted(obs_ids), dtype=np.int64)
        if det_ids.size == 0 and obs_ids.size == 0:
            continue
        key = det_ids.tobytes() + b"|" + obs_ids.tobytes()
        if key in merged:
            i = merged[key]
            a = probs[i]
            probs[i] = a + p - 2 * a * p
        else:
            merged[key] = len(dets)
            dets.append(det_ids)
            obss.append(obs_ids)
            probs.append(p)
    n_faults = len(dets)
    def build(cols, nrows):
        indptr = np.zeros(n_faults + 1, dtype=np.int64)
        for j, ids in enumerate(cols):
            indptr[j + 1] = indptr[j] + len(ids)
        indices = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
        data = np.ones(len(indices), dtype=np.uint8)
        return sp.csc_matrix((data, indices, indptr), shape=(nrows, n_faults))

    F = build(dets, n_det)
    O = build(obss, n_obs)
    # assign each fault to the earliest round among its detectors
    fault_round = np.zeros(n_faults, dtype=np.int64)
    for j, d in enumerate(dets):
        if d.size:
            fault_round[j] = detector_round[d].min()
    return DetectorModel(F, O, np.asarray(probs), np.asarray(detector_round),
                         fault_round, rounds, detector_meta, meta).validate()


# -- phenomenological model -------------------------------------------------------


def build_phenom_model(code: TTCode, basis: str, rounds: int, p: float,
                       depolarizing_split: bool = False) -> DetectorModel:
    """Spacetime detector model for the phenomenological memory experiment."""
    if rounds < 1:
        raise ValueError("need at least one round")
    data_rate = 2 * p / 3 if depolarizing_split else p
    if basis == "X":
        H = code.H_X           # X checks catch the harmful Z errors
        L = coset_logical_basis(code.H_Z, code.H_X)
    elif basis == "Z":
        H = code.H_Z
        L = coset_logical_basis(code.H_X, code.H_Z)
    else:
        raise ValueError("basis must be X or Z")
    n_checks, n = H.shape
    n_obs = L.shape[0]
    # detectors: round 0 absolute, rounds 1..rounds-1 comparisons, final
    # data-readout comparison at round index `rounds`
    n_rounds_det = rounds + 1
    detector_round = np.repeat(np.arange(n_rounds_det), n_checks)
    detector_meta = [(r, basis, c) for r in range(n_rounds_det) for c in range(n_checks)]

    def det(r, c):
        return r * n_checks + c

    columns, obs_columns, priors = [], [], []
    col_support = [np.flatnonzero(H[:, q]) for q in range(n)]
    obs_support = [np.flatnonzero(L[:, q]) for q in range(n)]
    for r in range(rounds):
        for q in range(n):
            columns.append([det(r, c) for c in col_support[q]])
            obs_columns.append(list(obs_support[q]))
            priors.append(data_rate)
        for c in range(n_checks):
            columns.append([det(r, c), det(r + 1, c)])
            obs_columns.append([])
            priors.append(p)
    # the final data readout is a measurement too: each bit flips with
    # probability p, firing the boundary comparison of its check column
    for q in range(n):
        columns.append([det(rounds, c) for c in col_support[q]])
        obs_columns.append(list(obs_support[q]))
        priors.append(p)
    return _merge_columns(columns, obs_columns, priors, n_rounds_det * n_checks,
                          n_obs, n_rounds_det, detector_round, detector_meta,
                          {"kind": "phenomenological", "basis": basis, "p": p,
                           "rounds": rounds, "logical_basis": L})


# -- circuit-level model ------------------------------------------------------------


def _dead_slots(circuit: Circuit) -> set:
    """(qubit, layer) pairs after a measurement and before the next reset,
    where the state is discarded and noise has no effect."""
    dead = set()
    state: dict[int, str] = {}
    for t, layer in enumerate(circuit.layers):
        for q, _, _ in layer.resets:
            state[q] = "live"
        for q, st in state.items():
            if st == "dead":
                dead.add((q, t))
        for q, _, _ in layer.measures:
            state[q] = "dead"
    return dead


_PAULI1 = ((1, 0), (1, 1), (0, 1))                     # X, Y, Z
_PAULI2 = [(a, b) for a in ((0, 0), (1, 0), (1, 1), (0, 1))
           for b in ((0, 0), (1, 0), (1, 1), (0, 1))][1:]  # 15 non-identity pairs


def _enumerate_faults(circuit: Circuit, p: float):
    """Yield (layer_applied, [(qubit, fx, fz), ...], prior, instant_flip)
    for every elementary Pauli outcome of every channel.  `instant_flip` is a
    measurement label whose recorded outcome the fault flips directly."""
    faults = []
    busy = [set() for _ in circuit.layers]
    for t, layer in enumerate(circuit.layers):
        for q, _, _ in layer.resets:
            busy[t].add(q)
        for c, tq in layer.cnots:
            busy[t].update((c, tq))
        for q, _, _ in layer.measures:
            busy[t].add(q)
    dead = _dead_slots(circuit)
    for t, layer in enumerate(circuit.layers):
        for q, basis, noiseless in layer.resets:
            if noiseless:
                continue
            fx, fz = (1, 0) if basis == "Z" else (0, 1)
            faults.append((t, [(q, fx, fz)], p, None))
        for c, tq in layer.cnots:
            for (ax, az), (bx, bz) in _PAULI2:
                faults.append((t, [(c, ax, az), (tq, bx, bz)], p / 15, None))
        for q, basis, label in layer.measures:
            fx, fz = (1, 0) if basis == "Z" else (0, 1)
            faults.append((t, [(q, fx, fz)], p, label))
        for q in range(circuit.n_qubits):
            if q in busy[t] or (q, t) in circuit.phantom_idle or (q, t) in dead:
                continue
            for fx, fz in _PAULI1:
                faults.append((t, [(q, fx, fz)], p / 3, None))
    return faults


def _propagate_chunk(circuit: Circuit, chunk):
    """Propagate a chunk of faults; returns per-fault measurement flips as a
    dict label -> uint8 vector over the chunk."""
    nq = circuit.n_qubits
    m = len(chunk)
    fx = np.zeros((m, nq), dtype=np.uint8)
    fz = np.zeros((m, nq), dtype=np.uint8)
    start = min(t for t, _, _, _ in chunk)
    by_layer: dict[int, list[int]] = {}
    for i, (t, supports, _, _) in enumerate(chunk):
        by_layer.setdefault(t, []).append(i)
    flips: dict = {}
    for t in range(start, circuit.depth()):
        layer = circuit.layers[t]
        for q, _, _ in layer.resets:
            fx[:, q] = 0
            fz[:, q] = 0
        if layer.cnots:
            ctrls = np.fromiter((c for c, _ in layer.cnots), dtype=np.int64)
            tgts = np.fromiter((tq for _, tq in layer.cnots), dtype=np.int64)
            fx[:, tgts] ^= fx[:, ctrls]
            fz[:, ctrls] ^= fz[:, tgts]
        # measurement flips injected this layer act on this readout
        for i in by_layer.get(t, ()):
            _, supports, _, instant = chunk[i]
            if instant is not None:
                flips.setdefault(instant, np.zeros(m, dtype=np.uint8))[i] ^= 1
        for q, basis, label in layer.measures:
            vec = fz[:, q] if basis == "X" else fx[:, q]
            if vec.any():
                acc = flips.setdefault(label, np.zeros(m, dtype=np.uint8))
                acc ^= vec
        # inject this layer's faults after processing its operations
        for i in by_layer.get(t, ()):
            _, supports, _, _ = chunk[i]
            for q, a, b in supports:
                fx[i, q] ^= a
                fz[i, q] ^= b
    return flips


def build_circuit_model(code: TTCode, basis: str, rounds: int, p: float,
                        chunk_size: int = 65536, families: str = "memory") -> DetectorModel:
    """Circuit-level detector model for a memory experiment.

    families="memory" (default) projects every fault onto its memory-basis-
    harmful Pauli component (Z-type for X memory, X-type for Z memory) and
    keeps only that family's detectors: the opposite component can neither
    flip the tracked observables nor the kept detectors.  families="both"
    keeps the full correlated model, whose opposite-family detectors carry
    extra information about Y-type faults at the price of a much denser
    decoding graph.

    The memory-basis checks get a first-round detector, consecutive-round
    comparisons, and a final comparison against the checks reconstructed
    from the data readout; opposite-family checks (when kept) get only the
    consecutive-round comparisons, their first round being randomized.
    """
    circuit = build_memory_circuit(code, basis, rounds)
    g = code.g
    n = code.n
    H_final = code.H_X if basis == "X" else code.H_Z
    L = (coset_logical_basis(code.H_Z, code.H_X) if basis == "X"
         else coset_logical_basis(code.H_X, code.H_Z))
    own_roles = ("X",) if basis == "X" else ("Za", "Zb", "Zc")
    other_roles = () if families == "memory" else (
        ("Za", "Zb", "Zc") if basis == "X" else ("X",))

    detector_meta = []
    detector_meta.extend((0, role, c) for role in own_roles for c in range(g))
    for r in range(1, rounds):
        for role in own_roles + other_roles:
            detector_meta.extend((r, role, c) for c in range(g))
    detector_meta.extend((rounds, role, c) for role in own_roles for c in range(g))
    det_index = {meta: i for i, meta in enumerate(detector_meta)}
    detector_round = np.array([m[0] for m in detector_meta], dtype=np.int64)
    n_det = len(detector_meta)

    faults = []
    if families == "memory":
        # project onto the harmful component and drop idle faults
        harmful = (lambda fx, fz: (0, fz)) if basis == "X" else (lambda fx, fz: (fx, 0))
        for t, supports, prior, instant in _enumerate_faults(circuit, p):
            proj = [(q,) + harmful(fx, fz) for q, fx, fz in supports]
            proj = [(q, fx, fz) for q, fx, fz in proj if fx or fz]
            if instant is not None:
                if instant[0] not in own_roles:
                    continue
                faults.append((t, proj, prior, instant))
            elif proj:
                faults.append((t, proj, prior, None))
    else:
        faults = _enumerate_faults(circuit, p)
    columns, obs_columns, priors = [], [], []
    for lo in range(0, len(faults), chunk_size):
        chunk = faults[lo: lo + chunk_size]
        flips = _propagate_chunk(circuit, chunk)
        m = len(chunk)
        outcome = {}
        data_flips = np.zeros((m, n), dtype=np.uint8)
        for label, vec in flips.items():
            if label[0] == "data":
                data_flips[:, label[2]] = vec
            elif label[0] in own_roles + other_roles:
                outcome[label] = vec
        final_checks = (data_flips.astype(np.int64) @ H_final.T.astype(np.int64) % 2).astype(np.uint8)
        obs_flips = (data_flips.astype(np.int64) @ L.T.astype(np.int64) % 2).astype(np.uint8)

        det_cols = [[] for _ in range(m)]
        for (role, r, c), vec in outcome.items():
            hits = np.flatnonzero(vec)
            if not hits.size:
                continue
            targets = []
            if role in own_roles:
                targets.append(det_index[(r, role, c)])
                if r + 1 < rounds:
                    targets.append(det_index[(r + 1, role, c)])
                else:
                    targets.append(det_index[(rounds, role, c)])
            else:
                if r >= 1:
                    targets.append(det_index[(r, role, c)])
                if 1 <= r + 1 < rounds:
                    targets.append(det_index[(r + 1, role, c)])
            for i in hits:
                for d in targets:
                    det_cols[i].append(d)
        # final reconstructed checks from the data readout
        for i in range(m):
            for cidx in np.flatnonzero(final_checks[i]):
                if basis == "X":
                    det_cols[i].append(det_index[(rounds, "X", int(cidx))])
                else:
                    fam, c = divmod(int(cidx), g)
                    det_cols[i].append(det_index[(rounds, ("Za", "Zb", "Zc")[fam], c)])
        for i, (t, supports, prior, instant) in enumerate(chunk):
            ids, cnt = np.unique(np.array(det_cols[i], dtype=np.int64), return_counts=True)
            dets = ids[cnt % 2 == 1]
            columns.append(list(dets))
            obs_columns.append(list(np.flatnonzero(obs_flips[i])))
            priors.append(prior)
    return _merge_columns(columns, obs_columns, priors, n_det, L.shape[0],
                          rounds + 1, detector_round, detector_meta,
                          {"kind": "circuit", "basis": basis, "p": p,
                           "rounds": rounds, "logical_basis": L})


# -- sampling ---------------------------------------------------------------------


def sample_shots(model: DetectorModel, shots: int, seed: int,
                 chunk_size: int = 4096):
    """Independent Bernoulli fault sampling; returns (syndromes, observables)
    as uint8 arrays of shape (shots, n_detectors) and (shots, n_observables).

    Sampling is counter-based per chunk (Philox keyed by chunk index), so
    results depend only on (model, shots, seed, chunk_size).
    """
    D, O = model.n_detectors, model.observable_matrix.shape[0]
    synd = np.zeros((shots, D), dtype=np.uint8)
    obs = np.zeros((shots, O), dtype=np.uint8)
    F = model.fault_matrix
    Ob = model.observable_matrix
    for lo in range(0, shots, chunk_size):
        hi = min(lo + chunk_size, shots)
        m = hi - lo
        rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, lo]))
        counts = rng.binomial(m, model.priors)
        for j in np.flatnonzero(counts):
            rows = lo + rng.choice(m, size=counts[j], replace=False)
            dets = F.indices[F.indptr[j]: F.indptr[j + 1]]
            obss = Ob.indices[Ob.indptr[j]: Ob.indptr[j + 1]]
            if dets.size:
                synd[np.ix_(rows, dets)] ^= 1
            if obss.size:
                obs[np.ix_(rows, obss)] ^= 1
    return synd, obs


# -- serialization -------------------------------------------------------------------


def serialize_model(model: DetectorModel) -> str:
    """One fault per line: `prior d1 d2 ... | o1 o2 ...`; header carries the
    shape and round structure."""
    lines = [f"# detectors={model.n_detectors} faults={model.n_faults} "
             f"observables={model.observable_matrix.shape[0]} rounds={model.rounds}"]
    lines.append("# detector_round " + " ".join(str(int(r)) for r in model.detector_round))
    F, O = model.fault_matrix, model.observable_matrix
    for j in range(model.n_faults):
        dets = F.indices[F.indptr[j]: F.indptr[j + 1]]
        obss = O.indices[O.indptr[j]: O.indptr[j + 1]]
        lines.append(f"{model.priors[j]:.10g} " + " ".join(map(str, dets)) +
                     " | " + " ".join(map(str, obss)))
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> DetectorModel:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = dict(kv.split("=") for kv in lines[0].lstrip("# ").split())
    detector_round = np.array([int(v) for v in lines[1].split()[2:]], dtype=np.int64)
    n_det, n_obs = int(head["detectors"]), int(head["observables"])
    cols, obs_cols, priors = [], [], []
    for ln in lines[2:]:
        left, right = ln.split("|")
        parts = left.split()
        priors.append(float(parts[0]))
        cols.append([int(v) for v in parts[1:]])
        obs_cols.append([int(v) for v in right.split()])
    return _merge_columns(cols, obs_cols, priors, n_det, n_obs, int(head["rounds"]),
                          detector_round, [], {})


def save_syndromes(path, synd: np.ndarray) -> None:
    """Packed binary with a small header: magic, shots, detector count."""
    synd = np.asarray(synd, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(b"TTSB")
        fh.write(np.array(synd.shape, dtype="<u4").tobytes())
        fh.write(np.packbits(synd, axis=1).tobytes())


def load_syndromes(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != b"TTSB":
            raise ValueError("not a syndrome batch file")
        shots, dets = np.frombuffer(fh.read(8), dtype="<u4")
        packed = np.frombuffer(fh.read(), dtype=np.uint8).reshape(int(shots), -1)
        return np.unpackbits(packed, axis=1)[:, :dets]
