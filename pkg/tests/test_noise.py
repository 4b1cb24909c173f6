import numpy as np
import pytest

from ttcodes import catalog, gf2
from ttcodes.circuits import build_memory_circuit, build_syndrome_circuit, propagate_pauli
from ttcodes.decoder import BpOsd, WindowDecoder
from ttcodes.noise import (
    build_circuit_model,
    build_phenom_model,
    load_syndromes,
    parse_model,
    sample_shots,
    save_syndromes,
    serialize_model,
)

CODE = catalog.get("ccz_36_3_3")


def test_phenom_zero_noise_is_silent():
    model = build_phenom_model(CODE, "X", 3, 0.0)
    assert model.n_faults == 0
    synd, obs = sample_shots(model, 64, seed=1)
    assert not synd.any() and not obs.any()


def test_phenom_single_round_shape():
    model = build_phenom_model(CODE, "Z", 1, 0.01)
    # Z checks twice: first-round detectors plus the readout comparison
    assert model.n_detectors == 2 * CODE.H_Z.shape[0]


def test_phenom_data_fault_columns_match_check_matrix():
    model = build_phenom_model(CODE, "Z", 1, 0.01)
    F = model.fault_matrix.toarray()
    # every data-X fault must flip exactly the Z checks of its H_Z column in
    # the first detector round
    n_checks = CODE.H_Z.shape[0]
    found = 0
    for q in range(CODE.n):
        want = set(np.flatnonzero(CODE.H_Z[:, q]))
        for j in range(model.n_faults):
            col = set(np.flatnonzero(F[:, j]))
            if col == want:
                found += 1
                break
    assert found == CODE.n


def test_phenom_rounds_match_experiment_shape():
    code = catalog.get("tt_72_6_6")
    model = build_phenom_model(code, "X", 12, 0.01)  # N = 2 d_Z
    assert model.rounds == 13
    assert model.n_detectors == 13 * code.g


def test_sampling_statistics_and_determinism():
    model = build_phenom_model(CODE, "X", 4, 0.02)
    synd, obs = sample_shots(model, 100_000, seed=9)
    synd2, obs2 = sample_shots(model, 100_000, seed=9)
    assert np.array_equal(synd, synd2) and np.array_equal(obs, obs2)
    # empirical per-fault rate within 3 sigma: verify via one heavy fault
    j = int(np.argmax(model.priors))
    dets = model.fault_matrix.tocsc()
    col = dets.indices[dets.indptr[j]: dets.indptr[j + 1]]
    p = model.priors[j]
    sigma = np.sqrt(p * (1 - p) / 100_000)
    # detector hit rate bounds the fault rate from above at these sparse rates
    rate = synd[:, col[0]].mean()
    assert rate > p - 3 * sigma


def test_priors_within_range_and_no_empty_columns():
    model = build_phenom_model(CODE, "Z", 3, 0.05)
    model.validate()
    model2 = build_circuit_model(CODE, "X", 3, 0.002)
    model2.validate()


def test_circuit_model_zero_noise():
    model = build_circuit_model(CODE, "X", 3, 0.0)
    assert model.n_faults == 0


def test_circuit_model_single_fault_before_readout():
    """A data Z fault after the last syndrome round's gates flips exactly the
    final-boundary detectors of its column (readout reconstruction), matching
    a hand propagation through the circuit."""
    code = CODE
    rounds = 3
    model = build_circuit_model(code, "X", rounds, 0.001)
    circuit = build_memory_circuit(code, "X", rounds)
    # inject Z on data qubit 0 at the last layer (idle slot before readout)
    _, _, flips = propagate_pauli(circuit, z_support=[0],
                                  start_layer=circuit.depth() - 1)
    flipped = {lab for lab, v in flips.items() if v}
    assert flipped == {("data", rounds - 1, 0)}
    # the model must contain a fault column equal to: boundary detectors of
    # H_X column 0, plus the observables supported on qubit 0
    want_dets = {model.detector_meta.index((rounds, "X", int(c)))
                 for c in np.flatnonzero(code.H_X[:, 0])}
    L = model.meta["logical_basis"]
    want_obs = set(np.flatnonzero(L[:, 0]))
    F, O = model.fault_matrix, model.observable_matrix
    sigs = set()
    for j in range(model.n_faults):
        sigs.add((tuple(F.indices[F.indptr[j]:F.indptr[j + 1]]),
                  tuple(O.indices[O.indptr[j]:O.indptr[j + 1]])))
    assert (tuple(sorted(want_dets)), tuple(sorted(want_obs))) in sigs


def test_circuit_model_full_families_superset():
    small = build_circuit_model(CODE, "X", 3, 0.001, families="memory")
    full = build_circuit_model(CODE, "X", 3, 0.001, families="both")
    assert full.n_detectors > small.n_detectors
    assert full.n_faults > small.n_faults


def test_decoded_rate_monotone_in_p():
    code = CODE
    rates = []
    for p in (0.01, 0.03, 0.06):
        model = build_phenom_model(code, "X", 6, p)
        synd, obs = sample_shots(model, 2000, seed=11)
        dec = BpOsd(model.fault_matrix, model.priors, max_iters=30)
        corr, _ = dec.decode_batch(synd)
        OT = model.observable_matrix.T.toarray().astype(np.int64)
        pred = ((corr.astype(np.int64) @ OT) % 2).astype(np.uint8)
        rates.append(float((pred != obs).any(axis=1).mean()))
    assert rates[0] <= rates[1] <= rates[2]


def test_window_equals_whole_history_when_window_covers_all():
    model = build_phenom_model(CODE, "Z", 4, 0.03)
    synd, obs = sample_shots(model, 300, seed=2)
    rounds = model.rounds
    wdec = WindowDecoder(model, rounds, rounds, max_iters=30)
    dec = BpOsd(model.fault_matrix, model.priors, max_iters=30)
    whole, _ = dec.decode_batch(synd)
    windowed = wdec.decode_batch(synd)
    OT = model.observable_matrix.T.toarray().astype(np.int64)
    pw = ((windowed.astype(np.int64) @ OT) % 2).astype(np.uint8)
    ph = ((whole.astype(np.int64) @ OT) % 2).astype(np.uint8)
    assert np.array_equal(pw, ph)


def test_window_commits_reproduce_syndrome():
    model = build_phenom_model(CODE, "Z", 6, 0.04)
    synd, _ = sample_shots(model, 100, seed=5)
    wdec = WindowDecoder(model, 2, 1, max_iters=30)
    corr = wdec.decode_batch(synd)
    F = model.fault_matrix.toarray().astype(np.int64)
    resid = (corr.astype(np.int64) @ F.T) % 2
    assert np.array_equal(resid.astype(np.uint8), synd)


def test_metacheck_consequence_weight_two_measurement_errors():
    """No Z-check measurement-error pattern of weight <= 2 evades the
    meta-check structure: every such pattern in ker(M_Z) lies in cs(H_Z)
    (d_M = 3 for this code)."""
    code = CODE
    MZ = code.M_Z
    cs_rref = gf2.Rref(code.H_Z.T)
    m = code.H_Z.shape[0]
    import itertools

    for w in (1, 2):
        for combo in itertools.combinations(range(m), w):
            e = np.zeros(m, dtype=np.uint8)
            e[list(combo)] = 1
            if not gf2.matvec(MZ, e).any():
                assert cs_rref.contains(e)


def test_model_serialization_round_trip():
    model = build_phenom_model(CODE, "X", 2, 0.01)
    text = serialize_model(model)
    again = parse_model(text)
    assert again.n_detectors == model.n_detectors
    assert again.n_faults == model.n_faults
    assert np.allclose(again.priors, model.priors)
    assert np.array_equal(again.fault_matrix.toarray(), model.fault_matrix.toarray())


def test_syndrome_batch_binary_round_trip(tmp_path):
    model = build_phenom_model(CODE, "X", 2, 0.02)
    synd, _ = sample_shots(model, 77, seed=3)
    path = tmp_path / "batch.ttsb"
    save_syndromes(path, synd)
    assert np.array_equal(load_syndromes(path), synd)
