import numpy as np
import pytest

from ttcodes import catalog, gf2
from ttcodes.code import build_tt_code, compute_k, reduce_common_factor
from ttcodes.distance import (
    antipode_blocks,
    certify_distance_exhaustive,
    estimate_distance,
    min_weight_logical_basis,
)
from ttcodes.groupalg import GroupDims, GroupPolynomial, Monomial


def test_certify_36_3_3_dz_exact():
    code = catalog.get("ccz_36_3_3")
    bound = certify_distance_exhaustive(code, "Z", 3, budget=10**6)
    assert bound.weight == 3 and bound.certified
    assert not gf2.matvec(code.H_X, bound.vector).any()
    assert not gf2.rowspace_member(code.H_Z, bound.vector)


def test_certify_36_3_3_meta_distance_matches_dz():
    code = catalog.get("ccz_36_3_3")
    bound = certify_distance_exhaustive(code, "M", 3, budget=10**6)
    assert bound.weight == 3 and bound.certified


def test_certify_48_3_4_dz_exact():
    code = catalog.get("ccz_48_3_4")
    none3 = certify_distance_exhaustive(code, "Z", 3, budget=10**6)
    assert none3.weight is None
    exact = certify_distance_exhaustive(code, "Z", 4, budget=10**6)
    assert exact.weight == 4 and exact.certified


def test_meta_distance_48_3_4_equals_dz():
    code = catalog.get("ccz_48_3_4")
    # no meta logical of weight <= 3 ...
    none3 = certify_distance_exhaustive(code, "M", 3, budget=10**6)
    assert none3.weight is None
    # ... and the antipode image of the certified weight-4 Z logical is a
    # weight-4 meta logical, so d_M = 4 = d_Z
    z4 = certify_distance_exhaustive(code, "Z", 4, budget=10**6).vector
    witness = antipode_blocks(code, z4)
    assert witness.sum() == 4
    assert not gf2.matvec(code.M_Z, witness).any()
    assert not gf2.rowspace_member(code.H_Z.T, witness)


def test_certify_weight_zero_cap():
    code = catalog.get("ccz_36_3_3")
    bound = certify_distance_exhaustive(code, "Z", 0)
    assert bound.weight is None


def test_certify_budget_exceeded():
    code = catalog.get("tt_72_6_6")
    with pytest.raises(ValueError):
        certify_distance_exhaustive(code, "Z", 6, budget=1000)


def test_estimate_zero_k_raises():
    d = GroupDims(2, 1, 1)
    one = GroupPolynomial.one(d)
    code = build_tt_code(one, one, one, d)
    with pytest.raises(ValueError):
        estimate_distance(code, "Z")


def test_search_matches_published_small_codes():
    code = catalog.get("ccz_48_3_4")
    assert estimate_distance(code, "Z", info_trials=500, probe_weightings=6, seed=0).weight == 4
    assert estimate_distance(code, "X", info_trials=500, probe_weightings=6, seed=0).weight == 8


def test_search_meta_equals_z_36_3_3():
    code = catalog.get("ccz_36_3_3")
    bm = estimate_distance(code, "M", info_trials=400, probe_weightings=5, seed=0)
    assert bm.weight == 3


def test_dx_equals_meta_dual_space_on_36_3_3():
    # the X distance is also the min weight of ker(H_Z^T) \ rs(M_Z); the
    # antipode maps X logicals onto that space weight-preservingly
    code = catalog.get("ccz_36_3_3")
    bx = estimate_distance(code, "X", info_trials=500, probe_weightings=6, seed=0)
    assert bx.weight == 8
    w = antipode_blocks(code, bx.vector)
    assert w.sum() == bx.weight
    assert not gf2.matvec(code.H_Z.T, w).any()
    assert not gf2.rowspace_member(code.M_Z, w)


def test_lemma3_reduction_preserves_certified_distance():
    rng = np.random.default_rng(5)
    base = catalog.get("ccz_36_3_3")
    dims = base.dims
    for _ in range(5):
        t = Monomial(dims, rng.integers(0, 3), rng.integers(0, 2), rng.integers(0, 2))
        shifted = build_tt_code(base.A * t, base.B, base.C, dims)
        reduced = build_tt_code(reduce_common_factor(base.A * t), base.B, base.C, dims)
        assert compute_k(shifted) == compute_k(reduced) == 3
        d_shift = certify_distance_exhaustive(shifted, "Z", 3, budget=10**6)
        d_red = certify_distance_exhaustive(reduced, "Z", 3, budget=10**6)
        assert d_shift.weight == d_red.weight == 3


def test_min_weight_basis_profile_36_6_2():
    code = catalog.get("ccz_36_6_2")
    L = min_weight_logical_basis(code, "Z", seed=0)
    weights = [int(v.sum()) for v in L]
    assert weights == [3, 3, 3, 3, 3, 2]


def test_search_deterministic_under_seed():
    code = catalog.get("ccz_54_3_4")
    b1 = estimate_distance(code, "Z", info_trials=300, probe_weightings=4, seed=11)
    b2 = estimate_distance(code, "Z", info_trials=300, probe_weightings=4, seed=11)
    assert b1.weight == b2.weight
    assert np.array_equal(b1.vector, b2.vector)
