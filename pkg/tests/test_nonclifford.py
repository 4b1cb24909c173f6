import numpy as np
import pytest

from ttcodes import catalog, gf2
from ttcodes.distance import certify_distance_exhaustive
from ttcodes.groupalg import GroupDims, GroupPolynomial, Monomial
from ttcodes.nonclifford import (
    PreOrientation,
    build_ccz_circuit,
    catalog_ccz_report,
    catalog_orientations,
    check_cup_conditions,
    check_leibniz_direct,
    cz_action_pairs,
    gauge_fixed_cz,
    intersection_tensor,
    logical_ccz_action,
    partition_preorientation,
    search_preorientation,
    verify_ccz_logical_invariance,
    verify_ccz_stabilizer,
)


def poly(dims, s):
    return GroupPolynomial.from_string(dims, s)


def random_partition(rng, P):
    terms = P.sorted_terms()
    groups = ([], [], [])
    for t in terms:
        groups[rng.integers(0, 3)].append(t)
    return PreOrientation(P, frozenset(groups[0]), frozenset(groups[1]), frozenset(groups[2]))


def test_weight2_partition():
    d = GroupDims(3, 2, 2)
    po = partition_preorientation(poly(d, "1 + x"), "weight-2")
    assert po.in_terms == frozenset([Monomial(d, 0, 0, 0)])
    assert po.out_terms == frozenset([Monomial(d, 1, 0, 0)])
    assert not po.free_terms


def test_lemma5_partition_36_6_2():
    d = GroupDims(3, 2, 2)
    P = poly(d, "1+z") * poly(d, "1+x")
    po = partition_preorientation(P, "lemma-5")
    assert po.in_terms == frozenset([Monomial(d, 0, 0, 0), Monomial(d, 0, 0, 1)])
    assert po.out_terms == frozenset([Monomial(d, 1, 0, 0), Monomial(d, 1, 0, 1)])
    assert check_cup_conditions(po)


def test_partition_is_partition():
    rng = np.random.default_rng(0)
    d = GroupDims(4, 3, 2)
    for _ in range(20):
        terms = [Monomial(d, rng.integers(0, 4), rng.integers(0, 3), rng.integers(0, 2))
                 for _ in range(4)]
        P = GroupPolynomial(d, terms)
        if P.weight < 2:
            continue
        po = partition_preorientation(P, "weight-2") if P.weight == 2 else None
        if po is None:
            continue
        assert po.in_terms | po.out_terms | po.free_terms == P.terms


def test_partition_rejects_weight_one():
    d = GroupDims(2, 2, 2)
    with pytest.raises(ValueError):
        partition_preorientation(GroupPolynomial.one(d), "weight-2")


def test_weight2_partitions_always_satisfy_conditions():
    rng = np.random.default_rng(1)
    d = GroupDims(3, 3, 2)
    monos = d.monomials()
    for _ in range(40):
        picks = rng.choice(len(monos), size=2, replace=False)
        P = GroupPolynomial(d, [monos[i] for i in picks])
        if P.weight != 2:
            continue
        po = partition_preorientation(P, "weight-2")
        assert check_cup_conditions(po)
        assert check_leibniz_direct(po)


def test_conditions_agree_with_leibniz_on_random_partitions():
    rng = np.random.default_rng(2)
    d = GroupDims(3, 2, 2)
    monos = d.monomials()
    checked = 0
    for _ in range(120):
        w = int(rng.integers(2, 5))
        picks = rng.choice(len(monos), size=w, replace=False)
        P = GroupPolynomial(d, [monos[i] for i in picks])
        po = random_partition(rng, P)
        assert check_cup_conditions(po) == check_leibniz_direct(po)
        checked += 1
    assert checked == 120


def test_weight3_failing_partition():
    d = GroupDims(4, 3, 2)
    P = poly(d, "1 + x + y")
    po = PreOrientation(P, frozenset([Monomial(d, 0, 0, 0), Monomial(d, 1, 0, 0)]),
                        frozenset([Monomial(d, 0, 1, 0)]), frozenset())
    assert not check_cup_conditions(po)
    assert not check_leibniz_direct(po)


def test_weight3_search_finds_no_partition():
    d = GroupDims(3, 2, 2)
    assert search_preorientation(poly(d, "1 + xyz + x^2y")) is None


def test_lemma5_partitions_random_f():
    # order-2 generator times a random polynomial always admits the lemma
    # partition and passes the conditions
    rng = np.random.default_rng(3)
    d = GroupDims(4, 3, 2)
    g = poly(d, "x^2")
    monos = d.monomials()
    done = 0
    while done < 20:
        picks = rng.choice(len(monos), size=rng.integers(2, 4), replace=False)
        f = GroupPolynomial(d, [monos[i] for i in picks])
        P = (GroupPolynomial.one(d) + g) * f
        if P.is_zero() or P.weight < 2:
            continue
        po = partition_preorientation(P, "lemma-5")
        assert check_cup_conditions(po)
        assert check_leibniz_direct(po)
        done += 1


def test_ccz_gate_count_and_depth_222():
    code, pos = catalog_orientations("ccz_48_3_4")
    circ = build_ccz_circuit(code, *pos)
    assert circ.gate_count() == 6 * code.g
    toric_like, pos2 = catalog_orientations("ccz_36_3_3")
    circ2 = build_ccz_circuit(toric_like, *pos2)
    assert circ2.depth <= 2


def test_empty_out_sets_give_empty_circuit():
    # all-free partitions pass the conditions vacuously and generate no gates
    code = catalog.get("ccz_36_3_3")
    pos = [PreOrientation(P, frozenset(), frozenset(), P.terms) for P in code.polys]
    circ = build_ccz_circuit(code, *pos)
    assert circ.gate_count() == 0
    # in/out imbalance instead fails the parity condition and is refused
    bad = [PreOrientation(P, P.terms, frozenset(), frozenset()) for P in code.polys]
    with pytest.raises(ValueError):
        build_ccz_circuit(code, *bad)


def test_verify_ccz_stabilizer_and_corruption():
    code, pos = catalog_orientations("ccz_36_3_3")
    circ = build_ccz_circuit(code, *pos)
    assert verify_ccz_stabilizer(code, circ)
    # corrupt one gate's third qubit
    gates = list(circ.gates)
    q1, q2, q3 = gates[0]
    gates[0] = (q1, q2, (q3 + 1) % code.n)
    from ttcodes.nonclifford import CCZCircuit

    assert not verify_ccz_stabilizer(code, CCZCircuit(gates, [], circ.orientations))


def test_logical_invariance_holds():
    code, pos = catalog_orientations("ccz_48_3_4")
    circ = build_ccz_circuit(code, *pos)
    assert verify_ccz_logical_invariance(code, circ)


def test_counts_222_codes():
    for name in ("ccz_36_3_3", "ccz_90_3_5"):
        code, circ, rep = catalog_ccz_report(name)
        assert rep.count == 6
        # the six triples are the permutations of three distinct logicals
        assert sorted(rep.triples) == sorted(
            {(a, b, c) for a in range(3) for b in range(3) for c in range(3)
             if len({a, b, c}) == 3})


def test_counts_422_code():
    code, circ, rep = catalog_ccz_report("ccz_36_6_2")
    assert rep.count == 16
    assert rep.z_weights == [3, 3, 3, 3, 3, 2]


def test_intersection_tensor_trilinear():
    code, circ, rep = catalog_ccz_report("ccz_36_3_3")
    L_X = rep.L_X
    T = intersection_tensor(L_X, circ.gates)
    rng = np.random.default_rng(4)
    for _ in range(10):
        a = rng.integers(0, 2, size=L_X.shape[0], dtype=np.uint8)
        b = rng.integers(0, 2, size=L_X.shape[0], dtype=np.uint8)
        la = (a.astype(np.int64) @ L_X.astype(np.int64) % 2).astype(np.uint8)
        lb = (b.astype(np.int64) @ L_X.astype(np.int64) % 2).astype(np.uint8)
        fixed = L_X[0]
        direct = 0
        for q1, q2, q3 in circ.gates:
            direct ^= int(la[q1]) & int(lb[q2]) & int(fixed[q3])
        via_tensor = 0
        for i in np.flatnonzero(a):
            for j in np.flatnonzero(b):
                via_tensor ^= int(T[i, j, 0])
        assert direct == via_tensor


def test_weight2_logical_in_every_nontrivial_triple():
    for name in ("ccz_36_6_2", "ccz_48_6_2"):
        code, circ, rep = catalog_ccz_report(name)
        w = rep.z_weights
        for a, b, c in rep.triples:
            assert 2 in (w[a], w[b], w[c])


def test_gauge_fixed_cz_36_6_2():
    code, circ, rep = catalog_ccz_report("ccz_36_6_2")
    gf_result = gauge_fixed_cz(code, circ, rep, fixed_logical=5)
    assert gf_result.gauged_params == (36, 5)
    pairs = cz_action_pairs(gf_result.action)
    # two disjoint symmetric transpositions covering four of five logicals
    assert len(pairs) == 2
    used = {i for p in pairs for i in p}
    assert len(used) == 4
    assert np.array_equal(gf_result.action, gf_result.action.T)
    assert not np.diag(gf_result.action).any()
    # canonical relabeling: untouched logical -> 0, pairs -> (1,3), (2,4)
    untouched = (set(range(5)) - used).pop()
    relabel = {untouched: 0}
    for idx, (a, b) in enumerate(sorted(pairs)):
        relabel[a] = idx + 1
        relabel[b] = idx + 3
    canon = sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in pairs)
    assert canon == [(1, 3), (2, 4)]


def test_gauge_fixed_code_is_36_5_3():
    code, circ, rep = catalog_ccz_report("ccz_36_6_2")
    gf_result = gauge_fixed_cz(code, circ, rep, fixed_logical=5)
    H_Z_fixed = np.vstack([code.H_Z, rep.L_Z[5].reshape(1, -1)])
    # d_Z of the gauged code: lightest ker(H_X) vector outside rs(H_Z')
    ker_rref = gf2.Rref(H_Z_fixed)
    import itertools

    best = None
    for w in (1, 2, 3):
        for combo in itertools.combinations(range(code.n), w):
            v = np.zeros(code.n, dtype=np.uint8)
            v[list(combo)] = 1
            if gf2.matvec(code.H_X, v).any():
                continue
            if not ker_rref.contains(v):
                best = w
                break
        if best:
            break
    assert best == 3


def test_gauge_fix_requires_weight2():
    code, circ, rep = catalog_ccz_report("ccz_36_6_2")
    with pytest.raises(ValueError):
        gauge_fixed_cz(code, circ, rep, fixed_logical=0)  # a weight-3 logical
