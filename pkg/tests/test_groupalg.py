import numpy as np
import pytest

from ttcodes.groupalg import (
    GroupDims,
    GroupPolynomial,
    Monomial,
    generated_subgroup,
    monomial_mul,
    monomial_transpose,
    poly_to_matrix,
)


D432 = GroupDims(4, 3, 2)


def mono(dims, i, j, k):
    return Monomial(dims, i, j, k)


def poly(dims, text):
    return GroupPolynomial.from_string(dims, text)


def random_poly(rng, dims, max_terms=4):
    n = rng.integers(0, max_terms + 1)
    terms = [
        mono(dims, rng.integers(0, dims.ell), rng.integers(0, dims.m), rng.integers(0, dims.p))
        for _ in range(n)
    ]
    return GroupPolynomial(dims, terms)


def test_monomial_mul_order2_generator():
    d = GroupDims(2, 1, 1)
    x = mono(d, 1, 0, 0)
    assert monomial_mul(x, x).is_identity()


def test_monomial_mul_identity():
    d = GroupDims(5, 4, 3)
    e = mono(d, 0, 0, 0)
    a = mono(d, 3, 2, 1)
    assert monomial_mul(e, a) == a


def test_monomial_mul_modular():
    # (x^2 y^1)(x^3 y^2 z^1) over (4,3,2) -> x^1 y^0 z^1
    a = mono(D432, 2, 1, 0)
    b = mono(D432, 3, 2, 1)
    assert monomial_mul(a, b) == mono(D432, 1, 0, 1)


def test_monomial_mul_dims_mismatch():
    with pytest.raises(ValueError):
        monomial_mul(mono(GroupDims(2, 2, 2), 1, 0, 0), mono(GroupDims(3, 2, 2), 1, 0, 0))


def test_monomial_transpose_identity_and_order2():
    d = GroupDims(2, 1, 1)
    assert monomial_transpose(mono(d, 0, 0, 0)).is_identity()
    assert monomial_transpose(mono(d, 1, 0, 0)) == mono(d, 1, 0, 0)


def test_monomial_transpose_negates_exponents():
    # x y^2 z over (4,3,2) -> x^3 y^1 z^1
    assert monomial_transpose(mono(D432, 1, 2, 1)) == mono(D432, 3, 1, 1)


def test_poly_parse_and_str_round_trip():
    P = poly(D432, "1 + y + x*y^2")
    assert P.weight == 3
    assert str(P) == "1 + y + x*y^2"
    assert poly(D432, "1+ y + xy^2") == P


def test_poly_square_over_order2_shift_cancels():
    d = GroupDims(2, 1, 1)
    P = poly(d, "1 + x")
    assert (P * P).is_zero()


def test_poly_mul_unit():
    rng = np.random.default_rng(0)
    for _ in range(10):
        P = random_poly(rng, D432)
        assert P * GroupPolynomial.one(D432) == P


def test_poly_mul_expand_no_cancellation():
    d = GroupDims(3, 3, 1)
    assert poly(d, "1+x") * poly(d, "1+y") == poly(d, "1 + x + y + xy")


def test_poly_transpose_involution_and_termwise_inverse():
    d4 = GroupDims(4, 1, 1)
    assert poly(d4, "1 + x").transpose() == poly(d4, "1 + x^3")
    assert poly(D432, "1 + y + xy^2").transpose() == poly(D432, "1 + y^2 + x^3*y")
    rng = np.random.default_rng(1)
    for _ in range(20):
        P = random_poly(rng, D432)
        assert P.transpose().transpose() == P


def test_poly_to_matrix_unit_and_zero():
    g = D432.order
    assert np.array_equal(poly_to_matrix(GroupPolynomial.one(D432)), np.eye(g, dtype=np.uint8))
    assert not poly_to_matrix(GroupPolynomial(D432)).any()


def test_poly_to_matrix_row_weight_equals_terms():
    rng = np.random.default_rng(2)
    for _ in range(10):
        P = random_poly(rng, D432)
        M = poly_to_matrix(P)
        assert (M.sum(axis=1) == P.weight).all()
        assert (M.sum(axis=0) == P.weight).all()


def test_matrix_is_ring_homomorphism():
    rng = np.random.default_rng(3)
    for _ in range(40):
        P = random_poly(rng, D432)
        Q = random_poly(rng, D432)
        MP, MQ = poly_to_matrix(P), poly_to_matrix(Q)
        assert np.array_equal(poly_to_matrix(P * Q), MP.astype(int) @ MQ.astype(int) & 1)
        assert np.array_equal(poly_to_matrix(P + Q), MP ^ MQ)


def test_matrix_transpose_matches_poly_transpose():
    rng = np.random.default_rng(4)
    for _ in range(40):
        P = random_poly(rng, D432)
        assert np.array_equal(poly_to_matrix(P.transpose()), poly_to_matrix(P).T)


def test_poly_mul_commutes():
    rng = np.random.default_rng(5)
    for _ in range(40):
        P = random_poly(rng, D432)
        Q = random_poly(rng, D432)
        assert P * Q == Q * P


def test_shift_matrix_convention():
    # matrix(x) for ell=3 must place a 1 at (i, i+1 mod 3)
    d = GroupDims(3, 1, 1)
    X = poly_to_matrix(poly(d, "x"))
    expect = np.zeros((3, 3), dtype=np.uint8)
    for i in range(3):
        expect[i, (i + 1) % 3] = 1
    assert np.array_equal(X, expect)


def test_vector_round_trip():
    rng = np.random.default_rng(6)
    for _ in range(10):
        P = random_poly(rng, D432)
        assert GroupPolynomial.from_vector(D432, P.to_vector()) == P


def test_monomial_order():
    assert mono(D432, 2, 0, 0).order() == 2
    assert mono(D432, 1, 1, 1).order() == 12
    assert mono(D432, 0, 0, 0).order() == 1


def test_generated_subgroup():
    d = GroupDims(4, 1, 1)
    sub = generated_subgroup(d, [mono(d, 2, 0, 0)])
    assert len(sub) == 2
    full = generated_subgroup(GroupDims(3, 3, 3), [mono(GroupDims(3, 3, 3), 1, 0, 0),
                                                   mono(GroupDims(3, 3, 3), 0, 1, 0),
                                                   mono(GroupDims(3, 3, 3), 0, 0, 1)])
    assert len(full) == 27
