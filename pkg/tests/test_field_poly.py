import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrmdistill.errors import ConsistencyError, ParameterError
from qrmdistill.field_poly import (
    Polynomial,
    PrimeField,
    count_roots,
    cubic_residues,
    evaluate,
    interpolate,
    poly_mul,
    poly_mul_batch,
    power_sum,
    rank_mod_p,
    reduce_flt,
)

PRIMES = [5, 7, 11, 13, 17]


@st.composite
def polynomials(draw, primes=PRIMES):
    d = draw(st.sampled_from(primes))
    coeffs = draw(st.lists(st.integers(0, d - 1), min_size=d - 1, max_size=d - 1))
    return Polynomial(d, tuple(coeffs))


def test_field_ops_examples():
    F7 = PrimeField(7)
    assert F7.inv(3) == 5
    assert 3 * 5 % 7 == 1
    assert PrimeField(5).pow(2, 4) == 1
    for d in PRIMES:
        F = PrimeField(d)
        for a in range(d):
            assert F.add(a, 0) == a
            if a:
                assert F.mul(a, F.inv(a)) == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        PrimeField(5).inv(0)


def test_non_prime_modulus_rejected():
    with pytest.raises(ParameterError):
        PrimeField(9)


def test_reduce_flt_examples():
    # x^4 on F_5^* is identically 1
    assert reduce_flt(5, {4: 1}) == Polynomial.constant(5, 1)
    assert [pow(x, 4, 5) for x in range(1, 5)] == [1, 1, 1, 1]
    assert reduce_flt(7, {9: 1}) == Polynomial.monomial(7, 3)
    assert all(pow(x, 9, 7) == pow(x, 3, 7) for x in range(1, 7))
    assert reduce_flt(11, {1: 1}).coeffs == (0, 1) + (0,) * 8


def test_reduce_flt_sums_colliding_terms():
    # x^2 + 3x^6 at d=5 folds to 4x^2
    assert reduce_flt(5, {2: 1, 6: 3}) == Polynomial.monomial(5, 2, 4)


def test_evaluate_examples():
    assert evaluate(Polynomial.monomial(5, 1)).tolist() == [1, 2, 3, 4]
    assert evaluate(Polynomial.zero(7)).tolist() == [0] * 6
    assert evaluate(Polynomial.monomial(5, 2)).tolist() == [1, 4, 4, 1]


def test_evaluate_rejects_zero_argument():
    with pytest.raises(ParameterError):
        Polynomial.monomial(5, 1)(0)


def test_interpolate_examples():
    assert interpolate([1, 2, 3, 4], 5) == Polynomial.monomial(5, 1)
    for d in PRIMES:
        assert interpolate([1] * (d - 1), d) == Polynomial.constant(d, 1)


def test_round_trip_exhaustive_d5():
    for coeffs in itertools.product(range(5), repeat=4):
        F = Polynomial(5, coeffs)
        assert interpolate(evaluate(F), 5) == F


@given(polynomials())
def test_round_trip_random(F):
    assert interpolate(evaluate(F), F.d) == F


@given(st.integers(0, 10**6))
def test_evaluate_interpolate_identity_d7(seed):
    v = np.random.default_rng(seed).integers(0, 7, size=6)
    assert evaluate(interpolate(v, 7)).tolist() == v.tolist()


def test_poly_mul_examples():
    # x * x^5 = x^6 = 1 on F_7^*
    H = poly_mul(Polynomial.monomial(7, 1), Polynomial.monomial(7, 5))
    assert H == Polynomial.constant(7, 1)
    assert H.shift == 1
    G = Polynomial(7, (3, 0, 2, 0, 5, 1))
    assert poly_mul(Polynomial.constant(7, 1), G) == G
    assert poly_mul(Polynomial.monomial(5, 2), Polynomial.monomial(5, 2)) == Polynomial.constant(5, 1)


@given(st.data())
def test_poly_mul_is_pointwise(data):
    d = data.draw(st.sampled_from(PRIMES))
    F = data.draw(polynomials([d]))
    G = data.draw(polynomials([d]))
    assert evaluate(poly_mul(F, G)).tolist() == (evaluate(F) * evaluate(G) % d).tolist()


def test_poly_mul_batch_matches_scalar():
    rng = np.random.default_rng(1)
    A = rng.integers(0, 11, size=(50, 10))
    B = rng.integers(0, 11, size=(50, 10))
    out = poly_mul_batch(A, B, 11)
    for a, b, o in zip(A, B, out):
        assert poly_mul(Polynomial(11, tuple(a)), Polynomial(11, tuple(b))).coeffs == tuple(o)


def test_power_sum_examples():
    for d in PRIMES:
        assert power_sum(Polynomial.constant(d, 1)) == d - 1
        for m in range(1, d - 1):
            assert power_sum(Polynomial.monomial(d, m)) == 0
    H = Polynomial(5, (2, 0, 0, 1))
    direct = sum(2 + x**3 for x in range(1, 5)) % 5
    assert direct == 3
    assert power_sum(H) == 3


@pytest.mark.parametrize("d", [p for p in range(5, 18) if all(p % q for q in range(2, p))])
def test_summation_lemma_by_direct_sum(d):
    for m in range(d - 1):
        direct = sum(pow(x, m, d) for x in range(1, d)) % d
        assert direct == (d - 1 if m == 0 else 0)


def test_power_sum_flags_inconsistency(monkeypatch):
    import qrmdistill.field_poly as fp

    monkeypatch.setattr(fp, "evaluate", lambda H: np.zeros(H.d - 1, dtype=np.int64))
    with pytest.raises(ConsistencyError):
        fp.power_sum(Polynomial.constant(5, 2))


def test_degree_and_shift_conventions():
    assert Polynomial.zero(7).degree == 0
    assert not Polynomial.zero(7).is_shifted
    F = Polynomial(7, (3, 0, 1, 0, 0, 0))
    assert F.degree == 2 and F.shift == 3 and F.is_shifted


def test_count_roots_bounded_by_degree():
    for coeffs in itertools.product(range(5), repeat=4):
        F = Polynomial(5, coeffs)
        if not F.is_zero():
            assert count_roots(F) <= F.degree


def test_cubic_residue_examples():
    assert cubic_residues(7) == {1, 6}
    assert cubic_residues(5) == {1, 2, 3, 4}
    for d in PRIMES:
        size = d - 1 if d % 3 == 2 else (d - 1) // 3
        assert len(cubic_residues(d)) == size


@pytest.mark.parametrize("d", PRIMES)
def test_cubic_residues_form_group_with_cosets(d):
    R = cubic_residues(d)
    assert 1 in R
    assert all(a * b % d in R for a in R for b in R)
    assert all(pow(a, -1, d) in R for a in R)
    cosets = {frozenset(m * c % d for c in R) for m in range(1, d)}
    assert len(cosets) == (1 if d % 3 == 2 else 3)
    assert set().union(*cosets) == set(range(1, d))


def test_rank_mod_p():
    assert rank_mod_p(np.array([[1, 2], [2, 4]]), 5) == 1
    assert rank_mod_p(np.array([[1, 2], [2, 4]]), 7) == 1
    assert rank_mod_p(np.eye(3, dtype=int), 5) == 3
    assert rank_mod_p(np.array([[1, 1], [1, 6]]), 5) == 1
