import itertools
import math

import numpy as np
import pytest

from qrmdistill import distill
from qrmdistill.code import PauliOperator, build_code
from qrmdistill.distill import (
    AcceptedEnumerator,
    NoiseModel,
    accepted_enumerator,
    accepted_enumerator_bruteforce,
    accepted_enumerator_charsum,
    distill_map,
    gamma,
    gamma_curves,
    root_count_histograms,
    scaling_exponent,
    threshold,
)
from qrmdistill.errors import CapacityError, ParameterError

# accepted phase errors for d=5, r=1, rows w = 0..4, columns m = 0..4
D5_TABLE = [
    [1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0],
    [0, 6, 6, 6, 6],
    [16, 8, 8, 8, 8],
    [8, 11, 11, 11, 11],
]

# bisection midpoints at tol = 1e-6, maximal degree r
THRESHOLDS = {
    5: 0.3631228637695313,
    7: 0.2322598266601562,
    11: 0.5316561889648438,
    13: 0.47870269775390634,
    17: 0.6021249389648439,
}

SMALL_GRID = list(np.geomspace(1e-4, 1e-3, 10))


def enumerate_by_commutation(d, r):
    """Slow reference: accept iff Z_e commutes with every X-type generator."""
    code = build_code(d, r)
    table = np.zeros((d, d), dtype=np.int64)
    for e in itertools.product(range(d), repeat=d - 1):
        P = PauliOperator.from_vectors(d, [0] * (d - 1), e)
        if all(g.commutes_with(P) for g in code.x_stabilizers):
            table[sum(1 for v in e if v), sum(e) % d] += 1
    return table


def test_d5_table_matches_commutation_reference():
    assert enumerate_by_commutation(5, 1).tolist() == D5_TABLE


def test_bruteforce_d5_table():
    table = accepted_enumerator_bruteforce(build_code(5, 1))
    assert table.counts.tolist() == D5_TABLE
    assert table.total() == 125
    assert table.min_logical_weight() == 2


def test_d7_r2_against_reference():
    table = accepted_enumerator_bruteforce(build_code(7, 2))
    assert table.counts.tolist() == enumerate_by_commutation(7, 2).tolist()


@pytest.mark.parametrize("d, r", [(5, 1), (5, 2), (7, 1), (7, 2), (7, 3), (11, 4)])
def test_charsum_equals_bruteforce(d, r):
    code = build_code(d, r)
    assert accepted_enumerator_charsum(code) == accepted_enumerator_bruteforce(code)


def test_parallel_bruteforce_matches_serial():
    code = build_code(7, 1)
    assert accepted_enumerator_bruteforce(code, workers=2) == accepted_enumerator_bruteforce(code)


def test_charsum_d17_total():
    table = accepted_enumerator_charsum(build_code(17, 5))
    assert table.total() == 17**11
    assert table.min_logical_weight() == 6


def test_root_histograms_shift_symmetry():
    A = root_count_histograms(build_code(7, 2))
    assert (A[1:] == A[1]).all()
    assert A[0].sum() == 49


@pytest.mark.parametrize("d", [5, 7, 11, 13])
def test_distance_consistency(d):
    r = (d - 2) // 3
    table = accepted_enumerator(build_code(d, r), method="charsum")
    table.validate()
    assert table.min_logical_weight() == r + 1


def test_bruteforce_capacity():
    with pytest.raises(CapacityError, match="charsum"):
        accepted_enumerator_bruteforce(build_code(17, 5))


def test_unknown_method():
    with pytest.raises(ParameterError):
        accepted_enumerator(build_code(5, 1), method="magic")


def test_validate_catches_bad_table():
    bad = AcceptedEnumerator(5, 1, np.array(D5_TABLE))
    bad.counts[1, 2] = 1
    with pytest.raises(AssertionError):
        bad.validate()


def test_json_round_trip():
    table = accepted_enumerator_bruteforce(build_code(5, 1))
    text = table.to_json()
    assert text.startswith('{"d":5,"r":1,"counts":[[0,0,1]')
    assert AcceptedEnumerator.from_json(text) == table


def test_noise_model():
    p = NoiseModel(5, 0.2).class_probabilities()
    assert np.isclose(p.sum(), 1) and p[0] == 0.8 and np.allclose(p[1:], 0.05)
    with pytest.raises(ParameterError):
        NoiseModel(5, 1.5)


def test_distill_map_noiseless():
    out = distill_map(accepted_enumerator_bruteforce(build_code(5, 1)), 0.0)
    assert out.p_accept == 1.0 and out.eps_out == 0.0


def test_distill_map_d5_eps_03():
    out = distill_map(accepted_enumerator_bruteforce(build_code(5, 1)), 0.3)
    q = 0.3 / 4
    p_acc = 0.7**4 + 24 * 0.7**2 * q**2 + 48 * 0.7 * q**3 + 52 * q**4
    bad = 24 * 0.7**2 * q**2 + 32 * 0.7 * q**3 + 44 * q**4
    assert math.isclose(out.p_accept, p_acc, rel_tol=1e-13)
    assert math.isclose(out.eps_out, bad / p_acc, rel_tol=1e-13)
    assert math.isclose(out.p_accept, 0.32207031249999984, rel_tol=1e-13)
    assert math.isclose(out.logical_dist.sum(), 1.0)


def test_distill_map_range():
    with pytest.raises(ParameterError):
        distill_map(accepted_enumerator_bruteforce(build_code(5, 1)), 1.0)


def test_output_error_is_quadratic_for_d5():
    table = accepted_enumerator_bruteforce(build_code(5, 1))
    ratios = [distill_map(table, e).eps_out / e**2 for e in (1e-5, 1e-6, 1e-7)]
    assert np.allclose(ratios, ratios[-1], rtol=1e-3)


@pytest.mark.parametrize("d, r", [(5, 1), (7, 1), (11, 3)])
def test_scaling_exponent(d, r):
    table = accepted_enumerator(build_code(d, r), method="charsum")
    assert abs(scaling_exponent(table, SMALL_GRID) - (r + 1)) < 0.1


def test_scaling_exponent_underflow():
    table = accepted_enumerator_charsum(build_code(17, 5))
    with pytest.raises(ParameterError):
        scaling_exponent(table, [1e-80, 1e-70])


@pytest.mark.parametrize("d", sorted(THRESHOLDS))
def test_threshold_regression(d):
    table = accepted_enumerator(build_code(d, (d - 2) // 3), method="charsum")
    res = threshold(table, tol=1e-6)
    assert abs(res.eps_star - THRESHOLDS[d]) < 1e-6
    lo, hi = res.bracket
    assert hi - lo <= 1e-6
    e_lo, e_hi = res.eps_star - res.tol, res.eps_star + res.tol
    assert distill_map(table, e_lo).eps_out < e_lo
    assert distill_map(table, e_hi).eps_out >= e_hi


def test_threshold_from_code_and_tol_validation():
    res = threshold(build_code(5, 1), tol=1e-4)
    assert abs(res.eps_star - THRESHOLDS[5]) < 1e-4
    with pytest.raises(ParameterError):
        threshold(build_code(5, 1), tol=0)


def test_threshold_trends():
    assert THRESHOLDS[11] > 0.5
    assert THRESHOLDS[5] < THRESHOLDS[11] < THRESHOLDS[17]
    assert THRESHOLDS[7] < THRESHOLDS[13]


def test_fully_mixed_input_is_a_fixed_point():
    for d in (5, 7):
        table = accepted_enumerator_charsum(build_code(d, 1))
        eps = 1 - 1 / d
        assert math.isclose(distill_map(table, eps).eps_out, eps, rel_tol=1e-12)


def test_gamma_values():
    assert gamma(5) == 2.0
    assert abs(gamma(11) - math.log(10) / math.log(4)) < 1e-15
    assert abs(gamma(11) - 1.661) < 1e-3
    with pytest.raises(ParameterError):
        gamma(3)
    large = [gamma(p) for p in distill.primes_between(10**5, 10**5 + 200)]
    assert all(1 < g < 1.25 for g in large)


def test_gamma_curves():
    pts = gamma_curves([5, 7, 11, 13, 17])
    assert (pts[0].d, pts[0].r, pts[0].D, pts[0].gamma) == (5, 1, 2, 2.0)
    assert (pts[-1].d, pts[-1].r, pts[-1].D) == (17, 5, 6)
    assert abs(pts[-1].gamma - math.log(16) / math.log(6)) < 1e-15
    for residue in (1, 2):
        seq = [p.gamma for p in gamma_curves(distill.primes_between(5, 200)) if p.residue == residue]
        assert all(a > b for a, b in zip(seq, seq[1:]))


def test_success_probability_near_one():
    for d in (5, 7):
        table = accepted_enumerator_charsum(build_code(d, 1))
        assert distill_map(table, 1e-4).p_accept > 0.99
