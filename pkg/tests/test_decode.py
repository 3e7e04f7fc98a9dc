import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from code_forge import (DecodingQuery, curve_decoding_check, field_create, list_decoding_check, list_recovery_check,
                        random_linear_code, recovery_parameter_plan, tau_profile)
from code_forge.decode import (best_curve_agreement, ceil_ratio, codeword_symbols, list_decoding_bound,
                               min_distance_sum, power_upper)
from code_forge.errors import BudgetExceeded, DomainError, ViolationFound
from conftest import TINY_ENCODERS
from oracles import SlowField, codewords


def oracle_words():
    F = SlowField(2, 1, [0, 1])
    return list(codewords(F, TINY_ENCODERS, 3).values())


def oracle_min_sum(r):
    """min over y in (F_2^2)^4 and r distinct codewords of the summed relative distance."""
    cws = oracle_words()
    blocks = list(itertools.product(range(2), repeat=2))
    best = None
    for y in itertools.product(blocks, repeat=4):
        dists = sorted(sum(a != b for a, b in zip(c, y)) for c in cws)
        val = Fraction(sum(dists[:r]), 4)
        best = val if best is None else min(best, val)
    return best


def oracle_recovery_count(ell, max_miss):
    """max over ell-list collections of #codewords missing fewer than max_miss lists."""
    cws = oracle_words()
    blocks = list(itertools.product(range(2), repeat=2))
    lists = list(itertools.combinations(blocks, ell))
    best = 0
    for coll in itertools.product(lists, repeat=4):
        cnt = sum(sum(c[i] not in coll[i] for i in range(4)) < max_miss for c in cws)
        best = max(best, cnt)
    return best


@pytest.fixture(scope="module")
def tiny_cert():
    from conftest import make_tiny_code
    code = make_tiny_code()
    return code, tau_profile(code, 8)


# --- list decoding ----------------------------------------------------------------


def test_list_decoding_frozen_values(tiny_cert):
    code, cert = tiny_cert
    for r, want in ((2, Fraction(3, 4)), (3, Fraction(3, 2))):
        rep = list_decoding_check(code, cert, r)
        assert rep.minimum == want == oracle_min_sum(r)
        assert rep.bound == (r - 1) * (1 - cert.tau_hat[r - 1]) == want
        assert rep.holds and rep.verdict == "PASS"
        C = codeword_symbols(code)
        y = np.array(rep.received)
        assert min_distance_sum(C, y, rep.codewords) == rep.minimum


def test_list_decoding_r1_is_trivial(tiny_cert):
    code, cert = tiny_cert
    assert list_decoding_bound(cert, 1) == 0
    assert list_decoding_check(code, cert, 1).minimum == 0


def test_list_decoding_minimum_is_monotone(tiny_cert):
    code, cert = tiny_cert
    mins = [list_decoding_check(code, cert, r).minimum for r in range(1, 6)]
    assert mins == sorted(mins)


def test_list_decoding_sampled_is_deterministic_and_above_exhaustive(tiny_cert):
    code, cert = tiny_cert
    a = list_decoding_check(code, cert, 3, mode="sampled", trials=50, seed=3)
    b = list_decoding_check(code, cert, 3, mode="sampled", trials=50, seed=3)
    assert a.to_json() == b.to_json()
    assert a.minimum >= list_decoding_check(code, cert, 3).minimum


def test_list_decoding_budget_and_forged_certificate(tiny_cert):
    code, cert = tiny_cert
    with pytest.raises(BudgetExceeded):
        list_decoding_check(code, cert, 2, budget=100)
    forged = tau_profile(code, 4)
    forged.tau_hat[1] = Fraction(-1)  # a claimed profile the code cannot meet
    with pytest.raises(ViolationFound) as info:
        list_decoding_check(code, forged, 2)
    assert not info.value.report.holds
    assert list_decoding_check(code, forged, 2, strict=False).verdict == "FAIL"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 4))
def test_list_decoding_bound_holds_on_random_codes(seed, r):
    code = random_linear_code(field_create(2), 3, 1, 5, seed)
    cert = tau_profile(code, r)
    assert list_decoding_check(code, cert, r).holds


# --- list recovery -----------------------------------------------------------------


def test_list_recovery_frozen_values(tiny_cert):
    code, cert = tiny_cert
    rep = list_recovery_check(code, cert, 2, Fraction(1, 2))
    assert rep.r == 4 and rep.radius == Fraction(1, 6)
    assert rep.worst_count == 2 == oracle_recovery_count(2, math.ceil(Fraction(1, 6) * 4))
    assert rep.bound == pytest.approx((12 / 5) ** (5 / 3))
    assert rep.bound >= (12 / 5) ** (5 / 3)
    assert rep.verdict == "PASS"


def test_single_lists_reduce_to_unique_neighbourhoods(tiny_cert):
    code, cert = tiny_cert
    rep = list_recovery_check(code, cert, 1, Fraction(1, 4))
    assert rep.r == 4 and rep.radius == Fraction(5, 12)
    assert rep.worst_count == oracle_recovery_count(1, math.ceil(Fraction(5, 12) * 4)) == 1


def test_full_alphabet_lists_are_vacuous(tiny_cert):
    code, cert = tiny_cert
    rep = list_recovery_check(code, cert, 4, Fraction(1, 2))
    assert rep.worst_count == 2**code.k
    assert rep.bound >= 2**code.k and rep.verdict == "PASS"
    with pytest.raises(ValueError):
        list_recovery_check(code, cert, 5, Fraction(5, 8))


def test_list_recovery_inconclusive_without_tau(tiny_cert):
    code, _ = tiny_cert
    rep = list_recovery_check(code, tau_profile(code, 2), 2, Fraction(1, 2))
    assert rep.verdict == "Inconclusive" and rep.holds


def test_list_recovery_sampled_deterministic(tiny_cert):
    code, cert = tiny_cert
    a = list_recovery_check(code, cert, 2, Fraction(1, 2), mode="sampled", trials=40, seed=5)
    b = list_recovery_check(code, cert, 2, Fraction(1, 2), mode="sampled", trials=40, seed=5)
    assert a.to_json() == b.to_json()
    assert a.worst_count <= 2


def test_exact_ceilings_and_upper_powers():
    assert ceil_ratio(2, Fraction(1, 2)) == 4
    assert ceil_ratio(3, Fraction(3, 10)) == 10  # 3 / 0.3 in floats is 10.000000000000002
    assert power_upper(Fraction(4), Fraction(1, 2)) >= 2.0
    assert power_upper(Fraction(12, 5), Fraction(5, 3)) >= (12 / 5) ** (5 / 3)


# --- curve decoding ----------------------------------------------------------------


def test_curve_decoding_frozen(tiny_cert):
    code, cert = tiny_cert
    rep = curve_decoding_check(code, cert, DecodingQuery(ell=1, trials=100), 4, Fraction(1, 2), seed=0)
    assert rep.verdict == "PASS" and not rep.violations
    assert rep.applicable > 0 and rep.min_slack >= 0
    again = curve_decoding_check(code, cert, DecodingQuery(ell=1, trials=100), 4, Fraction(1, 2), seed=0)
    assert again.to_json() == rep.to_json()


def test_curve_decoding_domain(tiny_cert):
    code, cert = tiny_cert
    with pytest.raises(DomainError):
        curve_decoding_check(code, cert, DecodingQuery(ell=2), 4, Fraction(1, 2))


def test_planted_curve_is_found(F4):
    code = random_linear_code(F4, 2, 2, 3, 1)
    rng = np.random.default_rng(0)
    m = F4.random(rng, (2, 2))
    alphas = [0, 1, 2, 3]
    f = np.array([F4.add(m[0], F4.mul(a, m[1])) for a in alphas])
    got, curve = best_curve_agreement(code, f, alphas, 1)
    assert got == 4 and np.array_equal(np.array(curve), m)
    # at alpha = 0 only the constant term matters
    got0, curve0 = best_curve_agreement(code, f[:1], [0], 1)
    assert got0 == 1 and np.array_equal(np.array(curve0[0]), m[0])


def test_curve_query_validation():
    with pytest.raises(ValueError):
        DecodingQuery(ell=-1)
    with pytest.raises(ValueError):
        DecodingQuery(radius=Fraction(3, 2))
    with pytest.raises(ValueError):
        DecodingQuery(a=1, b=Fraction(2))


# --- parameter planning ------------------------------------------------------------


def test_plan_small_example():
    plan = recovery_parameter_plan(2, Fraction(1, 2), Fraction(1, 2))
    assert plan.L == 4  # ceil(2 ** 1)
    assert plan.eps0 == Fraction(1, 128) and plan.eps0_exact
    assert plan.eps1 == Fraction(63, 128)
    assert plan.r == 5 and plan.alphabet_q_exponent == 25


def test_plan_rounds_eps0_down():
    plan = recovery_parameter_plan(3, Fraction(1, 4), Fraction(1, 2))
    exact = (Fraction(1, 2) ** 2) / (4 * plan.L * math.log2(6))
    assert not plan.eps0_exact and plan.eps0 <= exact
    assert plan.L == math.ceil((3 / 0.75) ** 1.5) == 8
    assert plan.r == math.ceil(Fraction(3) / plan.eps1)


@pytest.mark.parametrize("args", [(1, Fraction(1, 2), Fraction(1, 2)), (2, Fraction(0), Fraction(1, 2)),
                                  (2, Fraction(1, 2), Fraction(1)), (2, Fraction(1, 2), Fraction(0))])
def test_plan_domain_errors(args):
    with pytest.raises(DomainError):
        recovery_parameter_plan(*args)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.fractions(Fraction(1, 20), Fraction(19, 20), max_denominator=20),
       st.fractions(Fraction(1, 20), Fraction(9, 10), max_denominator=20))
def test_plan_properties(ell, R, eps):
    plan = recovery_parameter_plan(ell, R, eps)
    assert 0 < plan.eps0 <= eps / 2 and plan.eps1 == eps - plan.eps0
    assert plan.r == math.ceil(Fraction(ell) / plan.eps1) and plan.alphabet_q_exponent == plan.r**2
    assert plan.L >= 1 and (plan.L - 1) ** float(eps / (R + eps)) < ell / float(R + eps) <= plan.L ** float(eps / (R + eps)) * (1 + 1e-9)


@pytest.mark.parametrize("base,exp", [(Fraction(6), Fraction(20)), (Fraction(12, 5), Fraction(5, 3)),
                                      (Fraction(1, 2), Fraction(3)), (Fraction(60), Fraction(40)),
                                      (Fraction(2), Fraction(1, 2))])
def test_exact_ceiling_power(base, exp):
    from code_forge.decode import _ceil_power
    m = _ceil_power(base, exp)
    p, d = exp.numerator, exp.denominator
    assert Fraction(m) ** d >= base**p > Fraction(m - 1) ** d


def test_monotonicity_literal_form(tiny_cert):
    """min over (r+1)-tuples of (sum minus its largest term) <= the r-tuple minimum; here it is equal."""
    code, cert = tiny_cert
    C = codeword_symbols(code)
    Y = np.array(list(itertools.product(range(4), repeat=4)))
    D = np.sort((Y[:, None, :] != C[None, :, :]).sum(axis=2), axis=1)
    for r in range(1, 7):
        dropped = (D[:, :r + 1].sum(axis=1) - D[:, r]).min()
        assert Fraction(int(dropped), 4) <= list_decoding_check(code, cert, r).minimum
        assert Fraction(int(dropped), 4) == list_decoding_check(code, cert, r).minimum


def test_constant_curves(tiny_cert):
    # ell = 0: f has one target per alpha and the codeword "curve" is a single codeword
    code, cert = tiny_cert
    rep = curve_decoding_check(code, cert, DecodingQuery(ell=0, trials=50), 4, Fraction(1, 4), seed=2)
    assert rep.verdict == "PASS" and rep.applicable > 0
