import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from leastprime.coupon import (
    ENUMERATION_CAP,
    EmptySpaceError,
    bonferroni_bounds,
    empty_prob_exact,
    enumerate_omega,
    event_prob_enumerate,
    gumbel_fit,
    gumbel_sample,
    in_omega,
    monte_carlo_A,
    negative_correlation_check,
    pi_vector,
    sample_batch,
    sample_omega,
    splitmix64,
    threshold_sweep,
    worker_seed,
)
from oracles import omega_tuples, phi_bruteforce, pis_bruteforce

# (k, m) pairs with nonempty Omega_k and small enumerations
SMALL = [(k, m) for k in (3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 18) for m in range(0, 9)
         if phi_bruteforce(k) <= 6 and 0 < math.prod(phi_bruteforce(k) - v for v in pis_bruteforce(k, m)) <= 50_000]


def test_pi_vector_examples():
    assert pi_vector(4, 3).values == (0, 1, 2)
    assert pi_vector(2, 2).values == (0, 1)
    assert pi_vector(10, 5).values == (0, 1, 2, 3, 4)
    assert pi_vector(10**6, 6).values == (0, 1, 2, 3, 4, 5)
    assert pi_vector(3, 6).values[0] == 0


@given(st.integers(2, 500), st.integers(1, 60))
@settings(max_examples=80, deadline=None)
def test_pi_vector_matches_bruteforce(k, m):
    assert list(pi_vector(k, m).values) == pis_bruteforce(k, m)


def test_empty_space():
    with pytest.raises(EmptySpaceError):
        sample_omega(4, 3, seed=1)
    with pytest.raises(EmptySpaceError):
        empty_prob_exact(10, 5)


def test_sampler_determinism_and_membership():
    assert sample_omega(10, 4, 7) == sample_omega(10, 4, 7)
    pv = pi_vector(10, 4)
    rows = sample_batch(pv, 2000, np.random.default_rng(3))
    assert all(in_omega(pv, tuple(r)) for r in rows)


def test_sampler_uniform_chi_square():
    pv = pi_vector(10, 4)
    space = [tuple(t) for t in enumerate_omega(pv)]
    assert len(space) == 24
    idx = {t: i for i, t in enumerate(space)}
    rows = sample_batch(pv, 100_000, np.random.default_rng(2024))
    counts = np.bincount([idx[tuple(r)] for r in rows], minlength=len(space))
    assert stats.chisquare(counts).pvalue > 1e-4


@pytest.mark.parametrize("k,m", SMALL)
def test_enumeration_matches_oracle(k, m):
    pv = pi_vector(k, m)
    got = sorted(tuple(int(v) for v in r) for r in enumerate_omega(pv))
    assert got == sorted(omega_tuples(k, m))


@pytest.mark.parametrize("k,m", SMALL)
def test_exact_products_match_enumeration(k, m):
    en = event_prob_enumerate(k, m)
    ep = empty_prob_exact(k, m)
    assert len(set(en.p_empty_by_class)) == 1
    assert en.p_empty_by_class[0] == ep.p_single
    bb = bonferroni_bounds(k, m)
    assert bb.lower <= en.p_A <= bb.upper
    assert negative_correlation_check(k, m)


def test_small_exact_values():
    assert empty_prob_exact(5, 6).p_single == Fraction(1, 18)
    assert event_prob_enumerate(5, 6).p_A == Fraction(2, 9)
    assert empty_prob_exact(9, 6).p_single == Fraction(4, 27)
    assert event_prob_enumerate(9, 6).p_A == Fraction(7, 9)
    assert event_prob_enumerate(10, 1).p_A == 1
    assert event_prob_enumerate(10, 4).p_A == 0


def test_degenerate_products():
    ep = empty_prob_exact(7, 0)
    assert ep.p_single == ep.p_pair == 1
    bb = bonferroni_bounds(7, 0)
    assert bb.upper == 6 and bb.lower == 6 - 15
    assert negative_correlation_check(7, 0)
    # all pi_t vanish only for m = 1 (the first gap is 1)
    k = 10**6 + 3
    phi = pi_vector(k, 1).phi
    assert empty_prob_exact(k, 1).p_single == Fraction(phi - 1, phi)
    assert bonferroni_bounds(k, 1).upper == phi - 1
    # huge k: pi_t = t - 1 and the product telescopes to (phi - m) / phi
    assert empty_prob_exact(k, 5).p_single == Fraction(phi - 5, phi)


def test_k6_correlation():
    assert negative_correlation_check(6, 2)


def test_enumeration_cap():
    with pytest.raises(OverflowError):
        event_prob_enumerate(1000, 10)
    assert ENUMERATION_CAP == 10**7


def test_monte_carlo():
    with pytest.raises(ValueError):
        monte_carlo_A(10, 4, 0, 1)
    mc = monte_carlo_A(9, 6, 100_000, seed=11)
    exact = float(event_prob_enumerate(9, 6).p_A)
    assert abs(mc.estimate - exact) <= 4 * mc.std_error
    assert monte_carlo_A(10, 4, 5000, seed=1).estimate == 0.0
    assert monte_carlo_A(5, 30, 5000, seed=1).estimate == 0.0


def test_monte_carlo_worker_determinism():
    a = monte_carlo_A(9, 6, 20_000, seed=5, workers=4)
    b = monte_carlo_A(9, 6, 20_000, seed=5, workers=4)
    assert a == b


def test_splitmix_reference():
    # first outputs of the reference splitmix64 stream seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert worker_seed(5, 3) == splitmix64(6)


def test_threshold_sweep_shape():
    rows = threshold_sweep(1001)
    assert [r["alpha"] for r in rows] == [0.75, 1.25, 1.75, 2.25]
    assert all(not r["degenerate"] for r in rows)
    ups = [r["upper"] for r in rows]
    assert ups == sorted(ups, reverse=True)


def test_gumbel_recovery():
    x = gumbel_sample(1.45, -5.0, 100_000, np.random.default_rng(8))
    fit = gumbel_fit(x)
    assert abs(fit.b - 1.45) <= 0.05 and abs(fit.c + 5.0) <= 0.1
    grid = np.linspace(x.min(), x.max(), 50)
    assert np.all(np.diff(fit.cdf(grid)) >= 0)


def test_gumbel_errors():
    with pytest.raises(ValueError):
        gumbel_fit([1.0] * 99)
    with pytest.raises(ValueError):
        gumbel_fit([2.0] * 500)
