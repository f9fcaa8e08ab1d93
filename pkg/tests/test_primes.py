import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leastprime.primes import (
    CapacityError,
    OutOfRangeError,
    PrimeTable,
    SEGMENT_SPAN,
    euler_phi,
    factorize,
    is_squarefree,
    largest_prime_factor,
    omega,
    radical,
)
from oracles import factor_td, is_prime_td, phi_bruteforce


def test_small_table():
    t = PrimeTable().extend_to(100)
    assert t.limit >= 100
    assert t.is_prime(97) and not t.is_prime(91)
    assert t.is_prime(2) and not t.is_prime(1) and not t.is_prime(0)
    assert list(t.primes_iter(2, 12)) == [2, 3, 5, 7, 11]
    assert list(t.primes_iter(50, 101)) == [53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
    assert list(t.primes_iter(14, 16)) == []


def test_extend_noop_keeps_segments():
    t = PrimeTable().extend_to(100)
    segs = list(t.segments)
    t.extend_to(100)
    assert t.segments == segs and t.limit == SEGMENT_SPAN


def test_matches_trial_division_below_1e6(table):
    flags = np.array([is_prime_td(n) for n in range(10**6)])
    got = np.zeros(10**6, dtype=bool)
    got[table.primes_array(0, 10**6)] = True
    assert np.array_equal(flags, got)
    assert sum(1 for _ in table.primes_iter(2, 10**6)) == 78498


def test_pi_1e8():
    t = PrimeTable().extend_to(10**8)
    assert t.prime_pi(10**8 - 1) == 5761455


def test_is_prime_large_value():
    t = PrimeTable().extend_to(9_000_000)
    assert t.is_prime(8900383)


def test_base_primes_cover_sqrt_limit(table):
    lim = table.limit
    expect = [p for p in range(2, math.isqrt(lim - 1) + 1) if is_prime_td(p)]
    assert table.base_primes.tolist() == expect


def test_extension_is_stable():
    t = PrimeTable().extend_to(10)
    before = [bytes(s) for s in t.segments]
    answers = [t.is_prime(n) for n in range(t.limit)]
    t.extend_to(5 * SEGMENT_SPAN + 17)
    assert [bytes(s) for s in t.segments[: len(before)]] == before
    assert answers == [t.is_prime(n) for n in range(len(answers))]


def test_growth_policy_doubles():
    t = PrimeTable().extend_to(1)
    t.ensure(t.limit)
    assert t.limit == 2 * SEGMENT_SPAN


def test_errors():
    t = PrimeTable(hard_cap=1 << 22)
    with pytest.raises(CapacityError):
        t.extend_to((1 << 22) + 1)
    t.extend_to(100)
    with pytest.raises(OutOfRangeError):
        t.is_prime(t.limit)
    with pytest.raises(OutOfRangeError):
        list(t.primes_iter(0, t.limit + 1))


def test_cache_roundtrip(tmp_path):
    t = PrimeTable().extend_to(3 * SEGMENT_SPAN)
    path = tmp_path / "t.bin"
    t.save(path)
    raw = path.read_bytes()
    assert raw[:6] == b"LNKSV1"
    assert int.from_bytes(raw[6:14], "little") == t.limit
    u = PrimeTable.load(path)
    assert u.limit == t.limit and u.prime_pi(u.limit - 1) == t.prime_pi(t.limit - 1)
    bad = bytearray(raw)
    bad[100] ^= 1
    path.write_bytes(bytes(bad))
    with pytest.raises(ValueError, match="checksum"):
        PrimeTable.load(path)


def test_factorize_examples():
    assert factorize(199432).factors == ((2, 3), (97, 1), (257, 1))
    assert factorize(636184).factors == ((2, 3), (281, 1), (283, 1))
    assert factorize(1).factors == ()
    assert str(factorize(44)) == "2^2 11^1"
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_large_prime():
    f = factorize(2**61 - 1)
    assert f.factors == ((2**61 - 1, 1),)


@given(st.integers(min_value=1, max_value=10**7))
def test_factorize_matches_oracle(n):
    f = factorize(n)
    assert list(f.factors) == factor_td(n)
    assert f.value() == n


def test_phi_examples():
    assert euler_phi(4) == 2
    assert euler_phi(461) == 460
    assert euler_phi(903797) == 903797 * 738 * 1222 // (739 * 1223)


def test_omega_and_lpf():
    assert omega(12) == 2 and largest_prime_factor(12) == 3
    assert largest_prime_factor(1) == 1
    assert omega(783968) == 2
    assert radical(72) == 6 and is_squarefree(30) and not is_squarefree(12)


@given(st.integers(min_value=1, max_value=3000))
def test_phi_matches_count(n):
    assert euler_phi(n) == phi_bruteforce(n)


@settings(max_examples=200)
@given(st.integers(1, 10**6 - 1), st.integers(1, 10**6 - 1))
def test_phi_multiplicative(a, b):
    if math.gcd(a, b) != 1:
        return
    assert euler_phi(a * b) == euler_phi(a) * euler_phi(b)
