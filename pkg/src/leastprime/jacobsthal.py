"""Jacobsthal's function g(m) and the Pomerance reduction P(k) > (g(m) - 1) k."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .primes import CapacityError, factorize, radical, shared_table

SCAN_CAP = 1 << 31
_BLOCK = 1 << 22


@dataclass(frozen=True)
class JacobsthalResult:
    m: int
    g: int
    witness_start: int

    def csv_row(self) -> str:
        return f"{self.m},{self.g},{self.witness_start}"


def _prime_divisors_squarefree(m: int) -> list[int]:
    f = factorize(m).factors
    if any(e > 1 for _, e in f):
        raise ValueError(f"m={m} is not squarefree; pass its radical {radical(m)}")
    return [p for p, _ in f]


def jacobsthal_g(m: int) -> JacobsthalResult:
    """Exact g(m) from one period [1, m+1] of the coprimality pattern.

    Multiples of each prime divisor are struck out block by block, so the
    scan never calls gcd.  The witness is the coprime integer opening the
    first maximal gap.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > SCAN_CAP:
        raise CapacityError(f"m={m} above the period-scan cap {SCAN_CAP}")
    primes = _prime_divisors_squarefree(m)
    if not primes:
        return JacobsthalResult(1, 1, 1)
    best, best_start = 0, 1
    prev = 1  # 1 is coprime to every m
    lo = 2
    end = m + 1  # inclusive; m + 1 is coprime to m
    while lo <= end:
        hi = min(lo + _BLOCK, end + 1)
        keep = np.ones(hi - lo, dtype=bool)
        for p in primes:
            keep[(-lo) % p :: p] = False
        idx = np.flatnonzero(keep)
        if idx.size:
            vals = idx + lo
            gaps = np.diff(vals, prepend=prev)
            i = int(np.argmax(gaps))
            if gaps[i] > best:
                best = int(gaps[i])
                best_start = prev if i == 0 else int(vals[i - 1])
            prev = int(vals[-1])
        lo = hi
    return JacobsthalResult(m, best, best_start)


def check_witness(res: JacobsthalResult) -> bool:
    a, g, m = res.witness_start, res.g, res.m
    if math.gcd(a, m) != 1 or math.gcd(a + g, m) != 1:
        return False
    return all(math.gcd(a + j, m) > 1 for j in range(1, g))


@dataclass(frozen=True)
class PomeranceBound:
    k: int
    x: float
    m: int
    g_m: int
    bound: int
    hypotheses_ok: bool


def sieving_modulus(k: int, x: float) -> int:
    """Product of the primes p <= x with p not dividing k."""
    table = shared_table()
    table.ensure(int(x) + 1)
    m = 1
    for p in table.primes_iter(2, int(x) + 1):
        if k % p:
            m *= p
            if m > (1 << 63) - 1:
                raise CapacityError(f"sieving modulus overflows 2^63 at p={p}; partial product {m}")
    return m


def pomerance_bound(k: int, x: float) -> PomeranceBound:
    """(g(m) - 1) k for m = prod_{p <= x, p does not divide k} p.

    ``hypotheses_ok`` records whether 0 < m <= k / (1 + g(rad k)) holds, the
    condition under which P(k) exceeds the bound.
    """
    if k < 3 or x < 2:
        raise ValueError("need k >= 3 and x >= 2")
    m = sieving_modulus(k, x)
    g_m = jacobsthal_g(m).g
    g_k = jacobsthal_g(radical(k)).g
    ok = math.gcd(m, k) == 1 and m * (1 + g_k) <= k
    return PomeranceBound(k, x, m, g_m, (g_m - 1) * k, ok)


def primorial(n: int) -> int:
    table = shared_table()
    out, count, pos = 1, 0, 2
    while count < n:
        table.ensure(pos + 1000)
        for p in table.primes_iter(pos, table.limit):
            if count == n:
                break
            out *= p
            count += 1
        pos = table.limit
    return out


def iwaniec_check(n_max: int) -> list[dict]:
    """g over primorials 1, 2, 6, 30, ... with the ratio g(m) / ln^2 m.

    Rows whose primorial exceeds the scan cap are skipped; the ratio is
    ``None`` for m = 1.
    """
    rows = []
    for n in range(n_max + 1):
        m = primorial(n)
        if m > SCAN_CAP:
            break
        g = jacobsthal_g(m).g
        rows.append({"n": n, "m": m, "g": g, "ratio": g / math.log(m) ** 2 if m > 1 else None})
    return rows
