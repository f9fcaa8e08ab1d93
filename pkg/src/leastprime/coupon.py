"""Coupon-collector model for the residue classes of consecutive primes.

The t-th prime may not reuse the class of any earlier prime closer than k,
and otherwise lands uniformly in one of the remaining reduced classes.  The
sample space of admissible class tuples is Omega_k; ``pi_t`` counts the
forbidden classes at step t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import optimize

from .primes import euler_phi, shared_table

ENUMERATION_CAP = 10**7
_MASK64 = (1 << 64) - 1


class EmptySpaceError(ValueError):
    """Some step has no admissible class left, so Omega_k is empty."""


def first_primes(m: int) -> np.ndarray:
    table = shared_table()
    bound = 64
    while True:
        table.ensure(bound)
        ps = table.primes_array(2, bound)
        if ps.size >= m:
            return ps[:m]
        bound *= 2


@dataclass(frozen=True)
class PiVector:
    k: int
    m: int
    phi: int
    values: tuple[int, ...]

    @property
    def degenerate(self) -> bool:
        return any(v >= self.phi for v in self.values)

    def space_size(self) -> int:
        return math.prod(self.phi - v for v in self.values) if not self.degenerate else 0


def pi_vector(k: int, m: int) -> PiVector:
    if m < 0:
        raise ValueError("m must be >= 0")
    ps = first_primes(m)
    # earlier primes p_j with p_t - p_j < k are those with index >= first j having p_j > p_t - k
    start = np.searchsorted(ps, ps - k, side="right")
    vals = tuple((np.arange(m) - start).tolist())
    return PiVector(k, m, euler_phi(k), vals)


@dataclass(frozen=True)
class OmegaSample:
    k: int
    m: int
    tuple: tuple[int, ...]


def _require_nonempty(pv: PiVector) -> None:
    if pv.degenerate:
        t = next(i for i, v in enumerate(pv.values) if v >= pv.phi) + 1
        raise EmptySpaceError(
            f"Omega_k empty for k={pv.k}, m={pv.m}: step {t} has pi_t={pv.values[t - 1]} >= phi={pv.phi}"
        )


def sample_batch(pv: PiVector, n: int, rng: np.random.Generator) -> np.ndarray:
    """n independent tuples, shape (n, m), classes numbered 1..phi.

    Step t forbids the classes of the pi_t immediately preceding primes (they
    are pairwise within distance k, hence already distinct) and picks
    uniformly among the phi - pi_t others.
    """
    _require_nonempty(pv)
    phi = pv.phi
    out = np.zeros((n, pv.m), dtype=np.int16)
    rows = np.arange(n)
    for t, pi_t in enumerate(pv.values):
        avail = np.ones((n, phi), dtype=bool)
        for j in range(t - pi_t, t):
            avail[rows, out[:, j] - 1] = False
        u = rng.integers(0, phi - pi_t, size=n)
        rank = np.cumsum(avail, axis=1) - 1
        out[:, t] = np.argmax(avail & (rank == u[:, None]), axis=1) + 1
    return out


def sample_omega(k: int, m: int, seed: int) -> OmegaSample:
    row = sample_batch(pi_vector(k, m), 1, np.random.default_rng(seed))[0]
    return OmegaSample(k, m, tuple(int(v) for v in row))


def in_omega(pv: PiVector, tup) -> bool:
    if len(tup) != pv.m:
        return False
    for t, pi_t in enumerate(pv.values):
        if not 1 <= tup[t] <= pv.phi:
            return False
        if tup[t] in tup[t - pi_t : t]:
            return False
    return True


# ---------------------------------------------------------------------------
# exact probabilities


@dataclass(frozen=True)
class EmptyProb:
    p_single: Fraction
    p_pair: Fraction


def empty_prob_exact(k: int, m: int) -> EmptyProb:
    """P(E_i) and P(E_i and E_j), i != j, as exact rationals.

    A step with phi - pi_t < 2 cannot avoid two classes at once, so the pair
    probability is 0 there rather than the (negative) formal product.
    """
    pv = pi_vector(k, m)
    _require_nonempty(pv)
    single = Fraction(1)
    pair = Fraction(1)
    for v in pv.values:
        free = pv.phi - v
        single *= Fraction(free - 1, free)
        pair = pair * Fraction(free - 2, free) if free >= 2 else Fraction(0)
    return EmptyProb(single, pair)


@dataclass(frozen=True)
class Enumeration:
    size: int
    p_empty_by_class: tuple[Fraction, ...]
    p_A: Fraction
    p_all_covered: Fraction


def enumerate_omega(pv: PiVector) -> np.ndarray:
    """Every tuple of Omega_k as rows of an array (brute force)."""
    _require_nonempty(pv)
    size = pv.space_size()
    if size > ENUMERATION_CAP:
        raise OverflowError(f"|Omega_k| = {size} exceeds the enumeration cap {ENUMERATION_CAP}")
    rows = np.zeros((1, 0), dtype=np.int8)
    classes = np.arange(1, pv.phi + 1, dtype=np.int8)
    for t, pi_t in enumerate(pv.values):
        n = rows.shape[0]
        cand = np.repeat(rows, pv.phi, axis=0)
        nxt = np.tile(classes, n)
        ok = np.ones(cand.shape[0], dtype=bool)
        for j in range(t - pi_t, t):
            ok &= cand[:, j] != nxt
        rows = np.column_stack([cand[ok], nxt[ok]])
    return rows


def event_prob_enumerate(k: int, m: int) -> Enumeration:
    pv = pi_vector(k, m)
    rows = enumerate_omega(pv)
    n = rows.shape[0]
    missing = np.stack([~(rows == c).any(axis=1) for c in range(1, pv.phi + 1)], axis=1)
    per_class = tuple(Fraction(int(missing[:, i].sum()), n) for i in range(pv.phi))
    any_missing = int(missing.any(axis=1).sum())
    return Enumeration(n, per_class, Fraction(any_missing, n), Fraction(n - any_missing, n))


@dataclass(frozen=True)
class Bonferroni:
    upper: Fraction
    lower: Fraction


def bonferroni_bounds(k: int, m: int) -> Bonferroni:
    """Raw first and second Bonferroni bounds on P(A_k); no clamping."""
    phi = euler_phi(k)
    ep = empty_prob_exact(k, m)
    upper = phi * ep.p_single
    return Bonferroni(upper, upper - math.comb(phi, 2) * ep.p_pair)


def negative_correlation_check(k: int, m: int) -> bool:
    """P(every class hit) <= product over classes of P(class hit), by enumeration."""
    en = event_prob_enumerate(k, m)
    prod = math.prod((1 - p for p in en.p_empty_by_class), start=Fraction(1))
    return en.p_all_covered <= prod


# ---------------------------------------------------------------------------
# Monte Carlo


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def worker_seed(seed: int, worker: int) -> int:
    """Stream seed for one worker: splitmix64(seed XOR worker)."""
    return splitmix64((seed ^ worker) & _MASK64)


@dataclass(frozen=True)
class MonteCarlo:
    k: int
    m: int
    trials: int
    seed: int
    workers: int
    hits: int
    estimate: float
    std_error: float


def _count_incomplete(pv: PiVector, trials: int, rng: np.random.Generator, batch: int = 50_000) -> int:
    hits = 0
    done = 0
    while done < trials:
        n = min(batch, trials - done)
        rows = sample_batch(pv, n, rng)
        hit = np.zeros((n, pv.phi), dtype=bool)
        if pv.m:
            hit[np.arange(n)[:, None], rows.astype(np.int64) - 1] = True
        hits += int((~hit.all(axis=1)).sum())
        done += n
    return hits


def monte_carlo_A(k: int, m: int, trials: int, seed: int, workers: int = 1) -> MonteCarlo:
    """Fraction of sampled tuples leaving some class empty.

    Trials are split across ``workers`` streams (results depend on the worker
    count, never on scheduling); counts are merged by summation.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    pv = pi_vector(k, m)
    _require_nonempty(pv)
    share = [trials // workers + (w < trials % workers) for w in range(workers)]
    hits = sum(
        _count_incomplete(pv, n, np.random.default_rng(worker_seed(seed, w)))
        for w, n in enumerate(share)
        if n
    )
    p = hits / trials
    return MonteCarlo(k, m, trials, seed, workers, hits, p, math.sqrt(p * (1 - p) / trials))


# ---------------------------------------------------------------------------
# threshold diagnostics


def log_empty_prob(pv: PiVector, classes: int = 1) -> float:
    """ln of prod_t (1 - classes / (phi - pi_t)); -inf when some factor is <= 0."""
    total = 0.0
    for v in pv.values:
        free = pv.phi - v
        if free <= classes:
            return -math.inf
        total += math.log1p(-classes / free)
    return total


def threshold_sweep(k: int, eps: float = 0.25) -> list[dict]:
    """Bonferroni bounds and the hit-probability product at m = alpha phi ln phi."""
    phi = euler_phi(k)
    base = phi * math.log(phi)
    rows = []
    for alpha, rnd in ((1 - eps, math.floor), (1 + eps, math.ceil), (2 - eps, math.floor), (2 + eps, math.ceil)):
        m = int(rnd(alpha * base))
        pv = pi_vector(k, m)
        if pv.degenerate:
            rows.append({"alpha": alpha, "m": m, "degenerate": True})
            continue
        single = math.exp(log_empty_prob(pv, 1))
        pair = math.exp(log_empty_prob(pv, 2))
        rows.append(
            {
                "alpha": alpha,
                "m": m,
                "degenerate": False,
                "upper": phi * single,
                "lower": phi * single - math.comb(phi, 2) * pair,
                "product_hit": (1 - single) ** phi,
            }
        )
    return rows


# ---------------------------------------------------------------------------
# Gumbel fit


@dataclass(frozen=True)
class GumbelFit:
    b: float
    c: float
    rms_residual: float
    n: int

    def cdf(self, x):
        return np.exp(-np.exp(self.c - self.b * np.asarray(x, dtype=float)))


def gumbel_sample(b: float, c: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draws with CDF exp(-exp(c - b x)), by inversion."""
    u = rng.random(n)
    return (c - np.log(-np.log(u))) / b


def gumbel_fit(values) -> GumbelFit:
    """Least-squares fit of exp(-exp(c - b x)) to the empirical CDF.

    Plotting positions are i/(n+1).  A straight-line fit of -ln(-ln F)
    against x seeds the nonlinear solve.
    """
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    if n < 100:
        raise ValueError(f"gumbel_fit needs at least 100 values, got {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("gumbel_fit needs finite values")
    if x[0] == x[-1]:
        raise ValueError("gumbel_fit: constant input has a degenerate empirical CDF")
    F = np.arange(1, n + 1) / (n + 1)
    slope, icept = np.polyfit(x, -np.log(-np.log(F)), 1)
    if slope <= 0:
        slope = 1.0 / np.std(x)
        icept = -slope * np.mean(x)

    def resid(theta):
        b, c = theta
        return np.exp(-np.exp(np.clip(c - b * x, -700, 700))) - F

    sol = optimize.least_squares(resid, x0=[slope, -icept], method="lm")
    b, c = (float(v) for v in sol.x)
    if b <= 0:
        raise RuntimeError("gumbel_fit converged to a non-increasing CDF")
    return GumbelFit(b, c, float(np.sqrt(np.mean(sol.fun**2))), n)
