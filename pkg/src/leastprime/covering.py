"""Four-stage residue-class covering of an interval (x, y] at desk scale.

Stage 1 puts the class 0 on small primes (<= t1) and on primes in (z, x/4].
Stage 2 draws uniform random classes for the primes in (t1, z].  Stage 3
picks classes for the primes in (x/2, x] greedily against what is left.
Stage 4 matches each survivor with its own prime from (x/4, x/2].  Primes
dividing k are never used.

A covered interval turns into a Jacobsthal certificate: with t = -a_p
(mod p) for every assigned p, each t + n, n in (x, y], shares a factor with
the product m of the assigned primes, so g(m) >= y - x.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .primes import factorize, shared_table, small_primes

STAGE3_MODES = ("greedy", "zero")


class CoverDeficit(RuntimeError):
    """Stage 4 has fewer primes than survivors to cover."""

    def __init__(self, residual: int, primes: int):
        self.residual = residual
        self.primes = primes
        self.deficit = residual - primes
        super().__init__(f"{residual} uncovered elements but only {primes} stage-4 primes (deficit {self.deficit})")


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class CoverConfig:
    k: int
    x: int
    y: int
    t1: int
    z: int
    seed: int = 0
    stage3_mode: str = "greedy"

    def problems(self) -> list[str]:
        out = []
        if self.k < 1:
            out.append("k must be >= 1")
        # t1 < z < x/4 < x/2 < x < y, written without division
        if not self.t1 < self.z:
            out.append("need t1 < z")
        if not 4 * self.z < self.x:
            out.append("need z < x/4")
        if not self.x < self.y:
            out.append("need x < y")
        if not 4 * self.y <= self.t1 * self.x:
            out.append("need 4y/x <= t1")
        if self.stage3_mode not in STAGE3_MODES:
            out.append(f"stage3_mode must be one of {STAGE3_MODES}")
        return out

    def validate(self) -> "CoverConfig":
        bad = self.problems()
        if bad:
            raise ValueError("invalid CoverConfig: " + "; ".join(bad))
        return self

    # prime sets used by the stages, all excluding divisors of k

    def _primes(self, keep) -> list[int]:
        return [p for p in small_primes(self.y).tolist() if self.k % p and keep(p)]

    def small(self) -> list[int]:
        return self._primes(lambda p: p <= self.t1)

    def random_primes(self) -> list[int]:
        return self._primes(lambda p: self.t1 < p <= self.z)

    def medium_zero(self) -> list[int]:
        return self._primes(lambda p: self.z < p and 4 * p <= self.x)

    def matching_primes(self) -> list[int]:
        return self._primes(lambda p: 4 * p > self.x and 2 * p <= self.x)

    def large_primes(self) -> list[int]:
        return self._primes(lambda p: 2 * p > self.x and p <= self.x)


@dataclass
class ResidueAssignment:
    entries: dict[int, int] = field(default_factory=dict)

    def merged(self, other: "ResidueAssignment") -> "ResidueAssignment":
        clash = self.entries.keys() & other.entries.keys()
        if clash:
            raise ValueError(f"primes assigned twice: {sorted(clash)}")
        return ResidueAssignment({**self.entries, **other.entries})

    def modulus(self) -> int:
        return math.prod(self.entries)

    def covers(self, n: int) -> bool:
        return any(n % p == a for p, a in self.entries.items())

    def check(self, k: int) -> None:
        table = shared_table()
        for p, a in self.entries.items():
            table.ensure(p)
            if not table.is_prime(p):
                raise ValueError(f"{p} is not prime")
            if k % p == 0:
                raise ValueError(f"{p} divides k={k}")
            if not 0 <= a < p:
                raise ValueError(f"residue {a} out of range for p={p}")


def uncovered(lo: int, hi: int, assignment: ResidueAssignment) -> list[int]:
    """Integers in (lo, hi] hit by none of the assigned classes."""
    if hi <= lo:
        return []
    alive = np.ones(hi - lo, dtype=bool)
    first = lo + 1
    for p, a in assignment.entries.items():
        alive[(a - first) % p :: p] = False
    return (np.flatnonzero(alive) + first).tolist()


def _restrict(values: Iterable[int], assignment: ResidueAssignment) -> list[int]:
    return [n for n in values if not assignment.covers(n)]


# ---------------------------------------------------------------------------
# stages


def stage1_assign(cfg: CoverConfig) -> ResidueAssignment:
    return ResidueAssignment({p: 0 for p in cfg.small() + cfg.medium_zero()})


def stage2_random(cfg: CoverConfig) -> ResidueAssignment:
    # Generator.integers draws bounded values without modulo bias
    rng = np.random.default_rng(cfg.seed)
    return ResidueAssignment({s: int(rng.integers(0, s)) for s in cfg.random_primes()})


def stage3_greedy(cfg: CoverConfig, residual: Iterable[int], primes_P: Iterable[int]) -> ResidueAssignment:
    """One class per prime in increasing order, each covering the most survivors.

    Ties go to the smallest residue.  With ``cfg.stage3_mode == "zero"`` every
    prime gets the class 0 instead (baseline for comparisons).
    """
    left = np.array(sorted(set(residual)), dtype=np.int64)
    out = {}
    for p in sorted(primes_P):
        if cfg.stage3_mode == "zero":
            b = 0
        elif left.size == 0:
            b = 0
        else:
            b = int(np.argmax(np.bincount(left % p, minlength=p)))
        out[p] = b
        if left.size:
            left = left[left % p != b]
    return ResidueAssignment(out)


def stage4_match(residual: Iterable[int], primes_Q: Iterable[int]) -> ResidueAssignment:
    """Pair survivors and primes in sorted order, one survivor per prime."""
    rest = sorted(set(residual))
    qs = sorted(primes_Q)
    if len(rest) > len(qs):
        raise CoverDeficit(len(rest), len(qs))
    return ResidueAssignment({q: n % q for n, q in zip(rest, qs)})


def crt_combine(assignment: ResidueAssignment) -> int:
    """Least t >= 0 with t = -a_p (mod p) for every entry."""
    t, mod = 0, 1
    for p, a in sorted(assignment.entries.items()):
        want = (-a) % p
        step = ((want - t) * pow(mod, -1, p)) % p
        t += mod * step
        mod *= p
    return t


# ---------------------------------------------------------------------------
# residual classification


@dataclass
class ResidualReport:
    zs: list[int]
    zr: list[int]
    mq: list[int]
    other: list[int]
    sigma: float
    sigma_exact: Fraction
    M: int
    kappa: int
    density_factor: float

    def sizes(self) -> dict[str, int]:
        return {"ZS": len(self.zs), "ZR": len(self.zr), "MQ": len(self.mq), "other": len(self.other)}


def _kind(n: int, cfg: CoverConfig) -> str:
    f = factorize(n).primes()
    if not f or f[-1] <= cfg.z:
        return "zs"
    k = cfg.k
    # upper end x/4 taken inclusively so that prime x/4 | k cannot escape all sets
    if any(k % p == 0 and cfg.z < p and 4 * p <= cfg.x for p in f):
        return "zr"
    q = f[-1]
    m = n // q
    if 4 * q > cfg.x and q <= cfg.y and m % q:
        if all(k % p == 0 and p * cfg.x <= 4 * cfg.y for p in factorize(m).primes()):
            return "mq"
    return "other"


def classify_residual(cfg: CoverConfig, assignment: ResidueAssignment) -> ResidualReport:
    """Split what stage 1 leaves in (x, y] into ZS, ZR and MQ."""
    left = uncovered(cfg.x, cfg.y, assignment)
    groups: dict[str, list[int]] = {"zs": [], "zr": [], "mq": [], "other": []}
    for n in left:
        groups[_kind(n, cfg)].append(n)
    S = cfg.random_primes()
    sigma_exact = math.prod((Fraction(s - 1, s) for s in S), start=Fraction(1))
    kdiv = [p for p, _ in factorize(cfg.k).factors] if cfg.k > 1 else []
    M = math.prod(p for p in kdiv if p <= cfg.t1)
    kappa = math.prod(p for p in kdiv if cfg.t1 < p <= cfg.z)
    dens = math.prod(1 - 1 / p for p in kdiv if p <= cfg.z)
    report = ResidualReport(
        zs=groups["zs"],
        zr=groups["zr"],
        mq=groups["mq"],
        other=groups["other"],
        sigma=math.prod(1 - 1 / s for s in S),
        sigma_exact=sigma_exact,
        M=M,
        kappa=kappa,
        density_factor=dens,
    )
    if report.other and not cfg.problems():
        raise InvariantViolation(f"uncovered elements outside ZS/ZR/MQ: {report.other[:10]}")
    return report


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class CoverResult:
    config: CoverConfig
    assignment: ResidueAssignment
    uncovered_after: dict[str, int]
    report: ResidualReport
    t: int
    m: int
    verified: bool
    gap_certified: int
    deficit: int = 0

    def to_json(self) -> dict:
        return {
            "config": asdict(self.config),
            "uncovered_after": self.uncovered_after,
            "residual_sets": self.report.sizes(),
            "sigma": self.report.sigma,
            "M": self.report.M,
            "kappa": self.report.kappa,
            "density_factor": self.report.density_factor,
            "primes_assigned": len(self.assignment.entries),
            "m": str(self.m),
            "t": str(self.t),
            "verified": self.verified,
            "gap_certified": self.gap_certified,
            "deficit": self.deficit,
        }


def verify_cover(x: int, y: int, assignment: ResidueAssignment, t: int) -> bool:
    """Exhaustive check of both the covering and the CRT translate."""
    m = assignment.modulus()
    for n in range(x + 1, y + 1):
        if not assignment.covers(n):
            return False
        if math.gcd(t + n, m) == 1:
            return False
    return True


def build_cover(cfg: CoverConfig) -> CoverResult:
    cfg.validate()
    a1 = stage1_assign(cfg)
    report = classify_residual(cfg, a1)
    after1 = uncovered(cfg.x, cfg.y, a1)
    a2 = stage2_random(cfg)
    after2 = _restrict(after1, a2)
    a3 = stage3_greedy(cfg, after2, cfg.large_primes())
    after3 = _restrict(after2, a3)
    counts = {"stage1": len(after1), "stage2": len(after2), "stage3": len(after3)}
    merged = a1.merged(a2).merged(a3)
    deficit = 0
    try:
        a4 = stage4_match(after3, cfg.matching_primes())
        merged = merged.merged(a4)
        counts["stage4"] = len(_restrict(after3, a4))
    except CoverDeficit as err:
        deficit = err.deficit
        counts["stage4"] = len(after3)
    merged.check(cfg.k)
    t = crt_combine(merged)
    ok = deficit == 0 and verify_cover(cfg.x, cfg.y, merged, t)
    return CoverResult(
        config=cfg,
        assignment=merged,
        uncovered_after=counts,
        report=report,
        t=t,
        m=merged.modulus(),
        verified=ok,
        gap_certified=cfg.y - cfg.x if ok else 0,
        deficit=deficit,
    )


# ---------------------------------------------------------------------------
# smooth numbers


@dataclass(frozen=True)
class SmoothCount:
    exact: int
    rankin_reference: float


def largest_prime_factors(lo: int, hi: int) -> np.ndarray:
    """P+(n) for n in [lo, hi), with P+(1) = 1."""
    n = np.arange(lo, hi, dtype=np.int64)
    rest = n.copy()
    big = np.ones_like(n)
    for p in small_primes(math.isqrt(max(hi - 1, 1))).tolist():
        pe = p
        while pe < hi:
            idx = np.arange((-lo) % pe, hi - lo, pe)
            rest[idx] //= p
            big[idx] = p
            pe *= p
    return np.where(rest > 1, rest, big)


def smooth_count(x: int, y: int, z: float, block: int = 1 << 22) -> SmoothCount:
    """Exact #{n in (x, y] : P+(n) <= z} and the reference y exp(-u ln u), u = ln y / ln z."""
    if y > 10**9:
        raise ValueError("smooth_count supports y <= 10^9")
    if not x < y:
        raise ValueError("need x < y")
    exact = 0
    lo = max(x + 1, 1)
    while lo <= y:
        hi = min(lo + block, y + 1)
        exact += int(np.count_nonzero(largest_prime_factors(lo, hi) <= z))
        lo = hi
    if z <= 1:
        ref = 0.0
    else:
        u = math.log(y) / math.log(z)
        ref = y * math.exp(-u * math.log(u))
    return SmoothCount(exact, ref)
