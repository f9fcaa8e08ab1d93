"""Segmented odd-only prime table, trial-division factorization and
multiplicative helpers.

The table stores one bit per odd integer, in fixed-length segments of
``SEGMENT_ODDS`` odd slots.  Odd slot ``j`` stands for the integer ``2*j + 1``.
The table is grown in whole segments, so ``limit`` is always a multiple of
``2 * SEGMENT_ODDS``.
"""

from __future__ import annotations

import hashlib
import math
import struct
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

SEGMENT_ODDS = 1 << 18
SEGMENT_SPAN = 2 * SEGMENT_ODDS
DEFAULT_HARD_CAP = 1 << 40
CACHE_MAGIC = b"LNKSV1"

# segments sieved per numpy pass; storage granularity is still one segment
_BATCH_SEGMENTS = 16
_DECODED_CACHE = 32


class CapacityError(RuntimeError):
    """A request needs more sieving than the configured hard cap allows."""


class OutOfRangeError(ValueError):
    """A query lies beyond the table's current limit."""


def small_primes(n: int) -> np.ndarray:
    """All primes <= n by a plain (non-segmented) sieve."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    mask[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if mask[p]:
            mask[p * p :: 2 * p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _sieve_odd_block(j0: int, count: int, base: np.ndarray) -> np.ndarray:
    """Primality mask for odd slots j0 .. j0+count-1 (integers 2j+1)."""
    mask = np.ones(count, dtype=bool)
    lo = 2 * j0 + 1
    hi = 2 * (j0 + count) + 1
    if j0 == 0:
        mask[0] = False  # 1 is not prime
    for p in base:
        p = int(p)
        if p == 2:
            continue
        pp = p * p
        if pp >= hi:
            break
        start = max(pp, ((lo + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= hi:
            continue
        mask[(start - lo) // 2 :: p] = False
    return mask


@dataclass
class PrimeTable:
    """Extensible primality table over [0, limit).

    A built table is safe to read from many threads.  Growth goes through
    :meth:`extend_to`, which holds the table lock; readers must not overlap an
    extension of a range they depend on (segments already present are never
    rewritten, so lookups below the old limit stay valid during growth).
    """

    hard_cap: int = DEFAULT_HARD_CAP
    limit: int = 0
    segments: list[np.ndarray] = field(default_factory=list)
    base_primes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)
    _pi_prefix: list[int] = field(default_factory=list, repr=False, compare=False)
    _decoded: OrderedDict = field(default_factory=OrderedDict, repr=False, compare=False)
    _cache_lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    # -- growth -----------------------------------------------------------

    def extend_to(self, new_limit: int) -> "PrimeTable":
        """Sieve so that ``limit >= new_limit``; existing segments are untouched."""
        if new_limit <= self.limit:
            return self
        if new_limit > self.hard_cap:
            raise CapacityError(
                f"requested limit {new_limit} exceeds hard cap {self.hard_cap}"
            )
        with self._lock:
            if new_limit <= self.limit:
                return self
            nseg = -(-new_limit // SEGMENT_SPAN)
            target = nseg * SEGMENT_SPAN
            self.base_primes = small_primes(math.isqrt(target))
            s = len(self.segments)
            while s < nseg:
                batch = min(_BATCH_SEGMENTS, nseg - s)
                mask = _sieve_odd_block(s * SEGMENT_ODDS, batch * SEGMENT_ODDS, self.base_primes)
                for b in range(batch):
                    chunk = mask[b * SEGMENT_ODDS : (b + 1) * SEGMENT_ODDS]
                    self._append_segment(np.packbits(chunk, bitorder="little"))
                s += batch
            # base_primes must describe the new limit exactly
            self.base_primes = small_primes(math.isqrt(self.limit - 1))
        return self

    def _append_segment(self, packed: np.ndarray) -> None:
        before = self._pi_prefix[-1] if self._pi_prefix else 0
        bits = int(np.unpackbits(packed).sum())
        if not self.segments:
            bits += 1  # the prime 2 lives in segment 0 but is not stored
        self.segments.append(packed)
        self._pi_prefix.append(before + bits)
        self.limit = len(self.segments) * SEGMENT_SPAN

    def ensure(self, n: int) -> "PrimeTable":
        """Make ``n`` queryable, growing by doubling to amortize repeated requests."""
        if n < self.limit:
            return self
        want = max(2 * self.limit, n + 1)
        want = -(-want // SEGMENT_SPAN) * SEGMENT_SPAN
        if want > self.hard_cap:
            want = max(n + 1, min(want, self.hard_cap))
        return self.extend_to(want)

    # -- queries ----------------------------------------------------------

    def is_prime(self, n: int) -> bool:
        if n < 0 or n >= self.limit:
            raise OutOfRangeError(f"{n} outside sieved range [0, {self.limit})")
        if n < 3:
            return n == 2
        if n % 2 == 0:
            return False
        j = n >> 1
        seg = self.segments[j // SEGMENT_ODDS]
        i = j % SEGMENT_ODDS
        return bool((seg[i >> 3] >> (i & 7)) & 1)

    def segment_primes(self, s: int) -> np.ndarray:
        """Primes held in segment ``s`` (including 2 for segment 0).

        Decoded segments are kept in a small LRU cache; callers must not
        mutate the returned array.
        """
        with self._cache_lock:
            vals = self._decoded.get(s)
            if vals is not None:
                self._decoded.move_to_end(s)
                return vals
        vals = self._decode(s)
        vals.flags.writeable = False
        with self._cache_lock:
            self._decoded[s] = vals
            while len(self._decoded) > _DECODED_CACHE:
                self._decoded.popitem(last=False)
        return vals

    def _decode(self, s: int) -> np.ndarray:
        bits = np.unpackbits(self.segments[s], bitorder="little").astype(bool)
        odd = np.flatnonzero(bits).astype(np.int64)
        vals = 2 * (odd + s * SEGMENT_ODDS) + 1
        if s == 0:
            vals = np.concatenate(([2], vals))
        return vals

    def prime_chunks(self, lo: int, hi: int) -> Iterator[np.ndarray]:
        """Arrays of the primes in [lo, hi), one per segment, increasing."""
        if hi > self.limit:
            raise OutOfRangeError(f"hi={hi} exceeds sieved limit {self.limit}")
        lo = max(lo, 0)
        if lo >= hi:
            return
        for s in range(lo // SEGMENT_SPAN, (hi - 1) // SEGMENT_SPAN + 1):
            vals = self.segment_primes(s)
            seg_lo = s * SEGMENT_SPAN
            if seg_lo < lo or seg_lo + SEGMENT_SPAN > hi:
                vals = vals[(vals >= lo) & (vals < hi)]
            if vals.size:
                yield vals

    def primes_array(self, lo: int, hi: int) -> np.ndarray:
        parts = list(self.prime_chunks(lo, hi))
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def primes_iter(self, lo: int, hi: int) -> Iterator[int]:
        for chunk in self.prime_chunks(lo, hi):
            yield from chunk.tolist()

    def prime_pi(self, n: int) -> int:
        """Number of primes <= n (needs n < limit)."""
        if n < 2:
            return 0
        if n >= self.limit:
            raise OutOfRangeError(f"{n} outside sieved range [0, {self.limit})")
        s = n // SEGMENT_SPAN
        before = self._pi_prefix[s - 1] if s else 0
        return before + int((self.segment_primes(s) <= n).sum())

    def iter_from(self, lo: int, grow: bool = True) -> Iterator[np.ndarray]:
        """Unbounded stream of prime chunks starting at ``lo``, growing on demand."""
        pos = lo
        while True:
            if pos >= self.limit:
                if not grow:
                    return
                self.ensure(pos)
            s = pos // SEGMENT_SPAN
            vals = self.segment_primes(s)
            if pos > s * SEGMENT_SPAN:
                vals = vals[vals >= pos]
            if vals.size:
                yield vals
            pos = (s + 1) * SEGMENT_SPAN

    # -- persistence --------------------------------------------------------

    def save(self, path) -> None:
        payload = b"".join(seg.tobytes() for seg in self.segments)
        digest = hashlib.blake2b(payload, digest_size=8).digest()
        with open(path, "wb") as fh:
            fh.write(CACHE_MAGIC)
            fh.write(struct.pack("<Q", self.limit))
            fh.write(payload)
            fh.write(digest)

    @classmethod
    def load(cls, path, hard_cap: int = DEFAULT_HARD_CAP) -> "PrimeTable":
        with open(path, "rb") as fh:
            data = fh.read()
        head = len(CACHE_MAGIC) + 8
        if len(data) < head + 8 or data[: len(CACHE_MAGIC)] != CACHE_MAGIC:
            raise ValueError(f"{path}: not a prime table cache")
        (limit,) = struct.unpack("<Q", data[len(CACHE_MAGIC) : head])
        payload, digest = data[head:-8], data[-8:]
        seg_bytes = SEGMENT_ODDS // 8
        if limit % SEGMENT_SPAN or len(payload) != (limit // SEGMENT_SPAN) * seg_bytes:
            raise ValueError(f"{path}: payload size does not match limit {limit}")
        if hashlib.blake2b(payload, digest_size=8).digest() != digest:
            raise ValueError(f"{path}: checksum mismatch")
        table = cls(hard_cap=hard_cap)
        raw = np.frombuffer(payload, dtype=np.uint8)
        for s in range(limit // SEGMENT_SPAN):
            table._append_segment(raw[s * seg_bytes : (s + 1) * seg_bytes].copy())
        if limit:
            table.base_primes = small_primes(math.isqrt(limit - 1))
        return table


_shared: PrimeTable | None = None
_shared_lock = threading.Lock()


def shared_table() -> PrimeTable:
    """Process-wide table reused by factorization and scans."""
    global _shared
    with _shared_lock:
        if _shared is None:
            _shared = PrimeTable()
        return _shared


def extend_to(table: PrimeTable, new_limit: int) -> PrimeTable:
    return table.extend_to(new_limit)


def is_prime(table: PrimeTable, n: int) -> bool:
    return table.is_prime(n)


def primes_iter(table: PrimeTable, lo: int, hi: int) -> Iterator[int]:
    return table.primes_iter(lo, hi)


# ---------------------------------------------------------------------------
# factorization and multiplicative functions


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __str__(self) -> str:
        # reference table layout: "2^2 11^1"
        return " ".join(f"{p}^{e}" for p, e in self.factors)


_TRIAL_CHUNK = 1 << 16
MAX_FACTOR_INPUT = (1 << 63) - 1


def factorize(n: int, table: PrimeTable | None = None) -> Factorization:
    """Trial division by table primes up to sqrt(n).

    The table is extended as far as sqrt(n) requires.
    """
    n = int(n)
    if n <= 0:
        raise ValueError("factorize needs n >= 1")
    if n > MAX_FACTOR_INPUT:
        raise ValueError("factorize supports n <= 2^63 - 1")
    table = table or shared_table()
    factors: list[tuple[int, int]] = []
    rest = n
    pos = 2
    while rest > 1:
        bound = math.isqrt(rest)
        if pos > bound:
            break
        table.ensure(min(bound, pos + _TRIAL_CHUNK * 32))
        hi = min(bound + 1, table.limit)
        for chunk in table.prime_chunks(pos, hi):
            hits = chunk[(rest % chunk) == 0]
            if hits.size == 0:
                continue
            for p in hits.tolist():
                e = 0
                while rest % p == 0:
                    rest //= p
                    e += 1
                factors.append((p, e))
            if chunk[-1] * chunk[-1] > rest:
                break
        pos = hi
        if pos * pos > rest:
            break
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(n, tuple(factors))


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n).factors:
        out = out // p * (p - 1)
    return out


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    return len(factorize(n).factors)


def largest_prime_factor(n: int) -> int:
    """Largest prime factor, with the convention P+(1) = 1."""
    f = factorize(n).factors
    return f[-1][0] if f else 1


def radical(n: int) -> int:
    """Squarefree kernel: product of the distinct primes dividing n."""
    out = 1
    for p, _ in factorize(n).factors:
        out *= p
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)
