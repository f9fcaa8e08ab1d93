"""Least primes in arithmetic progressions: p(k, l), P(k) and batch scans."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .primes import PrimeTable, euler_phi, shared_table

CSV_HEADER = "k,p_max,residue,primes_consumed,phi,ratio,r_stat"
CHECKPOINT_EVERY = 1024

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class PkRecord:
    k: int
    p_max: int
    residue: int
    primes_consumed: int
    phi: int
    ratio: float
    r_stat: float

    def csv_row(self) -> str:
        return (
            f"{self.k},{self.p_max},{self.residue},{self.primes_consumed},{self.phi},"
            f"{fmt6(self.ratio)},{fmt6(self.r_stat)}"
        )


def fmt6(v: float) -> str:
    """Six significant digits, trailing zeros dropped (2.014, 0.498394)."""
    return format(v, ".6g")


def coprime_mask(k: int) -> np.ndarray:
    """Boolean array over residues 0..k-1, True where gcd(r, k) = 1."""
    from .primes import factorize

    mask = np.ones(k, dtype=bool)
    for p, _ in factorize(k).factors:
        mask[::p] = False
    return mask


def ratio(k: int, p_max: int, phi: int | None = None) -> float:
    """P(k) / (phi(k) ln phi(k) ln k)."""
    phi = euler_phi(k) if phi is None else phi
    if phi < 2:
        raise ValueError(f"ratio undefined for k={k}: phi(k)={phi} < 2")
    return p_max / (phi * math.log(phi) * math.log(k))


def r_statistic(k: int, p_max: int, phi: int | None = None) -> float:
    """(P - phi ln(phi) ln P) / (phi ln P)."""
    if p_max < 3:
        raise ValueError("r_statistic needs p_max >= 3")
    phi = euler_phi(k) if phi is None else phi
    lp = math.log(p_max)
    return (p_max - phi * math.log(phi) * lp) / (phi * lp)


def least_prime_in_ap(k: int, l: int, table: PrimeTable | None = None) -> int:
    """Least prime p with p = l (mod k)."""
    if k < 1 or not 0 <= l < k:
        raise ValueError(f"need 0 <= l < k, got k={k}, l={l}")
    if math.gcd(l, k) != 1:
        raise ValueError(f"gcd({l}, {k}) != 1: no prime in this class beyond divisors of k")
    table = table or shared_table()
    start = l
    block = 256
    while True:
        ns = start + k * np.arange(block, dtype=np.int64)
        table.ensure(int(ns[-1]))
        hits = np.flatnonzero(is_prime_array(table, ns))
        if hits.size:
            return int(ns[hits[0]])
        start = int(ns[-1]) + k
        block = min(block * 2, 1 << 20)


def is_prime_array(table: PrimeTable, ns: np.ndarray) -> np.ndarray:
    """Vectorized primality lookup for integers below ``table.limit``."""
    from .primes import SEGMENT_ODDS

    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and int(ns.max()) >= table.limit:
        raise ValueError("values beyond the sieved limit")
    out = np.zeros(ns.shape, dtype=bool)
    odd = (ns & 1) == 1
    out[ns == 2] = True
    j = ns >> 1
    seg = j // SEGMENT_ODDS
    pos = j % SEGMENT_ODDS
    for s in np.unique(seg[odd]).tolist():
        sel = odd & (seg == s)
        data = table.segments[s]
        i = pos[sel]
        out[sel] = ((data[i >> 3] >> (i & 7).astype(np.uint8)) & 1).astype(bool)
    return out


def _prime_stream(table: PrimeTable, flat: np.ndarray | None) -> Iterator[np.ndarray]:
    """Chunks of primes from 2 upward: slices of a cached prefix, then the table."""
    nxt = 2
    if flat is not None and flat.size:
        size = 2048
        pos = 0
        while pos < flat.size:
            yield flat[pos : pos + size]
            pos += size
            size *= 2
        nxt = int(flat[-1]) + 1
    yield from table.iter_from(nxt)


def p_max(k: int, table: PrimeTable | None = None, _flat: np.ndarray | None = None) -> PkRecord:
    """Coupon-collector scan for P(k).

    Walks the primes upward, skipping those dividing k, and records the first
    prime landing in each reduced residue class; P(k) is the prime that fills
    the last empty class.
    """
    if k < 3:
        raise ValueError("p_max needs k >= 3")
    table = table or shared_table()
    good = coprime_mask(k)
    phi = int(good.sum())
    covered = ~good
    remaining = phi
    consumed = 0
    for chunk in _prime_stream(table, _flat):
        r = chunk % k
        fresh = np.flatnonzero(~covered[r])
        if fresh.size == 0:
            consumed += int(np.count_nonzero(good[r]))
            continue
        classes, first = np.unique(r[fresh], return_index=True)
        covered[classes] = True
        remaining -= classes.size
        if remaining == 0:
            last = int(fresh[first.max()])
            consumed += int(np.count_nonzero(good[r[: last + 1]]))
            p = int(chunk[last])
            return PkRecord(
                k=k,
                p_max=p,
                residue=p % k,
                primes_consumed=consumed,
                phi=phi,
                ratio=ratio(k, p, phi),
                r_stat=r_statistic(k, p, phi),
            )
        consumed += int(np.count_nonzero(good[r]))
    raise AssertionError("prime stream ended")  # iter_from grows without bound


def heuristic_bound(k: int) -> int:
    """Sieve depth requested up front for a scan to k: 2 phi(k) ln^2 k, phi <= k."""
    return int(2 * k * math.log(k) ** 2) + 1


# ---------------------------------------------------------------------------
# checkpointed batch scans


def fnv1a64(data: bytes, state: int = _FNV_OFFSET) -> int:
    for b in data:
        state = ((state ^ b) * _FNV_PRIME) & _MASK64
    return state


@dataclass(frozen=True)
class Checkpoint:
    last_k: int
    checksum: int

    def dump(self) -> str:
        return f"{self.last_k}\n{self.checksum:016x}\n"

    @classmethod
    def read(cls, path) -> "Checkpoint | None":
        try:
            with open(path, encoding="utf-8") as fh:
                lines = fh.read().split()
        except FileNotFoundError:
            return None
        if not lines:
            return None
        if len(lines) != 2:
            raise ValueError(f"{path}: malformed checkpoint")
        return cls(int(lines[0]), int(lines[1], 16))

    def write(self, path) -> None:
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(self.dump())
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)


def _check_writable(path) -> None:
    d = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(d) or not os.access(d, os.W_OK):
        raise PermissionError(f"checkpoint directory not writable: {d}")
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise PermissionError(f"checkpoint not writable: {path}")


def scan_range(
    k_min: int,
    k_max: int,
    parallelism: int = 1,
    checkpoint_path=None,
    table: PrimeTable | None = None,
    on_checkpoint=None,
) -> Iterator[PkRecord]:
    """PkRecords for k_min..k_max in ascending order.

    With ``checkpoint_path`` the scan resumes after the recorded k and, every
    ``CHECKPOINT_EVERY`` records (and at the end), stores the last k handed to
    the consumer together with a running FNV-1a checksum of the CSV rows
    emitted so far.  ``on_checkpoint`` runs just before each write, so callers
    can flush their own output first.
    """
    if k_min < 3:
        raise ValueError("scans start at k = 3")
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    if checkpoint_path is not None:
        _check_writable(checkpoint_path)
    state = _FNV_OFFSET
    start = k_min
    if checkpoint_path is not None:
        ck = Checkpoint.read(checkpoint_path)
        if ck is not None:
            if not k_min - 1 <= ck.last_k <= k_max:
                raise ValueError(f"checkpoint k={ck.last_k} outside [{k_min - 1}, {k_max}]")
            start, state = ck.last_k + 1, ck.checksum
    return _scan(start, k_max, parallelism, checkpoint_path, table or shared_table(), state, on_checkpoint)


def _scan(start, k_max, parallelism, checkpoint_path, table, state, on_checkpoint):
    if start > k_max:
        return
    table.extend_to(heuristic_bound(k_max))
    flat = table.primes_array(2, table.limit)
    work = lambda k: p_max(k, table, flat)  # noqa: E731
    pool = ThreadPoolExecutor(parallelism) if parallelism > 1 else None
    done = 0
    last = start - 1
    try:
        for lo in range(start, k_max + 1, CHECKPOINT_EVERY):
            ks = range(lo, min(lo + CHECKPOINT_EVERY, k_max + 1))
            batch = pool.map(work, ks) if pool else map(work, ks)
            for rec in batch:
                yield rec
                state = fnv1a64((rec.csv_row() + "\n").encode(), state)
                last = rec.k
                done += 1
                if checkpoint_path is not None and done % CHECKPOINT_EVERY == 0:
                    if on_checkpoint:
                        on_checkpoint(last)
                    Checkpoint(last, state).write(checkpoint_path)
        if checkpoint_path is not None and done % CHECKPOINT_EVERY:
            if on_checkpoint:
                on_checkpoint(last)
            Checkpoint(last, state).write(checkpoint_path)
    finally:
        if pool:
            pool.shutdown(wait=False, cancel_futures=True)
