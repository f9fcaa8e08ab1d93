"""Extremal-value tables, histograms and scan CSV I/O."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable

from .primes import factorize
from .scan import CSV_HEADER, PkRecord, fmt6, r_statistic, ratio


@dataclass(frozen=True)
class TableFilter:
    hi_threshold: float = 1.95
    lo_threshold: float = 0.5
    band: tuple[float, float] = (1.05, 1.95)
    top_threshold: float = 2.05


def table_row(rec: PkRecord) -> dict:
    return {
        "k": rec.k,
        "P": rec.p_max,
        "R": rec.residue,
        "ratio": fmt6(rec.ratio),
        "factorization": str(factorize(rec.k)),
    }


def extremal_tables(records: Iterable[PkRecord], filt: TableFilter = TableFilter()) -> dict:
    high, low = [], []
    top = mid = bottom = total = 0
    b_lo, b_hi = filt.band
    for rec in records:
        total += 1
        r = rec.ratio
        if r > filt.hi_threshold:
            high.append(rec)
        if r < filt.lo_threshold:
            low.append(rec)
        if r > filt.top_threshold:
            top += 1
        if b_lo <= r <= b_hi:
            mid += 1
        if r < filt.lo_threshold:
            bottom += 1
    counts = {f">{filt.top_threshold}": top, f"{b_hi}~{b_lo}": mid, f"<{filt.lo_threshold}": bottom}
    return {
        "total": total,
        "high_rows": [table_row(r) for r in high],
        "low_rows": [table_row(r) for r in low],
        "band_counts": counts,
        "band_proportions": {key: (v / total if total else 0.0) for key, v in counts.items()},
    }


@dataclass
class Histogram:
    bin_width: float
    bins: dict[int, int] = field(default_factory=dict)
    total: int = 0

    def csv_lines(self) -> list[str]:
        out = ["bin,lo,hi,count"]
        for b in sorted(self.bins):
            lo = b * self.bin_width
            out.append(f"{b},{lo:.10g},{lo + self.bin_width:.10g},{self.bins[b]}")
        return out


def histogram(values: Iterable[float], bin_width: float) -> Histogram:
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    h = Histogram(bin_width)
    for v in values:
        b = math.floor(v / bin_width)
        h.bins[b] = h.bins.get(b, 0) + 1
        h.total += 1
    return h


def read_scan_csv(path) -> list[PkRecord]:
    """Load a scan CSV; ratio and r_stat are recomputed from the integer columns."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER.split(","):
            raise ValueError(f"{path}: expected header {CSV_HEADER!r}")
        for row in reader:
            k, p, phi = int(row["k"]), int(row["p_max"]), int(row["phi"])
            out.append(
                PkRecord(
                    k=k,
                    p_max=p,
                    residue=int(row["residue"]),
                    primes_consumed=int(row["primes_consumed"]),
                    phi=phi,
                    ratio=ratio(k, p, phi),
                    r_stat=r_statistic(k, p, phi),
                )
            )
    return out


def read_column(path, column: str) -> list[float]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if column not in (reader.fieldnames or []):
            raise ValueError(f"{path}: no column {column!r}")
        return [float(row[column]) for row in reader]
