"""Command line entry point: ``leastprime <subcommand> ...``."""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from fractions import Fraction

from . import coupon, covering, jacobsthal, reports, scan
from .primes import CapacityError

U64_MAX = (1 << 64) - 1


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """argparse with a one-line JSON error on bad usage."""

    def error(self, message):
        sys.stderr.write(json.dumps({"error": message, "kind": "usage", "prog": self.prog}) + "\n")
        sys.exit(2)


def u64(text: str) -> int:
    v = int(text, 10)
    if not 0 <= v <= U64_MAX:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return v


def positive(text: str) -> int:
    v = int(text, 10)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} must be >= 1")
    return v


def _frac(q: Fraction) -> dict:
    return {"value": float(q), "exact": f"{q.numerator}/{q.denominator}"}


@contextlib.contextmanager
def _output(path, mode="w"):
    if path in (None, "-"):
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, mode, encoding="utf-8", newline="") as fh:
            yield fh


def _emit_json(args, obj) -> None:
    with _output(args.out) as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _emit_lines(args, lines) -> None:
    with _output(args.out) as fh:
        for line in lines:
            fh.write(line + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_pk(args):
    if args.ell is not None:
        p = scan.least_prime_in_ap(args.k, args.ell)
        _emit_json(args, {"k": args.k, "ell": args.ell, "p": p})
    else:
        _emit_lines(args, [scan.p_max(args.k).csv_row()])


def _resume_offset(path, ck: scan.Checkpoint) -> int:
    """Byte offset just past the row for ck.last_k, after checking the checksum."""
    with open(path, "rb") as fh:
        data = fh.read()
    header = (scan.CSV_HEADER + "\n").encode()
    if not data.startswith(header):
        raise UsageError(f"{path}: output does not start with the scan header")
    pos = len(header)
    state = scan.fnv1a64(b"")
    if ck.last_k < 0:
        return pos
    while pos < len(data):
        end = data.find(b"\n", pos)
        if end < 0:
            break
        line = data[pos : end + 1]
        state = scan.fnv1a64(line, state)
        pos = end + 1
        if int(line.split(b",", 1)[0]) == ck.last_k:
            if state != ck.checksum:
                raise UsageError(f"{path}: contents disagree with checkpoint checksum")
            return pos
    raise UsageError(f"{path}: row for checkpointed k={ck.last_k} not found")


def cmd_scan(args):
    if args.kmin > args.kmax:
        if args.out not in (None, "-"):
            _emit_lines(args, [scan.CSV_HEADER])
        else:
            print(scan.CSV_HEADER)
        return
    ck = scan.Checkpoint.read(args.checkpoint) if args.checkpoint else None
    to_stdout = args.out in (None, "-")
    if to_stdout:
        fh = sys.stdout
        if ck is None:
            fh.write(scan.CSV_HEADER + "\n")
    elif ck is not None:
        if not os.path.exists(args.out):
            raise UsageError(f"checkpoint {args.checkpoint} exists but output {args.out} is missing")
        offset = _resume_offset(args.out, ck)
        fh = open(args.out, "r+", encoding="utf-8", newline="")
        fh.seek(offset)
        fh.truncate()
    else:
        fh = open(args.out, "w", encoding="utf-8", newline="")
        fh.write(scan.CSV_HEADER + "\n")

    def sync(_k):
        fh.flush()
        if not to_stdout:
            os.fsync(fh.fileno())

    try:
        for rec in scan.scan_range(args.kmin, args.kmax, args.threads, args.checkpoint, on_checkpoint=sync):
            fh.write(rec.csv_row() + "\n")
        fh.flush()
    finally:
        if not to_stdout:
            fh.close()


def cmd_jacobsthal(args):
    if args.m is not None:
        _emit_lines(args, ["m,g,witness_start", jacobsthal.jacobsthal_g(args.m).csv_row()])
    elif args.primorials is not None:
        lines = ["m,g,witness_start"]
        for row in jacobsthal.iwaniec_check(args.primorials):
            lines.append(jacobsthal.jacobsthal_g(row["m"]).csv_row())
        _emit_lines(args, lines)
    else:
        b = jacobsthal.pomerance_bound(args.k, args.x)
        pk = scan.p_max(args.k).p_max if args.verify else None
        _emit_json(
            args,
            {
                "k": b.k, "x": b.x, "m": b.m, "g_m": b.g_m, "bound": b.bound,
                "hypotheses_ok": b.hypotheses_ok, "p_max": pk,
            },
        )


def cmd_cover(args):
    cfg = covering.CoverConfig(args.k, args.x, args.y, args.t1, args.z, args.seed, args.stage3)
    _emit_json(args, covering.build_cover(cfg).to_json())


def cmd_simulate(args):
    mc = coupon.monte_carlo_A(args.k, args.m, args.trials, args.seed, workers=args.threads)
    _emit_json(args, dict(mc.__dict__, splitting="splitmix64(seed ^ worker)"))


def cmd_enumerate(args):
    en = coupon.event_prob_enumerate(args.k, args.m)
    ep = coupon.empty_prob_exact(args.k, args.m)
    bb = coupon.bonferroni_bounds(args.k, args.m)
    pv = coupon.pi_vector(args.k, args.m)
    _emit_json(
        args,
        {
            "k": args.k,
            "m": args.m,
            "phi": pv.phi,
            "pi": list(pv.values),
            "omega_size": en.size,
            "p_empty_by_class": [_frac(q) for q in en.p_empty_by_class],
            "p_A": _frac(en.p_A),
            "p_all_covered": _frac(en.p_all_covered),
            "p_single": _frac(ep.p_single),
            "p_pair": _frac(ep.p_pair),
            "bonferroni_upper": _frac(bb.upper),
            "bonferroni_lower": _frac(bb.lower),
            "negatively_correlated": coupon.negative_correlation_check(args.k, args.m),
        },
    )


def cmd_fit_gumbel(args):
    fit = coupon.gumbel_fit(reports.read_column(args.infile, args.column))
    _emit_json(args, {"b": fit.b, "c": fit.c, "rms_residual": fit.rms_residual, "n": fit.n})


def cmd_tables(args):
    if args.infile:
        recs = reports.read_scan_csv(args.infile)
    elif args.kmin is not None and args.kmax is not None:
        recs = scan.scan_range(args.kmin, args.kmax, args.threads)
    else:
        raise UsageError("tables needs --in or both --kmin and --kmax")
    filt = reports.TableFilter(hi_threshold=args.hi, lo_threshold=args.lo)
    _emit_json(args, reports.extremal_tables(recs, filt))


def cmd_hist(args):
    h = reports.histogram(reports.read_column(args.infile, args.column), args.width)
    _emit_lines(args, h.csv_lines())


# ---------------------------------------------------------------------------


def build_parser() -> Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=u64, default=0, help="RNG seed (u64)")
    common.add_argument("--threads", type=positive, default=1, help="worker count")
    common.add_argument("--checkpoint", default=None, help="checkpoint file path")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")

    parser = Parser(prog="leastprime", description="Least primes in progressions, Jacobsthal gaps and covering experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("pk", parents=[common], help="P(k) record for one modulus")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, default=None, help="least prime in the class ell mod k instead")
    p.set_defaults(func=cmd_pk)

    p = sub.add_parser("scan", parents=[common], help="CSV of P(k) records over a k range")
    p.add_argument("--kmin", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("jacobsthal", parents=[common], help="Jacobsthal function g(m)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--primorials", type=int, metavar="N")
    g.add_argument("--k", type=int, help="Pomerance bound for modulus k (needs --x)")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--verify", action="store_true", help="also compute P(k) for comparison")
    p.set_defaults(func=cmd_jacobsthal)

    p = sub.add_parser("cover", parents=[common], help="four-stage covering of (x, y]")
    for name in ("k", "x", "y", "t1", "z"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--stage3", choices=covering.STAGE3_MODES, default="greedy")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate of P(A_k)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("enumerate", parents=[common], help="exact probabilities by enumerating Omega_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("fit-gumbel", parents=[common], help="fit exp(-exp(c - b x)) to a scan column")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--column", default="r_stat")
    p.set_defaults(func=cmd_fit_gumbel)

    p = sub.add_parser("tables", parents=[common], help="high/low ratio tables and band counts")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--kmin", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--hi", type=float, default=1.95)
    p.add_argument("--lo", type=float, default=0.5)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("hist", parents=[common], help="histogram of a scan column as CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--column", default="ratio")
    p.add_argument("--width", type=float, default=0.25)
    p.set_defaults(func=cmd_hist)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "jacobsthal" and args.k is not None and args.x is None:
        parser.error("jacobsthal --k needs --x")
    try:
        args.func(args)
    except (ValueError, ArithmeticError, CapacityError, UsageError, OSError, RuntimeError) as err:
        sys.stderr.write(json.dumps({"error": str(err), "kind": type(err).__name__}) + "\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
