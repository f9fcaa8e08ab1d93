"""Sweep covering configurations and record which stage leaves what uncovered.

Every admissible (x, y, t1, z) on a small grid is built for a few seeds and
both stage-3 modes; one JSON line per run goes to stdout.

    python scripts/cover_sweep.py --k 30 --xs 120 160 200 --seeds 3
"""

import argparse
import json
from collections import Counter
from dataclasses import replace

from leastprime.covering import CoverConfig, build_cover


def grid(k, xs, gaps):
    for x in xs:
        for gap in gaps:
            y = x + gap
            for t1 in range(4, x // 4):
                for z in range(t1 + 1, (x + 3) // 4):
                    cfg = CoverConfig(k, x, y, t1, z)
                    if not cfg.problems():
                        yield cfg


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--xs", type=int, nargs="+", default=[60, 100, 160])
    ap.add_argument("--gaps", type=int, nargs="+", default=[20, 40])
    ap.add_argument("--seeds", type=int, default=2)
    args = ap.parse_args()

    tally = Counter()
    for base in grid(args.k, args.xs, args.gaps):
        for seed in range(args.seeds):
            for mode in ("greedy", "zero"):
                res = build_cover(replace(base, seed=seed, stage3_mode=mode))
                tally[(mode, res.verified)] += 1
                print(json.dumps({
                    "x": base.x, "y": base.y, "t1": base.t1, "z": base.z, "seed": seed, "mode": mode,
                    "verified": res.verified, "deficit": res.deficit, "uncovered": res.uncovered_after,
                }))
    for (mode, ok), n in sorted(tally.items()):
        print(f"# {mode:6} verified={ok}: {n}")


if __name__ == "__main__":
    main()
