"""Bonferroni bounds at m = alpha * phi(k) ln phi(k) for alpha around 1 and 2,
plus Monte Carlo P(A_k) where the sample space is nonempty.

    python scripts/coupon_thresholds.py --ks 101 211 1001 --trials 2000
"""

import argparse

from leastprime.coupon import monte_carlo_A, threshold_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--ks", type=int, nargs="+", default=[101, 211, 1001, 2311])
    ap.add_argument("--eps", type=float, default=0.25)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("k,alpha,m,upper,lower,product_hit,mc_estimate,mc_se")
    for k in args.ks:
        for row in threshold_sweep(k, args.eps):
            if row["degenerate"]:
                print(f"{k},{row['alpha']},{row['m']},,,,,")
                continue
            mc = monte_carlo_A(k, row["m"], args.trials, args.seed)
            print(f"{k},{row['alpha']},{row['m']},{row['upper']:.6g},{row['lower']:.6g},"
                  f"{row['product_hit']:.6g},{mc.estimate:.6g},{mc.std_error:.3g}")


if __name__ == "__main__":
    main()
