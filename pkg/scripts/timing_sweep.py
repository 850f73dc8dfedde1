"""Wall-clock of BF, OMF and PEPs as the participant count grows (single thread).

    python scripts/timing_sweep.py --n 1,2,3,4,5,6,7,8,9,10 --reps 5
"""

import argparse
import time

from perprune import SolverConfig, TradeoffProfile, fit_bagging, predict_matrix, split, synthesize
from perprune.personalize import run_variant

VARIANTS = ("bf", "omf", "peps")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", default="1,2,3,4,5,6,7,8,9,10")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--iterations", type=int, default=80)
    args = ap.parse_args()

    parts = split(synthesize(4944, 43, 6, seed=args.seed), seed=args.seed)
    pm = predict_matrix(fit_bagging(parts.train, 20, seed=args.seed), parts.validation)
    cfg = SolverConfig(args.iterations, seed=args.seed)

    print(f"{'n':>6}" + "".join(f"{v + ' ms':>12}" for v in VARIANTS))
    for n in (int(x) for x in args.n.split(",")):
        profile = TradeoffProfile.uniform(n, 0.01, 0.2, seed=n)
        row = []
        for v in VARIANTS:
            best = float("inf")
            for _ in range(args.reps):
                t0 = time.perf_counter()
                run_variant(v, pm, profile, cfg)
                best = min(best, time.perf_counter() - t0)
            row.append(best * 1e3)
        print(f"{n:>6}" + "".join(f"{x:12.2f}" for x in row))


if __name__ == "__main__":
    main()
