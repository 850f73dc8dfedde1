"""Mean combined loss of BF, OMF and PEPs across seeds and participant counts.

    python scripts/loss_sweep.py --seeds 10 --n 10,20,40,80,160,320,640,1280
"""

import argparse
import statistics

from perprune import SolverConfig, TradeoffProfile, fit_bagging, predict_matrix, split, synthesize
from perprune.personalize import run_variant

VARIANTS = ("bf", "omf", "peps")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--n", default="10,20,40,80,160,320,640,1280")
    ap.add_argument("--m", type=int, default=20)
    ap.add_argument("--iterations", type=int, default=80)
    ap.add_argument("--cmin", type=float, default=0.3)
    ap.add_argument("--cmax", type=float, default=1.7)
    args = ap.parse_args()
    ns = [int(x) for x in args.n.split(",")]

    table = {(v, n): [] for v in VARIANTS for n in ns}
    for seed in range(args.seeds):
        parts = split(synthesize(4944, 43, 6, seed=seed), seed=seed)
        pm = predict_matrix(fit_bagging(parts.train, args.m, seed=seed), parts.validation)
        cfg = SolverConfig(args.iterations, seed=seed)
        for n in ns:
            profile = TradeoffProfile.uniform(n, 0.01, 0.2, seed=1000 * seed + n)
            for v in VARIANTS:
                assignment, _ = run_variant(v, pm, profile, cfg, args.cmin, args.cmax)
                table[v, n].append(assignment.mean_loss)
        print(f"seed {seed} done")

    print(f"{'n':>6}" + "".join(f"{v:>10}" for v in VARIANTS) + f"{'omf/bf':>10}")
    for n in ns:
        means = [statistics.fmean(table[v, n]) for v in VARIANTS]
        print(f"{n:>6}" + "".join(f"{x:10.4f}" for x in means) + f"{means[1] / means[0]:10.3f}")


if __name__ == "__main__":
    main()
