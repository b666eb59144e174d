"""Per-trial spread of the cluster model comparison (paired Model 3 minus Model 2)."""

from __future__ import annotations

import argparse
import statistics
import sys

from interdep.experiment import ExperimentConfig, run_experiment


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", default="2,3")
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--topology", default="uniform")
    p.add_argument("--surv-mode", default="greedy")
    args = p.parse_args(argv)
    cfg = ExperimentConfig(experiment="fig15", sizes=tuple(int(s) for s in args.sizes.split(",")),
                           trials=args.trials, topology=args.topology, surv_mode=args.surv_mode)
    by = {}
    for r in run_experiment(cfg):
        by.setdefault(r.size, {}).setdefault(r.trial, {})[r.metric] = r.value
    for size, trials in sorted(by.items()):
        diff = [t["model3"] - t["model2"] for t in trials.values()]
        se = statistics.stdev(diff) / len(diff) ** 0.5
        means = {m: statistics.fmean(t[m] for t in trials.values()) for m in ("model1", "model2", "model3", "additive")}
        print(f"s={size}: " + " ".join(f"{k}={v:.2f}" for k, v in means.items())
              + f"  M3-M2 {statistics.fmean(diff):+.2f} (se {se:.2f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
