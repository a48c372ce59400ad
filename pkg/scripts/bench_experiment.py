#!/usr/bin/env python3
"""Synthetic transfer benchmark: MMI vs random vs peek selection.

Runs the default task universe (and optionally the outlier-family variant
that fools the peek baseline) and prints per-budget accuracies averaged
over the unseen tasks.
"""

import argparse

import numpy as np

from zooselect.synthetic_bench import TaskUniverseConfig, generate_universe, run_bench


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k-max", type=int, default=10)
    parser.add_argument("--random-seeds", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--adversarial", action="store_true",
                        help="reserve an outlier task family containing the peeked task")
    parser.add_argument("--out", help="write the report JSON here")
    args = parser.parse_args()

    cfg = TaskUniverseConfig(seed=args.seed)
    universe = generate_universe(cfg, with_outlier_family=args.adversarial)
    report = run_bench(universe, list(range(1, args.k_max + 1)),
                       n_random_seeds=args.random_seeds)
    print(f"{'K':>3} {'mmi':>7} {'random':>7} {'sd':>6} {'peek':>7} {'gain':>7}")
    for row in report.rows:
        rand = float(np.mean(row.random_accs))
        sd = float(np.std(row.random_accs))
        print(f"{row.budget:3d} {row.mmi_acc:7.4f} {rand:7.4f} {sd:6.4f} "
              f"{row.peek_acc:7.4f} {row.gain:+7.4f}")
    print(f"mean gain over random: {report.mean_gain:+.4f}")
    if args.out:
        report.save(args.out)


if __name__ == "__main__":
    main()
