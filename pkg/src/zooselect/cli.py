"""Command-line pipeline: covariance estimation, selection, clustering,
robustness curves, the synthetic benchmark, and property checks.

Exit codes: 0 success, 2 input/validation error, 3 numerical or property
failure. All JSON outputs are canonical (sorted keys, 17-significant-digit
floats) so reruns reproduce files byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import jsonio
from .errors import NumericalError, ValidationError
from .feature_store import load_zoo
from .kernel_alignment import TaskCovariance, estimate_covariance, psd_report
from .clustering import cut_dendrogram, ward_linkage
from .mmi_selection import (
    brute_force_select,
    check_submodularity,
    greedy_quality,
    select_mmi,
)
from .gp_task_space import mutual_information
from .robustness import compare_covariances, convergence_curve, nested_schedule
from .synthetic_bench import TaskUniverseConfig, generate_universe, run_bench

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def cmd_kappa(args) -> int:
    zoo = load_zoo(args.zoo)
    kappa = estimate_covariance(zoo, center=args.center, jobs=args.jobs)
    kappa.save(args.out)
    report = psd_report(kappa)
    doc = report.to_dict()
    if args.psd_out:
        jsonio.dump(doc, args.psd_out)
    print(
        f"kappa {kappa.n}x{kappa.n} -> {args.out} | "
        f"eigenvalues in [{report.min_eigenvalue:.3e}, {report.max_eigenvalue:.3e}], "
        f"violations={report.violations}"
    )
    if args.csv_out:
        kappa.save_csv(args.csv_out)
    return EXIT_OK if report.ok else EXIT_NUMERICAL


def cmd_select(args) -> int:
    kappa = TaskCovariance.load(args.kappa)
    trace = select_mmi(kappa, args.k)
    doc = trace.to_dict()
    if args.oracle:
        oracle = brute_force_select(kappa, args.k)
        ratio = 1.0 if oracle.final_mi <= 1e-12 else trace.final_mi / oracle.final_mi
        doc["oracle"] = {
            "indices": oracle.indices,
            "final_mi": oracle.final_mi,
            "ratio": ratio,
        }
    if args.out:
        jsonio.dump(doc, args.out)
    else:
        print(jsonio.dumps(doc))
    if args.report:
        quality = greedy_quality(kappa, args.k, seed=args.seed)
        jsonio.dump(quality.to_dict(), args.report)
    picks = " -> ".join(kappa.ids[i] for i in trace.indices)
    print(f"selected [{picks}] final_mi={trace.final_mi:.6f} "
          f"monotonic={trace.monotonic_regime}")
    return EXIT_OK


def cmd_cluster(args) -> int:
    kappa = TaskCovariance.load(args.kappa)
    dendrogram = ward_linkage(kappa)
    doc = dendrogram.to_dict()
    if args.threshold is not None:
        labels = cut_dendrogram(dendrogram, args.threshold)
        doc["threshold"] = args.threshold
        doc["clusters"] = labels
        groups: dict[int, list[str]] = {}
        for leaf, label in enumerate(labels):
            groups.setdefault(label, []).append(kappa.ids[leaf])
        for label in sorted(groups):
            print(f"cluster {label}: {', '.join(groups[label])}")
    if args.out:
        jsonio.dump(doc, args.out)
    if args.newick:
        with open(args.newick, "w", encoding="utf-8") as fh:
            fh.write(dendrogram.to_newick() + "\n")
    return EXIT_OK


def cmd_robustness(args) -> int:
    zoo = load_zoo(args.zoo)
    if args.compare:
        other = load_zoo(args.compare)
        kappa_ref = estimate_covariance(zoo, center=args.center)
        kappa_other = estimate_covariance(other, center=args.center)
        doc = compare_covariances(kappa_ref, kappa_other)
        print(f"kl={doc['kl']:.6f} cosine={doc['cosine']:.6f}")
        if args.out:
            jsonio.dump(doc, args.out)
        return EXIT_OK
    schedule = nested_schedule(zoo.count, args.steps, seed=args.seed)
    report = convergence_curve(zoo, schedule, center=args.center)
    if args.out:
        report.save(args.out)
    if args.csv_prefix:
        report.save_csv(args.csv_prefix)
    pairs = "  ".join(
        f"{s}:{k:.4f}/{c:.4f}" for s, k, c in zip(report.sizes, report.kl, report.cosine)
    )
    print(f"size:kl/cosine  {pairs}")
    return EXIT_OK


def cmd_bench(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        doc = json.load(fh)
    cfg = TaskUniverseConfig.from_dict(doc.get("universe", {}))
    k_list = doc.get("k_list", list(range(1, 11)))
    n_seeds = int(doc.get("random_seeds", 20))
    adversarial = bool(doc.get("adversarial", False))
    universe = generate_universe(cfg, with_outlier_family=adversarial)
    report = run_bench(universe, k_list, n_random_seeds=n_seeds)
    report.save(args.out)
    if args.csv:
        report.save_csv(args.csv)
    for row in report.rows:
        print(
            f"K={row.budget}: mmi={row.mmi_acc:.4f} "
            f"random~{sum(row.random_accs)/len(row.random_accs):.4f} "
            f"peek={row.peek_acc:.4f}"
        )
    print(f"mean gain over random: {report.mean_gain:+.4f}")
    return EXIT_OK


def cmd_check(args) -> int:
    kappa = TaskCovariance.load(args.kappa)
    failures = []
    try:
        kappa.validate(check_psd=False)
    except ValueError as exc:
        failures.append(str(exc))
    report = psd_report(kappa)
    if not report.ok:
        failures.append(
            f"{report.violations} eigenvalues below {report.tol} "
            f"(min={report.min_eigenvalue:.3e})"
        )
    sub = None
    if kappa.n >= 3:
        sub = check_submodularity(kappa, trials=args.trials, seed=args.seed)
        if sub.violations:
            failures.append(
                f"{sub.violations}/{sub.trials} submodularity violations "
                f"(worst={sub.worst_violation:.3e})"
            )
        if sub.singular_trials:
            failures.append(f"{sub.singular_trials} trials hit singular conditioning")
    # symmetry of the information objective, spot-checked on a few subsets
    rng = np.random.default_rng(args.seed)
    for _ in range(min(20, args.trials)):
        size = int(rng.integers(1, kappa.n))
        subset = sorted(rng.choice(kappa.n, size=size, replace=False).tolist())
        rest = sorted(set(range(kappa.n)) - set(subset))
        gap = abs(mutual_information(kappa, subset) - mutual_information(kappa, rest))
        if gap > 1e-9:
            failures.append(f"mutual information asymmetric by {gap:.3e} at {subset}")
            break
    doc = {
        "psd": report.to_dict(),
        "submodularity": sub.to_dict() if sub else None,
        "failures": failures,
    }
    if args.out:
        jsonio.dump(doc, args.out)
    if failures:
        for f in failures:
            print(f"FAIL: {f}", file=sys.stderr)
        return EXIT_NUMERICAL
    trials = sub.trials if sub else 0
    print(f"ok: psd + {trials} submodularity trials + mi symmetry")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zooselect",
        description="Checkpoint-zoo covariance estimation and informative subset selection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kappa", help="estimate the task covariance from a zoo manifest")
    p.add_argument("--zoo", required=True, help="zoo manifest JSON")
    p.add_argument("--out", required=True, help="covariance JSON output")
    p.add_argument("--csv-out", help="also write the covariance as CSV")
    p.add_argument("--psd-out", help="write the eigenvalue report as JSON")
    p.add_argument("--center", action="store_true", help="center features before Grams")
    p.add_argument("--jobs", type=int, default=1, help="parallel alignment workers")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("select", help="greedy maximum-mutual-information selection")
    p.add_argument("--kappa", required=True, help="covariance JSON")
    p.add_argument("--k", type=int, required=True, help="selection budget")
    p.add_argument("--oracle", action="store_true", help="also run exact brute force")
    p.add_argument("--out", help="trace JSON output (stdout when omitted)")
    p.add_argument("--report", help="write per-budget greedy/optimal ratio report")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("cluster", help="Ward-linkage clustering of the covariance")
    p.add_argument("--kappa", required=True, help="covariance JSON")
    p.add_argument("--threshold", type=float, help="cut height for flat clusters")
    p.add_argument("--out", help="dendrogram JSON output")
    p.add_argument("--newick", help="Newick tree output")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("robustness", help="covariance convergence against probing size")
    p.add_argument("--zoo", required=True, help="zoo manifest JSON")
    p.add_argument("--steps", type=int, default=8, help="nested subset count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--compare", help="second manifest: compare full-data covariances")
    p.add_argument("--center", action="store_true")
    p.add_argument("--out", help="report JSON output")
    p.add_argument("--csv-prefix", help="write <prefix>_kl.csv and <prefix>_cosine.csv")
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("bench", help="synthetic transfer benchmark")
    p.add_argument("--config", required=True, help="benchmark config JSON")
    p.add_argument("--out", required=True, help="report JSON output")
    p.add_argument("--csv", help="per-budget CSV output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check", help="PSD, submodularity, and symmetry diagnostics")
    p.add_argument("--kappa", required=True, help="covariance JSON")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="diagnostic JSON output")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
