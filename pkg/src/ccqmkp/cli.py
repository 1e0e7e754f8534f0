"""Command-line interface: generate, solve, experiment, stats, oracle."""
from __future__ import annotations

import argparse
import sys

from .experiment import (ALGORITHMS, SolveSettings, load_config, read_csv, run_experiment,
                         solve, write_csv)
from .instance import CORRELATIONS, ParseError, format_instance, generate_instance, read_instance
from .oracle import exhaustive_best
from .profit import CHEB_FORMS, DISPERSION_MODELS, TASK_MODES, ChanceParams
from .solution import format_solution
from .stats import format_marks, pairwise_significance, summarize

DEFAULT_GROUP_BY = "instance,m,delta,alpha,algorithm"


def _seconds(text: str):
    return None if text.lower() in ("none", "inf", "0") else float(text)


def _load(path: str, m: int | None):
    inst = read_instance(path)
    return inst if m is None or m == inst.m else inst.with_knapsacks(m)


def cmd_generate(args) -> int:
    inst = generate_instance(args.n, args.m, args.correlation, args.density, args.seed, args.label)
    text = format_instance(inst)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def cmd_solve(args) -> int:
    inst = _load(args.instance, args.m)
    chance = ChanceParams(args.delta, args.alpha, args.cheb_factor, args.dispersion_model)
    settings = SolveSettings(args.mu, args.lambda_, args.max_evals, args.max_seconds,
                             args.phase_evals, args.pr_kt, args.local_fitness, args.seed)
    best, budget = solve(inst, args.algorithm, chance, settings)
    fv = best.fitness(chance)
    print(f"best_fitness {fv.value:.4f}")
    print(f"feasible {'true' if fv.feasible else 'false'}")
    print(f"evaluations {budget.used_evaluations}")
    print(f"solution {format_solution(best.slots)}")
    return 0


def cmd_experiment(args) -> int:
    config = load_config(args.config)
    records = run_experiment(config, args.jobs)
    write_csv(records, args.out, config.base_seed)
    failed = sum(r.failed for r in records)
    print(f"{len(records)} runs written to {args.out}" + (f" ({failed} failed)" if failed else ""))
    return 1 if failed else 0


def cmd_stats(args) -> int:
    rows = read_csv(args.input)
    keys = [k.strip() for k in args.group_by.split(",") if k.strip()]
    summary = summarize(rows, keys)
    if "algorithm" in keys:
        pos = keys.index("algorithm")
        blocks: dict[tuple, list] = {}
        for row in summary:
            blocks.setdefault(row.key[:pos] + row.key[pos + 1:], []).append(row)
        for members in blocks.values():
            if len(members) < 2:
                continue
            table = pairwise_significance([r.values for r in members], args.confidence)
            for i, r in enumerate(members):
                r.marks = f"({i + 1}) " + (format_marks(table, i) or "-")
    header = keys + ["runs", "mean", "std", "stat"]
    lines = [header]
    for r in summary:
        lines.append([str(v) for v in r.key] + [str(r.count), f"{r.mean:.4f}",
                                                 f"{r.std:.4f}" + ("*" if r.degenerate else ""),
                                                 r.marks or "-"])
    widths = [max(len(line[c]) for line in lines) for c in range(len(header))]
    for line in lines:
        print("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
    if any(r.degenerate for r in summary):
        print("* single-run group: std reported as 0")
    return 0


def cmd_oracle(args) -> int:
    inst = _load(args.instance, args.m)
    chance = ChanceParams(args.delta, args.alpha, args.cheb_factor, args.dispersion_model)
    res = exhaustive_best(inst, chance)
    print(f"best_value {res.best_value:.6f}")
    print(f"feasible {'true' if res.best_feasible else 'false'}")
    print(f"enumerated {res.enumerated}")
    print(f"solution {format_solution(res.best_assignment)}")
    return 0


def _chance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=float, default=0.0, help="profit dispersion half-width")
    p.add_argument("--alpha", type=float, default=0.9, help="confidence level in (0.5, 1)")
    p.add_argument("--cheb-factor", choices=CHEB_FORMS, default="eq3",
                   help="eq3: sqrt(a/(1-a)) (default); eq4: sqrt((1-a)/a)")
    p.add_argument("--dispersion-model", choices=DISPERSION_MODELS, default="uniform",
                   help="per-term variance delta^2/3 (uniform) or delta^2 (twopoint)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ccqmkp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--correlation", choices=CORRELATIONS, default="weak")
    p.add_argument("--density", type=float, default=0.25, help="pair density in (0, 1]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--label", default=None)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="run one algorithm on one instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", required=True,
                   choices=[a.replace("_", "-") for a in ALGORITHMS] + list(ALGORITHMS))
    p.add_argument("--m", type=int, default=None, help="override knapsack count")
    _chance_flags(p)
    p.add_argument("--mu", type=int, default=20)
    p.add_argument("--lambda", dest="lambda_", type=int, default=10)
    p.add_argument("--max-evals", type=int, default=5_000_000)
    p.add_argument("--max-seconds", type=_seconds, default=1200.0, help="'none' disables the cap")
    p.add_argument("--phase-evals", type=int, default=500)
    p.add_argument("--pr-kt", type=float, default=0.1)
    p.add_argument("--local-fitness", choices=TASK_MODES, default="expected")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("experiment", help="run a configured grid of seeded runs")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPUs)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("stats", help="summarize a results CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--group-by", default=DEFAULT_GROUP_BY)
    p.add_argument("--confidence", type=float, default=0.95)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("oracle", help="exhaustive optimum of a tiny instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--m", type=int, default=None)
    _chance_flags(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
