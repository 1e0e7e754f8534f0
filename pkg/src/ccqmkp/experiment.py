"""Seeded repeated runs over a configuration grid, with CSV output."""
from __future__ import annotations

import csv
import io
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import product
from pathlib import Path

from .budget import DEFAULT_MAX_EVALUATIONS, DEFAULT_MAX_WALL_TIME, Budget
from .ea import EaConfig, run_mu_plus_lambda, run_one_plus_one
from .hybrid import HybridConfig, run_hybrid_mu_plus_lambda, run_hybrid_one_plus_one
from .instance import Instance, read_instance
from .mfo import MfoConfig
from .profit import ChanceParams, is_feasible
from .solution import Assignment

log = logging.getLogger(__name__)

ALGORITHMS = ("ea11", "ea_mu_lambda", "ea11_mfo", "ea_mu_lambda_mfo")
CSV_HEADER = ("instance", "n", "m", "delta", "alpha", "algorithm", "seed", "run",
              "best_fitness", "feasible", "evaluations", "elapsed_ms")
LIST_KEYS = ("instances", "algorithms", "deltas", "alphas", "ms")


def canonical_algorithm(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    if key not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    return key


@dataclass(frozen=True)
class SolveSettings:
    mu: int = 20
    lambda_: int = 10
    max_evals: int = DEFAULT_MAX_EVALUATIONS
    max_seconds: float | None = DEFAULT_MAX_WALL_TIME
    phase_evals: int = 500
    pr_kt: float = 0.1
    local_fitness: str = "expected"
    seed: int = 0


def solve(instance: Instance, algorithm: str, chance: ChanceParams,
          settings: SolveSettings) -> tuple[Assignment, Budget]:
    """Run one algorithm from the empty solution; returns its result and the spent budget."""
    algorithm = canonical_algorithm(algorithm)
    budget = Budget(settings.max_evals, settings.max_seconds)
    ea_cfg = EaConfig(settings.mu, settings.lambda_, settings.seed)
    mfo_cfg = MfoConfig(settings.mu, settings.lambda_, settings.pr_kt, settings.local_fitness)
    empty = Assignment(instance)
    if algorithm == "ea11":
        best = run_one_plus_one(instance, chance, empty, budget, settings.seed)
    elif algorithm == "ea_mu_lambda":
        best = run_mu_plus_lambda(instance, chance, ea_cfg, [empty], budget, settings.seed)[0]
    elif algorithm == "ea11_mfo":
        cfg = HybridConfig(settings.phase_evals, settings.phase_evals, "one_plus_one")
        best = run_hybrid_one_plus_one(instance, chance, cfg, mfo_cfg, budget, settings.seed)
    else:
        cfg = HybridConfig(settings.phase_evals, settings.phase_evals, "mu_plus_lambda")
        best = run_hybrid_mu_plus_lambda(instance, chance, cfg, ea_cfg, mfo_cfg, budget, settings.seed)
    return best, budget


@dataclass
class RunRecord:
    instance: str
    n: int
    m: int
    delta: float
    alpha: float
    algorithm: str
    seed: int
    run: int
    best_fitness: float
    feasible: bool
    evaluations: int
    elapsed_ms: float
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def csv_row(self) -> list[str]:
        value = "nan" if not math.isfinite(self.best_fitness) else f"{self.best_fitness:.4f}"
        return [self.instance, str(self.n), str(self.m), f"{self.delta:g}", f"{self.alpha:g}",
                self.algorithm, str(self.seed), str(self.run), value,
                "true" if self.feasible else "false", str(self.evaluations), f"{self.elapsed_ms:.1f}"]


@dataclass
class ExperimentConfig:
    instances: list[Path]
    algorithms: list[str]
    deltas: list[float]
    alphas: list[float]
    ms: list[int]
    runs: int = 1
    base_seed: int = 0
    settings: SolveSettings = field(default_factory=SolveSettings)
    cheb_form: str = "eq3"
    dispersion: str = "uniform"
    jobs: int | None = None


_SETTING_KEYS = {
    "mu": ("mu", int), "lambda": ("lambda_", int), "max_evals": ("max_evals", int),
    "max_seconds": ("max_seconds", float), "phase_evals": ("phase_evals", int),
    "pr_kt": ("pr_kt", float), "local_fitness": ("local_fitness", str),
}


def _split(value: str) -> list[str]:
    return [t for t in value.replace(",", " ").split() if t]


def parse_config(text: str, base_dir: str | os.PathLike = ".") -> ExperimentConfig:
    """Parse ``key = value`` lines; list keys may repeat and take comma/space separated values.

    Relative instance paths resolve against ``base_dir``.
    """
    lists: dict[str, list[str]] = {k: [] for k in LIST_KEYS}
    scalars: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key in LIST_KEYS:
            lists[key].extend(_split(value))
        elif key in _SETTING_KEYS or key in ("runs", "base_seed", "cheb_factor", "dispersion_model", "jobs"):
            scalars[key] = value
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    if not lists["instances"]:
        raise ValueError("config lists no instances")
    if not lists["algorithms"]:
        raise ValueError("config lists no algorithms")
    settings = {}
    for key, (attr, conv) in _SETTING_KEYS.items():
        if key in scalars:
            value = scalars[key]
            settings[attr] = None if key == "max_seconds" and value.lower() == "none" else conv(value)
    base = Path(base_dir)
    return ExperimentConfig(
        instances=[p if p.is_absolute() else base / p for p in map(Path, lists["instances"])],
        algorithms=[canonical_algorithm(a) for a in lists["algorithms"]],
        deltas=[float(d) for d in lists["deltas"]] or [0.0],
        alphas=[float(a) for a in lists["alphas"]] or [0.9],
        ms=[int(m) for m in lists["ms"]],
        runs=int(scalars.get("runs", 1)),
        base_seed=int(scalars.get("base_seed", 0)),
        settings=SolveSettings(**settings),
        cheb_form=scalars.get("cheb_factor", "eq3"),
        dispersion=scalars.get("dispersion_model", "uniform"),
        jobs=int(scalars["jobs"]) if "jobs" in scalars else None,
    )


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    path = Path(path)
    return parse_config(path.read_text(), path.parent)


@dataclass(frozen=True)
class _Job:
    path: str
    m: int | None
    delta: float
    alpha: float
    algorithm: str
    run: int
    seed: int
    settings: SolveSettings
    cheb_form: str
    dispersion: str


@lru_cache(maxsize=8)
def _load(path: str, m: int | None) -> Instance:
    inst = read_instance(path)
    return inst if m is None or m == inst.m else inst.with_knapsacks(m)


def _execute(job: _Job) -> RunRecord:
    inst = _load(job.path, job.m)
    t0 = time.perf_counter()
    try:
        chance = ChanceParams(job.delta, job.alpha, job.cheb_form, job.dispersion)
        best, budget = solve(inst, job.algorithm, chance, replace(job.settings, seed=job.seed))
        fv = best.fitness(chance)
        if fv.feasible != is_feasible(inst, best.slots):
            raise RuntimeError("feasibility flag disagrees with the constraint check")
        return RunRecord(inst.label, inst.n, inst.m, job.delta, job.alpha, job.algorithm, job.seed,
                         job.run, fv.value, fv.feasible, budget.used_evaluations,
                         (time.perf_counter() - t0) * 1000.0)
    except Exception as exc:  # a failed run becomes a row; the rest proceed
        log.warning("run %s/%s/%d failed: %s", inst.label, job.algorithm, job.run, exc)
        return RunRecord(inst.label, inst.n, inst.m, job.delta, job.alpha, job.algorithm, job.seed,
                         job.run, math.nan, False, 0, (time.perf_counter() - t0) * 1000.0,
                         error=f"{type(exc).__name__}: {exc}")


def plan_jobs(config: ExperimentConfig) -> list[_Job]:
    """Jobs in group-then-run order: instance, m, delta, alpha, algorithm, run."""
    missing = [str(p) for p in config.instances if not p.is_file()]
    if missing:
        raise FileNotFoundError(f"instance file(s) not found: {', '.join(missing)}")
    for path in config.instances:
        read_instance(path)  # malformed files abort before any run
    ms = config.ms or [None]
    return [_Job(str(path), m, d, a, alg, r, config.base_seed + r, config.settings,
                 config.cheb_form, config.dispersion)
            for path, m, d, a, alg, r in product(config.instances, ms, config.deltas,
                                                  config.alphas, config.algorithms,
                                                  range(config.runs))]


def run_experiment(config: ExperimentConfig, jobs: int | None = None) -> list[RunRecord]:
    plan = plan_jobs(config)
    workers = jobs or config.jobs or os.cpu_count() or 1
    if workers <= 1 or len(plan) <= 1:
        return [_execute(j) for j in plan]
    with ProcessPoolExecutor(max_workers=min(workers, len(plan))) as pool:
        return list(pool.map(_execute, plan))


def format_csv(records, base_seed: int = 0) -> str:
    buf = io.StringIO()
    buf.write(f"# seed = base_seed + run, base_seed = {base_seed}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


def write_csv(records, path: str | os.PathLike, base_seed: int = 0) -> None:
    Path(path).write_text(format_csv(records, base_seed))


def read_csv(path: str | os.PathLike) -> list[dict]:
    """Rows of a results CSV as dicts with numeric fields converted."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    rows = []
    for row in csv.DictReader(lines):
        for key in ("n", "m", "seed", "run", "evaluations"):
            row[key] = int(row[key])
        for key in ("delta", "alpha", "best_fitness", "elapsed_ms"):
            row[key] = float(row[key])
        row["feasible"] = row["feasible"] == "true"
        rows.append(row)
    return rows


__all__ = [
    "ALGORITHMS", "CSV_HEADER", "ExperimentConfig", "RunRecord", "SolveSettings",
    "canonical_algorithm", "format_csv", "load_config", "parse_config", "plan_jobs",
    "read_csv", "run_experiment", "solve", "write_csv",
]
