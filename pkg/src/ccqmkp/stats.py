"""Run summaries and rank-based significance tests."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.special import gammaincc
from scipy.stats import rankdata

MARKS = ("better", "worse", "none")


@dataclass
class SummaryRow:
    key: tuple
    mean: float
    std: float
    count: int
    degenerate: bool = False
    marks: str = ""
    values: list = field(default_factory=list, repr=False)


def _field(record, name):
    return record[name] if isinstance(record, dict) else getattr(record, name)


def summarize(records, group_keys, value_key: str = "best_fitness") -> list[SummaryRow]:
    """Mean and sample standard deviation of ``value_key`` per group, in first-seen order.

    Non-finite values (failed runs) are dropped; groups left empty are omitted with a warning.
    """
    groups: dict[tuple, list[float]] = {}
    for rec in records:
        key = tuple(_field(rec, k) for k in group_keys)
        groups.setdefault(key, [])
        v = float(_field(rec, value_key))
        if math.isfinite(v):
            groups[key].append(v)
    rows = []
    for key, vals in groups.items():
        if not vals:
            warnings.warn(f"group {key} has no usable runs; omitted", stacklevel=2)
            continue
        arr = np.asarray(vals)
        if len(arr) == 1:
            rows.append(SummaryRow(key, float(arr[0]), 0.0, 1, True, values=vals))
        else:
            rows.append(SummaryRow(key, float(arr.mean()), float(arr.std(ddof=1)), len(arr), values=vals))
    return rows


def _groups(args):
    if len(args) == 1 and all(np.ndim(g) == 1 for g in args[0]):
        return [np.asarray(g, dtype=np.float64) for g in args[0]]
    return [np.asarray(g, dtype=np.float64) for g in args]


def kruskal_wallis(*groups) -> tuple[float, float]:
    """Tie-corrected Kruskal-Wallis H and its chi-square upper-tail p value.

    Accepts the samples either as separate arguments or as one list of samples.
    """
    samples = _groups(groups)
    if len(samples) < 2:
        raise ValueError("need at least two groups")
    if any(s.size == 0 for s in samples):
        raise ValueError("every group must be nonempty")
    pooled = np.concatenate(samples)
    total = pooled.size
    ranks = rankdata(pooled)
    _, ties = np.unique(pooled, return_counts=True)
    correction = 1.0 - float(np.sum(ties ** 3 - ties)) / (total ** 3 - total)
    if correction <= 0.0:
        return 0.0, 1.0
    h, start = 0.0, 0
    for s in samples:
        r = ranks[start:start + s.size]
        h += r.sum() ** 2 / s.size
        start += s.size
    h = (12.0 / (total * (total + 1)) * h - 3.0 * (total + 1)) / correction
    h = max(h, 0.0)
    df = len(samples) - 1
    return float(h), float(gammaincc(df / 2.0, h / 2.0))


def pairwise_significance(groups, confidence: float = 0.95, larger_is_better: bool = True):
    """Pairwise two-group Kruskal-Wallis tests with Bonferroni correction.

    ``marks[i][j]`` is "better" when group i significantly beats group j, "worse" in
    the opposite case and "none" otherwise (including the diagonal).
    """
    samples = [np.asarray(g, dtype=np.float64) for g in groups]
    count = len(samples)
    if count < 2:
        raise ValueError("need at least two groups")
    level = (1.0 - confidence) / (count * (count - 1) / 2)
    marks = [["none"] * count for _ in range(count)]
    for i, j in combinations(range(count), 2):
        a, b = samples[i], samples[j]
        if a.size == 0 or b.size == 0:
            continue
        _, p = kruskal_wallis(a, b)
        if not p < level:
            continue
        ranks = rankdata(np.concatenate([a, b]))
        diff = ranks[:a.size].mean() - ranks[a.size:].mean()
        if diff == 0:
            continue
        i_wins = (diff > 0) == larger_is_better
        marks[i][j], marks[j][i] = ("better", "worse") if i_wins else ("worse", "better")
    return marks


def format_marks(marks, i: int) -> str:
    """Compact marks for group ``i``: ``"2+ 3-"`` means better than group 2, worse than 3 (1-based)."""
    out = []
    for j, mark in enumerate(marks[i]):
        if mark == "better":
            out.append(f"{j + 1}+")
        elif mark == "worse":
            out.append(f"{j + 1}-")
    return " ".join(out)
