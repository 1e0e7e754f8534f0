"""QMKP instances: data model, derivation from single-knapsack data, generation and file I/O.

Items and knapsacks are 0-based inside the library (items ``0..n-1``); knapsack
ids are ``1..m`` with ``0`` meaning "unassigned". The text file format uses
1-based item indices.

File layout (whitespace separated)::

    label n m density_percent
    C_1 ... C_m                 (6 decimals)
    w_1 ... w_n                 (integers)
    p_1 ... p_n                 (6 decimals)
    i j p_ij                    (one line per active pair, 1-based, i < j)
"""
from __future__ import annotations

import math
from os import PathLike
from typing import Mapping

import numpy as np

CAPACITY_FRACTION = 0.8
WEIGHT_RANGE = (1, 100)
CORRELATION_SPREAD = 25
CORRELATIONS = ("weak", "strong")


class ParseError(ValueError):
    """Malformed instance file. ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Instance:
    """Immutable QMKP instance.

    ``pair_profits`` maps ``(i, j)`` with ``i < j`` to a strictly positive expected
    pair profit; absent pairs contribute nothing (deterministically).
    """

    __slots__ = ("label", "weights", "item_profits", "pair_profits", "capacities",
                 "_csr", "_core")

    def __init__(self, weights, item_profits, pair_profits: Mapping[tuple[int, int], float],
                 capacities, label: str = "instance"):
        weights = np.asarray(weights)
        if weights.ndim != 1 or weights.size == 0:
            raise ValueError("weights must be a non-empty 1-d sequence")
        if not np.all(np.equal(np.mod(weights, 1), 0)):
            raise ValueError("weights must be integers")
        weights = weights.astype(np.int64)
        if np.any(weights <= 0):
            raise ValueError("weights must be strictly positive")
        n = weights.size
        profits = np.asarray(item_profits, dtype=np.float64)
        if profits.shape != (n,):
            raise ValueError(f"expected {n} item profits, got {profits.size}")
        if np.any(profits < 0):
            raise ValueError("item profits must be nonnegative")
        caps = np.asarray(capacities, dtype=np.float64)
        if caps.ndim != 1 or caps.size == 0:
            raise ValueError("need at least one knapsack capacity")
        if np.any(caps <= 0):
            raise ValueError("capacities must be strictly positive")
        if any(c.isspace() for c in label) or not label:
            raise ValueError("label must be a non-empty token without whitespace")

        pairs: dict[tuple[int, int], float] = {}
        for (i, j), p in pair_profits.items():
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"diagonal pair ({i}, {i})")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i}, {j}) out of range")
            key = (i, j) if i < j else (j, i)
            if key in pairs:
                raise ValueError(f"duplicate pair {key}")
            p = float(p)
            if not p > 0:
                raise ValueError(f"pair profit for {key} must be > 0")
            pairs[key] = p

        weights.setflags(write=False)
        profits.setflags(write=False)
        caps.setflags(write=False)
        self.label = label
        self.weights = weights
        self.item_profits = profits
        self.pair_profits = dict(sorted(pairs.items()))
        self.capacities = caps
        self._csr = None
        self._core = None

    @property
    def n(self) -> int:
        return int(self.weights.size)

    @property
    def m(self) -> int:
        return int(self.capacities.size)

    @property
    def total_weight(self) -> int:
        return int(self.weights.sum())

    @property
    def density(self) -> float:
        """Fraction of unordered item pairs carrying a pair profit."""
        total = self.n * (self.n - 1) // 2
        return len(self.pair_profits) / total if total else 0.0

    def pair_profit(self, i: int, j: int) -> float:
        """Expected profit of the unordered pair ``{i, j}`` (0 when inactive)."""
        if i == j:
            return 0.0
        key = (i, j) if i < j else (j, i)
        return self.pair_profits.get(key, 0.0)

    def with_knapsacks(self, m: int) -> "Instance":
        """Same items, ``m`` equal knapsacks sized by :func:`derive_capacities`."""
        if m == self.m:
            return self
        return Instance(self.weights, self.item_profits, self.pair_profits,
                        derive_capacities(self.total_weight, m), label=self.label)

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric adjacency of active pairs as ``(indptr, neighbours, profits)``."""
        if self._csr is None:
            n = self.n
            if self.pair_profits:
                ij = np.array(list(self.pair_profits.keys()), dtype=np.int64)
                vals = np.array(list(self.pair_profits.values()), dtype=np.float64)
                rows = np.concatenate([ij[:, 0], ij[:, 1]])
                cols = np.concatenate([ij[:, 1], ij[:, 0]])
                vals = np.concatenate([vals, vals])
                order = np.lexsort((cols, rows))
                rows, cols, vals = rows[order], cols[order], vals[order]
            else:
                rows = cols = np.empty(0, dtype=np.int64)
                vals = np.empty(0, dtype=np.float64)
            indptr = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
            self._csr = (indptr, np.ascontiguousarray(cols, dtype=np.int64),
                         np.ascontiguousarray(vals))
        return self._csr

    @property
    def core(self):
        """Compiled (or fallback) kernel bound to this instance."""
        if self._core is None:
            from ._backend import Core
            self._core = make_core(self, Core)
        return self._core

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.label == other.label
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.item_profits, other.item_profits)
                and np.array_equal(self.capacities, other.capacities)
                and self.pair_profits == other.pair_profits)

    __hash__ = None

    def __repr__(self):
        return (f"Instance(label={self.label!r}, n={self.n}, m={self.m}, "
                f"pairs={len(self.pair_profits)})")


def make_core(instance: Instance, core_cls):
    indptr, nbr, nval = instance.csr()
    return core_cls(np.ascontiguousarray(instance.weights),
                    np.ascontiguousarray(instance.item_profits),
                    indptr, nbr, nval,
                    np.ascontiguousarray(instance.capacities))


def derive_capacities(total_weight: float, m: int) -> list[float]:
    """Equal capacities sharing 80% of the total item weight."""
    if m < 1:
        raise ValueError("need at least one knapsack")
    if not total_weight > 0:
        raise ValueError("total weight must be positive")
    return [CAPACITY_FRACTION * total_weight / m] * m


def geometric_mean_pair_profit(w_i: float, w_j: float) -> float:
    if w_i <= 0 or w_j <= 0:
        raise ValueError("weights must be positive")
    return math.sqrt(w_i * w_j)


def correlated_profits(weights, correlation: str, rng: np.random.Generator) -> np.ndarray:
    """Integer item profits: ``w + 25`` (strong) or uniform on ``[max(1, w-25), w+25]`` (weak)."""
    weights = np.asarray(weights, dtype=np.int64)
    if correlation == "strong":
        return (weights + CORRELATION_SPREAD).astype(np.float64)
    if correlation == "weak":
        low = np.maximum(1, weights - CORRELATION_SPREAD)
        return rng.integers(low, weights + CORRELATION_SPREAD + 1).astype(np.float64)
    raise ValueError(f"correlation must be one of {CORRELATIONS}, got {correlation!r}")


def generate_instance(n: int, m: int, correlation: str = "weak", density: float = 0.25,
                      seed: int = 0, label: str | None = None) -> Instance:
    """Random QMKP instance with geometric-mean pair profits.

    Real values are rounded to 6 decimals so the instance survives a file round trip.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if not 0 < density <= 1:
        raise ValueError("density must be in (0, 1]")
    if correlation not in CORRELATIONS:
        raise ValueError(f"correlation must be one of {CORRELATIONS}, got {correlation!r}")
    rng = np.random.default_rng(seed)
    weights = rng.integers(WEIGHT_RANGE[0], WEIGHT_RANGE[1] + 1, size=n)
    profits = correlated_profits(weights, correlation, rng)

    total = n * (n - 1) // 2
    count = round(density * total)
    pairs = {}
    if count:
        rows, cols = np.triu_indices(n, 1)
        chosen = np.sort(rng.choice(total, size=count, replace=False))
        for i, j in zip(rows[chosen].tolist(), cols[chosen].tolist()):
            pairs[(i, j)] = round(geometric_mean_pair_profit(weights[i], weights[j]), 6)
    caps = [round(c, 6) for c in derive_capacities(int(weights.sum()), m)]
    return Instance(weights, profits, pairs, caps, label=label or f"{correlation}-{n}")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def format_instance(instance: Instance) -> str:
    lines = [f"{instance.label} {instance.n} {instance.m} {_fmt(100.0 * instance.density)}",
             " ".join(_fmt(c) for c in instance.capacities),
             " ".join(str(int(w)) for w in instance.weights),
             " ".join(_fmt(p) for p in instance.item_profits)]
    lines.extend(f"{i + 1} {j + 1} {_fmt(p)}" for (i, j), p in instance.pair_profits.items())
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, path: str | PathLike) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_instance(instance))


def _numbers(tokens, conv, what, lineno):
    try:
        return [conv(t) for t in tokens]
    except ValueError:
        raise ParseError(f"invalid {what}", lineno) from None


def parse_instance(text: str) -> Instance:
    lines = [(k + 1, ln.split()) for k, ln in enumerate(text.splitlines())]
    lines = [(k, toks) for k, toks in lines if toks]
    if len(lines) < 4:
        raise ParseError("truncated file: need header, capacities, weights and profits",
                         lines[-1][0] if lines else 1)

    (hl, header), (cl, caps), (wl, weights), (pl, profits) = lines[:4]
    if len(header) != 4:
        raise ParseError("malformed header, expected 'label n m density_percent'", hl)
    label = header[0]
    try:
        n, m = int(header[1]), int(header[2])
        density_percent = float(header[3])
    except ValueError:
        raise ParseError("malformed header, expected 'label n m density_percent'", hl) from None
    if n < 1 or m < 1:
        raise ParseError("n and m must be >= 1", hl)

    if len(caps) != m:
        raise ParseError(f"knapsack count mismatch: expected {m} capacities, got {len(caps)}", cl)
    caps = _numbers(caps, float, "capacity", cl)
    if len(weights) != n:
        raise ParseError(f"item count mismatch: expected {n} weights, got {len(weights)}", wl)
    weights = _numbers(weights, int, "weight", wl)
    if len(profits) != n:
        raise ParseError(f"item count mismatch: expected {n} profits, got {len(profits)}", pl)
    profits = _numbers(profits, float, "profit", pl)

    pairs: dict[tuple[int, int], float] = {}
    for lineno, toks in lines[4:]:
        if len(toks) != 3:
            raise ParseError("pair line must be 'i j p_ij'", lineno)
        try:
            i, j, p = int(toks[0]), int(toks[1]), float(toks[2])
        except ValueError:
            raise ParseError("pair line must be 'i j p_ij'", lineno) from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"pair index out of range 1..{n}", lineno)
        if i >= j:
            raise ParseError("pair indices must satisfy i < j", lineno)
        if (i - 1, j - 1) in pairs:
            raise ParseError(f"duplicate pair entry ({i}, {j})", lineno)
        if not p > 0:
            raise ParseError("pair profit must be positive", lineno)
        pairs[(i - 1, j - 1)] = p

    total = n * (n - 1) // 2
    if round(density_percent / 100.0 * total) != len(pairs):
        raise ParseError(f"density/pair-count mismatch: header says {density_percent}% of "
                         f"{total} pairs, file has {len(pairs)}", hl)
    try:
        return Instance(weights, profits, pairs, caps, label=label)
    except ValueError as exc:
        raise ParseError(str(exc), hl) from None


def read_instance(path: str | PathLike) -> Instance:
    with open(path, encoding="ascii") as fh:
        return parse_instance(fh.read())
