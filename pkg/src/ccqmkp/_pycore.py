"""Pure-Python kernels. Same API and random-number consumption as ``_ccore``.

State layout shared by both backends. A single solution is three arrays:

* ``slots``  int64[n]      knapsack of each item (0 = unassigned)
* ``ic``     int64[3, m+1] rows: load, item count, active pair count
* ``fc``     float64[2, m+1] rows: expected item profit, expected pair profit

Column 0 only tracks the number of unassigned items. Populations ("blocks") stack
these along a leading row axis.
"""
from __future__ import annotations

import math

import numpy as np

REBUILD_INTERVAL = 100_000
W, CNT, PAIRS = 0, 1, 2
MI, MP = 0, 1

_INV53 = 1.0 / 9007199254740992.0
_BLOCK = 1024


class Rng:
    """Buffered PCG64 stream with backend-independent transforms."""

    def __init__(self, seed=None):
        self._bitgen = np.random.PCG64(seed)
        self._buf: list[int] = []
        self._pos = 0

    def next_u64(self) -> int:
        if self._pos == len(self._buf):
            self._buf = self._bitgen.random_raw(_BLOCK).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV53

    def below(self, n: int) -> int:
        """Integer in [0, n) for 1 <= n < 2**32 (multiply-shift)."""
        return ((self.next_u64() >> 32) * n) >> 32


def selected_positions(n: int, rng):
    """Yield each index of ``range(n)`` independently with probability ``1/n``.

    Uses geometric gap sampling, so about one draw per selected position.
    Draws are interleaved with whatever the caller draws per position.
    """
    if n == 1:
        yield 0
        return
    log1mp = math.log1p(-1.0 / n)
    i = int(math.log(1.0 - rng.random()) / log1mp)
    while i < n:
        yield i
        i += 1 + int(math.log(1.0 - rng.random()) / log1mp)


def kt_slots(xs, ys, tx: int, ty: int, rng):
    """Knowledge-transfer crossover on raw slot vectors; returns two new lists.

    Removal first (x loses items sitting in y's skill knapsack, y loses items in x's),
    then each side copies its skill-knapsack items, read from the post-removal
    snapshot, into the other.
    """
    wx = list(xs)
    wy = list(ys)
    n = len(wx)
    for i in range(n):
        if wx[i] == ty and rng.random() < 0.5:
            wx[i] = 0
    for i in range(n):
        if wy[i] == tx and rng.random() < 0.5:
            wy[i] = 0
    sx = list(wx)
    sy = list(wy)
    for i in range(n):
        if sx[i] == tx and rng.random() < 0.5:
            wy[i] = tx
    for i in range(n):
        if sy[i] == ty and rng.random() < 0.5:
            wx[i] = ty
    return wx, wy


class Core:
    """Incremental evaluation and search loops for one instance."""

    def __init__(self, weights, profits, indptr, nbr, nval, capacities):
        self.n = int(len(weights))
        self.m = int(len(capacities))
        self._w = np.asarray(weights).tolist()
        self._p = np.asarray(profits, dtype=np.float64).tolist()
        self._ptr = np.asarray(indptr).tolist()
        self._nbr = np.asarray(nbr).tolist()
        self._nval = np.asarray(nval, dtype=np.float64).tolist()
        self._cap = np.asarray(capacities, dtype=np.float64).tolist()

    # -- single-state primitives ------------------------------------------------

    def rebuild(self, slots, ic, fc):
        ic[...] = 0
        fc[...] = 0.0
        w, p, ptr, nbr, nval = self._w, self._p, self._ptr, self._nbr, self._nval
        for i in range(self.n):
            s = slots[i]
            if s == 0:
                ic[CNT, 0] += 1
                continue
            ic[W, s] += w[i]
            ic[CNT, s] += 1
            fc[MI, s] += p[i]
        for i in range(self.n):
            s = slots[i]
            if s == 0:
                continue
            for e in range(ptr[i], ptr[i + 1]):
                j = nbr[e]
                if j > i and slots[j] == s:
                    fc[MP, s] += nval[e]
                    ic[PAIRS, s] += 1

    def move(self, slots, ic, fc, item, state):
        """Move ``item`` to ``state``; returns 1 if anything changed, else 0."""
        old = slots[item]
        if old == state:
            return 0
        ptr, nbr, nval = self._ptr, self._nbr, self._nval
        if old != 0:
            ic[W, old] -= self._w[item]
            ic[CNT, old] -= 1
            fc[MI, old] -= self._p[item]
            for e in range(ptr[item], ptr[item + 1]):
                if slots[nbr[e]] == old:
                    fc[MP, old] -= nval[e]
                    ic[PAIRS, old] -= 1
        else:
            ic[CNT, 0] -= 1
        slots[item] = state
        if state != 0:
            ic[W, state] += self._w[item]
            ic[CNT, state] += 1
            fc[MI, state] += self._p[item]
            for e in range(ptr[item], ptr[item + 1]):
                j = nbr[e]
                if slots[j] == state:
                    fc[MP, state] += nval[e]
                    ic[PAIRS, state] += 1
        else:
            ic[CNT, 0] += 1
        return 1

    def evaluate(self, ic, fc, factor, tvar):
        total = 0.0
        feasible = True
        cap = self._cap
        for k in range(1, self.m + 1):
            wk = ic[W, k]
            if wk < cap[k - 1]:
                total += (fc[MI, k] + fc[MP, k]) - factor * math.sqrt((ic[CNT, k] + ic[PAIRS, k]) * tvar)
            else:
                total += cap[k - 1] - wk
                feasible = False
        return float(total), feasible

    def task_values(self, ic, fc, factor, tvar, chebyshev, out):
        cap = self._cap
        for k in range(1, self.m + 1):
            wk = ic[W, k]
            if wk < cap[k - 1]:
                if chebyshev:
                    out[k - 1] = (fc[MI, k] + fc[MP, k]) - factor * math.sqrt((ic[CNT, k] + ic[PAIRS, k]) * tvar)
                else:
                    out[k - 1] = fc[MI, k] + fc[MP, k]
            else:
                out[k - 1] = cap[k - 1] - wk

    # -- variation ---------------------------------------------------------------

    def _offspring(self, slots, ic, fc, rng, log):
        """Random-resetting or swap mutation (fair coin) in place; returns moves made."""
        moves = 0
        n = self.n
        if rng.random() < 0.5:
            for i in selected_positions(n, rng):
                s = rng.below(self.m + 1)
                old = slots[i]
                if s != old:
                    if log is not None:
                        log.append((i, old))
                    moves += self.move(slots, ic, fc, i, s)
        elif n >= 2:
            i = rng.below(n)
            j = rng.below(n - 1)
            if j >= i:
                j += 1
            si = slots[i]
            sj = slots[j]
            if si != sj:
                if log is not None:
                    log.append((i, si))
                    log.append((j, sj))
                moves += self.move(slots, ic, fc, i, sj)
                moves += self.move(slots, ic, fc, j, si)
        return moves

    def _pref_mutate(self, slots, ic, fc, prefs, rng):
        moves = 0
        for i in selected_positions(self.n, rng):
            if slots[i] == prefs[i]:
                moves += self.move(slots, ic, fc, i, 0)
            else:
                moves += self.move(slots, ic, fc, i, prefs[i])
        return moves

    # -- (1+1) EA ----------------------------------------------------------------

    def one_plus_one(self, slots, ic, fc, moves, fitness, feasible, n_evals, rng, factor, tvar):
        """Run ``n_evals`` iterations in place; returns ``(fitness, feasible, moves)``."""
        log = []
        for _ in range(n_evals):
            if moves >= REBUILD_INTERVAL:
                self.rebuild(slots, ic, fc)
                moves = 0
                fitness, feasible = self.evaluate(ic, fc, factor, tvar)
            log.clear()
            moves += self._offspring(slots, ic, fc, rng, log)
            value, feas = self.evaluate(ic, fc, factor, tvar)
            if value >= fitness:
                fitness = value
                feasible = feas
            else:
                for i, old in reversed(log):
                    moves += self.move(slots, ic, fc, i, old)
        return fitness, feasible, moves

    # -- populations -------------------------------------------------------------

    @staticmethod
    def _copy_row(bslots, bic, bfc, bmoves, dst, src):
        bslots[dst] = bslots[src]
        bic[dst] = bic[src]
        bfc[dst] = bfc[src]
        bmoves[dst] = bmoves[src]

    def _fresh(self, bslots, bic, bfc, bmoves, row):
        if bmoves[row] >= REBUILD_INTERVAL:
            self.rebuild(bslots[row], bic[row], bfc[row])
            bmoves[row] = 0

    @staticmethod
    def _permute(arrays, order, count):
        idx = np.asarray(order[:count], dtype=np.int64)
        for a in arrays:
            a[:count] = a[idx]

    def offspring_row(self, bslots, bic, bfc, bmoves, fit, feas, dst, src, rng, factor, tvar):
        self._copy_row(bslots, bic, bfc, bmoves, dst, src)
        self._fresh(bslots, bic, bfc, bmoves, dst)
        bmoves[dst] += self._offspring(bslots[dst], bic[dst], bfc[dst], rng, None)
        fit[dst], feas[dst] = self.evaluate(bic[dst], bfc[dst], factor, tvar)

    def mu_lambda(self, bslots, bic, bfc, bmoves, fit, feas, birth, mu, lam, n_evals,
                  next_birth, rng, factor, tvar):
        """Plus-selection generations on rows ``0..mu-1``; returns the next birth id."""
        remaining = n_evals
        while remaining > 0:
            k = min(lam, remaining)
            for o in range(k):
                dst = mu + o
                src = rng.below(mu)
                self.offspring_row(bslots, bic, bfc, bmoves, fit, feas, dst, src, rng, factor, tvar)
                birth[dst] = next_birth
                next_birth += 1
            total = mu + k
            order = sorted(range(total), key=lambda r: (-fit[r], birth[r]))
            self._permute((bslots, bic, bfc, bmoves, fit, feas, birth), order, mu)
            remaining -= k
        return next_birth

    # -- multi-factorial local search -------------------------------------------

    def pref_mutate_row(self, bslots, bic, bfc, bmoves, dst, src, prefs, rng):
        self._copy_row(bslots, bic, bfc, bmoves, dst, src)
        self._fresh(bslots, bic, bfc, bmoves, dst)
        bmoves[dst] += self._pref_mutate(bslots[dst], bic[dst], bfc[dst], prefs, rng)

    def eval_rows(self, bic, bfc, fit, feas, g, start, stop, factor, tvar, chebyshev):
        for r in range(start, stop):
            fit[r], feas[r] = self.evaluate(bic[r], bfc[r], factor, tvar)
            self.task_values(bic[r], bfc[r], factor, tvar, chebyshev, g[r])

    def kt_slots(self, xs, ys, tx, ty, rng):
        return kt_slots(np.asarray(xs).tolist(), np.asarray(ys).tolist(), int(tx), int(ty), rng)

    def metrics(self, g, count, ranks, skill, scalar):
        m = g.shape[1]
        for k in range(m):
            col = g[:count, k].tolist()
            order = sorted(range(count), key=lambda r: (-col[r], r))
            for pos, r in enumerate(order):
                ranks[r, k] = pos + 1
        for r in range(count):
            best = 0
            for k in range(1, m):
                if ranks[r, k] < ranks[r, best]:
                    best = k
            skill[r] = best + 1
            scalar[r] = 1.0 / ranks[r, best]

    def mfo(self, bslots, bic, bfc, bmoves, fit, feas, birth, g, ranks, skill, scalar, prefs,
            npop, mu, lam, pr_kt, chebyshev, n_evals, next_birth, rng, factor, tvar):
        """MFO generations; rows ``0..npop-1`` must carry fitness, task values and skills.

        Returns ``(npop, next_birth)``.
        """
        remaining = n_evals
        while remaining > 0:
            k = min(lam, remaining)
            mixed = any(skill[r] != skill[0] for r in range(1, npop))
            for o in range(k):
                dst = npop + o
                if rng.random() < pr_kt and mixed:
                    a = rng.below(npop)
                    others = [r for r in range(npop) if skill[r] != skill[a]]
                    b = others[rng.below(len(others))]
                    wx, _ = kt_slots(bslots[a].tolist(), bslots[b].tolist(),
                                     int(skill[a]), int(skill[b]), rng)
                    self._copy_row(bslots, bic, bfc, bmoves, dst, a)
                    self._fresh(bslots, bic, bfc, bmoves, dst)
                    s, ic, fc = bslots[dst], bic[dst], bfc[dst]
                    moved = 0
                    for i in range(self.n):
                        moved += self.move(s, ic, fc, i, wx[i])
                    bmoves[dst] += moved
                else:
                    a = rng.below(npop)
                    self.pref_mutate_row(bslots, bic, bfc, bmoves, dst, a, prefs, rng)
                self.eval_rows(bic, bfc, fit, feas, g, dst, dst + 1, factor, tvar, chebyshev)
                birth[dst] = next_birth
                next_birth += 1
            total = npop + k
            self.metrics(g, total, ranks, skill, scalar)
            order = sorted(range(total), key=lambda r: (-scalar[r], -fit[r], birth[r]))
            npop = min(mu, total)
            self._permute((bslots, bic, bfc, bmoves, fit, feas, birth, g, ranks, skill, scalar),
                          order, npop)
            remaining -= k
        return npop, next_birth
