# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Mirrors ``_pycore`` statement for statement.

Both backends draw random numbers in the same order and evaluate floating-point
expressions in the same order, so a seeded run gives bit-identical results on
either backend (build without -ffast-math and with -ffp-contract=off).
"""
import numpy as np

from libc.math cimport sqrt, log, log1p
from libc.stdint cimport int64_t, uint64_t, uint8_t
from libc.string cimport memcpy

REBUILD_INTERVAL = 100000
cdef int64_t _REBUILD = 100000
cdef double _INV53 = 1.0 / 9007199254740992.0
cdef Py_ssize_t _BLOCK = 1024


cdef class Rng:
    """Buffered PCG64 stream with backend-independent transforms."""
    cdef object _bitgen
    cdef uint64_t[::1] _buf
    cdef Py_ssize_t _pos
    cdef Py_ssize_t _len

    def __init__(self, seed=None):
        self._bitgen = np.random.PCG64(seed)
        self._pos = 0
        self._len = 0

    cdef inline uint64_t _next(self):
        cdef uint64_t u
        if self._pos == self._len:
            self._buf = self._bitgen.random_raw(_BLOCK)
            self._len = self._buf.shape[0]
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u

    cdef inline double _random(self):
        return <double>(self._next() >> 11) * _INV53

    cdef inline int64_t _below(self, int64_t n):
        return <int64_t>(((self._next() >> 32) * <uint64_t>n) >> 32)

    def next_u64(self):
        return self._next()

    def random(self):
        return self._random()

    def below(self, n):
        return self._below(n)


cdef inline int64_t _skip(Rng rng, double log1mp):
    return <int64_t>(log(1.0 - rng._random()) / log1mp)


cdef inline bint _fit_before(const double* fit, const int64_t* birth, Py_ssize_t a, Py_ssize_t b):
    return fit[a] > fit[b] or (fit[a] == fit[b] and birth[a] < birth[b])


cdef inline bint _mfo_before(const double* scalar, const double* fit, const int64_t* birth,
                             Py_ssize_t a, Py_ssize_t b):
    if scalar[a] != scalar[b]:
        return scalar[a] > scalar[b]
    if fit[a] != fit[b]:
        return fit[a] > fit[b]
    return birth[a] < birth[b]


cdef class Core:
    """Incremental evaluation and search loops for one instance."""
    cdef readonly Py_ssize_t n
    cdef readonly Py_ssize_t m
    cdef Py_ssize_t m1
    cdef int64_t[::1] _wv
    cdef int64_t[::1] _ptrv
    cdef int64_t[::1] _nbrv
    cdef double[::1] _pv
    cdef double[::1] _nvalv
    cdef double[::1] _capv
    cdef int64_t* _w
    cdef int64_t* _ptr
    cdef int64_t* _nbr
    cdef double* _p
    cdef double* _nval
    cdef double* _cap
    # scratch for undo logs and crossover
    cdef int64_t[::1] _logv
    cdef int64_t[::1] _wxv
    cdef int64_t[::1] _wyv
    cdef int64_t[::1] _sxv
    cdef int64_t[::1] _syv

    def __init__(self, weights, profits, indptr, nbr, nval, capacities):
        self.n = len(weights)
        self.m = len(capacities)
        self.m1 = self.m + 1
        self._wv = np.array(weights, dtype=np.int64)
        self._pv = np.array(profits, dtype=np.float64)
        self._ptrv = np.array(indptr, dtype=np.int64)
        nbr = np.array(nbr, dtype=np.int64)
        nval = np.array(nval, dtype=np.float64)
        if nbr.size == 0:
            nbr = np.zeros(1, dtype=np.int64)
            nval = np.zeros(1, dtype=np.float64)
        self._nbrv = nbr
        self._nvalv = nval
        self._capv = np.array(capacities, dtype=np.float64)
        self._w = &self._wv[0]
        self._p = &self._pv[0]
        self._ptr = &self._ptrv[0]
        self._nbr = &self._nbrv[0]
        self._nval = &self._nvalv[0]
        self._cap = &self._capv[0]
        self._logv = np.zeros(4 * self.n + 4, dtype=np.int64)
        self._wxv = np.zeros(self.n, dtype=np.int64)
        self._wyv = np.zeros(self.n, dtype=np.int64)
        self._sxv = np.zeros(self.n, dtype=np.int64)
        self._syv = np.zeros(self.n, dtype=np.int64)

    # -- single-state primitives ------------------------------------------------

    cdef void _rebuild(self, const int64_t* s, int64_t* ic, double* fc) noexcept:
        cdef Py_ssize_t i, e, j, m1 = self.m1
        cdef int64_t st
        for i in range(3 * m1):
            ic[i] = 0
        for i in range(2 * m1):
            fc[i] = 0.0
        for i in range(self.n):
            st = s[i]
            if st == 0:
                ic[m1] += 1
                continue
            ic[st] += self._w[i]
            ic[m1 + st] += 1
            fc[st] += self._p[i]
        for i in range(self.n):
            st = s[i]
            if st == 0:
                continue
            for e in range(self._ptr[i], self._ptr[i + 1]):
                j = self._nbr[e]
                if j > i and s[j] == st:
                    fc[m1 + st] += self._nval[e]
                    ic[2 * m1 + st] += 1

    cdef int _move(self, int64_t* s, int64_t* ic, double* fc, Py_ssize_t item, int64_t state) noexcept:
        cdef int64_t old = s[item]
        cdef Py_ssize_t e, m1 = self.m1
        if old == state:
            return 0
        if old != 0:
            ic[old] -= self._w[item]
            ic[m1 + old] -= 1
            fc[old] -= self._p[item]
            for e in range(self._ptr[item], self._ptr[item + 1]):
                if s[self._nbr[e]] == old:
                    fc[m1 + old] -= self._nval[e]
                    ic[2 * m1 + old] -= 1
        else:
            ic[m1] -= 1
        s[item] = state
        if state != 0:
            ic[state] += self._w[item]
            ic[m1 + state] += 1
            fc[state] += self._p[item]
            for e in range(self._ptr[item], self._ptr[item + 1]):
                if s[self._nbr[e]] == state:
                    fc[m1 + state] += self._nval[e]
                    ic[2 * m1 + state] += 1
        else:
            ic[m1] += 1
        return 1

    cdef double _evaluate(self, const int64_t* ic, const double* fc, double factor, double tvar,
                          bint* feasible) noexcept:
        cdef double total = 0.0
        cdef Py_ssize_t k, m1 = self.m1
        cdef int64_t wk
        feasible[0] = True
        for k in range(1, self.m + 1):
            wk = ic[k]
            if <double>wk < self._cap[k - 1]:
                total += (fc[k] + fc[m1 + k]) - factor * sqrt(<double>(ic[m1 + k] + ic[2 * m1 + k]) * tvar)
            else:
                total += self._cap[k - 1] - <double>wk
                feasible[0] = False
        return total

    cdef void _task_values(self, const int64_t* ic, const double* fc, double factor, double tvar,
                           bint chebyshev, double* out) noexcept:
        cdef Py_ssize_t k, m1 = self.m1
        cdef int64_t wk
        for k in range(1, self.m + 1):
            wk = ic[k]
            if <double>wk < self._cap[k - 1]:
                if chebyshev:
                    out[k - 1] = (fc[k] + fc[m1 + k]) - factor * sqrt(<double>(ic[m1 + k] + ic[2 * m1 + k]) * tvar)
                else:
                    out[k - 1] = fc[k] + fc[m1 + k]
            else:
                out[k - 1] = self._cap[k - 1] - <double>wk

    def rebuild(self, int64_t[::1] slots, int64_t[:, ::1] ic, double[:, ::1] fc):
        self._rebuild(&slots[0], &ic[0, 0], &fc[0, 0])

    def move(self, int64_t[::1] slots, int64_t[:, ::1] ic, double[:, ::1] fc,
             Py_ssize_t item, int64_t state):
        return self._move(&slots[0], &ic[0, 0], &fc[0, 0], item, state)

    def evaluate(self, int64_t[:, ::1] ic, double[:, ::1] fc, double factor, double tvar):
        cdef bint feas
        cdef double v = self._evaluate(&ic[0, 0], &fc[0, 0], factor, tvar, &feas)
        return v, bool(feas)

    def task_values(self, int64_t[:, ::1] ic, double[:, ::1] fc, double factor, double tvar,
                    bint chebyshev, double[::1] out):
        self._task_values(&ic[0, 0], &fc[0, 0], factor, tvar, chebyshev, &out[0])

    # -- variation ---------------------------------------------------------------

    cdef int64_t _offspring(self, int64_t* s, int64_t* ic, double* fc, Rng rng,
                            int64_t* log_, Py_ssize_t* nlog):
        cdef int64_t moves = 0, st, old, si, sj
        cdef Py_ssize_t n = self.n, i, j
        cdef double log1mp = 0.0
        if rng._random() < 0.5:
            if n == 1:
                i = 0
            else:
                log1mp = log1p(-1.0 / <double>n)
                i = _skip(rng, log1mp)
            while i < n:
                st = rng._below(self.m + 1)
                old = s[i]
                if st != old:
                    if log_ != NULL:
                        log_[2 * nlog[0]] = i
                        log_[2 * nlog[0] + 1] = old
                        nlog[0] += 1
                    moves += self._move(s, ic, fc, i, st)
                if n == 1:
                    break
                i += 1 + _skip(rng, log1mp)
        elif n >= 2:
            i = rng._below(n)
            j = rng._below(n - 1)
            if j >= i:
                j += 1
            si = s[i]
            sj = s[j]
            if si != sj:
                if log_ != NULL:
                    log_[2 * nlog[0]] = i
                    log_[2 * nlog[0] + 1] = si
                    log_[2 * nlog[0] + 2] = j
                    log_[2 * nlog[0] + 3] = sj
                    nlog[0] += 2
                moves += self._move(s, ic, fc, i, sj)
                moves += self._move(s, ic, fc, j, si)
        return moves

    cdef int64_t _pref_mutate(self, int64_t* s, int64_t* ic, double* fc, const int64_t* prefs, Rng rng):
        cdef int64_t moves = 0
        cdef Py_ssize_t n = self.n, i
        cdef double log1mp = 0.0
        if n == 1:
            i = 0
        else:
            log1mp = log1p(-1.0 / <double>n)
            i = _skip(rng, log1mp)
        while i < n:
            if s[i] == prefs[i]:
                moves += self._move(s, ic, fc, i, 0)
            else:
                moves += self._move(s, ic, fc, i, prefs[i])
            if n == 1:
                break
            i += 1 + _skip(rng, log1mp)
        return moves

    # -- (1+1) EA ----------------------------------------------------------------

    def one_plus_one(self, int64_t[::1] slots, int64_t[:, ::1] ic, double[:, ::1] fc,
                     int64_t moves, double fitness, bint feasible, int64_t n_evals,
                     Rng rng, double factor, double tvar):
        """Run ``n_evals`` iterations in place; returns ``(fitness, feasible, moves)``."""
        cdef int64_t* s = &slots[0]
        cdef int64_t* icp = &ic[0, 0]
        cdef double* fcp = &fc[0, 0]
        cdef int64_t* log_ = &self._logv[0]
        cdef Py_ssize_t nlog, t
        cdef int64_t it
        cdef double value
        cdef bint feas
        for it in range(n_evals):
            if moves >= _REBUILD:
                self._rebuild(s, icp, fcp)
                moves = 0
                fitness = self._evaluate(icp, fcp, factor, tvar, &feasible)
            nlog = 0
            moves += self._offspring(s, icp, fcp, rng, log_, &nlog)
            value = self._evaluate(icp, fcp, factor, tvar, &feas)
            if value >= fitness:
                fitness = value
                feasible = feas
            else:
                for t in range(nlog - 1, -1, -1):
                    moves += self._move(s, icp, fcp, log_[2 * t], log_[2 * t + 1])
        return fitness, bool(feasible), moves

    # -- populations -------------------------------------------------------------

    cdef inline void _copy_row(self, int64_t* bs, int64_t* bic, double* bfc, int64_t* bmoves,
                               Py_ssize_t dst, Py_ssize_t src) noexcept:
        cdef Py_ssize_t n = self.n, c = 3 * self.m1, f = 2 * self.m1
        memcpy(bs + dst * n, bs + src * n, n * sizeof(int64_t))
        memcpy(bic + dst * c, bic + src * c, c * sizeof(int64_t))
        memcpy(bfc + dst * f, bfc + src * f, f * sizeof(double))
        bmoves[dst] = bmoves[src]

    cdef inline void _fresh(self, int64_t* bs, int64_t* bic, double* bfc, int64_t* bmoves,
                            Py_ssize_t row) noexcept:
        if bmoves[row] >= _REBUILD:
            self._rebuild(bs + row * self.n, bic + row * 3 * self.m1, bfc + row * 2 * self.m1)
            bmoves[row] = 0

    cdef void _offspring_row(self, int64_t* bs, int64_t* bic, double* bfc, int64_t* bmoves,
                             double* fit, uint8_t* feas, Py_ssize_t dst, Py_ssize_t src, Rng rng,
                             double factor, double tvar):
        cdef bint f
        cdef int64_t* icp = bic + dst * 3 * self.m1
        cdef double* fcp = bfc + dst * 2 * self.m1
        self._copy_row(bs, bic, bfc, bmoves, dst, src)
        self._fresh(bs, bic, bfc, bmoves, dst)
        bmoves[dst] += self._offspring(bs + dst * self.n, icp, fcp, rng, NULL, NULL)
        fit[dst] = self._evaluate(icp, fcp, factor, tvar, &f)
        feas[dst] = f

    def offspring_row(self, int64_t[:, ::1] bslots, int64_t[:, :, ::1] bic, double[:, :, ::1] bfc,
                      int64_t[::1] bmoves, double[::1] fit, uint8_t[::1] feas,
                      Py_ssize_t dst, Py_ssize_t src, Rng rng, double factor, double tvar):
        self._offspring_row(&bslots[0, 0], &bic[0, 0, 0], &bfc[0, 0, 0], &bmoves[0],
                            &fit[0], &feas[0], dst, src, rng, factor, tvar)

    cdef void _permute_rows(self, int64_t* bs, int64_t* bic, double* bfc, int64_t* bmoves,
                            const int64_t* order, Py_ssize_t count,
                            int64_t* ts, int64_t* tic, double* tfc, int64_t* tmoves) noexcept:
        """Gather rows ``order[:count]`` into ``0..count-1`` via the scratch block."""
        cdef Py_ssize_t r
        for r in range(count):
            self._copy_row_into(ts, tic, tfc, tmoves, r, bs, bic, bfc, bmoves, order[r])
        for r in range(count):
            self._copy_row_into(bs, bic, bfc, bmoves, r, ts, tic, tfc, tmoves, r)

    cdef inline void _copy_row_into(self, int64_t* ds, int64_t* dic, double* dfc, int64_t* dmoves,
                                    Py_ssize_t dst, const int64_t* ss, const int64_t* sic,
                                    const double* sfc, const int64_t* smoves, Py_ssize_t src) noexcept:
        cdef Py_ssize_t n = self.n, c = 3 * self.m1, f = 2 * self.m1
        memcpy(ds + dst * n, ss + src * n, n * sizeof(int64_t))
        memcpy(dic + dst * c, sic + src * c, c * sizeof(int64_t))
        memcpy(dfc + dst * f, sfc + src * f, f * sizeof(double))
        dmoves[dst] = smoves[src]

    def mu_lambda(self, int64_t[:, ::1] bslots, int64_t[:, :, ::1] bic, double[:, :, ::1] bfc,
                  int64_t[::1] bmoves, double[::1] fit, uint8_t[::1] feas, int64_t[::1] birth,
                  Py_ssize_t mu, Py_ssize_t lam, int64_t n_evals, int64_t next_birth,
                  Rng rng, double factor, double tvar):
        """Plus-selection generations on rows ``0..mu-1``; returns the next birth id."""
        cdef int64_t* bs = &bslots[0, 0]
        cdef int64_t* icp = &bic[0, 0, 0]
        cdef double* fcp = &bfc[0, 0, 0]
        cdef int64_t* mv = &bmoves[0]
        cdef double* fp = &fit[0]
        cdef uint8_t* fe = &feas[0]
        cdef int64_t* bp = &birth[0]
        cdef int64_t remaining = n_evals
        cdef Py_ssize_t k, o, dst, src, total, a, b, r
        cdef int64_t tmp
        cdef int64_t[::1] orderv = np.zeros(mu + lam, dtype=np.int64)
        cdef int64_t[:, ::1] ts = np.zeros((mu, self.n), dtype=np.int64)
        cdef int64_t[:, :, ::1] tic = np.zeros((mu, 3, self.m1), dtype=np.int64)
        cdef double[:, :, ::1] tfc = np.zeros((mu, 2, self.m1), dtype=np.float64)
        cdef int64_t[::1] tmoves = np.zeros(mu, dtype=np.int64)
        cdef double[::1] tfit = np.zeros(mu, dtype=np.float64)
        cdef uint8_t[::1] tfeas = np.zeros(mu, dtype=np.uint8)
        cdef int64_t[::1] tbirth = np.zeros(mu, dtype=np.int64)
        cdef int64_t* order = &orderv[0]
        while remaining > 0:
            k = lam if lam < remaining else remaining
            for o in range(k):
                dst = mu + o
                src = rng._below(mu)
                self._offspring_row(bs, icp, fcp, mv, fp, fe, dst, src, rng, factor, tvar)
                bp[dst] = next_birth
                next_birth += 1
            total = mu + k
            for r in range(total):
                order[r] = r
            for a in range(1, total):
                tmp = order[a]
                b = a - 1
                while b >= 0 and _fit_before(fp, bp, tmp, order[b]):
                    order[b + 1] = order[b]
                    b -= 1
                order[b + 1] = tmp
            for r in range(mu):
                tfit[r] = fp[order[r]]
                tfeas[r] = fe[order[r]]
                tbirth[r] = bp[order[r]]
            self._permute_rows(bs, icp, fcp, mv, order, mu,
                               &ts[0, 0], &tic[0, 0, 0], &tfc[0, 0, 0], &tmoves[0])
            for r in range(mu):
                fp[r] = tfit[r]
                fe[r] = tfeas[r]
                bp[r] = tbirth[r]
            remaining -= k
        return next_birth

    # -- multi-factorial local search -------------------------------------------

    def pref_mutate_row(self, int64_t[:, ::1] bslots, int64_t[:, :, ::1] bic, double[:, :, ::1] bfc,
                        int64_t[::1] bmoves, Py_ssize_t dst, Py_ssize_t src, int64_t[::1] prefs,
                        Rng rng):
        cdef int64_t* bs = &bslots[0, 0]
        cdef int64_t* icp = &bic[0, 0, 0]
        cdef double* fcp = &bfc[0, 0, 0]
        self._copy_row(bs, icp, fcp, &bmoves[0], dst, src)
        self._fresh(bs, icp, fcp, &bmoves[0], dst)
        bmoves[dst] += self._pref_mutate(bs + dst * self.n, icp + dst * 3 * self.m1,
                                         fcp + dst * 2 * self.m1, &prefs[0], rng)

    cdef void _eval_row(self, const int64_t* icp, const double* fcp, double* fit, uint8_t* feas,
                        double* g, Py_ssize_t r, double factor, double tvar, bint chebyshev) noexcept:
        cdef bint f
        cdef const int64_t* ic = icp + r * 3 * self.m1
        cdef const double* fc = fcp + r * 2 * self.m1
        fit[r] = self._evaluate(ic, fc, factor, tvar, &f)
        feas[r] = f
        self._task_values(ic, fc, factor, tvar, chebyshev, g + r * self.m)

    def eval_rows(self, int64_t[:, :, ::1] bic, double[:, :, ::1] bfc, double[::1] fit,
                  uint8_t[::1] feas, double[:, ::1] g, Py_ssize_t start, Py_ssize_t stop,
                  double factor, double tvar, bint chebyshev):
        cdef Py_ssize_t r
        for r in range(start, stop):
            self._eval_row(&bic[0, 0, 0], &bfc[0, 0, 0], &fit[0], &feas[0], &g[0, 0], r,
                           factor, tvar, chebyshev)

    cdef void _metrics(self, const double* g, Py_ssize_t count, int64_t* ranks, int64_t* skill,
                       double* scalar, int64_t* order) noexcept:
        cdef Py_ssize_t m = self.m, k, a, b, r, best
        cdef int64_t tmp
        for k in range(m):
            for r in range(count):
                order[r] = r
            for a in range(1, count):
                tmp = order[a]
                b = a - 1
                while b >= 0 and (g[tmp * m + k] > g[order[b] * m + k] or
                                  (g[tmp * m + k] == g[order[b] * m + k] and tmp < order[b])):
                    order[b + 1] = order[b]
                    b -= 1
                order[b + 1] = tmp
            for r in range(count):
                ranks[order[r] * m + k] = r + 1
        for r in range(count):
            best = 0
            for k in range(1, m):
                if ranks[r * m + k] < ranks[r * m + best]:
                    best = k
            skill[r] = best + 1
            scalar[r] = 1.0 / <double>ranks[r * m + best]

    def metrics(self, double[:, ::1] g, Py_ssize_t count, int64_t[:, ::1] ranks, int64_t[::1] skill,
                double[::1] scalar):
        cdef int64_t[::1] order = np.zeros(max(count, 1), dtype=np.int64)
        self._metrics(&g[0, 0], count, &ranks[0, 0], &skill[0], &scalar[0], &order[0])

    cdef void _kt(self, const int64_t* xs, const int64_t* ys, int64_t tx, int64_t ty, Rng rng):
        """Crossover into the ``_wxv``/``_wyv`` scratch vectors (see ``_pycore.kt_slots``)."""
        cdef Py_ssize_t n = self.n, i
        cdef int64_t* wx = &self._wxv[0]
        cdef int64_t* wy = &self._wyv[0]
        cdef int64_t* sx = &self._sxv[0]
        cdef int64_t* sy = &self._syv[0]
        for i in range(n):
            wx[i] = xs[i]
            wy[i] = ys[i]
        for i in range(n):
            if wx[i] == ty and rng._random() < 0.5:
                wx[i] = 0
        for i in range(n):
            if wy[i] == tx and rng._random() < 0.5:
                wy[i] = 0
        for i in range(n):
            sx[i] = wx[i]
            sy[i] = wy[i]
        for i in range(n):
            if sx[i] == tx and rng._random() < 0.5:
                wy[i] = tx
        for i in range(n):
            if sy[i] == ty and rng._random() < 0.5:
                wx[i] = ty

    def kt_slots(self, int64_t[::1] xs, int64_t[::1] ys, int64_t tx, int64_t ty, Rng rng):
        self._kt(&xs[0], &ys[0], tx, ty, rng)
        return np.asarray(self._wxv).tolist(), np.asarray(self._wyv).tolist()

    def mfo(self, int64_t[:, ::1] bslots, int64_t[:, :, ::1] bic, double[:, :, ::1] bfc,
            int64_t[::1] bmoves, double[::1] fit, uint8_t[::1] feas, int64_t[::1] birth,
            double[:, ::1] g, int64_t[:, ::1] ranks, int64_t[::1] skill, double[::1] scalar,
            int64_t[::1] prefs, Py_ssize_t npop, Py_ssize_t mu, Py_ssize_t lam, double pr_kt,
            bint chebyshev, int64_t n_evals, int64_t next_birth, Rng rng, double factor, double tvar):
        """MFO generations; rows ``0..npop-1`` must carry fitness, task values and skills.

        Returns ``(npop, next_birth)``.
        """
        cdef Py_ssize_t n = self.n, m = self.m, m1 = self.m1
        cdef Py_ssize_t cap_rows = bslots.shape[0]
        cdef int64_t* bs = &bslots[0, 0]
        cdef int64_t* icp = &bic[0, 0, 0]
        cdef double* fcp = &bfc[0, 0, 0]
        cdef int64_t* mv = &bmoves[0]
        cdef double* fp = &fit[0]
        cdef uint8_t* fe = &feas[0]
        cdef int64_t* bp = &birth[0]
        cdef double* gp = &g[0, 0]
        cdef int64_t* rp = &ranks[0, 0]
        cdef int64_t* sp = &skill[0]
        cdef double* scp = &scalar[0]
        cdef int64_t* pp = &prefs[0]
        cdef int64_t remaining = n_evals
        cdef Py_ssize_t k, o, dst, a, b, r, i, cnt, pick, total, keep
        cdef int64_t tmp, moved
        cdef bint mixed
        cdef int64_t[::1] orderv = np.zeros(cap_rows, dtype=np.int64)
        cdef int64_t[::1] sortv = np.zeros(cap_rows, dtype=np.int64)
        cdef int64_t[:, ::1] ts = np.zeros((cap_rows, n), dtype=np.int64)
        cdef int64_t[:, :, ::1] tic = np.zeros((cap_rows, 3, m1), dtype=np.int64)
        cdef double[:, :, ::1] tfc = np.zeros((cap_rows, 2, m1), dtype=np.float64)
        cdef int64_t[::1] tmoves = np.zeros(cap_rows, dtype=np.int64)
        cdef double[::1] tfit = np.zeros(cap_rows, dtype=np.float64)
        cdef uint8_t[::1] tfeas = np.zeros(cap_rows, dtype=np.uint8)
        cdef int64_t[::1] tbirth = np.zeros(cap_rows, dtype=np.int64)
        cdef double[:, ::1] tg = np.zeros((cap_rows, m), dtype=np.float64)
        cdef int64_t[:, ::1] tranks = np.zeros((cap_rows, m), dtype=np.int64)
        cdef int64_t[::1] tskill = np.zeros(cap_rows, dtype=np.int64)
        cdef double[::1] tscalar = np.zeros(cap_rows, dtype=np.float64)
        cdef int64_t* order = &orderv[0]
        cdef int64_t* wx = &self._wxv[0]
        cdef int64_t* drow
        while remaining > 0:
            k = lam if lam < remaining else remaining
            mixed = False
            for r in range(1, npop):
                if sp[r] != sp[0]:
                    mixed = True
                    break
            for o in range(k):
                dst = npop + o
                if rng._random() < pr_kt and mixed:
                    a = rng._below(npop)
                    cnt = 0
                    for r in range(npop):
                        if sp[r] != sp[a]:
                            cnt += 1
                    pick = rng._below(cnt)
                    b = -1
                    for r in range(npop):
                        if sp[r] != sp[a]:
                            if pick == 0:
                                b = r
                                break
                            pick -= 1
                    self._kt(bs + a * n, bs + b * n, sp[a], sp[b], rng)
                    self._copy_row(bs, icp, fcp, mv, dst, a)
                    self._fresh(bs, icp, fcp, mv, dst)
                    drow = bs + dst * n
                    moved = 0
                    for i in range(n):
                        moved += self._move(drow, icp + dst * 3 * m1, fcp + dst * 2 * m1, i, wx[i])
                    mv[dst] += moved
                else:
                    a = rng._below(npop)
                    self._copy_row(bs, icp, fcp, mv, dst, a)
                    self._fresh(bs, icp, fcp, mv, dst)
                    mv[dst] += self._pref_mutate(bs + dst * n, icp + dst * 3 * m1,
                                                 fcp + dst * 2 * m1, pp, rng)
                self._eval_row(icp, fcp, fp, fe, gp, dst, factor, tvar, chebyshev)
                bp[dst] = next_birth
                next_birth += 1
            total = npop + k
            self._metrics(gp, total, rp, sp, scp, &sortv[0])
            for r in range(total):
                order[r] = r
            for a in range(1, total):
                tmp = order[a]
                b = a - 1
                while b >= 0 and _mfo_before(scp, fp, bp, tmp, order[b]):
                    order[b + 1] = order[b]
                    b -= 1
                order[b + 1] = tmp
            keep = mu if mu < total else total
            for r in range(keep):
                tfit[r] = fp[order[r]]
                tfeas[r] = fe[order[r]]
                tbirth[r] = bp[order[r]]
                tskill[r] = sp[order[r]]
                tscalar[r] = scp[order[r]]
                for i in range(m):
                    tg[r, i] = gp[order[r] * m + i]
                    tranks[r, i] = rp[order[r] * m + i]
            self._permute_rows(bs, icp, fcp, mv, order, keep,
                               &ts[0, 0], &tic[0, 0, 0], &tfc[0, 0, 0], &tmoves[0])
            for r in range(keep):
                fp[r] = tfit[r]
                fe[r] = tfeas[r]
                bp[r] = tbirth[r]
                sp[r] = tskill[r]
                scp[r] = tscalar[r]
                for i in range(m):
                    gp[r * m + i] = tg[r, i]
                    rp[r * m + i] = tranks[r, i]
            npop = keep
            remaining -= k
        return npop, next_birth
