# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled serial-SGS decoding kernels.

Mirrors :mod:`rcpsp_rar._fallback` exactly; see that module for the
algorithmic description.  Activity ids index every per-activity array
directly (slot 0 unused).
"""
import numpy as np

from libc.string cimport memcpy, memset


cdef class Decoder:
    cdef readonly int n, r, horizon
    cdef int[::1] dur, dem, cap, pptr, pidx, busy
    cdef int[::1] usage, base_usage, finish, base_start, seq
    backend = "cython"

    def __init__(self, durations, demands, capacities, pred_ptr, pred_idx, int horizon):
        self.n = len(durations) - 1
        self.r = len(capacities)
        self.horizon = horizon
        self.dur = np.ascontiguousarray(durations, dtype=np.int32)
        self.dem = np.ascontiguousarray(demands, dtype=np.int32)
        self.cap = np.ascontiguousarray(capacities, dtype=np.int32)
        self.pptr = np.ascontiguousarray(pred_ptr, dtype=np.int32)
        self.pidx = np.ascontiguousarray(pred_idx, dtype=np.int32) if len(pred_idx) else np.zeros(1, dtype=np.int32)
        busy = np.zeros(self.n + 1, dtype=np.int32)
        for j in range(self.n + 1):
            if self.dur[j] > 0 and any(self.dem[j * self.r + k] > 0 for k in range(self.r)):
                busy[j] = 1
        self.busy = busy
        size = max(1, (horizon + 1) * max(1, self.r))
        self.usage = np.zeros(size, dtype=np.int32)
        self.base_usage = np.zeros(size, dtype=np.int32)
        self.finish = np.zeros(self.n + 1, dtype=np.int32)
        self.base_start = np.zeros(self.n + 1, dtype=np.int32)
        self.seq = np.zeros(self.n + 2, dtype=np.int32)

    # ------------------------------------------------------------ primitives

    cdef inline int _est(self, int j) noexcept nogil:
        cdef int p, f, est = 0
        for p in range(self.pptr[j], self.pptr[j + 1]):
            f = self.finish[self.pidx[p]]
            if f > est:
                est = f
        return est

    cdef inline int _earliest(self, int[::1] usage, int j, int t, int limit) noexcept nogil:
        # earliest start >= t with j fitting; -1 if it would finish after limit
        cdef int d = self.dur[j], r = self.r, jb = j * r, tau, k, base
        cdef bint clash
        if not self.busy[j]:
            return t if t + d <= limit else -1
        while True:
            if t + d > limit:
                return -1
            tau = t + d - 1
            clash = False
            while tau >= t:
                base = tau * r
                for k in range(r):
                    if usage[base + k] + self.dem[jb + k] > self.cap[k]:
                        clash = True
                        break
                if clash:
                    break
                tau -= 1
            if not clash:
                return t
            t = tau + 1

    cdef inline void _place(self, int[::1] usage, int j, int s, int sign) noexcept nogil:
        cdef int r = self.r, jb = j * r, tau, k, base
        if not self.busy[j]:
            return
        for tau in range(s, s + self.dur[j]):
            base = tau * r
            for k in range(r):
                usage[base + k] += sign * self.dem[jb + k]

    cdef int _decode_run(self, int[::1] usage, int[::1] seq, int lo, int hi, int mk, int limit) noexcept nogil:
        # decode seq[lo:hi] on top of usage; returns makespan or -1 once limit is exceeded
        cdef int i, j, s, f
        for i in range(lo, hi):
            j = seq[i]
            s = self._earliest(usage, j, self._est(j), limit)
            if s < 0:
                return -1
            self._place(usage, j, s, 1)
            f = s + self.dur[j]
            self.finish[j] = f
            if f > mk:
                mk = f
        return mk

    cdef int _load_seq(self, order) except -1:
        cdef int i, L = len(order)
        for i in range(L):
            self.seq[i] = order[i]
        return L

    cdef void _base_decode(self, int L) noexcept nogil:
        # full decode of seq[:L] into base_start/finish; leaves base_usage empty
        cdef int i, j, s
        memset(&self.finish[0], 0, (self.n + 1) * sizeof(int))
        memset(&self.usage[0], 0, self.usage.shape[0] * sizeof(int))
        memset(&self.base_usage[0], 0, self.base_usage.shape[0] * sizeof(int))
        for i in range(L):
            j = self.seq[i]
            s = self._earliest(self.usage, j, self._est(j), self.horizon)
            self._place(self.usage, j, s, 1)
            self.base_start[j] = s
            self.finish[j] = s + self.dur[j]

    # ------------------------------------------------------------ public API

    def decode(self, order):
        """Serial SGS over ``order``; returns (starts indexed by id, makespan)."""
        cdef int L = self._load_seq(order), i, j, mk = 0
        self._base_decode(L)
        starts = [-1] * (self.n + 1)
        for i in range(L):
            j = self.seq[i]
            starts[j] = self.base_start[j]
            if self.finish[j] > mk:
                mk = self.finish[j]
        return starts, mk

    def makespan(self, order):
        cdef int L = self._load_seq(order), i, mk = 0
        self._base_decode(L)
        for i in range(L):
            if self.finish[self.seq[i]] > mk:
                mk = self.finish[self.seq[i]]
        return mk

    def best_insertion(self, order, int activity, int low, int high):
        """Makespans of inserting ``activity`` at every index in [low, high].

        Returns (best makespan, argmin indices, evaluations).
        """
        cdef int L = self._load_seq(order), p, j, s, mk, prefix_mk = 0, best
        cdef int nbytes = self.usage.shape[0] * sizeof(int)
        cdef int d = self.dur[activity]
        cdef int evaluated = 0
        positions = []
        self._base_decode(L)
        for p in range(low):
            j = self.seq[p]
            self._place(self.base_usage, j, self.base_start[j], 1)
            if self.finish[j] > prefix_mk:
                prefix_mk = self.finish[j]
        best = self.horizon
        for p in range(low, high + 1):
            memcpy(&self.usage[0], &self.base_usage[0], nbytes)
            evaluated += 1
            s = self._earliest(self.usage, activity, self._est(activity), best)
            if s >= 0:
                self._place(self.usage, activity, s, 1)
                self.finish[activity] = s + d
                mk = prefix_mk if prefix_mk > s + d else s + d
                mk = self._decode_run(self.usage, self.seq, p, L, mk, best)
                if mk >= 0:
                    if mk < best:
                        best = mk
                        positions = [p]
                    elif mk == best:
                        positions.append(p)
            if p < L:
                j = self.seq[p]
                self.finish[j] = self.base_start[j] + self.dur[j]
                self._place(self.base_usage, j, self.base_start[j], 1)
                if self.finish[j] > prefix_mk:
                    prefix_mk = self.finish[j]
        self.finish[activity] = 0
        return best, positions, evaluated

    def swap_costs(self, order, pairs, int cutoff=-1):
        """Makespan after swapping each (p, q) position pair, p < q.

        Evaluations exceeding ``cutoff`` stop early and report ``cutoff + 1``.
        """
        cdef int L = self._load_seq(order), p, q, j, k, mk, prefix_mk = 0, built = 0, limit, tmp
        cdef int nbytes = self.usage.shape[0] * sizeof(int)
        limit = self.horizon if cutoff < 0 else min(cutoff, self.horizon)
        self._base_decode(L)
        costs = [0] * len(pairs)
        for k, (p, q) in sorted(enumerate(pairs), key=lambda item: item[1][0]):
            while built < p:
                j = self.seq[built]
                self.finish[j] = self.base_start[j] + self.dur[j]
                self._place(self.base_usage, j, self.base_start[j], 1)
                if self.finish[j] > prefix_mk:
                    prefix_mk = self.finish[j]
                built += 1
            memcpy(&self.usage[0], &self.base_usage[0], nbytes)
            tmp = self.seq[p]
            self.seq[p] = self.seq[q]
            self.seq[q] = tmp
            mk = self._decode_run(self.usage, self.seq, p, L, prefix_mk, limit)
            self.seq[q] = self.seq[p]
            self.seq[p] = tmp
            costs[k] = limit + 1 if mk < 0 else mk
        return costs

    # ------------------------------------------------- incremental profile

    def reset(self):
        memset(&self.usage[0], 0, self.usage.shape[0] * sizeof(int))
        memset(&self.finish[0], 0, (self.n + 1) * sizeof(int))

    def earliest_start(self, int activity, int est):
        return self._earliest(self.usage, activity, est, self.horizon)

    def place(self, int activity, int start):
        self._place(self.usage, activity, start, 1)

    def unplace(self, int activity, int start):
        self._place(self.usage, activity, start, -1)

    def load_after(self, int t):
        """Committed resource-time per resource in slots >= t."""
        cdef int k, tau
        out = [0] * self.r
        for k in range(self.r):
            tot = 0
            for tau in range(t, self.horizon):
                tot += self.usage[tau * self.r + k]
            out[k] = tot
        return out
