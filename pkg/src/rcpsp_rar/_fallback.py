"""Pure-Python serial-SGS decoding kernels.

Used when the compiled ``_kernel`` extension is unavailable.  Both
implementations share one algorithm and must return identical results:

* Activities are decoded in list order.  Each starts at the earliest time
  no earlier than the finish of every *transitive* predecessor that is in
  the list, such that its demand fits in every slot it occupies.  Using the
  closure means a partial list decodes as the sub-project induced by its
  members.
* Candidate evaluations share the decoded prefix.  Position p only
  re-decodes the suffix on a copy of the prefix's resource profile.  An
  evaluation stops as soon as a finish time exceeds the limit (the best
  makespan so far), so ties with the best are still reported.
"""
from __future__ import annotations


class Decoder:
    backend = "python"

    def __init__(self, durations, demands, capacities, pred_ptr, pred_idx, horizon):
        self.n = len(durations) - 1
        self.r = len(capacities)
        self.horizon = horizon
        self.dur = list(durations)
        r = self.r
        self.dem = [tuple(demands[j * r:(j + 1) * r]) for j in range(self.n + 1)]
        self.cap = tuple(capacities)
        self.preds = [tuple(pred_idx[pred_ptr[j]:pred_ptr[j + 1]]) for j in range(self.n + 1)]
        self.busy = [self.dur[j] > 0 and any(self.dem[j]) for j in range(self.n + 1)]
        self.usage = [[0] * r for _ in range(horizon + 1)]
        self.finish = [0] * (self.n + 1)

    def _est(self, j, finish):
        preds = self.preds[j]
        return max([finish[p] for p in preds]) if preds else 0

    def _earliest(self, usage, j, t, limit):
        d = self.dur[j]
        if not self.busy[j]:
            return t if t + d <= limit else -1
        dem, cap, rr = self.dem[j], self.cap, range(self.r)
        while True:
            if t + d > limit:
                return -1
            tau = t + d - 1
            while tau >= t:
                row = usage[tau]
                if any(row[k] + dem[k] > cap[k] for k in rr):
                    break
                tau -= 1
            else:
                return t
            t = tau + 1

    def _place(self, usage, j, s, sign=1):
        if not self.busy[j]:
            return
        dem = self.dem[j]
        for tau in range(s, s + self.dur[j]):
            row = usage[tau]
            for k, x in enumerate(dem):
                row[k] += sign * x

    def _decode_run(self, usage, seq, finish, lo, mk, limit):
        for j in seq[lo:]:
            s = self._earliest(usage, j, self._est(j, finish), limit)
            if s < 0:
                return -1
            self._place(usage, j, s)
            f = s + self.dur[j]
            finish[j] = f
            if f > mk:
                mk = f
        return mk

    def _base_decode(self, seq):
        finish = [0] * (self.n + 1)
        usage = [[0] * self.r for _ in range(self.horizon + 1)]
        starts = {}
        for j in seq:
            s = self._earliest(usage, j, self._est(j, finish), self.horizon)
            self._place(usage, j, s)
            starts[j] = s
            finish[j] = s + self.dur[j]
        return starts, finish

    def decode(self, order):
        base_start, finish = self._base_decode(order)
        starts = [-1] * (self.n + 1)
        for j, s in base_start.items():
            starts[j] = s
        return starts, max((finish[j] for j in order), default=0)

    def makespan(self, order):
        return self.decode(order)[1]

    def best_insertion(self, order, activity, low, high):
        seq = list(order)
        base_start, finish = self._base_decode(seq)
        base = [[0] * self.r for _ in range(self.horizon + 1)]
        prefix_mk = 0
        for j in seq[:low]:
            self._place(base, j, base_start[j])
            prefix_mk = max(prefix_mk, finish[j])
        best, positions, evaluated = self.horizon, [], 0
        d = self.dur[activity]
        for p in range(low, high + 1):
            usage = [row[:] for row in base]
            evaluated += 1
            s = self._earliest(usage, activity, self._est(activity, finish), best)
            if s >= 0:
                self._place(usage, activity, s)
                finish[activity] = s + d
                mk = self._decode_run(usage, seq, finish, p, max(prefix_mk, s + d), best)
                if mk >= 0:
                    if mk < best:
                        best, positions = mk, [p]
                    elif mk == best:
                        positions.append(p)
            if p < len(seq):
                j = seq[p]
                finish[j] = base_start[j] + self.dur[j]
                self._place(base, j, base_start[j])
                prefix_mk = max(prefix_mk, finish[j])
        return best, positions, evaluated

    def swap_costs(self, order, pairs, cutoff=-1):
        seq = list(order)
        limit = self.horizon if cutoff < 0 else min(cutoff, self.horizon)
        base_start, finish = self._base_decode(seq)
        base = [[0] * self.r for _ in range(self.horizon + 1)]
        prefix_mk = built = 0
        costs = [0] * len(pairs)
        for k, (p, q) in sorted(enumerate(pairs), key=lambda item: item[1][0]):
            while built < p:
                j = seq[built]
                finish[j] = base_start[j] + self.dur[j]
                self._place(base, j, base_start[j])
                prefix_mk = max(prefix_mk, finish[j])
                built += 1
            usage = [row[:] for row in base]
            seq[p], seq[q] = seq[q], seq[p]
            mk = self._decode_run(usage, seq, finish, p, prefix_mk, limit)
            seq[p], seq[q] = seq[q], seq[p]
            costs[k] = limit + 1 if mk < 0 else mk
        return costs

    def reset(self):
        self.usage = [[0] * self.r for _ in range(self.horizon + 1)]

    def earliest_start(self, activity, est):
        return self._earliest(self.usage, activity, est, self.horizon)

    def place(self, activity, start):
        self._place(self.usage, activity, start, 1)

    def unplace(self, activity, start):
        self._place(self.usage, activity, start, -1)

    def load_after(self, t):
        return [sum(self.usage[tau][k] for tau in range(t, self.horizon)) for k in range(self.r)]
