"""Initial activity list: exact search on a random seed subset, then
randomized best insertion of the remaining activities."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .backend import decoder_for
from .instance import Instance, PrecedenceClosure, critical_path_lower_bound
from .schedule import ActivityList

DEFAULT_BNB_BUDGET = 10**6


class ConfigError(ValueError):
    """Invalid search or construction parameter."""


class WindowError(RuntimeError):
    """Partial list is itself precedence-infeasible."""


@dataclass(frozen=True)
class InsertionWindow:
    low: int
    high: int

    def __contains__(self, position: int) -> bool:
        return self.low <= position <= self.high

    def __len__(self) -> int:
        return self.high - self.low + 1


def default_construction_m(n_real: int) -> int:
    return min(n_real, max(10, min(25, round(n_real / 10))))


def select_seed_subset(instance: Instance, m: int, rng: random.Random) -> frozenset[int]:
    if not 1 <= m <= instance.real_count:
        raise ConfigError(f"seed subset size {m} outside [1, {instance.real_count}]")
    return frozenset(rng.sample(list(instance.real_activities), m))


def induced_subinstance(instance: Instance, subset: Iterable[int], closure: PrecedenceClosure) -> Instance:
    """Sub-project over ``subset`` with fresh dummies.

    Real activity ``sorted(subset)[i]`` becomes activity ``i + 2``.  An edge
    is added wherever the full project orders two members transitively.
    """
    from .instance import make_instance

    ids = sorted(j for j in subset if j not in (instance.source, instance.sink))
    index = {j: i + 1 for i, j in enumerate(ids)}
    edges = [(index[a], index[b]) for a in ids for b in closure.succs(a) if b in index]
    return make_instance(
        [instance.durations[j - 1] for j in ids],
        [instance.demands[j - 1] for j in ids],
        instance.capacities,
        edges,
        name=f"{instance.name}[sub{len(ids)}]",
    )


def bnb_exact(instance: Instance, budget: int = DEFAULT_BNB_BUDGET) -> tuple[ActivityList, bool]:
    """Depth-first branch and bound over serial-SGS activity lists.

    Only lists whose decoded start times are non-decreasing (ties broken by
    topological rank) are enumerated; every active schedule, hence some
    optimal one, is produced by exactly such a list.  A child is pruned when
    its earliest completion bound reaches the incumbent.  Returns the best
    list and whether the search finished within ``budget`` nodes.
    """
    dec = decoder_for(instance)
    n = instance.activity_count
    dur = (0, *instance.durations)
    tail = (0, *instance.tails)
    succ = [()] + [tuple(sorted(s)) for s in instance.successors]
    preds = [()] + [tuple(sorted(p)) for p in instance.predecessors]
    rank = [0] * (n + 1)
    for pos, j in enumerate(instance.topological_order):
        rank[j] = pos
    caps = instance.capacities
    energy = [sum(dur[j] * instance.demands[j - 1][k] for j in instance.activities) for k in range(len(caps))]
    work = [[dur[j] * instance.demands[j - 1][k] for k in range(len(caps))] for j in range(1, n + 1)]
    work.insert(0, [0] * len(caps))

    # incumbent from a greedy longest-tail-first list
    greedy = _priority_list(instance, key=lambda j: -tail[j])
    best = [dec.makespan(list(greedy)), list(greedy)]
    lower = critical_path_lower_bound(instance)
    if best[0] == lower:
        return tuple(best[1]), True

    finish = [0] * (n + 1)
    missing = [len(preds[j]) for j in range(n + 1)]
    eligible = {j for j in range(1, n + 1) if missing[j] == 0}
    prefix: list[int] = []
    nodes = 0
    aborted = False

    def dfs(mk: int, s_last: int, r_last: int) -> None:
        nonlocal nodes, aborted
        if len(prefix) == n:
            if mk < best[0]:
                best[0], best[1] = mk, prefix.copy()
            return
        lb = mk
        cands = []
        for j in eligible:
            est = max([finish[p] for p in preds[j]], default=0)
            s = dec.earliest_start(j, est)
            bound = max(s, s_last) + tail[j]
            if bound > lb:
                lb = bound
            if s > s_last or (s == s_last and rank[j] > r_last):
                cands.append((bound, rank[j], j, s))
        if lb >= best[0] or not cands:
            return
        load = dec.load_after(s_last)
        for k, cap in enumerate(caps):
            if s_last + -(-(energy[k] + load[k]) // cap) >= best[0]:
                return
        cands.sort()
        for bound, _, j, s in cands:
            if bound >= best[0]:
                break
            nodes += 1
            if nodes > budget:
                aborted = True
                return
            f = s + dur[j]
            dec.place(j, s)
            finish[j] = f
            prefix.append(j)
            eligible.discard(j)
            opened = []
            for q in succ[j]:
                missing[q] -= 1
                if missing[q] == 0:
                    eligible.add(q)
                    opened.append(q)
            for k in range(len(caps)):
                energy[k] -= work[j][k]
            dfs(max(mk, f), s, rank[j])
            for k in range(len(caps)):
                energy[k] += work[j][k]
            for q in succ[j]:
                missing[q] += 1
            eligible.difference_update(opened)
            eligible.add(j)
            prefix.pop()
            finish[j] = 0
            dec.unplace(j, s)
            if aborted or best[0] == lower:
                return

    dec.reset()
    dfs(0, 0, -1)
    dec.reset()
    return tuple(best[1]), not aborted


def _priority_list(instance: Instance, key) -> list[int]:
    """Topological list choosing the eligible activity minimising ``key`` each step."""
    missing = {j: len(instance.predecessors[j - 1]) for j in instance.activities}
    ready = [j for j, c in missing.items() if c == 0]
    out = []
    while ready:
        ready.sort(key=lambda j: (key(j), j))
        j = ready.pop(0)
        out.append(j)
        for q in instance.successors[j - 1]:
            missing[q] -= 1
            if missing[q] == 0:
                ready.append(q)
    return out


def feasible_insert_positions(partial: Sequence[int], activity: int, closure: PrecedenceClosure) -> InsertionWindow:
    preds, succs = closure.preds(activity), closure.succs(activity)
    low, high = 0, len(partial)
    for idx, j in enumerate(partial):
        if j in preds:
            low = idx + 1
        elif j in succs and high == len(partial):
            high = idx
    if low > high:
        raise WindowError(f"no legal slot for activity {activity}: partial list violates precedence")
    return InsertionWindow(low, high)


def insert_best(
    partial: Sequence[int],
    activity: int,
    instance: Instance,
    closure: PrecedenceClosure,
    rng: random.Random,
) -> tuple[list[int], int, int]:
    """Insert at a uniformly chosen minimum-makespan slot of the legal window.

    Returns (new list, its decoded makespan, number of slots evaluated).
    """
    window = feasible_insert_positions(partial, activity, closure)
    best, positions, evaluated = decoder_for(instance).best_insertion(
        list(partial), activity, window.low, window.high
    )
    pos = positions[0] if len(positions) == 1 else rng.choice(positions)
    out = list(partial)
    out.insert(pos, activity)
    return out, best, evaluated


def best_insertion_construct(
    instance: Instance,
    m: int,
    rng: random.Random,
    bnb_budget: int = DEFAULT_BNB_BUDGET,
    stats: dict | None = None,
) -> ActivityList:
    closure = instance.closure
    seed = select_seed_subset(instance, m, rng)
    ids = sorted(seed)
    sub = induced_subinstance(instance, ids, closure)
    sub_order, optimal = bnb_exact(sub, bnb_budget)
    partial = [instance.source]
    partial += [ids[j - 2] for j in sub_order if j not in (sub.source, sub.sink)]
    partial.append(instance.sink)
    remaining = [j for j in instance.real_activities if j not in seed]
    rng.shuffle(remaining)
    evaluations = 0
    for a in remaining:
        partial, _, used = insert_best(partial, a, instance, closure, rng)
        evaluations += used
    if stats is not None:
        stats["evaluations"] = stats.get("evaluations", 0) + evaluations + 1
        stats["seed_optimal"] = optimal
    return tuple(partial)
