"""Independent reference implementations used only by the tests."""
from __future__ import annotations

from rcpsp_rar.instance import Instance


def grid_decode(order, instance: Instance, transitive: bool = False):
    """Serial SGS replayed on an explicit time x resource occupancy grid.

    Scans start times one slot at a time.  With ``transitive`` the
    precedence wait uses member transitive predecessors (partial lists).
    Returns (start dict, makespan).
    """
    members = set(order)
    horizon = sum(instance.durations) + 1
    grid = [[0] * instance.resource_count for _ in range(horizon)]
    start, finish = {}, {}
    for j in order:
        if transitive:
            before = [p for p in instance.closure.preds(j) if p in members]
        else:
            before = instance.predecessors[j - 1]
        t = max((finish[p] for p in before), default=0)
        dur, dem = instance.durations[j - 1], instance.demands[j - 1]
        while not all(
            grid[t + u][k] + dem[k] <= instance.capacities[k]
            for u in range(dur)
            for k in range(instance.resource_count)
        ):
            t += 1
        for u in range(dur):
            for k in range(instance.resource_count):
                grid[t + u][k] += dem[k]
        start[j], finish[j] = t, t + dur
    return start, max(finish.values(), default=0)


def topological_lists(instance: Instance):
    """Every precedence-feasible permutation (source first, sink last)."""
    n = instance.activity_count
    missing = [len(instance.predecessors[j - 1]) for j in range(1, n + 1)]
    prefix: list[int] = []

    def rec():
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for j in range(1, n + 1):
            if missing[j - 1] == 0 and j not in used:
                used.add(j)
                prefix.append(j)
                for q in instance.successors[j - 1]:
                    missing[q - 1] -= 1
                yield from rec()
                for q in instance.successors[j - 1]:
                    missing[q - 1] += 1
                prefix.pop()
                used.discard(j)

    used: set[int] = set()
    yield from rec()


def exhaustive_optimum(instance: Instance) -> int:
    return min(grid_decode(order, instance)[1] for order in topological_lists(instance))


def reachable(instance: Instance, source: int) -> set[int]:
    """Plain DFS over direct successors."""
    seen: set[int] = set()
    stack = list(instance.successors[source - 1])
    while stack:
        j = stack.pop()
        if j not in seen:
            seen.add(j)
            stack.extend(instance.successors[j - 1])
    return seen


def random_feasible_list(instance: Instance, rng):
    """Uniformly random choice among eligible activities at each step."""
    missing = {j: len(instance.predecessors[j - 1]) for j in instance.activities}
    ready = [j for j, c in missing.items() if c == 0]
    out = []
    while ready:
        j = ready.pop(rng.randrange(len(ready)))
        out.append(j)
        for q in sorted(instance.successors[j - 1]):
            missing[q] -= 1
            if missing[q] == 0:
                ready.append(q)
    return tuple(out)
