"""Activity lists, serial SGS decoding and an independent schedule validator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .backend import decoder_for
from .instance import Instance, PrecedenceClosure

ActivityList = tuple[int, ...]


class InfeasibleListError(ValueError):
    """Activity list violates precedence or is not a permutation."""


@dataclass(frozen=True)
class Schedule:
    start_times: tuple[int, ...]
    completion_times: tuple[int, ...]
    makespan: int

    def start(self, activity: int) -> int:
        return self.start_times[activity - 1]

    def finish(self, activity: int) -> int:
        return self.completion_times[activity - 1]


@dataclass(frozen=True)
class Violation:
    kind: str  # "precedence", "resource", "duration", "makespan", "shape"
    detail: str
    activities: tuple[int, ...] = ()
    resource: int | None = None
    time: int | None = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def is_precedence_feasible_list(order: Sequence[int], closure: PrecedenceClosure) -> bool:
    """True iff no activity is preceded in ``order`` by one of its transitive successors.

    Works for partial lists too: only members are compared.
    """
    seen: set[int] = set()
    for j in order:
        if not closure.succs(j).isdisjoint(seen):
            return False
        seen.add(j)
    return True


def check_list(order: Sequence[int], instance: Instance) -> None:
    n = instance.activity_count
    if sorted(order) != list(range(1, n + 1)):
        raise InfeasibleListError("activity list is not a permutation of all activities")
    position = {j: i for i, j in enumerate(order)}
    for j in instance.activities:
        for s in instance.successors[j - 1]:
            if position[s] < position[j]:
                raise InfeasibleListError(f"activity {s} precedes its predecessor {j}")


def serial_sgs(order: Sequence[int], instance: Instance) -> Schedule:
    check_list(order, instance)
    starts, mk = decoder_for(instance).decode(list(order))
    start_times = tuple(starts[1:])
    completion = tuple(s + p for s, p in zip(start_times, instance.durations))
    return Schedule(start_times, completion, mk)


def makespan(schedule: Schedule) -> int:
    return schedule.makespan


def validate_schedule(instance: Instance, schedule: Schedule) -> list[Violation]:
    """Check every schedule invariant slot by slot; returns all violations found."""
    n = instance.activity_count
    out: list[Violation] = []
    if len(schedule.start_times) != n or len(schedule.completion_times) != n:
        return [Violation("shape", f"expected {n} start/completion times")]
    for j in instance.activities:
        s, c, p = schedule.start(j), schedule.finish(j), instance.durations[j - 1]
        if s < 0:
            out.append(Violation("duration", f"activity {j} starts at negative time {s}", (j,)))
        if c != s + p:
            out.append(Violation("duration", f"activity {j}: completion {c} != {s} + {p}", (j,)))
    for i in instance.activities:
        for j in sorted(instance.successors[i - 1]):
            if schedule.start(j) < schedule.finish(i):
                out.append(Violation(
                    "precedence",
                    f"activity {j} starts at {schedule.start(j)} before predecessor {i} finishes at {schedule.finish(i)}",
                    (i, j),
                ))
    last = max(schedule.completion_times, default=0)
    if schedule.makespan != last:
        out.append(Violation("makespan", f"recorded makespan {schedule.makespan} != max completion {last}"))
    for k in range(instance.resource_count):
        cap = instance.capacities[k]
        load = [0] * max(0, last, *(s + p for s, p in zip(schedule.start_times, instance.durations)))
        for j in instance.activities:
            need = instance.demands[j - 1][k]
            for t in range(max(schedule.start(j), 0), schedule.start(j) + instance.durations[j - 1]):
                load[t] += need
        for t, used in enumerate(load):
            if used > cap:
                out.append(Violation(
                    "resource", f"resource {k + 1} uses {used} > {cap} at time {t}", resource=k + 1, time=t,
                ))
    return out


def format_schedule(schedule: Schedule) -> str:
    """Text export: ``id start finish`` per activity plus a makespan footer."""
    lines = [f"{j} {s} {c}" for j, (s, c) in enumerate(zip(schedule.start_times, schedule.completion_times), start=1)]
    lines.append(f"makespan {schedule.makespan}")
    return "\n".join(lines) + "\n"


def parse_schedule(text: str) -> Schedule:
    starts, finishes, mk = [], [], None
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "makespan":
            mk = int(parts[1])
            continue
        j, s, c = map(int, parts)
        if j != len(starts) + 1:
            raise ValueError(f"line {lineno}: expected activity {len(starts) + 1}, got {j}")
        starts.append(s)
        finishes.append(c)
    if mk is None:
        raise ValueError("missing makespan footer")
    return Schedule(tuple(starts), tuple(finishes), mk)
