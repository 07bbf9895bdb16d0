"""RCPSP instances: PSPLIB single-mode parsing, precedence closure, bounds.

Activities are identified 1..n exactly as in the PSPLIB file; activity 1 is
the dummy source and activity n the dummy sink.  Per-activity tuples on
:class:`Instance` and :class:`PrecedenceClosure` are indexed by ``id - 1``.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from pathlib import Path
from typing import Iterable, Sequence


class ParseError(ValueError):
    """Raised for malformed or infeasible PSPLIB input."""

    def __init__(self, message: str, line: int | None = None, section: str | None = None):
        where = []
        if section:
            where.append(f"section {section}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.section = section


class InstanceError(ValueError):
    """Raised when instance data violates a structural invariant."""


@dataclass(frozen=True)
class PrecedenceClosure:
    transitive_predecessors: tuple[frozenset[int], ...]
    transitive_successors: tuple[frozenset[int], ...]

    def preds(self, activity: int) -> frozenset[int]:
        return self.transitive_predecessors[activity - 1]

    def succs(self, activity: int) -> frozenset[int]:
        return self.transitive_successors[activity - 1]


@dataclass(frozen=True)
class Instance:
    activity_count: int
    resource_count: int
    durations: tuple[int, ...]
    demands: tuple[tuple[int, ...], ...]
    capacities: tuple[int, ...]
    successors: tuple[frozenset[int], ...]
    horizon: int
    name: str = ""

    def __post_init__(self) -> None:
        _check_invariants(self)

    @property
    def source(self) -> int:
        return 1

    @property
    def sink(self) -> int:
        return self.activity_count

    @property
    def real_count(self) -> int:
        """Number of non-dummy activities."""
        return self.activity_count - 2

    @property
    def activities(self) -> range:
        return range(1, self.activity_count + 1)

    @property
    def real_activities(self) -> range:
        return range(2, self.activity_count)

    @cached_property
    def predecessors(self) -> tuple[frozenset[int], ...]:
        preds: list[set[int]] = [set() for _ in self.activities]
        for i, succ in enumerate(self.successors, start=1):
            for j in succ:
                preds[j - 1].add(i)
        return tuple(frozenset(p) for p in preds)

    @cached_property
    def closure(self) -> PrecedenceClosure:
        return transitive_closure(self)

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        return _topological_order(self.activity_count, self.successors)

    @cached_property
    def tails(self) -> tuple[int, ...]:
        """Longest duration-weighted path from each activity's start to the sink."""
        tail = [0] * self.activity_count
        for i in reversed(self.topological_order):
            best = max((tail[j - 1] for j in self.successors[i - 1]), default=0)
            tail[i - 1] = best + self.durations[i - 1]
        return tuple(tail)


def _topological_order(n: int, successors: Sequence[Iterable[int]]) -> tuple[int, ...]:
    graph = {i: set() for i in range(1, n + 1)}
    for i, succ in enumerate(successors, start=1):
        for j in succ:
            graph[j].add(i)
    try:
        return tuple(TopologicalSorter(graph).static_order())
    except CycleError as exc:
        raise InstanceError(f"precedence graph has a cycle through {exc.args[1]}") from None


def _check_invariants(inst: Instance) -> None:
    n, r = inst.activity_count, inst.resource_count
    if n < 2:
        raise InstanceError("an instance needs at least the two dummy activities")
    if len(inst.durations) != n or len(inst.demands) != n or len(inst.successors) != n:
        raise InstanceError("per-activity data does not match activity_count")
    if len(inst.capacities) != r:
        raise InstanceError("capacity vector does not match resource_count")
    if any(c <= 0 for c in inst.capacities):
        raise InstanceError("capacities must be positive")
    for i in range(1, n + 1):
        d, dem = inst.durations[i - 1], inst.demands[i - 1]
        if d < 0 or len(dem) != r or any(x < 0 for x in dem):
            raise InstanceError(f"activity {i}: negative or malformed data")
        for k, (x, cap) in enumerate(zip(dem, inst.capacities), start=1):
            if x > cap:
                raise InstanceError(f"activity {i} requests {x} of resource {k}, capacity {cap}")
        for j in inst.successors[i - 1]:
            if not 1 <= j <= n or j == i:
                raise InstanceError(f"activity {i}: invalid successor {j}")
    for dummy in (1, n):
        if inst.durations[dummy - 1] != 0 or any(inst.demands[dummy - 1]):
            raise InstanceError(f"dummy activity {dummy} must have zero duration and demand")
    if inst.successors[n - 1]:
        raise InstanceError("sink activity must not have successors")
    _topological_order(n, inst.successors)
    has_pred = {j for succ in inst.successors for j in succ}
    for i in range(2, n + 1):
        if i not in has_pred:
            raise InstanceError(f"activity {i} has no predecessor; source must be unique")
    for i in range(1, n):
        if not inst.successors[i - 1]:
            raise InstanceError(f"activity {i} has no successor; sink must be unique")
    if 1 in has_pred:
        raise InstanceError("source activity must not have predecessors")


def transitive_closure(instance: Instance) -> PrecedenceClosure:
    n = instance.activity_count
    succ_sets: list[frozenset[int]] = [frozenset()] * n
    for i in reversed(instance.topological_order):
        acc: set[int] = set()
        for j in instance.successors[i - 1]:
            acc.add(j)
            acc |= succ_sets[j - 1]
        succ_sets[i - 1] = frozenset(acc)
    pred_sets: list[set[int]] = [set() for _ in range(n)]
    for i, succ in enumerate(succ_sets, start=1):
        for j in succ:
            pred_sets[j - 1].add(i)
    return PrecedenceClosure(tuple(frozenset(p) for p in pred_sets), tuple(succ_sets))


def critical_path_lower_bound(instance: Instance) -> int:
    return instance.tails[instance.source - 1]


# ---------------------------------------------------------------- parsing

_SECTION_PRECEDENCE = "PRECEDENCE RELATIONS:"
_SECTION_REQUESTS = "REQUESTS/DURATIONS:"
_SECTION_CAPACITY = "RESOURCEAVAILABILITIES:"
_JOBS_RE = re.compile(r"^\s*jobs\s*\(incl\.\s*supersource/sink\s*\)\s*:\s*(\d+)", re.I)
_HORIZON_RE = re.compile(r"^\s*horizon\s*:\s*(\d+)", re.I)
_RENEWABLE_RE = re.compile(r"^\s*-\s*renewable\s*:\s*(\d+)", re.I)
_NONRENEWABLE_RE = re.compile(r"^\s*-\s*(nonrenewable|doubly constrained)\s*:\s*(\d+)", re.I)


def _is_rule(line: str) -> bool:
    s = line.strip()
    return bool(s) and set(s) <= {"*"}


def _ints(line: str, lineno: int, section: str) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {line.strip()!r}", lineno, section) from None


def parse_psplib(text: str, name: str = "") -> Instance:
    """Parse the contents of a PSPLIB single-mode ``.sm`` file."""
    lines = text.splitlines()
    jobs = horizon = renewable = None
    sections: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        if m := _JOBS_RE.match(line):
            jobs = int(m.group(1))
        elif m := _HORIZON_RE.match(line):
            horizon = int(m.group(1))
        elif m := _RENEWABLE_RE.match(line):
            renewable = int(m.group(1))
        elif m := _NONRENEWABLE_RE.match(line):
            if int(m.group(2)):
                raise ParseError(f"{m.group(1)} resources are not supported", lineno)
        else:
            head = line.strip().upper()
            for sec in (_SECTION_PRECEDENCE, _SECTION_REQUESTS, _SECTION_CAPACITY):
                if head.startswith(sec):
                    if sec in sections:
                        raise ParseError("duplicate section header", lineno, sec)
                    sections[sec] = lineno
    if jobs is None:
        raise ParseError("missing 'jobs (incl. supersource/sink ):' line")
    if renewable is None:
        raise ParseError("missing '- renewable :' line")
    for sec in (_SECTION_PRECEDENCE, _SECTION_REQUESTS, _SECTION_CAPACITY):
        if sec not in sections:
            raise ParseError("section header not found", section=sec)

    def body(sec: str, skip: int) -> list[tuple[int, str]]:
        # rows after the header (and `skip` column-title lines) up to the next rule
        start = sections[sec] + skip
        rows = []
        for idx in range(start, len(lines)):
            line = lines[idx]
            if _is_rule(line):
                break
            if not line.strip() or set(line.strip()) <= {"-"}:
                continue
            rows.append((idx + 1, line))
        return rows

    successors: dict[int, frozenset[int]] = {}
    for lineno, line in body(_SECTION_PRECEDENCE, 1):
        vals = _ints(line, lineno, _SECTION_PRECEDENCE)
        if len(vals) < 3 or len(vals) != 3 + vals[2]:
            raise ParseError("successor count does not match row", lineno, _SECTION_PRECEDENCE)
        job = vals[0]
        if job in successors or not 1 <= job <= jobs:
            raise ParseError(f"unexpected job number {job}", lineno, _SECTION_PRECEDENCE)
        if vals[1] != 1:
            raise ParseError("multi-mode jobs are not supported", lineno, _SECTION_PRECEDENCE)
        succ = vals[3:]
        if any(not 1 <= s <= jobs for s in succ):
            raise ParseError(f"successor out of range for job {job}", lineno, _SECTION_PRECEDENCE)
        successors[job] = frozenset(succ)
    if len(successors) != jobs:
        raise ParseError(f"{len(successors)} rows for {jobs} jobs", section=_SECTION_PRECEDENCE)

    durations: dict[int, int] = {}
    demands: dict[int, tuple[int, ...]] = {}
    for lineno, line in body(_SECTION_REQUESTS, 1):
        vals = _ints(line, lineno, _SECTION_REQUESTS)
        if len(vals) != 3 + renewable:
            raise ParseError(f"expected {3 + renewable} columns", lineno, _SECTION_REQUESTS)
        job = vals[0]
        if job in durations or not 1 <= job <= jobs:
            raise ParseError(f"unexpected job number {job}", lineno, _SECTION_REQUESTS)
        if any(v < 0 for v in vals):
            raise ParseError("negative value", lineno, _SECTION_REQUESTS)
        durations[job] = vals[2]
        demands[job] = tuple(vals[3:])
    if len(durations) != jobs:
        raise ParseError(f"{len(durations)} rows for {jobs} jobs", section=_SECTION_REQUESTS)

    cap_rows = body(_SECTION_CAPACITY, 1)
    if not cap_rows:
        raise ParseError("missing capacity row", section=_SECTION_CAPACITY)
    cap_line, cap_text = cap_rows[0]
    capacities = tuple(_ints(cap_text, cap_line, _SECTION_CAPACITY))
    if len(capacities) != renewable:
        raise ParseError(f"expected {renewable} capacities", cap_line, _SECTION_CAPACITY)

    for job in range(1, jobs + 1):
        for k, (x, cap) in enumerate(zip(demands[job], capacities), start=1):
            if x > cap:
                raise ParseError(
                    f"job {job} requests {x} of R {k} but only {cap} available",
                    section=_SECTION_REQUESTS,
                )
    try:
        return Instance(
            activity_count=jobs,
            resource_count=renewable,
            durations=tuple(durations[j] for j in range(1, jobs + 1)),
            demands=tuple(demands[j] for j in range(1, jobs + 1)),
            capacities=capacities,
            successors=tuple(successors[j] for j in range(1, jobs + 1)),
            horizon=horizon if horizon is not None else sum(durations.values()),
            name=name,
        )
    except InstanceError as exc:
        raise ParseError(str(exc), section=_SECTION_PRECEDENCE) from None


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    return parse_psplib(path.read_text(), name=path.stem)


def to_psplib(instance: Instance) -> str:
    """Serialize to PSPLIB ``.sm`` text (header fields not stored are zeroed)."""
    n, r = instance.activity_count, instance.resource_count
    rule = "*" * 72
    res_cols = "".join(f"  R {k}" for k in range(1, r + 1))
    out = [
        rule,
        f"file with basedata            : {instance.name or 'generated'}",
        "initial value random generator: 0",
        rule,
        "projects                      :  1",
        f"jobs (incl. supersource/sink ):  {n}",
        f"horizon                       :  {instance.horizon}",
        "RESOURCES",
        f"  - renewable                 :  {r}   R",
        "  - nonrenewable              :  0   N",
        "  - doubly constrained        :  0   D",
        rule,
        "PRECEDENCE RELATIONS:",
        "jobnr.    #modes  #successors   successors",
    ]
    for i in instance.activities:
        succ = sorted(instance.successors[i - 1])
        out.append(f"{i:4d}        1        {len(succ):3d}       " + "".join(f"{j:4d}" for j in succ))
    out += [rule, "REQUESTS/DURATIONS:", "jobnr. mode duration" + res_cols, "-" * 72]
    for i in instance.activities:
        dem = "".join(f"{x:5d}" for x in instance.demands[i - 1])
        out.append(f"{i:3d}      1  {instance.durations[i - 1]:4d}  {dem}")
    out += [rule, "RESOURCEAVAILABILITIES:", res_cols]
    out.append("".join(f"{c:5d}" for c in instance.capacities))
    out.append(rule)
    return "\n".join(out) + "\n"


def make_instance(
    durations: Sequence[int],
    demands: Sequence[Sequence[int]],
    capacities: Sequence[int],
    edges: Iterable[tuple[int, int]] = (),
    name: str = "",
) -> Instance:
    """Build an instance from real activities only; dummies are added around them.

    ``edges`` use 1-based indices into ``durations`` (real activities); the
    resulting instance numbers them 2..len+1.
    """
    n_real = len(durations)
    n = n_real + 2
    r = len(capacities)
    succ: list[set[int]] = [set() for _ in range(n)]
    has_pred: set[int] = set()
    for a, b in edges:
        succ[a].add(b + 1)
        has_pred.add(b + 1)
    for j in range(2, n):
        if j not in has_pred:
            succ[0].add(j)
        if not succ[j - 1]:
            succ[j - 1].add(n)
    if n_real == 0:
        succ[0].add(n)
    return Instance(
        activity_count=n,
        resource_count=r,
        durations=(0, *durations, 0),
        demands=((0,) * r, *(tuple(d) for d in demands), (0,) * r),
        capacities=tuple(capacities),
        successors=tuple(frozenset(s) for s in succ),
        horizon=max(1, sum(durations)),
        name=name,
    )


def random_instance(
    n_real: int,
    rng: random.Random,
    n_resources: int | None = None,
    density: float | None = None,
    max_duration: int = 8,
    max_capacity: int = 5,
    name: str = "",
) -> Instance:
    """Random DAG instance for tests and experiments."""
    if n_resources is None:
        n_resources = rng.randint(1, 3)
    if density is None:
        density = rng.uniform(0.0, 0.6)
    caps = [rng.randint(1, max_capacity) for _ in range(n_resources)]
    durations = [rng.randint(1, max_duration) for _ in range(n_real)]
    demands = [[rng.randint(0, c) for c in caps] for _ in range(n_real)]
    edges = [(a, b) for a in range(1, n_real + 1) for b in range(a + 1, n_real + 1) if rng.random() < density]
    return make_instance(durations, demands, caps, edges, name=name)
