"""Remove-and-reinsert local search."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .backend import decoder_for
from .construction import (
    DEFAULT_BNB_BUDGET,
    ConfigError,
    best_insertion_construct,
    default_construction_m,
    insert_best,
)
from .instance import Instance, PrecedenceClosure
from .schedule import ActivityList, is_precedence_feasible_list

DEFAULT_STAGNATION = 50


def default_m_remove(n_real: int) -> int:
    return max(1, round(n_real / 10))


@dataclass
class SearchConfig:
    m_remove: int | None = None
    max_iterations: int = 3000
    stagnation_threshold: int = DEFAULT_STAGNATION
    seed: int = 0
    construction_m: int | None = None
    bnb_budget: int = DEFAULT_BNB_BUDGET
    # optional stop once this many candidate decodes have been spent
    max_evaluations: int | None = None
    verify: bool = False

    def resolved(self, instance: Instance) -> "SearchConfig":
        """Copy with defaults filled in for ``instance``; raises ConfigError."""
        n_real = instance.real_count
        m = self.m_remove if self.m_remove is not None else default_m_remove(n_real)
        cm = self.construction_m if self.construction_m is not None else default_construction_m(n_real)
        if not 1 <= m <= n_real:
            raise ConfigError(f"m_remove={m} outside [1, {n_real}]")
        if not 1 <= cm <= n_real:
            raise ConfigError(f"construction_m={cm} outside [1, {n_real}]")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if self.stagnation_threshold < 1:
            raise ConfigError("stagnation_threshold must be >= 1")
        if self.bnb_budget < 0:
            raise ConfigError("bnb_budget must be >= 0")
        return SearchConfig(m, self.max_iterations, self.stagnation_threshold, self.seed, cm,
                            self.bnb_budget, self.max_evaluations, self.verify)


@dataclass
class RunReport:
    best_makespan: int
    best_list: ActivityList
    trace: list[tuple[int, int, int]]
    best_iteration: int
    evaluations: int
    initial_makespan: int = 0
    info: dict = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        return len(self.trace)


def remove_activities(
    order: Sequence[int], m: int, rng: random.Random
) -> tuple[list[int], list[int]]:
    """Drop ``m`` random non-dummy activities; returns (partial list, removal order).

    The first and last list entries are the dummies and are never removed.
    """
    real = list(order[1:-1])
    if not 1 <= m <= len(real):
        raise ConfigError(f"cannot remove {m} of {len(real)} activities")
    removed = rng.sample(real, m)
    gone = set(removed)
    return [j for j in order if j not in gone], removed


def reinsert_best(
    partial: Sequence[int],
    activity: int,
    instance: Instance,
    closure: PrecedenceClosure,
    rng: random.Random,
) -> list[int]:
    return insert_best(partial, activity, instance, closure, rng)[0]


def rar_move(
    current: Sequence[int],
    m: int,
    instance: Instance,
    closure: PrecedenceClosure,
    rng: random.Random,
) -> tuple[list[int], int, list[int], int]:
    """One remove-and-reinsert cycle.

    Returns (candidate, candidate makespan, removed activities, evaluations).
    """
    partial, removed = remove_activities(current, m, rng)
    mk = evaluated = 0
    for a in removed:
        partial, mk, used = insert_best(partial, a, instance, closure, rng)
        evaluated += used
    return partial, mk, removed, evaluated


def rar_iteration(
    current: Sequence[int],
    config: SearchConfig,
    instance: Instance,
    closure: PrecedenceClosure,
    rng: random.Random,
) -> tuple[ActivityList, int]:
    cand, mk, _, _ = rar_move(current, config.m_remove, instance, closure, rng)
    return tuple(cand), mk


def initial_solution(instance: Instance, construction_m: int, bnb_budget: int, rng: random.Random):
    """Constructed list, its makespan and the decodes spent building it."""
    stats: dict = {}
    start = best_insertion_construct(instance, construction_m, rng, bnb_budget, stats)
    mk = decoder_for(instance).makespan(list(start))
    return start, mk, stats


def rar_search(instance: Instance, config: SearchConfig) -> RunReport:
    cfg = config.resolved(instance)
    closure = instance.closure
    rng = random.Random(cfg.seed)
    current, cur_mk, stats = initial_solution(instance, cfg.construction_m, cfg.bnb_budget, rng)
    evaluations = stats["evaluations"]
    initial_mk = cur_mk
    best, best_mk, best_it = current, cur_mk, 0
    stall = switches = 0
    trace: list[tuple[int, int, int]] = []
    for it in range(1, cfg.max_iterations + 1):
        cand, cand_mk, _, used = rar_move(current, cfg.m_remove, instance, closure, rng)
        evaluations += used
        if cfg.verify:
            assert is_precedence_feasible_list(cand, closure), cand
        if cand_mk < cur_mk:
            current, cur_mk, stall = tuple(cand), cand_mk, 0
        else:
            stall += 1
            if stall >= cfg.stagnation_threshold:
                current, cur_mk, stall = tuple(cand), cand_mk, 0
                switches += 1
        if cur_mk < best_mk:
            best, best_mk, best_it = current, cur_mk, it
        trace.append((it, cur_mk, best_mk))
        if cfg.max_evaluations is not None and evaluations >= cfg.max_evaluations:
            break
    return RunReport(
        best_makespan=best_mk,
        best_list=tuple(best),
        trace=trace,
        best_iteration=best_it,
        evaluations=evaluations,
        initial_makespan=initial_mk,
        info={"switches": switches, "seed_optimal": stats.get("seed_optimal"),
              "m_remove": cfg.m_remove, "construction_m": cfg.construction_m},
    )
