"""Tabu search, simulated annealing and randomized hill climbing over the
pair-swap ("multi move") or remove-and-reinsert neighborhoods."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .backend import decoder_for
from .construction import DEFAULT_BNB_BUDGET, ConfigError, default_construction_m
from .instance import Instance, PrecedenceClosure
from .rar import RunReport, default_m_remove, initial_solution, rar_move
from .schedule import is_precedence_feasible_list

DRIVERS = ("tabu", "annealing", "hill_climbing")
NEIGHBORHOODS = ("multi_move", "rar")


@dataclass(frozen=True)
class SwapMove:
    i: int
    j: int
    # list positions of i and j, p < q
    p: int
    q: int

    def apply(self, order: Sequence[int]) -> list[int]:
        out = list(order)
        out[self.p], out[self.q] = out[self.q], out[self.p]
        return out


@dataclass
class MetaConfig:
    driver: str = "tabu"
    neighborhood: str = "multi_move"
    iterations: int = 3000
    tabu_tenure_min: int = 10
    tabu_tenure_max: int = 15
    initial_temperature: float = 2.0
    cooling_ratio: float = 0.99
    samples_per_temperature: int = 100
    m_remove: int | None = None
    seed: int = 0
    construction_m: int | None = None
    # sampled remove-and-reinsert candidates per tabu / hill-climbing step
    rar_samples: int = 10
    bnb_budget: int = DEFAULT_BNB_BUDGET
    verify: bool = False

    def check(self, instance: Instance) -> tuple[int, int]:
        """Validate; returns resolved (m_remove, construction_m)."""
        if self.driver not in DRIVERS:
            raise ConfigError(f"unknown driver {self.driver!r}")
        if self.neighborhood not in NEIGHBORHOODS:
            raise ConfigError(f"unknown neighborhood {self.neighborhood!r}")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if not 1 <= self.tabu_tenure_min <= self.tabu_tenure_max:
            raise ConfigError("need 1 <= tabu_tenure_min <= tabu_tenure_max")
        if not 0 < self.cooling_ratio < 1 or self.initial_temperature <= 0:
            raise ConfigError("need 0 < cooling_ratio < 1 and initial_temperature > 0")
        if self.samples_per_temperature < 1 or self.rar_samples < 1:
            raise ConfigError("sample counts must be >= 1")
        n_real = instance.real_count
        m = self.m_remove if self.m_remove is not None else default_m_remove(n_real)
        cm = self.construction_m if self.construction_m is not None else default_construction_m(n_real)
        if not 1 <= m <= n_real or not 1 <= cm <= n_real:
            raise ConfigError(f"m_remove={m} / construction_m={cm} outside [1, {n_real}]")
        return m, cm


def swap_neighborhood(order: Sequence[int], closure: PrecedenceClosure) -> list[SwapMove]:
    """All position pairs whose swap keeps ``order`` precedence-feasible."""
    pos = {j: idx for idx, j in enumerate(order)}
    last_pred = [max((pos[x] for x in closure.preds(j) if x in pos), default=-1) for j in order]
    moves = []
    for p, a in enumerate(order):
        succ_a = closure.succs(a)
        for q in range(p + 1, len(order)):
            b = order[q]
            if b in succ_a:
                break
            if last_pred[q] < p:
                moves.append(SwapMove(a, b, p, q))
    return moves


def sa_accept(delta: float, temperature: float, rng: random.Random) -> bool:
    """Metropolis rule: always take non-worsening moves, else with exp(-delta/T)."""
    if delta <= 0:
        return True
    if temperature <= 0:
        return False
    return rng.random() < math.exp(-delta / temperature)


class _Run:
    """Shared bookkeeping for the three drivers."""

    def __init__(self, instance: Instance, config: MetaConfig):
        self.m_remove, cm = config.check(instance)
        self.instance = instance
        self.config = config
        self.closure = instance.closure
        self.decoder = decoder_for(instance)
        self.rng = random.Random(config.seed)
        start, mk, stats = initial_solution(instance, cm, config.bnb_budget, self.rng)
        self.current, self.cur_mk = list(start), mk
        self.initial_mk = mk
        self.best, self.best_mk, self.best_it = list(start), mk, 0
        self.evaluations = stats["evaluations"]
        self.trace: list[tuple[int, int, int]] = []
        self.info: dict = {"seed_optimal": stats.get("seed_optimal"), "m_remove": self.m_remove}

    def move_to(self, order: list[int], mk: int, it: int) -> None:
        if self.config.verify:
            assert is_precedence_feasible_list(order, self.closure), order
        self.current, self.cur_mk = order, mk
        if mk < self.best_mk:
            self.best, self.best_mk, self.best_it = list(order), mk, it

    def record(self, it: int) -> None:
        self.trace.append((it, self.cur_mk, self.best_mk))

    def swap_costs(self, moves: list[SwapMove], cutoff: int = -1) -> list[int]:
        self.evaluations += len(moves)
        return self.decoder.swap_costs(self.current, [(mv.p, mv.q) for mv in moves], cutoff)

    def rar_candidate(self):
        cand, mk, removed, used = rar_move(self.current, self.m_remove, self.instance, self.closure, self.rng)
        self.evaluations += used
        return cand, mk, tuple(sorted(removed))

    def report(self) -> RunReport:
        return RunReport(
            best_makespan=self.best_mk,
            best_list=tuple(self.best),
            trace=self.trace,
            best_iteration=self.best_it,
            evaluations=self.evaluations,
            initial_makespan=self.initial_mk,
            info=self.info,
        )


def tabu_search(instance: Instance, config: MetaConfig) -> RunReport:
    run = _Run(instance, config)
    rng = run.rng
    tabu: dict = {}  # attribute -> last iteration it stays tabu
    tenures: list[int] = []
    for it in range(1, config.iterations + 1):
        if config.neighborhood == "multi_move":
            moves = swap_neighborhood(run.current, run.closure)
            costs = run.swap_costs(moves)
            options = [(cost, frozenset((mv.i, mv.j)), mv) for mv, cost in zip(moves, costs)]
        else:
            options = []
            for _ in range(config.rar_samples):
                cand, mk, removed = run.rar_candidate()
                options.append((mk, removed, cand))
        admissible = [o for o in options if tabu.get(o[1], 0) < it or o[0] < run.best_mk]
        if admissible:
            low = min(o[0] for o in admissible)
            cost, attr, move = rng.choice([o for o in admissible if o[0] == low])
            order = move.apply(run.current) if isinstance(move, SwapMove) else move
            run.move_to(order, cost, it)
            tenure = rng.randint(config.tabu_tenure_min, config.tabu_tenure_max)
            tenures.append(tenure)
            tabu[attr] = it + tenure
        run.record(it)
    run.info["tenures"] = tenures
    return run.report()


def simulated_annealing(instance: Instance, config: MetaConfig) -> RunReport:
    """One iteration is one sampled neighbor; the temperature drops every
    ``samples_per_temperature`` iterations."""
    run = _Run(instance, config)
    rng = run.rng
    temperature = config.initial_temperature
    accepted_worse = 0
    for it in range(1, config.iterations + 1):
        if config.neighborhood == "multi_move":
            moves = swap_neighborhood(run.current, run.closure)
            if moves:
                mv = rng.choice(moves)
                cost = run.swap_costs([mv])[0]
                cand = mv.apply(run.current)
            else:
                cand = None
        else:
            cand, cost, _ = run.rar_candidate()
        if cand is not None:
            delta = cost - run.cur_mk
            if sa_accept(delta, temperature, rng):
                accepted_worse += delta > 0
                run.move_to(cand, cost, it)
        run.record(it)
        if it % config.samples_per_temperature == 0:
            temperature *= config.cooling_ratio
    run.info.update(final_temperature=temperature, accepted_worse=accepted_worse)
    return run.report()


def hill_climbing(instance: Instance, config: MetaConfig) -> RunReport:
    """Move to a uniformly chosen strictly improving neighbor each iteration.

    With the swap neighborhood the search stops at a local optimum and the
    remaining trace rows stay flat.  The remove-and-reinsert neighborhood is
    sampled, so a step without improving samples just keeps the current list.
    """
    run = _Run(instance, config)
    rng = run.rng
    stopped_at = None
    for it in range(1, config.iterations + 1):
        if stopped_at is None:
            if config.neighborhood == "multi_move":
                moves = swap_neighborhood(run.current, run.closure)
                costs = run.swap_costs(moves, cutoff=run.cur_mk - 1)
                better = [(mv, c) for mv, c in zip(moves, costs) if c < run.cur_mk]
                if better:
                    mv, cost = rng.choice(better)
                    run.move_to(mv.apply(run.current), cost, it)
                else:
                    stopped_at = it
            else:
                better = []
                for _ in range(config.rar_samples):
                    cand, mk, _ = run.rar_candidate()
                    if mk < run.cur_mk:
                        better.append((cand, mk))
                if better:
                    cand, mk = rng.choice(better)
                    run.move_to(cand, mk, it)
        run.record(it)
    run.info["local_optimum_at"] = stopped_at
    return run.report()


def run_meta(instance: Instance, config: MetaConfig) -> RunReport:
    driver = {"tabu": tabu_search, "annealing": simulated_annealing, "hill_climbing": hill_climbing}
    if config.driver not in driver:
        raise ConfigError(f"unknown driver {config.driver!r}")
    return driver[config.driver](instance, config)
