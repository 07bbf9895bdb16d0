"""Benchmark harness: run algorithms over instances and seeds, write result
rows and cost-vs-iteration traces."""
from __future__ import annotations

import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .instance import ParseError, load_instance
from .meta import MetaConfig, run_meta
from .rar import DEFAULT_STAGNATION, RunReport, SearchConfig, rar_search
from .schedule import serial_sgs, validate_schedule

log = logging.getLogger(__name__)

RESULT_HEADER = ("instance", "algorithm", "best", "best_known", "dev_pct", "iterations", "decodes", "seconds", "seed")
TRACE_HEADER = ("iteration", "current_cost", "best_cost")

# (driver, neighborhood) per short algorithm name
_META = {
    "tabu-mm": ("tabu", "multi_move", "Tabu search – MultiMove (MM)"),
    "tabu-rar": ("tabu", "rar", "Tabu search – Remove and reinsert (RAR)"),
    "sa-mm": ("annealing", "multi_move", "Simulated Annealing - MM"),
    "sa-rar": ("annealing", "rar", "Simulated Annealing - RAR"),
    "hc-mm": ("hill_climbing", "multi_move", "Hill Climbing – MM"),
    "hc-rar": ("hill_climbing", "rar", "Hill Climbing – RAR"),
}
ALGORITHMS = ("rar", *_META)
TABLE_LINEUP = ("tabu-mm", "tabu-rar", "sa-mm", "sa-rar", "hc-mm", "hc-rar", "rar:5", "rar:10")


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str  # one of ALGORITHMS
    iterations: int = 3000
    m_remove: int | None = None
    construction_m: int | None = None
    stagnation: int = DEFAULT_STAGNATION
    bnb_budget: int = 10**6
    rar_samples: int = 10

    @classmethod
    def parse(cls, text: str, **defaults) -> "AlgorithmSpec":
        """``rar``, ``rar:10`` (removal count override) or a baseline name."""
        name, _, arg = text.partition(":")
        if name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {text!r}; choose from {', '.join(ALGORITHMS)}")
        spec = cls(name, **defaults)
        if arg:
            spec = replace(spec, m_remove=int(arg))
        return spec

    @property
    def label(self) -> str:
        if self.name == "rar":
            m = "n/10" if self.m_remove is None else self.m_remove
            return f"Remove and Reinsert with {m} activities"
        return _META[self.name][2]

    @property
    def slug(self) -> str:
        if self.name == "rar" and self.m_remove is not None:
            return f"rar-{self.m_remove}"
        return self.name

    def run(self, instance, seed: int) -> RunReport:
        if self.name == "rar":
            cfg = SearchConfig(
                m_remove=self.m_remove,
                max_iterations=self.iterations,
                stagnation_threshold=self.stagnation,
                seed=seed,
                construction_m=self.construction_m,
                bnb_budget=self.bnb_budget,
            )
            return rar_search(instance, cfg)
        driver, neighborhood, _ = _META[self.name]
        cfg = MetaConfig(
            driver=driver,
            neighborhood=neighborhood,
            iterations=self.iterations,
            m_remove=self.m_remove,
            seed=seed,
            construction_m=self.construction_m,
            bnb_budget=self.bnb_budget,
            rar_samples=self.rar_samples,
        )
        return run_meta(instance, cfg)


@dataclass(frozen=True)
class BenchmarkRow:
    instance: str
    algorithm: str
    best: int
    best_known: int | None
    iterations: int
    decodes: int
    seconds: float
    seed: int

    @property
    def dev_pct(self) -> float | None:
        return deviation(self.best, self.best_known)

    def cells(self) -> list[str]:
        dev = self.dev_pct
        return [
            self.instance,
            self.algorithm,
            str(self.best),
            "" if self.best_known is None else str(self.best_known),
            "" if dev is None else f"{dev:.2f}",
            str(self.iterations),
            str(self.decodes),
            f"{self.seconds:.3f}",
            str(self.seed),
        ]


def deviation(found: int, best_known: int | None) -> float | None:
    if best_known is None:
        return None
    return round(100.0 * (found - best_known) / best_known, 2)


def load_best_known(path: str | Path) -> dict[str, int]:
    """Read ``name value`` lines; blank lines and ``#`` comments are ignored."""
    table: dict[str, int] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'name value', got {line.strip()!r}", lineno)
        try:
            table[parts[0]] = int(parts[1])
        except ValueError:
            raise ParseError(f"value {parts[1]!r} is not an integer", lineno) from None
    return table


def emit_trace(report: RunReport, path: str | Path) -> int:
    """Write ``iteration,current_cost,best_cost`` rows; returns 0 or 1 on I/O failure."""
    try:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(TRACE_HEADER)
            writer.writerows(report.trace)
    except OSError as exc:
        log.error("cannot write trace %s: %s", path, exc)
        return 1
    return 0


class ValidationFailure(RuntimeError):
    pass


def _run_one(task):
    path, spec, seed, trace_template = task
    instance = load_instance(path)
    t0 = time.perf_counter()
    report = spec.run(instance, seed)
    seconds = time.perf_counter() - t0
    schedule = serial_sgs(report.best_list, instance)
    problems = validate_schedule(instance, schedule)
    if schedule.makespan != report.best_makespan:
        problems.append(f"decoded makespan {schedule.makespan} != reported {report.best_makespan}")
    if problems:
        raise ValidationFailure("; ".join(map(str, problems[:5])))
    trace_path = None
    if trace_template:
        trace_path = trace_template.format(instance=instance.name, algorithm=spec.slug, seed=seed)
        if emit_trace(report, trace_path):
            raise OSError(f"trace write failed: {trace_path}")
    return instance.name, report.best_makespan, report.iterations, report.evaluations, seconds


def run_benchmark(
    instance_paths: Sequence[str | Path],
    algorithms: Sequence[AlgorithmSpec],
    seeds: Iterable[int],
    out_path: str | Path,
    trace_template: str | None = None,
    best_known: dict[str, int] | None = None,
    jobs: int = 1,
) -> tuple[int, list[BenchmarkRow]]:
    """Run every (instance, algorithm, seed) triple; returns (exit status, rows)."""
    best_known = best_known or {}
    seeds = list(seeds)
    tasks = [(str(p), spec, seed, trace_template) for p in instance_paths for spec in algorithms for seed in seeds]
    status = 0
    rows: list[BenchmarkRow] = []

    def collect(task, outcome):
        nonlocal status
        path, spec, seed, _ = task
        if isinstance(outcome, Exception):
            status = 1
            log.error("%s / %s / seed %d failed: %s", path, spec.label, seed, outcome)
            return
        name, best, iterations, decodes, seconds = outcome
        rows.append(BenchmarkRow(name, spec.label, best, best_known.get(name), iterations, decodes, seconds, seed))
        log.info("%s %s seed=%d best=%d (%.1fs)", name, spec.label, seed, best, seconds)

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, t) for t in tasks]
            for task, fut in zip(tasks, futures):
                try:
                    collect(task, fut.result())
                except Exception as exc:  # reported per triple
                    collect(task, exc)
    else:
        for task in tasks:
            try:
                collect(task, _run_one(task))
            except Exception as exc:
                collect(task, exc)

    rows.sort(key=lambda r: (r.instance, r.algorithm, r.seed))
    try:
        out = Path(out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RESULT_HEADER)
            writer.writerows(r.cells() for r in rows)
    except OSError as exc:
        log.error("cannot write results %s: %s", out_path, exc)
        status = 1
    return status, rows


def summarize(rows: Sequence[BenchmarkRow]) -> str:
    """Best value per (instance, algorithm), laid out like the result tables."""
    groups: dict[tuple[str, str], list[BenchmarkRow]] = {}
    for r in rows:
        groups.setdefault((r.instance, r.algorithm), []).append(r)
    lines = []
    current = None
    for (inst, alg), grp in groups.items():
        if inst != current:
            bk = grp[0].best_known
            lines.append(f"\n{inst}" + ("" if bk is None else f" (best known {bk})"))
            lines.append(f"{'Heuristics':45s} {'Best':>6s} {'Mean':>8s} {'t(s)':>8s}")
            current = inst
        best = min(r.best for r in grp)
        mean = sum(r.best for r in grp) / len(grp)
        secs = sum(r.seconds for r in grp) / len(grp)
        lines.append(f"{alg:45s} {best:6d} {mean:8.2f} {secs:8.1f}")
    return "\n".join(lines).lstrip("\n")
