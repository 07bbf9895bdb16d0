"""Command-line entry point: ``rcpsp-rar --instance j90/*.sm --algorithm rar --m 10``."""
from __future__ import annotations

import argparse
import glob
import logging
import sys
from pathlib import Path

from . import backend
from .bench import TABLE_LINEUP, AlgorithmSpec, load_best_known, run_benchmark, summarize
from .rar import DEFAULT_STAGNATION


def _expand(patterns: list[str]) -> list[str]:
    paths: list[str] = []
    for pat in patterns:
        hits = sorted(glob.glob(pat))
        if not hits and not glob.has_magic(pat):
            hits = [pat]
        paths.extend(hits)
    return paths


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rcpsp-rar", description=__doc__)
    ap.add_argument("--instance", action="append", default=[], metavar="PATH|GLOB",
                    help="PSPLIB .sm file or glob (repeatable)")
    ap.add_argument("--algorithm", action="append", default=[], metavar="NAME",
                    help="rar, rar:N, tabu-mm, tabu-rar, sa-mm, sa-rar, hc-mm, hc-rar, "
                         "or 'lineup' for the eight-row comparison table (repeatable; default rar)")
    ap.add_argument("--iterations", type=int, default=3000)
    ap.add_argument("--m", type=int, default=None, help="activities removed per iteration (default n/10)")
    ap.add_argument("--construction-m", type=int, default=None,
                    help="seed subset size for the exact start (default clamp(n/10, 10, 25))")
    ap.add_argument("--stagnation", type=int, default=DEFAULT_STAGNATION,
                    help="non-improving iterations before switching to the candidate")
    ap.add_argument("--seed", type=int, action="append", default=[], help="RNG seed (repeatable; default 0..4)")
    ap.add_argument("--best-known", type=Path, default=None, help="two-column 'name value' file")
    ap.add_argument("--out", type=Path, default=Path("results.csv"))
    ap.add_argument("--trace", default=None,
                    help="trace path template, e.g. 'traces/{instance}_{algorithm}_{seed}.csv'")
    ap.add_argument("--bnb-budget", type=int, default=10**6, help="node limit for the exact seed search")
    ap.add_argument("--rar-samples", type=int, default=10,
                    help="sampled RAR neighbors per tabu / hill-climbing step")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes")
    ap.add_argument("--backend", choices=sorted(backend.BACKENDS), default=backend.DEFAULT_BACKEND)
    ap.add_argument("-q", "--quiet", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(levelname)s %(message)s")
    backend.set_backend(args.backend)

    defaults = dict(
        iterations=args.iterations,
        m_remove=args.m,
        construction_m=args.construction_m,
        stagnation=args.stagnation,
        bnb_budget=args.bnb_budget,
        rar_samples=args.rar_samples,
    )
    names = []
    for a in args.algorithm or ["rar"]:
        names.extend(TABLE_LINEUP if a == "lineup" else [a])
    try:
        specs = [AlgorithmSpec.parse(a, **defaults) for a in names]
        best_known = load_best_known(args.best_known) if args.best_known else {}
    except (ValueError, OSError) as exc:
        print(f"rcpsp-rar: {exc}", file=sys.stderr)
        return 2
    if args.iterations < 1:
        print("rcpsp-rar: --iterations must be >= 1", file=sys.stderr)
        return 2

    seeds = args.seed or list(range(5))
    status, rows = run_benchmark(_expand(args.instance), specs, seeds, args.out, args.trace, best_known, args.jobs)
    if rows and not args.quiet:
        print(summarize(rows))
    return status


if __name__ == "__main__":
    sys.exit(main())
