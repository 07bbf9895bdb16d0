"""Time the compiled and pure-Python decoders on the same workloads.

    python benchmarks/bench_backends.py [--n 90] [--repeat 3]
"""
from __future__ import annotations

import argparse
import random
import time

from rcpsp_rar import backend
from rcpsp_rar.construction import feasible_insert_positions
from rcpsp_rar.instance import load_instance, random_instance
from rcpsp_rar.meta import swap_neighborhood
from rcpsp_rar.rar import SearchConfig, rar_search


def _timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads(instance, seed):
    rng = random.Random(seed)
    order = list(instance.topological_order)
    lists = []
    for _ in range(200):
        cur = order[:]
        moves = swap_neighborhood(cur, instance.closure)
        for mv in rng.sample(moves, min(20, len(moves))):
            if mv in swap_neighborhood(cur, instance.closure):
                cur = mv.apply(cur)
        lists.append(cur)
    inserts = []
    for cur in lists[:50]:
        a = rng.choice(cur[1:-1])
        partial = [j for j in cur if j != a]
        w = feasible_insert_positions(partial, a, instance.closure)
        inserts.append((partial, a, w.low, w.high))
    pairs = [(mv.p, mv.q) for mv in swap_neighborhood(order, instance.closure)]

    def run(name):
        backend.set_backend(name)
        dec = backend.build_decoder(instance, name)
        return {
            "decode x200": lambda: [dec.makespan(o) for o in lists],
            "best_insertion x50": lambda: [dec.best_insertion(p, a, lo, hi)[0] for p, a, lo, hi in inserts],
            "swap_costs (full nbhd)": lambda: dec.swap_costs(order, pairs),
            "rar_search 100 it": lambda: rar_search(instance, SearchConfig(max_iterations=100, seed=seed)).best_makespan,
        }

    return run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instance", default=None, help="PSPLIB .sm file (default: random instance)")
    ap.add_argument("--n", type=int, default=90, help="activities in the random instance")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if args.instance:
        instance = load_instance(args.instance)
    else:
        instance = random_instance(args.n, random.Random(args.seed), n_resources=4, density=0.05, max_capacity=10)
    names = [b for b in ("cython", "python") if b in backend.BACKENDS]
    if len(names) < 2:
        print("compiled kernel not built; only the python backend is available")
    run = workloads(instance, args.seed)
    suites = {name: run(name) for name in names}
    print(f"instance: {instance.name or 'random'} ({instance.real_count} activities)")
    print(f"{'workload':26s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for key in suites[names[0]]:
        times, results = [], []
        for name in names:
            backend.set_backend(name)
            t, out = _timed(suites[name][key], args.repeat)
            times.append(t)
            results.append(out)
        assert all(r == results[0] for r in results), f"backends disagree on {key}"
        line = f"{key:26s}" + "".join(f"{t:11.4f}s" for t in times)
        if len(times) == 2:
            line += f"{times[1] / times[0]:11.1f}x"
        print(line)
    backend.set_backend(backend.DEFAULT_BACKEND)


if __name__ == "__main__":
    main()
