"""Compiled and pure-Python kernels must agree bit for bit."""
import random

import pytest

from oracles import grid_decode, random_feasible_list
from rcpsp_rar import backend
from rcpsp_rar.backend import build_decoder
from rcpsp_rar.construction import feasible_insert_positions
from rcpsp_rar.instance import random_instance
from rcpsp_rar.meta import swap_neighborhood

requires_kernel = pytest.mark.skipif("cython" not in backend.BACKENDS, reason="compiled kernel not built")


def test_default_backend_is_compiled_when_built():
    assert backend.DEFAULT_BACKEND in backend.BACKENDS
    if "cython" in backend.BACKENDS:
        assert backend.DEFAULT_BACKEND == "cython"


def test_unknown_backend():
    with pytest.raises(ValueError):
        backend.set_backend("fortran")


@pytest.mark.parametrize("name", sorted(backend.BACKENDS))
def test_insertion_matches_oracle(name):
    rng = random.Random(11)
    for _ in range(60):
        inst = random_instance(rng.randint(2, 9), rng)
        dec = build_decoder(inst, name)
        order = list(random_feasible_list(inst, rng))
        a = rng.choice(order[1:-1])
        partial = [j for j in order if j != a]
        w = feasible_insert_positions(partial, a, inst.closure)
        best, positions, evaluated = dec.best_insertion(partial, a, w.low, w.high)
        costs = {p: grid_decode(partial[:p] + [a] + partial[p:], inst, transitive=True)[1] for p in range(w.low, w.high + 1)}
        assert best == min(costs.values())
        assert positions == [p for p, c in costs.items() if c == best]
        assert evaluated == len(costs)


@pytest.mark.parametrize("name", sorted(backend.BACKENDS))
def test_partial_decode_uses_member_closure(name):
    rng = random.Random(3)
    for _ in range(40):
        inst = random_instance(rng.randint(2, 9), rng, density=0.5)
        order = random_feasible_list(inst, rng)
        partial = [j for j in order if rng.random() < 0.6]
        starts, mk = build_decoder(inst, name).decode(partial)
        ref, ref_mk = grid_decode(partial, inst, transitive=True)
        assert mk == ref_mk
        assert all(starts[j] == ref[j] for j in partial)


@requires_kernel
def test_backends_agree():
    rng = random.Random(5)
    for _ in range(80):
        inst = random_instance(rng.randint(1, 20), rng)
        c, p = build_decoder(inst, "cython"), build_decoder(inst, "python")
        order = list(random_feasible_list(inst, rng))
        assert c.decode(order) == p.decode(order)
        pairs = [(m.p, m.q) for m in swap_neighborhood(order, inst.closure)]
        cutoff = rng.choice([-1, c.makespan(order) - 1])
        assert c.swap_costs(order, pairs, cutoff) == p.swap_costs(order, pairs, cutoff)
        if len(order) > 2:
            a = rng.choice(order[1:-1])
            partial = [j for j in order if j != a]
            w = feasible_insert_positions(partial, a, inst.closure)
            assert c.best_insertion(partial, a, w.low, w.high) == p.best_insertion(partial, a, w.low, w.high)


@pytest.mark.parametrize("name", sorted(backend.BACKENDS))
def test_swap_costs_match_full_decode(name):
    rng = random.Random(8)
    for _ in range(30):
        inst = random_instance(rng.randint(2, 9), rng)
        dec = build_decoder(inst, name)
        order = list(random_feasible_list(inst, rng))
        moves = swap_neighborhood(order, inst.closure)
        costs = dec.swap_costs(order, [(m.p, m.q) for m in moves])
        for m, cost in zip(moves, costs):
            assert cost == grid_decode(m.apply(order), inst)[1]


@pytest.mark.parametrize("name", sorted(backend.BACKENDS))
def test_swap_cutoff_reports_above_cutoff(name):
    rng = random.Random(9)
    inst = random_instance(9, rng, density=0.1)
    dec = build_decoder(inst, name)
    order = list(random_feasible_list(inst, rng))
    pairs = [(m.p, m.q) for m in swap_neighborhood(order, inst.closure)]
    full = dec.swap_costs(order, pairs)
    cut = min(full)
    pruned = dec.swap_costs(order, pairs, cut)
    for f, p in zip(full, pruned):
        assert p == f if f <= cut else p == cut + 1


@requires_kernel
def test_search_results_identical_across_backends(j301):
    from rcpsp_rar.rar import SearchConfig, rar_search

    reports = {}
    for name in ("cython", "python"):
        backend.set_backend(name)
        try:
            fresh = type(j301)(**{f: getattr(j301, f) for f in j301.__dataclass_fields__})
            reports[name] = rar_search(fresh, SearchConfig(m_remove=3, max_iterations=15, seed=4, bnb_budget=2000))
        finally:
            backend.set_backend(backend.DEFAULT_BACKEND)
    assert reports["cython"].trace == reports["python"].trace
    assert reports["cython"].best_list == reports["python"].best_list
    assert reports["cython"].evaluations == reports["python"].evaluations
