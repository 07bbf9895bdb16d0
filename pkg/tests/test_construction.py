import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import small_instances
from oracles import exhaustive_optimum, grid_decode, random_feasible_list
from rcpsp_rar.construction import (
    ConfigError,
    best_insertion_construct,
    bnb_exact,
    default_construction_m,
    feasible_insert_positions,
    induced_subinstance,
    select_seed_subset,
)
from rcpsp_rar.instance import critical_path_lower_bound, make_instance, random_instance
from rcpsp_rar.schedule import is_precedence_feasible_list, serial_sgs, validate_schedule


def test_seed_subset_bounds(j301):
    rng = random.Random(0)
    assert select_seed_subset(j301, 30, rng) == frozenset(range(2, 32))
    assert len(select_seed_subset(j301, 1, rng)) == 1
    for bad in (0, 31):
        with pytest.raises(ConfigError):
            select_seed_subset(j301, bad, rng)


def test_seed_subset_deterministic(j301):
    a = select_seed_subset(j301, 10, random.Random(42))
    b = select_seed_subset(j301, 10, random.Random(42))
    assert a == b and j301.source not in a and j301.sink not in a


def test_default_construction_m():
    assert default_construction_m(90) == 10
    assert default_construction_m(120) == 12
    assert default_construction_m(300) == 25
    assert default_construction_m(30) == 10
    assert default_construction_m(4) == 4


def test_induced_subinstance(chain3):
    sub = induced_subinstance(chain3, {2, 4}, chain3.closure)
    assert sub.real_count == 2
    assert 3 in sub.successors[1]  # chain endpoints keep their order

    free = make_instance([1, 2, 3], [[1]] * 3, [1])
    sub = induced_subinstance(free, {2, 4}, free.closure)
    assert sub.closure.succs(2) == {sub.sink}

    full = induced_subinstance(chain3, {2, 3, 4}, chain3.closure)
    assert full.durations == chain3.durations
    assert full.closure == chain3.closure


def test_bnb_trivial_cases():
    one = make_instance([4], [[1]], [1])
    order, optimal = bnb_exact(one)
    assert optimal and serial_sgs(order, one).makespan == 4
    two = make_instance([3, 2], [[1], [1]], [1])
    order, optimal = bnb_exact(two)
    assert optimal and serial_sgs(order, two).makespan == 5


def test_bnb_j301_optimum(j301):
    order, optimal = bnb_exact(j301)
    assert optimal
    # PSPLIB lists 43 as the optimum of j30 parameter 1 instance 1
    assert serial_sgs(order, j301).makespan == 43


def test_bnb_budget_flag(j301):
    order, optimal = bnb_exact(j301, budget=5)
    assert not optimal
    assert is_precedence_feasible_list(order, j301.closure)
    assert serial_sgs(order, j301).makespan >= 43


def test_bnb_matches_enumeration():
    for inst in small_instances(40, seed=17, max_real=7):
        order, optimal = bnb_exact(inst)
        assert optimal
        assert grid_decode(order, inst)[1] == exhaustive_optimum(inst), inst


def test_window_chain(chain3):
    w = feasible_insert_positions([1, 2, 4, 5], 3, chain3.closure)
    assert (w.low, w.high) == (2, 2)


def test_window_unconstrained():
    free = make_instance([1, 2, 3], [[1]] * 3, [1])
    w = feasible_insert_positions([3, 4], 2, free.closure)
    assert (w.low, w.high) == (0, 2)


@settings(max_examples=120, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_window_exactly_feasible_positions(seed):
    rng = random.Random(seed)
    inst = random_instance(rng.randint(1, 10), rng)
    order = random_feasible_list(inst, rng)
    a = rng.choice(order)
    partial = [j for j in order if j != a and rng.random() < 0.7]
    w = feasible_insert_positions(partial, a, inst.closure)
    for p in range(len(partial) + 1):
        ok = is_precedence_feasible_list(partial[:p] + [a] + partial[p:], inst.closure)
        assert ok == (p in w)


def test_construct_full_seed_equals_bnb():
    inst = random_instance(6, random.Random(1))
    built = best_insertion_construct(inst, 6, random.Random(2))
    assert built == bnb_exact(inst)[0]


def test_construct_chain_project():
    durs = [2, 5, 1, 4, 3]
    chain = make_instance(durs, [[1]] * 5, [2], [(i, i + 1) for i in range(1, 5)])
    for seed in range(5):
        built = best_insertion_construct(chain, 2, random.Random(seed))
        assert serial_sgs(built, chain).makespan == sum(durs)


def test_construct_j301(j301):
    for seed in range(5):
        stats = {}
        built = best_insertion_construct(j301, 10, random.Random(seed), stats=stats)
        assert is_precedence_feasible_list(built, j301.closure)
        s = serial_sgs(built, j301)
        assert validate_schedule(j301, s) == []
        assert s.makespan >= 43
        assert stats["evaluations"] > 0


def test_construct_deterministic(j301):
    a = best_insertion_construct(j301, 10, random.Random(3))
    b = best_insertion_construct(j301, 10, random.Random(3))
    assert a == b


def test_construct_intermediate_partials_feasible(j301, monkeypatch):
    import rcpsp_rar.construction as mod

    seen = []
    real = mod.insert_best

    def spy(partial, activity, instance, closure, rng):
        out = real(partial, activity, instance, closure, rng)
        seen.append(is_precedence_feasible_list(out[0], closure))
        return out

    monkeypatch.setattr(mod, "insert_best", spy)
    mod.best_insertion_construct(j301, 10, random.Random(0))
    assert len(seen) == 20 and all(seen)


def test_construct_respects_lower_bound():
    for inst in small_instances(30, seed=8):
        built = best_insertion_construct(inst, min(inst.real_count, 3), random.Random(0))
        assert serial_sgs(built, inst).makespan >= critical_path_lower_bound(inst)
