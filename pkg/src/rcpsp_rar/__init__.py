"""RCPSP heuristics: randomized best-insertion construction, remove-and-reinsert
local search, and tabu / annealing / hill-climbing baselines."""
from .backend import active_backend, set_backend
from .construction import best_insertion_construct, bnb_exact
from .instance import Instance, critical_path_lower_bound, load_instance, parse_psplib, transitive_closure
from .meta import MetaConfig, hill_climbing, simulated_annealing, tabu_search
from .rar import RunReport, SearchConfig, rar_search
from .schedule import Schedule, serial_sgs, validate_schedule

__all__ = [
    "Instance",
    "MetaConfig",
    "RunReport",
    "Schedule",
    "SearchConfig",
    "active_backend",
    "best_insertion_construct",
    "bnb_exact",
    "critical_path_lower_bound",
    "hill_climbing",
    "load_instance",
    "parse_psplib",
    "rar_search",
    "serial_sgs",
    "set_backend",
    "simulated_annealing",
    "tabu_search",
    "transitive_closure",
    "validate_schedule",
]
