"""Robust Min-q-Multiset Multicover with budgeted demand uncertainty."""

from .core import (BoundViolation, Instance, InstanceError, Scenario, Solution, UncoverableRegion,
                   make_scenario, tilde_d, trivial_bounds, upper_bound_solution,
                   validate_and_normalize)
from .milp import SolveLimits, SolverLimit
from .robust import (RobustRun, RunStatus, average_case_value, is_robust_feasible, solve_asf,
                     solve_setf, worst_case_value)

__version__ = "0.1.0"
