"""Adaptive multi-gradient descent for smooth multi-objective problems.

Public API: problem definitions and benchmarks, the min-norm subproblem,
descent directions, the adaptive step-size rule, preference subproblems,
front-level solvers, hypervolume metrics, experiment plumbing and
estimator-style wrappers.
"""

from .benchmarks import (
    BENCHMARKS,
    BenchmarkSpec,
    get_benchmark,
    make_ex1,
    make_ex2,
    make_ex3,
    make_ex4,
    make_synthetic_multitask,
    multitask_logistic_problem,
)
from .direction import (
    ActiveSetConfig,
    DirectionResult,
    constrained_direction,
    direction_from_gradients,
    is_pareto_stationary,
    steepest_direction,
)
from .estimators import AdaptiveMultiGradient, MultiTaskLogisticRegression, PreferenceAdaptiveMultiGradient
from .exceptions import (
    AmgradError,
    EvaluationError,
    InputError,
    QPConvergenceError,
    RestorationError,
    StalledError,
)
from .experiment import ExperimentConfig, compare, run, run_experiment
from .metrics import (
    dominates,
    grid_pareto_oracle,
    hypervolume,
    hypervolume_monte_carlo,
    nondominated_filter,
    nondominated_indices,
    reference_point_from_front,
)
from .preferences import (
    PreferenceSet,
    RestorationConfig,
    explicit_preferences,
    restore_feasibility,
    simplex_grid_preferences,
    trig_preferences,
)
from .problem import ProblemDefinition, row_max_norm
from .simplex_qp import QpResult, min_norm_in_hull
from .solver import (
    FrontResult,
    IterationRecord,
    SolveConfig,
    SolveTrace,
    Termination,
    effective_scalarization,
    solve_front,
    solve_unconstrained,
    solve_with_preferences,
)
from .stepsize import StepConfig, StepState, sufficient_decrease, update

import sys as _sys

__version__ = "0.1.0"

__all__ = sorted(
    name for name, value in globals().items()
    if not name.startswith("_") and not isinstance(value, type(_sys))
)
