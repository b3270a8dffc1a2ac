"""Adaptive multi-gradient loops: plain, per preference subproblem, and batched over a front.

Each iteration computes the common descent direction ``s``, always takes the
step ``x + alpha * s``, and then uses the sufficient-decrease test only to
decide whether ``alpha`` shrinks for the next iteration.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ._validation import check_scalar
from .direction import (
    DEFAULT_THETA_TOL,
    ActiveSetConfig,
    constrained_direction,
    is_pareto_stationary,
    steepest_direction,
)
from .exceptions import EvaluationError, InputError, QPConvergenceError, RestorationError, StalledError
from .metrics import nondominated_indices
from .preferences import RestorationConfig, restore_feasibility
from .simplex_qp import DEFAULT_TOL
from .stepsize import StepConfig, sufficient_decrease, update

__all__ = [
    "SolveConfig",
    "IterationRecord",
    "SolveTrace",
    "FrontResult",
    "Termination",
    "solve_unconstrained",
    "solve_with_preferences",
    "solve_front",
    "effective_scalarization",
]

logger = logging.getLogger(__name__)

EPSILON_SHRINK = 0.1


class Termination:
    STATIONARY = "stationary"
    MAX_ITERS = "max_iters"
    STALLED = "stalled"
    RESTORATION_FAILED = "restoration_failed"
    EVALUATION_ERROR = "evaluation_error"
    QP_FAILED = "qp_failed"


@dataclass(frozen=True)
class SolveConfig:
    step: StepConfig = field(default_factory=StepConfig)
    theta_tol: float = DEFAULT_THETA_TOL
    qp_tol: float = DEFAULT_TOL
    max_iters: int = 1000
    active_set: ActiveSetConfig = field(default_factory=ActiveSetConfig)
    restoration: RestorationConfig = field(default_factory=RestorationConfig)
    reject_on_fail: bool = False
    seed: int = 0

    def __post_init__(self):
        check_scalar(self.theta_tol, "theta_tol", low=0.0, include_low=False)
        check_scalar(self.qp_tol, "qp_tol", low=0.0, include_low=False)
        check_scalar(self.max_iters, "max_iters", low=1, integer=True)
        check_scalar(self.seed, "seed", low=0, integer=True)


@dataclass(frozen=True)
class IterationRecord:
    """State at the start of one iteration.

    ``passed`` is ``None`` on the terminal record, where no step was taken.
    """

    subproblem: int
    iteration: int
    x: np.ndarray
    F: np.ndarray
    alpha: float
    theta: float
    s: np.ndarray
    objective_weights: np.ndarray
    constraint_weights: np.ndarray
    active_set: tuple
    passed: Optional[bool]

    def to_dict(self):
        return {
            "subproblem": self.subproblem,
            "iter": self.iteration,
            "x": self.x.tolist(),
            "F": self.F.tolist(),
            "alpha": self.alpha,
            "theta": self.theta,
            "objective_weights": self.objective_weights.tolist(),
            "constraint_weights": self.constraint_weights.tolist(),
            "active_set": list(self.active_set),
            "passed": self.passed,
        }


@dataclass
class SolveTrace:
    subproblem: int
    iterations: list
    termination: str
    effective_scalarization: Optional[np.ndarray] = None
    restoration_steps: int = 0
    message: str = ""

    @property
    def final(self):
        return self.iterations[-1] if self.iterations else None

    @property
    def n_steps(self):
        return sum(1 for rec in self.iterations if rec.passed is not None)

    @property
    def succeeded(self):
        return self.termination in (Termination.STATIONARY, Termination.MAX_ITERS)


@dataclass
class FrontResult:
    points: list
    traces: list

    @property
    def objectives(self):
        rows = [f for _, f in self.points if f is not None]
        return np.array(rows) if rows else np.zeros((0, 0))

    def nondominated(self):
        """Indices into ``points`` of the non-dominated terminal objective vectors."""
        valid = [i for i, (_, f) in enumerate(self.points) if f is not None]
        if not valid:
            return []
        keep = nondominated_indices(np.array([self.points[i][1] for i in valid]))
        return [valid[i] for i in keep]


def effective_scalarization(objective_weights, constraint_weights, prefs, k, active_set):
    """Per-objective weights ``lambda_j + sum_p gamma_p (u_pj - u_kj)``.

    ``-J^T`` of the result reproduces the descent direction exactly.
    """
    weights = np.array(objective_weights, dtype=np.float64)
    if prefs is not None and len(active_set):
        diffs = prefs.vectors[list(active_set)] - prefs.vectors[k]
        weights = weights + np.asarray(constraint_weights) @ diffs
    return weights


def _run_loop(problem, x, cfg, direction_fn, subproblem, prefs=None, k=None, repair_fn=None):
    """Main iteration shared by both variants.

    ``repair_fn(x, f_val)`` is consulted at stationary points; it returns
    ``None`` to accept the point or a replacement start from which the loop
    continues with the current step size.
    """
    step_cfg = cfg.step
    state = step_cfg.initial_state()
    records = []
    termination = Termination.MAX_ITERS
    message = ""
    repair_steps = 0

    def snapshot(it, x, f_val, dr, passed):
        return IterationRecord(subproblem, it, x, f_val, state.alpha, dr.theta, dr.s,
                               dr.objective_weights, dr.constraint_weights, dr.active_set, passed)

    try:
        f_val = problem.evaluate(x)
    except EvaluationError as exc:
        return SolveTrace(subproblem, [], Termination.EVALUATION_ERROR, message=str(exc))

    it = 0
    while True:
        try:
            jac = problem.jacobian(x)
            dr = direction_fn(x, f_val, jac)
        except EvaluationError as exc:
            termination, message = Termination.EVALUATION_ERROR, str(exc)
            break
        except QPConvergenceError as exc:
            termination, message = Termination.QP_FAILED, str(exc)
            break

        if is_pareto_stationary(dr, cfg.theta_tol):
            repaired = None
            if repair_fn is not None and it < cfg.max_iters:
                try:
                    repaired = repair_fn(x, f_val)
                except RestorationError as exc:
                    records.append(snapshot(it, x, f_val, dr, None))
                    termination, message = Termination.RESTORATION_FAILED, str(exc)
                    break
                except (EvaluationError, QPConvergenceError) as exc:
                    records.append(snapshot(it, x, f_val, dr, None))
                    termination, message = Termination.EVALUATION_ERROR, str(exc)
                    break
            if repaired is None:
                records.append(snapshot(it, x, f_val, dr, None))
                termination = Termination.STATIONARY
                break
            x, n_rep = repaired
            repair_steps += n_rep
            f_val = problem.evaluate(x)
            continue
        if it >= cfg.max_iters:
            records.append(snapshot(it, x, f_val, dr, None))
            termination = Termination.MAX_ITERS
            break

        step_vec = state.alpha * dr.s
        x_new = x + step_vec
        try:
            f_new = problem.evaluate(x_new)
        except EvaluationError as exc:
            records.append(snapshot(it, x, f_val, dr, None))
            termination, message = Termination.EVALUATION_ERROR, str(exc)
            break
        passed = sufficient_decrease(f_val, f_new, jac, step_vec, step_cfg.sigma)
        records.append(snapshot(it, x, f_val, dr, passed))
        try:
            state = update(state, passed, step_cfg)
        except StalledError as exc:
            termination, message = Termination.STALLED, str(exc)
            if not cfg.reject_on_fail:
                x, f_val = x_new, f_new
            # terminal record at the point the loop stopped, with the last valid alpha
            try:
                dr = direction_fn(x, f_val, problem.jacobian(x))
                records.append(snapshot(it + 1, x, f_val, dr, None))
            except (EvaluationError, QPConvergenceError):
                pass
            break
        if passed or not cfg.reject_on_fail:
            x, f_val = x_new, f_new
        it += 1

    trace = SolveTrace(subproblem, records, termination, message=message, restoration_steps=repair_steps)
    if records:
        last = records[-1]
        trace.effective_scalarization = effective_scalarization(
            last.objective_weights, last.constraint_weights, prefs, k, last.active_set)
    if termination not in (Termination.STATIONARY, Termination.MAX_ITERS):
        logger.info("subproblem %d ended with %s: %s", subproblem, termination, message)
    return trace


def solve_unconstrained(problem, x0, cfg=None, subproblem=0):
    """Adaptive multi-gradient descent from ``x0`` with no preference constraints."""
    cfg = SolveConfig() if cfg is None else cfg
    x = problem.check_point(x0).copy()

    def direction_fn(x, f_val, jac):
        return steepest_direction(problem, x, cfg.qp_tol, jac=jac)

    return _run_loop(problem, x, cfg, direction_fn, subproblem)


def solve_with_preferences(problem, prefs, k, x0_raw, cfg=None, subproblem=None):
    """Restore feasibility for subproblem ``k``, then run the constrained loop."""
    cfg = SolveConfig() if cfg is None else cfg
    if prefs.m != problem.m:
        raise InputError(f"preferences have {prefs.m} components, problem has {problem.m} objectives")
    if not 0 <= k < len(prefs):
        raise InputError(f"subproblem index {k} out of range for K={len(prefs)}")
    subproblem = k if subproblem is None else subproblem
    x = problem.check_point(x0_raw).copy()
    try:
        x, n_restore = restore_feasibility(problem, prefs, k, x, cfg.restoration, cfg.qp_tol)
    except RestorationError as exc:
        return SolveTrace(subproblem, [], Termination.RESTORATION_FAILED, message=str(exc))
    except QPConvergenceError as exc:
        return SolveTrace(subproblem, [], Termination.QP_FAILED, message=str(exc))

    binding_tol = cfg.restoration.tol

    def direction_fn(x, f_val, jac):
        # A zero direction caused by near-active but slack constraints is not
        # stationarity; shrink epsilon until only binding constraints remain.
        active_cfg = cfg.active_set
        while True:
            dr = constrained_direction(problem, prefs, k, x, active_cfg, cfg.qp_tol, f_val=f_val, jac=jac)
            if not dr.active_set or not is_pareto_stationary(dr, cfg.theta_tol):
                return dr
            g = prefs.constraint_values(k, f_val)
            if np.all(g[list(dr.active_set)] >= -binding_tol) or active_cfg.threshold(f_val) <= binding_tol:
                return dr
            active_cfg = replace(active_cfg, epsilon=active_cfg.epsilon * EPSILON_SHRINK)

    def repair_fn(x, f_val):
        # stationary for the objectives but outside the region: restore and go on
        g = prefs.constraint_values(k, f_val)
        if g.max() <= cfg.active_set.threshold(f_val):
            return None
        logger.debug("subproblem %d: stationary point violates G by %.3e, restoring", subproblem, g.max())
        return restore_feasibility(problem, prefs, k, x, cfg.restoration, cfg.qp_tol)

    trace = _run_loop(problem, x, cfg, direction_fn, subproblem, prefs, k, repair_fn)
    trace.restoration_steps += n_restore
    return trace


def _front_from_traces(traces):
    points = []
    for tr in traces:
        fin = tr.final
        points.append((fin.x, fin.F) if fin is not None else (None, None))
    return FrontResult(points, traces)


def solve_front(problem, prefs, starts, cfg=None, n_jobs=None):
    """Solve every preference subproblem; start ``i`` is paired with subproblem ``i mod K``.

    With ``prefs=None`` each start runs the unconstrained loop instead. Failed
    subproblems keep their trace and a ``None`` point; the batch never aborts.
    Results do not depend on ``n_jobs``.
    """
    cfg = SolveConfig() if cfg is None else cfg
    starts = np.atleast_2d(np.asarray(starts, dtype=np.float64))
    if prefs is not None and len(starts) % len(prefs) != 0:
        raise InputError(f"{len(starts)} starts is not a multiple of K={len(prefs)}")

    def one(i):
        if prefs is None:
            return solve_unconstrained(problem, starts[i], cfg, subproblem=i)
        return solve_with_preferences(problem, prefs, i % len(prefs), starts[i], cfg, subproblem=i)

    if n_jobs in (None, 1):
        traces = [one(i) for i in range(len(starts))]
    else:
        from joblib import Parallel, delayed

        traces = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(one)(i) for i in range(len(starts)))
    return _front_from_traces(traces)
