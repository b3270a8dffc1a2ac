"""Steepest common descent direction for the plain and preference-constrained problems."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_scalar
from .exceptions import InputError
from .simplex_qp import DEFAULT_TOL, min_norm_in_hull

__all__ = [
    "ActiveSetConfig",
    "DirectionResult",
    "steepest_direction",
    "constrained_direction",
    "direction_from_gradients",
    "is_pareto_stationary",
    "DEFAULT_THETA_TOL",
]

DEFAULT_THETA_TOL = 1e-8


@dataclass(frozen=True)
class ActiveSetConfig:
    """Activation threshold for preference constraints.

    A constraint ``p`` joins the direction subproblem when
    ``G_p(x) >= -threshold``. With ``relative=True`` the threshold is
    ``epsilon * (1 + ||F(x)||_inf)``.
    """

    epsilon: float = 1e-3
    relative: bool = True

    def __post_init__(self):
        check_scalar(self.epsilon, "epsilon", low=0.0, include_low=False)

    def threshold(self, f_val):
        if not self.relative:
            return self.epsilon
        return self.epsilon * (1.0 + float(np.max(np.abs(f_val))))


@dataclass(frozen=True)
class DirectionResult:
    s: np.ndarray
    theta: float
    objective_weights: np.ndarray
    constraint_weights: np.ndarray
    active_set: tuple

    @property
    def norm(self):
        return float(np.linalg.norm(self.s))


def direction_from_gradients(jac, constraint_grads=None, active_set=(), qp_tol=DEFAULT_TOL):
    """Negative min-norm point of the objective (and constraint) gradient hull."""
    jac = np.asarray(jac, dtype=np.float64)
    m = jac.shape[0]
    bundle = jac if constraint_grads is None or len(constraint_grads) == 0 else np.vstack([jac, constraint_grads])
    qp = min_norm_in_hull(bundle, tol=qp_tol)
    lam = qp.weights[:m]
    gam = qp.weights[m:]
    # rebuilt from the stored weights so the identity s = -(J^T lam + C^T gam) is exact
    s = -(qp.weights @ bundle)
    theta = -0.5 * float(s @ s)
    return DirectionResult(s=s, theta=theta, objective_weights=lam, constraint_weights=gam,
                           active_set=tuple(int(p) for p in active_set))


def steepest_direction(problem, x, qp_tol=DEFAULT_TOL, jac=None):
    """Direction ``s(x)`` and value ``Theta(x) = -||s||^2 / 2`` without constraints."""
    if jac is None:
        jac = problem.jacobian(x)
    return direction_from_gradients(jac, qp_tol=qp_tol)


def constrained_direction(problem, prefs, k, x, cfg=None, qp_tol=DEFAULT_TOL, *, f_val=None, jac=None):
    """Direction for subproblem ``k`` with near-active preference constraints bundled in.

    The constraint ``p == k`` is identically zero and never enters the bundle.
    """
    cfg = ActiveSetConfig() if cfg is None else cfg
    if not 0 <= k < len(prefs):
        raise InputError(f"subproblem index {k} out of range for {len(prefs)} preferences")
    if f_val is None:
        f_val = problem.evaluate(x)
    if jac is None:
        jac = problem.jacobian(x)
    g_vals = prefs.constraint_values(k, f_val)
    eps = cfg.threshold(f_val)
    active = [p for p in range(len(prefs)) if p != k and g_vals[p] >= -eps]
    grads = prefs.constraint_gradients(k, jac, active)
    return direction_from_gradients(jac, grads, active, qp_tol=qp_tol)


def is_pareto_stationary(dr, theta_tol=DEFAULT_THETA_TOL):
    if theta_tol <= 0:
        raise InputError(f"theta_tol must be positive, got {theta_tol}")
    return abs(dr.theta) <= theta_tol
