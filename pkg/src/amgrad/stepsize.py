"""Adaptive step size: keep alpha while sufficient decrease holds, else shrink by kappa."""

from dataclasses import dataclass, replace

import numpy as np

from ._validation import check_scalar
from .exceptions import StalledError

__all__ = ["StepConfig", "StepState", "sufficient_decrease", "update", "ALPHA_FLOOR"]

ALPHA_FLOOR = 1e-300


@dataclass(frozen=True)
class StepConfig:
    sigma: float = 0.05
    kappa: float = 0.95
    alpha0: float = 0.5

    def __post_init__(self):
        check_scalar(self.sigma, "sigma", low=0.0, high=1.0)
        check_scalar(self.kappa, "kappa", low=0.0, high=1.0)
        check_scalar(self.alpha0, "alpha0", low=0.0, high=1.0, include_low=False, include_high=False)

    def initial_state(self):
        return StepState(alpha=self.alpha0, shrink_count=0)


@dataclass(frozen=True)
class StepState:
    alpha: float
    shrink_count: int = 0


def sufficient_decrease(f_old, f_new, jac_old, step_vec, sigma):
    """Componentwise test ``F(x_new) <= F(x_old) + sigma * J(x_old) (x_new - x_old)``."""
    bound = np.asarray(f_old) + sigma * (np.asarray(jac_old) @ np.asarray(step_vec))
    return bool(np.all(np.asarray(f_new) <= bound))


def update(state, passed, cfg):
    """Next step-size state.

    Raises
    ------
    StalledError
        When a shrink would push alpha below ``ALPHA_FLOOR``.
    """
    if passed:
        return state
    alpha = cfg.kappa * state.alpha
    if alpha < ALPHA_FLOOR:
        raise StalledError(f"step size underflow: alpha={alpha:.3e} after {state.shrink_count + 1} shrinks")
    return replace(state, alpha=alpha, shrink_count=state.shrink_count + 1)
