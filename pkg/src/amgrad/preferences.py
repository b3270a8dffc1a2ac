"""Preference vectors, the linear constraints they induce, and feasibility restoration.

Subproblem ``k`` restricts the search to objective vectors for which ``u_k``
has the largest inner product among all preference vectors:
``G_p(x) = <u_p - u_k, F(x)> <= 0`` for every ``p``.
"""

import itertools
import json
import logging
from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix, check_scalar
from .exceptions import EvaluationError, InputError, RestorationError
from .simplex_qp import DEFAULT_TOL, min_norm_in_hull

__all__ = [
    "PreferenceSet",
    "RestorationConfig",
    "trig_preferences",
    "simplex_grid_preferences",
    "explicit_preferences",
    "restore_feasibility",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PreferenceSet:
    """``K`` non-negative preference vectors in objective space, shape ``(K, m)``."""

    vectors: np.ndarray
    generator: str = "explicit"

    def __post_init__(self):
        vecs = check_matrix(self.vectors, name="preference vectors")
        if vecs.shape[0] < 1:
            raise InputError("a preference set needs at least one vector")
        if np.any(vecs < 0.0):
            raise InputError("preference vectors must be componentwise non-negative")
        if np.any(np.linalg.norm(vecs, axis=1) == 0.0):
            raise InputError("preference vectors must be non-zero")
        if self.generator == "trig2d" and vecs.shape[1] != 2:
            raise InputError("trig2d preferences are only defined for two objectives")
        vecs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)

    def __len__(self):
        return self.vectors.shape[0]

    @property
    def m(self):
        return self.vectors.shape[1]

    def _check_index(self, k):
        if not 0 <= k < len(self):
            raise InputError(f"subproblem index {k} out of range for K={len(self)}")

    def constraint_values(self, k, f_val):
        """``G_p = <u_p - u_k, F>`` for all ``p``; entry ``k`` is exactly zero."""
        self._check_index(k)
        diffs = self.vectors - self.vectors[k]
        g = diffs @ np.asarray(f_val, dtype=np.float64)
        g[k] = 0.0
        return g

    def constraint_gradients(self, k, jac, indices=None):
        """Rows ``(u_p - u_k)^T J`` for ``p`` in ``indices`` (all ``p`` by default)."""
        self._check_index(k)
        idx = np.arange(len(self)) if indices is None else np.asarray(indices, dtype=int)
        if idx.size == 0:
            return np.zeros((0, np.asarray(jac).shape[1]))
        return (self.vectors[idx] - self.vectors[k]) @ np.asarray(jac, dtype=np.float64)

    def to_json(self):
        return json.dumps(self.vectors.tolist())

    @classmethod
    def from_json(cls, text, generator="explicit"):
        return cls(np.asarray(json.loads(text), dtype=np.float64), generator)


def trig_preferences(K):
    """``u_k = (cos(k pi / 2K), sin(k pi / 2K))`` for ``k = 1..K``."""
    K = check_scalar(K, "K", low=1, integer=True)
    angles = np.arange(1, K + 1) * np.pi / (2 * K)
    vecs = np.column_stack([np.cos(angles), np.sin(angles)])
    # cos(pi/2) evaluates to +-1e-16 depending on K; snap the round-off to zero
    vecs[np.abs(vecs) < 1e-15] = 0.0
    return PreferenceSet(vecs, "trig2d")


def simplex_grid_preferences(m, delta):
    """Every point of the ``delta``-lattice on the unit simplex in ``R^m``."""
    m = check_scalar(m, "m", low=2, integer=True)
    delta = check_scalar(delta, "delta", low=0.0, high=1.0, include_low=False)
    steps = round(1.0 / delta)
    if abs(1.0 / delta - steps) > 1e-9:
        raise InputError(f"1/delta must be an integer, got 1/{delta} = {1.0 / delta}")
    points = []
    for head in itertools.product(range(steps + 1), repeat=m - 1):
        rest = steps - sum(head)
        if rest >= 0:
            points.append((*head, rest))
    # lexicographic descending in the leading coordinate, e.g. (1,0,..) first
    points.sort(reverse=True)
    return PreferenceSet(np.asarray(points, dtype=np.float64) / steps, "simplex_grid")


def explicit_preferences(vectors):
    return PreferenceSet(np.asarray(vectors, dtype=np.float64), "explicit")


@dataclass(frozen=True)
class RestorationConfig:
    eta: float = 0.1
    max_iters: int = 5000
    all_constraints: bool = False
    tol: float = 1e-9

    def __post_init__(self):
        check_scalar(self.eta, "eta", low=0.0, high=1.0, include_low=False, include_high=False)
        check_scalar(self.max_iters, "max_iters", low=1, integer=True)
        check_scalar(self.tol, "tol", low=0.0)


def restore_feasibility(problem, prefs, k, x0, cfg=None, qp_tol=DEFAULT_TOL):
    """Drive ``x0`` into the region of subproblem ``k``.

    Each step solves ``min_{s, a} a + ||s||^2 / 2`` subject to
    ``grad G_p(x)^T s <= a`` through its dual: ``s`` is the negative min-norm
    point of the constraint gradients. Only violated constraints enter unless
    ``cfg.all_constraints`` is set.

    Returns
    -------
    x : ndarray
        A point with ``max_p G_p(x) <= cfg.tol``.
    n_iter : int
        Number of restoration steps taken.

    Raises
    ------
    RestorationError
        After ``cfg.max_iters`` steps, or when the violated constraints have
        no descent direction.
    """
    cfg = RestorationConfig() if cfg is None else cfg
    x = problem.check_point(x0).copy()
    for it in range(cfg.max_iters + 1):
        try:
            f_val = problem.evaluate(x)
        except EvaluationError as exc:
            raise RestorationError(f"objective failed during restoration: {exc}", x=x) from exc
        g = prefs.constraint_values(k, f_val)
        # G_p is an inner product of O(1) terms; a 1e-17 residue is round-off, not a violation
        violated = np.flatnonzero(g > cfg.tol)
        if violated.size == 0:
            return x, it
        if it == cfg.max_iters:
            break
        idx = np.array([p for p in range(len(prefs)) if p != k]) if cfg.all_constraints else violated
        grads = prefs.constraint_gradients(k, problem.jacobian(x), idx)
        qp = min_norm_in_hull(grads, tol=qp_tol)
        if qp.squared_norm <= 1e-300:
            raise RestorationError(
                f"no descent direction for violated constraints {violated.tolist()} of subproblem {k}",
                x=x, violations=g[violated])
        x = x - cfg.eta * qp.min_norm_point
    logger.debug("restoration for subproblem %d exhausted %d iterations", k, cfg.max_iters)
    raise RestorationError(
        f"subproblem {k}: still infeasible after {cfg.max_iters} restoration steps "
        f"(max violation {g.max():.3e})", x=x, violations=g[violated])
