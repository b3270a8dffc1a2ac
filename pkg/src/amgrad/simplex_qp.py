"""Minimum-norm point in the convex hull of a set of gradient vectors.

Solves ``min_w ||sum_i w_i g_i||^2`` over the unit simplex. Two vectors use
the closed-form projection onto a segment; three or more use Frank-Wolfe with
away steps on the Gram matrix. The Frank-Wolfe gap
``||p||^2 - min_i <p, g_i>`` is exactly the KKT residual of the problem, so it
doubles as the stopping test and the optimality certificate.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InputError, QPConvergenceError

__all__ = ["QpResult", "min_norm_in_hull", "fw_gap"]

DEFAULT_TOL = 1e-10
MAX_ITER = 10_000


@dataclass(frozen=True)
class QpResult:
    weights: np.ndarray
    min_norm_point: np.ndarray
    squared_norm: float
    n_iter: int = 0
    gap: float = 0.0


def fw_gap(gradients, point):
    """KKT residual ``max_i <p, p - g_i>`` of ``point`` for the given hull."""
    gradients = np.asarray(gradients, dtype=np.float64)
    point = np.asarray(point, dtype=np.float64)
    return float(point @ point - np.min(gradients @ point))


def _clean_weights(w):
    w = np.where(w < 0.0, 0.0, w)
    return w / w.sum()


def _result(G, w, n_iter):
    w = _clean_weights(w)
    p = w @ G
    return QpResult(weights=w, min_norm_point=p, squared_norm=float(p @ p),
                    n_iter=n_iter, gap=fw_gap(G, p))


def _two_point(G):
    g1, g2 = G
    diff = g1 - g2
    denom = float(diff @ diff)
    if denom == 0.0:
        lam = 0.5
    else:
        lam = min(1.0, max(0.0, float((g2 - g1) @ g2) / denom))
    return _result(G, np.array([lam, 1.0 - lam]), 0)


def _affine_step(M, w):
    support = np.flatnonzero(w > 0.0)
    k = support.size
    if k < 2:
        return w, True
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = M[np.ix_(support, support)]
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    if not np.allclose(kkt @ sol, rhs, atol=1e-9):
        return w, True
    target = sol[:k]
    current = w[support]
    neg = target < 0.0
    t = float(np.min(current[neg] / (current[neg] - target[neg]))) if neg.any() else 1.0
    new = w.copy()
    new[support] = current + t * (target - current)
    if neg.any():
        # the blocking weight leaves the support exactly
        new[support[neg][np.argmin(current[neg] / (current[neg] - target[neg]))]] = 0.0
    new = np.where(new < 0.0, 0.0, new)
    new /= new.sum()
    return new, not neg.any()


def _affine_correction(M, w):
    """Wolfe-style minor cycles toward the affine minimiser of the current support.

    Each cycle stops at the first weight that would turn negative and drops
    it, so iterates stay on the simplex. A step that would raise the
    objective is discarded.
    """
    best = w
    best_val = float(w @ M @ w)
    for _ in range(w.size):
        w, done = _affine_step(M, best)
        val = float(w @ M @ w)
        if val > best_val:
            break
        best, best_val = w, val
        if done:
            break
    return best


def _frank_wolfe(G, tol, max_iter, trace_objective=None):
    M = G @ G.T
    q = M.shape[0]
    w = np.zeros(q)
    w[int(np.argmin(np.diag(M)))] = 1.0
    v = M @ w
    for it in range(1, max_iter + 1):
        if it % 8 == 0:
            w = _affine_correction(M, w)
            v = M @ w
            if trace_objective is not None:
                trace_objective.append(float(w @ v))
        wv = float(w @ v)
        i = int(np.argmin(v))
        gap = wv - v[i]
        if gap <= tol:
            return w, it - 1, gap
        support = np.flatnonzero(w > 0.0)
        a = int(support[np.argmax(v[support])])
        away_gap = v[a] - wv
        if gap >= away_gap:
            # toward vertex i: d = e_i - w
            curv = M[i, i] - 2.0 * v[i] + wv
            gamma_max = 1.0
            slope = v[i] - wv
            md = M[:, i] - v
            direction_sign = 1.0
            idx = i
        else:
            # away from vertex a: d = w - e_a
            curv = wv - 2.0 * v[a] + M[a, a]
            gamma_max = w[a] / (1.0 - w[a]) if w[a] < 1.0 else np.inf
            slope = wv - v[a]
            md = v - M[:, a]
            direction_sign = -1.0
            idx = a
        gamma = gamma_max if curv <= 0.0 else min(gamma_max, -slope / curv)
        if not np.isfinite(gamma) or gamma <= 0.0:
            # no progress possible along either direction: numerically optimal
            return w, it, gap
        if direction_sign > 0:
            w = (1.0 - gamma) * w
            w[idx] += gamma
        else:
            w = (1.0 + gamma) * w
            w[idx] -= gamma
            if gamma == gamma_max:
                w[idx] = 0.0
        v = v + gamma * md
        if it % 64 == 0:
            v = M @ w
        if trace_objective is not None:
            trace_objective.append(float(w @ M @ w))
    wv = float(w @ v)
    return w, max_iter, wv - float(np.min(v))


def min_norm_in_hull(gradients, tol=DEFAULT_TOL, max_iter=MAX_ITER, _trace=None):
    """Minimum-norm convex combination of the rows of ``gradients``.

    Parameters
    ----------
    gradients : array-like of shape (q, n)
        The vectors spanning the hull; ``q >= 1``.
    tol : float
        Bound on the Frank-Wolfe gap at the returned point.
    max_iter : int
        Iteration cap for the ``q >= 3`` solver.

    Returns
    -------
    QpResult
        Simplex weights, the hull point ``sum_i w_i g_i`` and its squared norm.

    Raises
    ------
    InputError
        Empty or ragged input, or ``tol <= 0``.
    QPConvergenceError
        Gap still above ``tol`` after ``max_iter`` iterations. The exception
        carries the best weights found.
    """
    if tol <= 0:
        raise InputError(f"tol must be positive, got {tol}")
    try:
        G = np.asarray(gradients, dtype=np.float64)
    except ValueError as exc:
        raise InputError(f"gradients must have equal lengths: {exc}") from exc
    if G.ndim == 1 and G.size:
        G = G.reshape(1, -1)
    if G.ndim != 2 or G.shape[0] == 0:
        raise InputError("min_norm_in_hull needs at least one gradient vector")
    if not np.all(np.isfinite(G)):
        raise InputError("gradients contain NaN or Inf")

    q = G.shape[0]
    if q == 1:
        return _result(G, np.ones(1), 0)
    if q == 2:
        return _two_point(G)

    w, n_iter, gap = _frank_wolfe(G, tol, max_iter, _trace)
    if gap > tol:
        raise QPConvergenceError(
            f"Frank-Wolfe gap {gap:.3e} above tol {tol:.1e} after {n_iter} iterations",
            weights=_clean_weights(w), gap=gap)
    return _result(G, w, n_iter)
