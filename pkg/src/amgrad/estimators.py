"""Estimator-style wrappers around the solvers.

The solvers map starting points to Pareto-stationary points, so the two
solver estimators treat each row of ``X`` as one start: ``fit`` solves the
batch and ``transform`` maps new starts to their terminal points.
:class:`MultiTaskLogisticRegression` applies the preference solver to a
shared linear model trained on several binary label columns.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_matrix, check_scalar
from .benchmarks import multitask_logistic_problem
from .direction import ActiveSetConfig
from .exceptions import InputError
from .preferences import PreferenceSet, RestorationConfig, explicit_preferences, trig_preferences
from .solver import SolveConfig, solve_front
from .stepsize import StepConfig

__all__ = ["AdaptiveMultiGradient", "PreferenceAdaptiveMultiGradient", "MultiTaskLogisticRegression"]


class AdaptiveMultiGradient(TransformerMixin, BaseEstimator):
    """Unconstrained adaptive multi-gradient descent from a batch of starts.

    Parameters
    ----------
    problem : ProblemDefinition
        Objectives and Jacobian to minimise.
    sigma, kappa, alpha0 : float
        Sufficient-decrease fraction, shrink factor and initial step size.
    theta_tol : float
        Stationarity threshold on ``|theta|``.
    qp_tol : float
        Gap tolerance of the min-norm subproblem.
    max_iter : int
        Iteration budget per start.
    reject_on_fail : bool
        Keep the old iterate when the decrease test fails.
    n_jobs : int or None
        Thread count for the batch.

    Attributes
    ----------
    result_ : FrontResult
    pareto_points_ : ndarray of shape (n_starts, n)
        Terminal decision points (NaN rows for starts that produced none).
    objectives_ : ndarray of shape (n_starts, m)
    n_iter_ : ndarray of shape (n_starts,)
    terminations_ : list of str
    """

    def __init__(self, problem=None, sigma=0.05, kappa=0.95, alpha0=0.5, theta_tol=1e-8,
                 qp_tol=1e-10, max_iter=1000, reject_on_fail=False, n_jobs=None):
        self.problem = problem
        self.sigma = sigma
        self.kappa = kappa
        self.alpha0 = alpha0
        self.theta_tol = theta_tol
        self.qp_tol = qp_tol
        self.max_iter = max_iter
        self.reject_on_fail = reject_on_fail
        self.n_jobs = n_jobs

    def _solve_config(self):
        return SolveConfig(step=StepConfig(sigma=self.sigma, kappa=self.kappa, alpha0=self.alpha0),
                           theta_tol=self.theta_tol, qp_tol=self.qp_tol, max_iters=self.max_iter,
                           reject_on_fail=self.reject_on_fail, **self._extra_config())

    def _extra_config(self):
        return {}

    def _preferences(self):
        return None

    def _check_problem(self):
        if self.problem is None:
            raise InputError(f"{type(self).__name__} needs a problem")
        return self.problem

    def _solve(self, X):
        problem = self._check_problem()
        X = check_matrix(X, n_cols=problem.n, name="X")
        return solve_front(problem, self._preferences(), X, self._solve_config(), n_jobs=self.n_jobs)

    def _store(self, result):
        problem = self.problem
        self.result_ = result
        self.pareto_points_ = np.array([x if x is not None else np.full(problem.n, np.nan)
                                        for x, _ in result.points])
        self.objectives_ = np.array([f if f is not None else np.full(problem.m, np.nan)
                                     for _, f in result.points])
        self.n_iter_ = np.array([t.n_steps for t in result.traces])
        self.terminations_ = [t.termination for t in result.traces]
        self.n_features_in_ = problem.n

    def fit(self, X, y=None):
        """Solve from every row of ``X``; ``y`` is ignored."""
        self._store(self._solve(X))
        return self

    def transform(self, X):
        """Terminal points reached from the rows of ``X``."""
        check_is_fitted(self, "result_")
        result = self._solve(X)
        return np.array([x if x is not None else np.full(self.problem.n, np.nan) for x, _ in result.points])

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X).pareto_points_


class PreferenceAdaptiveMultiGradient(AdaptiveMultiGradient):
    """Preference-constrained variant: row ``i`` of ``X`` solves subproblem ``i mod K``.

    Parameters
    ----------
    preferences : array-like of shape (K, m), PreferenceSet or None
        Preference vectors. ``None`` uses ``n_preferences`` evenly spread
        directions in the positive quadrant (two objectives only).
    n_preferences : int
    epsilon : float
        Active-set tolerance, relative to ``1 + max|F|``.
    eta : float
        Restoration step size.
    restoration_max_iter : int
    """

    def __init__(self, problem=None, preferences=None, n_preferences=10, sigma=0.05, kappa=0.95,
                 alpha0=0.5, theta_tol=1e-8, qp_tol=1e-10, max_iter=1000, epsilon=1e-3, eta=0.1,
                 restoration_max_iter=5000, reject_on_fail=False, n_jobs=None):
        super().__init__(problem=problem, sigma=sigma, kappa=kappa, alpha0=alpha0, theta_tol=theta_tol,
                         qp_tol=qp_tol, max_iter=max_iter, reject_on_fail=reject_on_fail, n_jobs=n_jobs)
        self.preferences = preferences
        self.n_preferences = n_preferences
        self.epsilon = epsilon
        self.eta = eta
        self.restoration_max_iter = restoration_max_iter

    def _extra_config(self):
        return {"active_set": ActiveSetConfig(epsilon=self.epsilon),
                "restoration": RestorationConfig(eta=self.eta, max_iters=self.restoration_max_iter)}

    def _preferences(self):
        if isinstance(self.preferences, PreferenceSet):
            return self.preferences
        if self.preferences is not None:
            return explicit_preferences(self.preferences)
        check_scalar(self.n_preferences, "n_preferences", low=1, integer=True)
        return trig_preferences(self.n_preferences)

    def fit(self, X=None, y=None, random_state=0):
        """Solve every subproblem; ``X=None`` draws one uniform start per subproblem in ``[-1, 1]^n``."""
        problem = self._check_problem()
        if X is None:
            rng = np.random.default_rng(random_state)
            X = rng.uniform(-1.0, 1.0, size=(len(self._preferences()), problem.n))
        return super().fit(X, y)


class MultiTaskLogisticRegression(ClassifierMixin, BaseEstimator):
    """One linear classifier shared by several binary tasks, traded off by preference vectors.

    ``fit`` computes a small Pareto front of weight vectors, one per
    preference vector, and keeps the one with the lowest mean task loss for
    prediction (or the subproblem chosen by ``selection``).

    Parameters
    ----------
    n_preferences : int
        Number of preference vectors (two tasks) when ``preferences`` is None.
    preferences : array-like of shape (K, m) or None
    selection : "mean_loss" or int
        Rule picking the weight vector used by ``predict``.
    fit_intercept : bool
    max_iter : int
    random_state : int
        Seed of the random initial weights.

    Attributes
    ----------
    front_coef_ : ndarray of shape (K, n_features)
        Weights of every subproblem (NaN rows for failed ones).
    front_intercept_ : ndarray of shape (K,)
    front_losses_ : ndarray of shape (K, m)
        Per-task training loss of each front member.
    coef_ : ndarray of shape (1, n_features)
    intercept_ : ndarray of shape (1,)
    selected_ : int
    classes_ : ndarray, always ``[0, 1]``
    """

    def __init__(self, n_preferences=5, preferences=None, selection="mean_loss", fit_intercept=True,
                 max_iter=500, random_state=0, n_jobs=None):
        self.n_preferences = n_preferences
        self.preferences = preferences
        self.selection = selection
        self.fit_intercept = fit_intercept
        self.max_iter = max_iter
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _design(self, X):
        X = check_matrix(X, name="X")
        if self.fit_intercept:
            X = np.hstack([X, np.ones((X.shape[0], 1))])
        return X

    def fit(self, X, Y):
        """Fit on features ``X`` (N, n) and 0/1 label matrix ``Y`` (N, m)."""
        A = self._design(X)
        Y = np.asarray(Y, dtype=np.float64)
        if Y.ndim == 1:
            Y = Y.reshape(-1, 1)
        if Y.shape[0] != A.shape[0]:
            raise InputError(f"X has {A.shape[0]} rows but Y has {Y.shape[0]}")
        if not np.all((Y == 0) | (Y == 1)):
            raise InputError("Y must contain only 0 and 1")
        problem = multitask_logistic_problem(A, Y)
        solver = PreferenceAdaptiveMultiGradient(
            problem=problem, preferences=self.preferences, n_preferences=self.n_preferences,
            max_iter=self.max_iter, n_jobs=self.n_jobs)
        prefs = solver._preferences()
        if prefs.m != Y.shape[1]:
            raise InputError(f"preferences have {prefs.m} components but Y has {Y.shape[1]} columns")
        rng = np.random.default_rng(self.random_state)
        starts = rng.normal(scale=0.01, size=(len(prefs), A.shape[1]))
        solver.fit(starts)

        W = solver.pareto_points_
        self.front_losses_ = solver.objectives_
        self.terminations_ = solver.terminations_
        ok = np.flatnonzero(np.all(np.isfinite(W), axis=1))
        if ok.size == 0:
            raise RuntimeError("no preference subproblem produced a model")
        if self.selection == "mean_loss":
            self.selected_ = int(ok[np.argmin(self.front_losses_[ok].mean(axis=1))])
        else:
            idx = check_scalar(self.selection, "selection", low=0, high=len(prefs) - 1, integer=True)
            if idx not in ok:
                raise RuntimeError(f"selected subproblem {idx} failed: {self.terminations_[idx]}")
            self.selected_ = idx
        if self.fit_intercept:
            self.front_coef_, self.front_intercept_ = W[:, :-1], W[:, -1]
        else:
            self.front_coef_, self.front_intercept_ = W, np.zeros(W.shape[0])
        self.coef_ = self.front_coef_[self.selected_][None, :]
        self.intercept_ = self.front_intercept_[[self.selected_]]
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = self.coef_.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = check_matrix(X, n_cols=self.n_features_in_, name="X")
        return X @ self.coef_[0] + self.intercept_[0]

    def predict_proba(self, X):
        z = self.decision_function(X)
        p = np.exp(-np.logaddexp(0.0, -z))
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        return (self.decision_function(X) > 0).astype(int)
