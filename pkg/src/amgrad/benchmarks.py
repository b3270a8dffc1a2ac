"""Test problems with closed-form gradients, plus a registry keyed by name."""

import logging
from dataclasses import dataclass

import numpy as np

from ._validation import check_scalar
from .exceptions import EvaluationError, InputError
from .problem import ProblemDefinition

__all__ = [
    "make_ex1",
    "make_ex2",
    "make_ex3",
    "make_ex4",
    "make_synthetic_multitask",
    "multitask_logistic_problem",
    "BenchmarkSpec",
    "BENCHMARKS",
    "get_benchmark",
]

logger = logging.getLogger(__name__)

POLE_GUARD = 1e-9


def make_ex1():
    """Convex quadratic pair; individual minimisers at (0, 4.5) and (4.5, 0)."""

    def objectives(x):
        x1, x2 = x
        return np.array([x1**2 / 25 + (x2 - 4.5) ** 2 / 100,
                         x2**2 / 25 + (x1 - 4.5) ** 2 / 100])

    def jacobian(x):
        x1, x2 = x
        return np.array([[2 * x1 / 25, 2 * (x2 - 4.5) / 100],
                         [2 * (x1 - 4.5) / 100, 2 * x2 / 25]])

    return ProblemDefinition("ex1_convex_quadratic", 2, 2, objectives,
                             lambda x, j: jacobian(x)[j], jacobian)


def make_ex2():
    """Pair of quadratic-over-linear ratios.

    Both denominators must stay above ``POLE_GUARD``; the problem is only
    meaningful on the side of the poles that contains the positive quadrant.
    """

    def _parts(x):
        x1, x2 = x
        num = np.array([2 * x1**2 + x2**2 + 3, x1**2 + 2 * x2**2 + 3])
        den = np.array([1 + 2 * x1 + 8 * x2, 1 + 8 * x1 + 2 * x2])
        if np.any(den <= POLE_GUARD):
            raise EvaluationError(f"ex2: denominator {den.min():.3e} at x={x} is at or past a pole")
        return num, den

    def objectives(x):
        num, den = _parts(x)
        return num / den

    def jacobian(x):
        x1, x2 = x
        num, den = _parts(x)
        dnum = np.array([[4 * x1, 2 * x2], [2 * x1, 4 * x2]])
        dden = np.array([[2.0, 8.0], [8.0, 2.0]])
        return (dnum * den[:, None] - num[:, None] * dden) / den[:, None] ** 2

    return ProblemDefinition("ex2_pseudoconvex_fractional", 2, 2, objectives,
                             lambda x, j: jacobian(x)[j], jacobian)


def _bowls(x, d):
    a = np.full(d, 1.0 / d)
    e1 = np.exp(-np.sum((x - a) ** 2))
    e2 = np.exp(-np.sum((x + a) ** 2))
    return a, e1, e2


def make_ex3(d=20):
    """Two Gaussian bowls centred at ``+-(1/d) 1``; Pareto set is the segment between them."""
    d = check_scalar(d, "d", low=1, integer=True)

    def objectives(x):
        _, e1, e2 = _bowls(x, d)
        return np.array([1 - e1, 1 - e2])

    def jacobian(x):
        a, e1, e2 = _bowls(x, d)
        return np.vstack([2 * e1 * (x - a), 2 * e2 * (x + a)])

    return ProblemDefinition("ex3_lin_toy_2obj", d, 2, objectives,
                             lambda x, j: jacobian(x)[j], jacobian)


def make_ex4(d=20):
    """The two bowls of :func:`make_ex3` plus their sum as a third objective."""
    d = check_scalar(d, "d", low=1, integer=True)

    def objectives(x):
        _, e1, e2 = _bowls(x, d)
        return np.array([1 - e1, 1 - e2, 2 - e1 - e2])

    def jacobian(x):
        a, e1, e2 = _bowls(x, d)
        g1 = 2 * e1 * (x - a)
        g2 = 2 * e2 * (x + a)
        return np.vstack([g1, g2, g1 + g2])

    return ProblemDefinition("ex4_lin_toy_3obj", d, 3, objectives,
                             lambda x, j: jacobian(x)[j], jacobian)


def _sigmoid(z):
    return np.exp(-np.logaddexp(0.0, -z))


def multitask_logistic_problem(X, Y, name="multitask_logistic"):
    """Mean binary cross-entropy of one shared linear model per label column.

    ``X`` has shape ``(N, n)`` and ``Y`` shape ``(N, m)`` with 0/1 entries.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    n_samples = X.shape[0]

    def objectives(w):
        z = X @ w
        # log(1 + e^z) - y z, stable for large |z|
        return np.mean(np.logaddexp(0.0, z)[:, None] - Y * z[:, None], axis=0)

    def jacobian(w):
        resid = _sigmoid(X @ w)[:, None] - Y
        return resid.T @ X / n_samples

    return ProblemDefinition(name, X.shape[1], Y.shape[1], objectives,
                             lambda w, j: jacobian(w)[j], jacobian)


def _synthetic_dataset(seed, n_samples, n_features, noise):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_samples, n_features))
    planes = rng.standard_normal((n_features, 2))
    Y = (X @ planes > 0).astype(np.float64)
    flip = rng.random(Y.shape) < noise
    Y[flip] = 1.0 - Y[flip]
    return X, Y


def make_synthetic_multitask(seed=0, n_samples=500, n_features=10, noise=0.1, max_retries=100):
    """Two noisy logistic tasks sharing one weight vector, generated from ``seed``.

    A draw in which either task has a single class is discarded and the next
    seed is tried.
    """
    n_samples = check_scalar(n_samples, "n_samples", low=2, integer=True)
    n_features = check_scalar(n_features, "n_features", low=1, integer=True)
    for attempt in range(max_retries):
        X, Y = _synthetic_dataset(seed + attempt, n_samples, n_features, noise)
        if np.all((Y.min(axis=0) == 0) & (Y.max(axis=0) == 1)):
            break
        logger.warning("synthetic_multitask: seed %d gave a single-class task, trying %d",
                       seed + attempt, seed + attempt + 1)
    else:
        raise InputError(f"no non-degenerate dataset within {max_retries} seeds from {seed}")
    return multitask_logistic_problem(X, Y, name="synthetic_multitask")


@dataclass(frozen=True)
class BenchmarkSpec:
    """Registry entry: constructor plus the default box for random starts and oracle grids."""

    name: str
    factory: object
    start_low: float
    start_high: float
    takes_dimension: bool = False
    description: str = ""

    def make(self, **kwargs):
        return self.factory(**kwargs)

    def sample_starts(self, problem, count, rng):
        return rng.uniform(self.start_low, self.start_high, size=(count, problem.n))


BENCHMARKS = {
    "ex1_convex_quadratic": BenchmarkSpec(
        "ex1_convex_quadratic", make_ex1, 0.0, 4.5, description="convex quadratics, n=2, m=2"),
    "ex2_pseudoconvex_fractional": BenchmarkSpec(
        "ex2_pseudoconvex_fractional", make_ex2, 0.5, 2.0, description="fractional objectives, n=2, m=2"),
    "ex3_lin_toy_2obj": BenchmarkSpec(
        "ex3_lin_toy_2obj", make_ex3, -0.5, 0.5, takes_dimension=True,
        description="Gaussian bowls, n=d (default 20), m=2"),
    "ex4_lin_toy_3obj": BenchmarkSpec(
        "ex4_lin_toy_3obj", make_ex4, -0.5, 0.5, takes_dimension=True,
        description="Gaussian bowls and their sum, n=d (default 20), m=3"),
    "synthetic_multitask": BenchmarkSpec(
        "synthetic_multitask", make_synthetic_multitask, -1.0, 1.0,
        description="two logistic tasks on shared weights, n=10, m=2"),
}


def get_benchmark(name):
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise InputError(f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}") from None
