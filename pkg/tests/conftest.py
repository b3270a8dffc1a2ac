"""Shared helpers: finite-difference Jacobians, benchmark sampling, simplex grid search."""

import numpy as np
import pytest

from amgrad.benchmarks import BENCHMARKS
from amgrad.problem import ProblemDefinition

BENCHMARK_NAMES = sorted(BENCHMARKS)


def fd_jacobian(problem, x):
    """Central differences with step ``1e-6 * max(1, |x_i|)`` per coordinate."""
    x = np.asarray(x, dtype=np.float64)
    cols = []
    for i in range(problem.n):
        h = 1e-6 * max(1.0, abs(x[i]))
        e = np.zeros_like(x)
        e[i] = h
        cols.append((problem.evaluate(x + e) - problem.evaluate(x - e)) / (2 * h))
    return np.column_stack(cols)


def sample_points(name, count, rng, problem=None):
    spec = BENCHMARKS[name]
    problem = spec.make() if problem is None else problem
    return problem, spec.sample_starts(problem, count, rng)


def grid_min_norm(G, step=1e-3):
    """Brute-force ``min ||w G||^2`` over the simplex lattice with the given spacing (q = 2 or 3)."""
    G = np.asarray(G, dtype=np.float64)
    q = G.shape[0]
    n_steps = int(round(1.0 / step))
    t = np.arange(n_steps + 1) / n_steps
    if q == 2:
        W = np.column_stack([t, 1.0 - t])
    elif q == 3:
        a, b = np.meshgrid(t, t, indexing="ij")
        mask = a + b <= 1.0 + 1e-12
        W = np.column_stack([a[mask], b[mask], np.clip(1.0 - a[mask] - b[mask], 0.0, None)])
    else:
        raise ValueError("grid oracle supports q = 2 or 3")
    P = W @ G
    return float(np.min(np.einsum("ij,ij->i", P, P)))


def quadratic_1d():
    """``F(x) = x^2`` on the real line, one objective."""
    return ProblemDefinition("square", 1, 1, lambda x: np.array([x[0] ** 2]),
                             lambda x, j: np.array([2 * x[0]]))


def linear_problem(C):
    C = np.asarray(C, dtype=np.float64)
    return ProblemDefinition("linear", C.shape[1], C.shape[0], lambda x: C @ x, lambda x, j: C[j])


def distance_to_segment(x, d):
    """Euclidean distance from ``x`` to ``{c 1 : |c| <= 1/d}``."""
    c = float(np.clip(np.mean(x), -1.0 / d, 1.0 / d))
    return float(np.linalg.norm(x - c))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(':'))):
            terminalreporter.write_line(line)
