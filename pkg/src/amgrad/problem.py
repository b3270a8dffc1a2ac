"""Smooth vector-valued objectives ``F: R^n -> R^m`` with analytic gradients."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._validation import check_vector
from .exceptions import EvaluationError, InputError

__all__ = ["ProblemDefinition", "row_max_norm"]


@dataclass(frozen=True)
class ProblemDefinition:
    """A multi-objective problem over the whole of ``R^n``.

    Parameters
    ----------
    name : str
        Identifier used by registries and output files.
    n, m : int
        Decision-space dimension and number of objectives.
    objectives : callable
        ``objectives(x) -> array of shape (m,)``.
    gradient : callable
        ``gradient(x, j) -> array of shape (n,)``, the gradient of objective ``j``.
    jacobian_fn : callable, optional
        Fast path returning the full ``(m, n)`` Jacobian. Must agree row by row
        with ``gradient``.
    """

    name: str
    n: int
    m: int
    objectives: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    gradient: Callable[[np.ndarray, int], np.ndarray] = field(repr=False)
    jacobian_fn: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        if int(self.n) < 1 or int(self.m) < 1:
            raise InputError(f"problem dimensions must be positive, got n={self.n}, m={self.m}")

    def check_point(self, x):
        return check_vector(x, self.n, name="x")

    def evaluate(self, x):
        """Objective vector ``F(x)``; raises :class:`EvaluationError` on NaN/Inf."""
        x = self.check_point(x)
        values = np.asarray(self.objectives(x), dtype=np.float64).reshape(-1)
        if values.shape[0] != self.m:
            raise EvaluationError(f"{self.name}: objectives returned {values.shape[0]} values, expected {self.m}")
        if not np.all(np.isfinite(values)):
            raise EvaluationError(f"{self.name}: non-finite objective value {values} at x={x}")
        return values

    def jacobian(self, x):
        """Stack of objective gradients, shape ``(m, n)``."""
        x = self.check_point(x)
        if self.jacobian_fn is not None:
            jac = np.asarray(self.jacobian_fn(x), dtype=np.float64)
        else:
            jac = np.stack([np.asarray(self.gradient(x, j), dtype=np.float64).reshape(-1)
                            for j in range(self.m)])
        if jac.shape != (self.m, self.n):
            raise EvaluationError(f"{self.name}: Jacobian has shape {jac.shape}, expected {(self.m, self.n)}")
        if not np.all(np.isfinite(jac)):
            raise EvaluationError(f"{self.name}: non-finite gradient at x={x}")
        return jac


def row_max_norm(jac):
    """``max_i ||J[i, :]||``, the induced (inf, 2) matrix norm."""
    jac = np.atleast_2d(np.asarray(jac, dtype=np.float64))
    if jac.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(jac, axis=1)))
