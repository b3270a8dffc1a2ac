"""Exception hierarchy shared by every module of the package."""


class AmgradError(Exception):
    """Base class for all errors raised by :mod:`amgrad`."""


class InputError(AmgradError, ValueError):
    """Invalid argument shape, range or configuration."""


class EvaluationError(AmgradError, ArithmeticError):
    """An objective or gradient produced a non-finite value or hit a pole."""


class QPConvergenceError(AmgradError, RuntimeError):
    """The simplex QP did not reach its tolerance within the iteration cap.

    The best iterate found so far is kept on ``weights`` together with the
    final Frank-Wolfe gap.
    """

    def __init__(self, message, weights=None, gap=None):
        super().__init__(message)
        self.weights = weights
        self.gap = gap


class StalledError(AmgradError, RuntimeError):
    """The adaptive step size underflowed."""


class RestorationError(AmgradError, RuntimeError):
    """Feasibility restoration failed to reach the preference region."""

    def __init__(self, message, x=None, violations=None):
        super().__init__(message)
        self.x = x
        self.violations = violations
