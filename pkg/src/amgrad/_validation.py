"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""

import numbers

import numpy as np

from .exceptions import InputError


def check_vector(x, size=None, name="x"):
    """Return ``x`` as a finite 1-D float64 array, optionally of a fixed size."""
    try:
        arr = np.asarray(x, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} is not convertible to a float array: {exc}") from exc
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InputError(f"{name} must be 1-D, got shape {arr.shape}")
    if size is not None and arr.shape[0] != size:
        raise InputError(f"{name} has length {arr.shape[0]}, expected {size}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains NaN or Inf")
    return arr


def check_matrix(a, n_cols=None, name="X"):
    """Return ``a`` as a finite 2-D float64 array with ``n_cols`` columns."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1 and n_cols is not None and arr.shape[0] == n_cols:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InputError(f"{name} must be 2-D, got shape {arr.shape}")
    if n_cols is not None and arr.shape[1] != n_cols:
        raise InputError(f"{name} has {arr.shape[1]} columns, expected {n_cols}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains NaN or Inf")
    return arr


def check_scalar(value, name, *, low=None, high=None, include_low=True, include_high=True,
                 integer=False):
    """Range-check a scalar hyper-parameter and return it as float or int."""
    kind = numbers.Integral if integer else numbers.Real
    if isinstance(value, bool) or not isinstance(value, kind):
        raise InputError(f"{name} must be {'an integer' if integer else 'a real number'}, got {value!r}")
    if not integer and not np.isfinite(value):
        raise InputError(f"{name} must be finite, got {value!r}")
    if low is not None and (value < low or (value == low and not include_low)):
        raise InputError(f"{name}={value!r} is below the allowed range")
    if high is not None and (value > high or (value == high and not include_high)):
        raise InputError(f"{name}={value!r} is above the allowed range")
    return int(value) if integer else float(value)
