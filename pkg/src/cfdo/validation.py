"""Input validation helpers shared by the estimators and problem definitions."""

import numbers

import numpy as np

from .exceptions import DimensionError


def check_vector(x, dimension=None, name="x"):
    """Return ``x`` as a 1-D float array, checking its length when given."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if dimension is not None and arr.shape[0] != dimension:
        raise DimensionError(f"{name} has length {arr.shape[0]}, expected {dimension}")
    return arr


def check_bounds(lower, upper, dimension=None):
    """Broadcast scalar or vector bounds and verify lower < upper everywhere."""
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if dimension is None:
        dimension = max(lower.size, upper.size)
    if lower.ndim == 0:
        lower = np.full(dimension, float(lower))
    if upper.ndim == 0:
        upper = np.full(dimension, float(upper))
    lower = check_vector(lower, dimension, "lower")
    upper = check_vector(upper, dimension, "upper")
    if dimension < 1:
        raise DimensionError("dimension must be positive")
    if not np.all(np.isfinite(lower)) or not np.all(np.isfinite(upper)):
        raise ValueError("bounds must be finite")
    if np.any(lower >= upper):
        raise ValueError("every lower bound must be strictly below its upper bound")
    return lower, upper


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_unit_interval(value, name):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value
