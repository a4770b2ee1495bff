"""Input validation helpers used at every public entry point."""

import numpy as np

from .exceptions import ArgumentError, ShapeError, ValidationError
from .settings import numeric_settings


def check_matrix(a, name="matrix", allow_empty=False):
    """Coerce to a 2-D float64 array with finite entries."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.size == 0 and not allow_empty:
        raise ShapeError(f"{name} must be non-empty")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or infinite entries")
    return arr


def check_vector(v, name="vector"):
    arr = np.asarray(v, dtype=np.float64).ravel()
    if arr.size == 0:
        raise ShapeError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or infinite entries")
    return arr


def check_square(a, name="matrix"):
    arr = check_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_symmetric(a, name="matrix", atol=None):
    arr = check_square(a, name)
    if atol is None:
        atol = numeric_settings.symmetry_atol
    gap = float(np.max(np.abs(arr - arr.T))) if arr.size else 0.0
    if gap > atol:
        raise ShapeError(
            f"{name} must be symmetric within {atol:g}, max asymmetry {gap:.3e}"
        )
    return arr


def check_binary_matrix(a, name="matrix"):
    """Validate a {0, 1}-valued response matrix."""
    arr = check_matrix(a, name)
    if not np.all((arr == 0.0) | (arr == 1.0)):
        bad = np.argwhere((arr != 0.0) & (arr != 1.0))[0]
        raise ValidationError(
            f"{name} must be binary; entry ({bad[0]}, {bad[1]}) is "
            f"{arr[bad[0], bad[1]]!r}"
        )
    return arr


def check_count(value, name, minimum=1):
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ArgumentError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ArgumentError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
