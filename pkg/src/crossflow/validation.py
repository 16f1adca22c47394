"""Input checking for array-shaped parameter sets and vehicle sequences."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .exceptions import NegativeGap, NonPositiveRate, UnsortedInput
from .model import IntersectionParams

PARAM_COLUMNS = ("lambda1", "lambda2", "delta_d", "delta_s")


def check_params(X) -> np.ndarray:
    """Validate an ``(n, 3)`` or ``(n, 4)`` array of ``lambda1, lambda2, delta_d[, delta_s]``.

    A missing ``delta_s`` column is filled with zeros. Returns an
    ``(n, 4)`` float array.
    """
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] == 3:
        X = np.column_stack([X, np.zeros(X.shape[0])])
    if X.shape[1] != 4:
        raise ValueError(f"expected 3 or 4 columns {PARAM_COLUMNS}, got {X.shape[1]}")
    if np.any(X[:, :2] <= 0):
        raise NonPositiveRate("arrival rates must be positive")
    if np.any(X[:, 2:] < 0):
        raise NegativeGap("gaps must be non-negative")
    return X


def rows_to_params(X) -> list[IntersectionParams]:
    return [IntersectionParams(*row) for row in check_params(X)]


def check_vehicles(V, lane_count: int = 2) -> np.ndarray:
    """Validate an ``(n, 2)`` array of ``(desired_time, lane)`` sorted by time."""
    V = check_array(V, dtype=np.float64, ensure_2d=True)
    if V.shape[1] != 2:
        raise ValueError(f"vehicles need two columns (desired_time, lane), got {V.shape[1]}")
    lanes = V[:, 1]
    if np.any(lanes != np.round(lanes)) or np.any((lanes < 1) | (lanes > lane_count)):
        raise ValueError(f"lanes must be integers in 1..{lane_count}")
    if np.any(np.diff(V[:, 0]) < 0):
        raise UnsortedInput("desired times must be non-decreasing")
    return V
