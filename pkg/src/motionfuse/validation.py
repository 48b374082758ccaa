"""Input validation helpers shared by the clustering-facing API."""

from __future__ import annotations

import numpy as np

SYMMETRY_ATOL = 1e-10


def check_affinity(a, integer: bool = False) -> np.ndarray:
    """Validate a square symmetric nonnegative matrix and return a copy."""
    arr = np.array(a, dtype=np.int64 if integer else np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.allclose(arr, arr.T, atol=SYMMETRY_ATOL, rtol=0):
        raise ValueError("matrix is not symmetric")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix holds non-finite entries")
    if (arr < 0).any():
        raise ValueError("matrix holds negative entries")
    return arr


def check_labels(labels, name: str = "labels") -> np.ndarray:
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-d array")
    return arr.astype(np.int64)
