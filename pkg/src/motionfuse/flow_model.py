"""Quadratic instantaneous motion model for dense optical flow.

Both flow components are full quadratics in centered image coordinates:

    u = a + b x + c y + d x^2 + e x y + f y^2
    v = g + h x + i y + j x^2 + k x y + l y^2

The 12 parameters are solved as two independent linear least-squares problems
on the basis (1, x, y, x^2, xy, y^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scene import FlowSampleSet

N_PARAMS = 12
MIN_SAMPLES = 6


@dataclass(frozen=True)
class QuadraticFlowModel:
    params: np.ndarray  # (12,): a..f for u, g..l for v
    object_id: int = -1
    frame_pair: tuple[int, int] = (-1, -1)
    valid: bool = True
    status: str = "valid"  # valid | degenerate | insufficient


def _basis(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones_like(x), x, y, x * x, x * y, y * y])


def _invalid(status: str, object_id: int, frame_pair) -> QuadraticFlowModel:
    return QuadraticFlowModel(params=np.zeros(N_PARAMS), object_id=object_id,
                              frame_pair=tuple(frame_pair), valid=False,
                              status=status)


def fit_quadratic(samples: FlowSampleSet, coord_scale: float | None = None,
                  object_id: int = -1, frame_pair=(-1, -1)) -> QuadraticFlowModel:
    """Least-squares fit of the 12-parameter model to (x, y, u, v) samples.

    The solve runs on an orthogonal decomposition of the basis matrix, never
    on normal equations: the x^2/xy/y^2 columns are badly scaled at image
    extents. Coordinates are multiplied by ``coord_scale`` before the solve
    and the parameters unscaled after; pass 2/max(width, height) to keep the
    design near the unit box. When None, a scale is derived from the samples.
    """
    arr = np.asarray(samples.samples, dtype=np.float64)
    if arr.shape[0] < MIN_SAMPLES:
        return _invalid("insufficient", object_id, frame_pair)
    x, y, u, v = arr.T
    if coord_scale is None:
        span = max(np.abs(x).max(), np.abs(y).max(), 1.0)
        coord_scale = 1.0 / span
    s = float(coord_scale)
    basis = _basis(x * s, y * s)
    sol_u, _, rank, _ = np.linalg.lstsq(basis, u, rcond=None)
    if rank < 6:
        return _invalid("degenerate", object_id, frame_pair)
    sol_v, _, _, _ = np.linalg.lstsq(basis, v, rcond=None)
    unscale = np.array([1.0, s, s, s * s, s * s, s * s])
    params = np.concatenate([sol_u * unscale, sol_v * unscale])
    return QuadraticFlowModel(params=params, object_id=object_id,
                              frame_pair=tuple(frame_pair), valid=True)


def evaluate_model(model: QuadraticFlowModel, x, y) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate both flow components at centered coordinates (x, y)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    basis = _basis(np.atleast_1d(x), np.atleast_1d(y))
    u = basis @ model.params[:6]
    v = basis @ model.params[6:]
    if np.isscalar(x) or x.ndim == 0:
        return float(u[0]), float(v[0])
    return u, v


def flow_mse(model: QuadraticFlowModel, samples: FlowSampleSet) -> float:
    """Mean squared flow-vector error of the model on a sample set.

    NaN marks a missing residual (empty sample set).
    """
    arr = np.asarray(samples.samples, dtype=np.float64)
    if arr.shape[0] == 0:
        return float("nan")
    x, y, u, v = arr.T
    pu, pv = evaluate_model(model, x, y)
    return float(np.mean((pu - u) ** 2 + (pv - v) ** 2))
