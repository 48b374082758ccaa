"""Cross-object residuals, ordered-residual-kernel masks, affinity matrices.

For every valid model of a view, the data of every object on that model's
frame pair is scored against it; the per-model rank ordering of those
residuals decides inlier status, and co-occurrence of inlier status across
all models of the view is the pairwise object affinity.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .epipolar import mean_sampson
from .flow_model import flow_mse
from .model_bank import FLOW_VIEW, FUND_VIEW, MotionModelBank, correspondences_for
from .scene import LabeledFlow, TrajectorySet

logger = logging.getLogger(__name__)


class ViewUnavailableError(RuntimeError):
    """A motion-cue view has no valid model to score anything against."""


@dataclass(frozen=True)
class ViewResiduals:
    """Residuals of every object against every valid model of one view.

    ``residuals[q, j]`` is the mean residual of object j's data on model q;
    NaN marks an absent entry (object has no data on that frame pair).
    Models are ordered by (object id, frame pair).
    """

    view: str
    models: list[tuple[int, tuple[int, int]]]  # (object_id, frame_pair)
    residuals: np.ndarray  # (n_models, n_objects)


@dataclass(frozen=True)
class ResidualTensor:
    views: dict[str, ViewResiduals]

    def available(self) -> list[str]:
        return sorted(self.views)


@dataclass(frozen=True)
class AffinityView:
    """Symmetric co-occurrence counts between objects under one view."""

    matrix: np.ndarray  # (k, k) int64
    view: str


def compute_residual_tensor(bank: MotionModelBank, ts: TrajectorySet,
                            labeled_flow: LabeledFlow,
                            views=(FLOW_VIEW, FUND_VIEW)) -> ResidualTensor:
    """Score every object's data against every valid model per view.

    Raises :class:`ViewUnavailableError` when a requested view holds no valid
    model; callers may retry with the remaining views (single-view fallback).
    """
    k = bank.n_objects
    out = {}
    for view in views:
        valid = bank.valid_models(view)
        if not valid:
            raise ViewUnavailableError(f"view '{view}' has no valid model")
        rows = np.full((len(valid), k), np.nan)
        model_index = []
        for q, ((obj, pair_idx), model) in enumerate(valid):
            model_index.append((obj, model.frame_pair))
            for j in range(k):
                if view == FUND_VIEW:
                    m0, m1 = model.frame_pair
                    c = correspondences_for(ts, j, m0, m1)
                    if len(c) == 0:
                        continue
                    rows[q, j] = mean_sampson(model, c)
                else:
                    samples = labeled_flow.get(pair_idx, j)
                    if len(samples) == 0:
                        continue
                    rows[q, j] = flow_mse(model, samples)
        out[view] = ViewResiduals(view=view, models=model_index, residuals=rows)
    return ResidualTensor(views=out)


def ork_inlier_masks(tensor: ResidualTensor, view: str, t: float) -> np.ndarray:
    """Binary inlier masks from per-model residual ranks.

    For each model, the objects whose residuals rank within the smallest
    ceil(t * n_present) are inliers; absent entries never are. Rank ties are
    broken toward the lower object id. Returns the (k, K) mask matrix whose
    row i is object i's inlier mask over all K models of the view.
    """
    if not 0.0 < t <= 1.0:
        raise ValueError("quantile t must lie in (0, 1]")
    vr = tensor.views[view]
    n_models, k = vr.residuals.shape
    masks = np.zeros((k, n_models), dtype=np.uint8)
    ids = np.arange(k)
    for q in range(n_models):
        r = vr.residuals[q]
        present = np.isfinite(r)
        n_present = int(present.sum())
        if n_present == 0:
            continue
        n_in = math.ceil(t * n_present)
        order = np.lexsort((ids, np.where(present, r, np.inf)))
        masks[order[:n_in], q] = 1
    return masks


def build_affinity(masks: np.ndarray, view: str = "") -> AffinityView:
    """Gram matrix of the inlier masks: a_ij = c_i . c_j."""
    c = np.asarray(masks, dtype=np.int64)
    return AffinityView(matrix=c @ c.T, view=view)


def sparsify_epsilon(av: AffinityView, eps_quantile: float) -> AffinityView:
    """Zero off-diagonal entries below a quantile of the positive off-diagonal.

    The diagonal is untouched and symmetry is preserved (thresholding is by
    value). When every off-diagonal entry is already zero the matrix is
    returned unchanged with a warning.
    """
    if not 0.0 <= eps_quantile <= 1.0:
        raise ValueError("eps_quantile must lie in [0, 1]")
    a = np.array(av.matrix)
    if not np.array_equal(a, a.T):
        raise ValueError("affinity matrix must be symmetric")
    off = ~np.eye(a.shape[0], dtype=bool)
    positive = a[off & (a > 0)]
    if positive.size == 0:
        logger.warning("view '%s': no positive off-diagonal affinity to sparsify",
                       av.view)
        return AffinityView(matrix=a, view=av.view)
    threshold = np.quantile(positive, eps_quantile)
    a[off & (a < threshold)] = 0
    return AffinityView(matrix=a, view=av.view)


def all_offdiagonal_zero(av: AffinityView) -> bool:
    off = ~np.eye(av.matrix.shape[0], dtype=bool)
    return bool((av.matrix[off] == 0).all())


def dump_debug_json(path, tensor: ResidualTensor,
                    affinities: dict[str, AffinityView]) -> None:
    """Dump residuals and affinities for offline inspection (NaN -> null)."""
    payload = {"views": {}}
    for view, vr in tensor.views.items():
        resid = [[None if not np.isfinite(x) else float(x) for x in row]
                 for row in vr.residuals]
        payload["views"][view] = {
            "models": [[obj, list(pair)] for obj, pair in vr.models],
            "residuals": resid,
        }
    payload["affinity"] = {view: av.matrix.tolist()
                           for view, av in affinities.items()}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
