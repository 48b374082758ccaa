"""Fit every per-object motion model and gather them into one immutable bank.

Fundamental matrices are fitted between every f-th frame (disjoint windows
(0, f), (f, 2f), ...), quadratic flow models between every consecutive pair.
Each fit is a pure function of its inputs, so the (object, frame pair) grid
could be dispatched concurrently; results land in the same deterministic
order either way.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .epipolar import Correspondences, FundamentalMatrix, estimate_fundamental
from .flow_model import QuadraticFlowModel, fit_quadratic
from .scene import LabeledFlow, TrajectorySet

FUND_VIEW = "fund"
FLOW_VIEW = "flow"
VIEWS = (FLOW_VIEW, FUND_VIEW)


def fundamental_frame_pairs(frame_count: int, f_gap: int) -> list[tuple[int, int]]:
    if f_gap < 1:
        raise ValueError("f_gap must be >= 1")
    return [(m, m + f_gap) for m in range(0, frame_count - f_gap, f_gap)]


def correspondences_for(ts: TrajectorySet, obj: int, m0: int,
                        m1: int) -> Correspondences:
    """Point pairs of all object-``obj`` trajectories observed at m0 and m1."""
    pa, pb = [], []
    for tr in ts.trajectories:
        if tr.object_label == obj and tr.observes(m0) and tr.observes(m1):
            pa.append(tr.point_at(m0))
            pb.append(tr.point_at(m1))
    if not pa:
        return Correspondences(np.empty((0, 2)), np.empty((0, 2)))
    return Correspondences(np.asarray(pa), np.asarray(pb))


@dataclass(frozen=True)
class MotionModelBank:
    """All per-object, per-frame-pair models of both views, valid or not."""

    fundamental: dict[tuple[int, int], FundamentalMatrix]  # (obj, pair idx)
    flow: dict[tuple[int, int], QuadraticFlowModel]
    fund_pairs: list[tuple[int, int]]  # frame pairs (m, m+f)
    flow_pairs: list[tuple[int, int]]  # frame pairs (m, m+1)
    n_objects: int

    def counts(self, view: str) -> dict[str, int]:
        models = self.fundamental if view == FUND_VIEW else self.flow
        out = {"valid": 0, "degenerate": 0, "insufficient": 0}
        for model in models.values():
            out[model.status] += 1
        out["attempted"] = len(models)
        return out

    def valid_models(self, view: str):
        """Valid models in fixed (object id, frame pair) order."""
        models = self.fundamental if view == FUND_VIEW else self.flow
        keys = sorted(models)
        return [(key, models[key]) for key in keys if models[key].valid]


def fit_model_bank(ts: TrajectorySet, labeled_flow: LabeledFlow, n_objects: int,
                   f_gap: int = 3) -> MotionModelBank:
    w, h = ts.image_size
    coord_scale = 2.0 / max(w, h)
    fund_pairs = fundamental_frame_pairs(ts.frame_count, f_gap)
    flow_pairs = [(m, m + 1) for m in range(labeled_flow.n_pairs)]

    fundamental = {}
    for obj in range(n_objects):
        for idx, (m0, m1) in enumerate(fund_pairs):
            c = correspondences_for(ts, obj, m0, m1)
            fundamental[(obj, idx)] = estimate_fundamental(
                c, object_id=obj, frame_pair=(m0, m1))

    flow_models = {}
    for obj in range(n_objects):
        for m, pair in enumerate(flow_pairs):
            samples = labeled_flow.get(m, obj)
            flow_models[(obj, m)] = fit_quadratic(
                samples, coord_scale=coord_scale, object_id=obj, frame_pair=pair)

    return MotionModelBank(fundamental=fundamental, flow=flow_models,
                           fund_pairs=fund_pairs, flow_pairs=flow_pairs,
                           n_objects=n_objects)
