"""Scene data model: point trajectories, instance masks, dense flow, objects."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Trajectory:
    """One tracked point over a contiguous window of frames.

    Coordinates are pixels in image space. ``object_label`` is -1 until an
    instance label has been assigned (0 is the background instance).
    """

    id: int
    start_frame: int
    points: np.ndarray  # (n, 2) float64
    object_label: int = -1
    gt_motion_label: Optional[int] = None

    @property
    def end_frame(self) -> int:
        """Last observed frame, inclusive."""
        return self.start_frame + len(self.points) - 1

    def observes(self, frame: int) -> bool:
        return self.start_frame <= frame <= self.end_frame

    def point_at(self, frame: int) -> np.ndarray:
        return self.points[frame - self.start_frame]


@dataclass(frozen=True)
class TrajectorySet:
    trajectories: list[Trajectory]
    frame_count: int
    image_size: tuple[int, int]  # (width, height) in pixels

    def __len__(self) -> int:
        return len(self.trajectories)

    def validate(self) -> None:
        w, h = self.image_size
        for tr in self.trajectories:
            if len(tr.points) < 2:
                raise ValueError(f"track {tr.id}: fewer than 2 observed frames")
            if tr.start_frame < 0 or tr.end_frame >= self.frame_count:
                raise ValueError(f"track {tr.id}: window outside frame range")
            pts = np.asarray(tr.points)
            if not np.all(np.isfinite(pts)):
                raise ValueError(f"track {tr.id}: non-finite coordinates")
            if (pts[:, 0] < 0).any() or (pts[:, 0] >= w).any() \
                    or (pts[:, 1] < 0).any() or (pts[:, 1] >= h).any():
                raise ValueError(f"track {tr.id}: coordinates outside image bounds")


@dataclass(frozen=True)
class InstanceMaskSequence:
    """Per-frame instance-id rasters with ids compacted to 0..k-1 (0 = background)."""

    frames: np.ndarray  # (F, H, W) int32
    id_map: dict[int, int] = field(default_factory=dict)  # original id -> compact id

    @property
    def n_objects(self) -> int:
        return int(self.frames.max()) + 1

    @property
    def image_size(self) -> tuple[int, int]:
        return self.frames.shape[2], self.frames.shape[1]


@dataclass(frozen=True)
class FlowFieldSequence:
    """Dense displacement rasters, one per consecutive frame pair (m, m+1)."""

    flows: np.ndarray  # (F-1, H, W, 2) float, (u, v) in px/frame

    def __len__(self) -> int:
        return self.flows.shape[0]

    @property
    def image_size(self) -> tuple[int, int]:
        return self.flows.shape[2], self.flows.shape[1]


@dataclass(frozen=True)
class ObjectSet:
    """Object count plus the frames where each object occupies at least one pixel."""

    count: int
    visibility: list[np.ndarray]  # per object, sorted frame indices

    @classmethod
    def from_masks(cls, masks: InstanceMaskSequence) -> "ObjectSet":
        k = masks.n_objects
        vis = []
        for obj in range(k):
            present = np.flatnonzero((masks.frames == obj).any(axis=(1, 2)))
            vis.append(present)
        return cls(count=k, visibility=vis)

    def visible_at(self, obj: int, frame: int) -> bool:
        return bool(np.isin(frame, self.visibility[obj]))


@dataclass(frozen=True)
class Scene:
    """Immutable bundle of all ingested data for one sequence."""

    trajectories: TrajectorySet
    flow: FlowFieldSequence
    masks: InstanceMaskSequence
    objects: ObjectSet

    @property
    def image_size(self) -> tuple[int, int]:
        return self.trajectories.image_size

    @property
    def frame_count(self) -> int:
        return self.trajectories.frame_count


def make_scene(trajectories: TrajectorySet, flow: FlowFieldSequence,
               masks: InstanceMaskSequence) -> Scene:
    if masks.image_size != trajectories.image_size:
        raise ValueError("mask dimensions disagree with trajectory header")
    if flow.image_size != trajectories.image_size:
        raise ValueError("flow dimensions disagree with trajectory header")
    return Scene(trajectories=trajectories, flow=flow, masks=masks,
                 objects=ObjectSet.from_masks(masks))


def assign_trajectory_labels(ts: TrajectorySet,
                             masks: InstanceMaskSequence) -> TrajectorySet:
    """Assign each trajectory the most frequent instance id it passes over.

    Subpixel coordinates are matched to the nearest mask pixel. A trajectory
    that only ever reads background keeps label 0. Ties between ids are broken
    toward the smallest id, deterministically.
    """
    w, h = masks.image_size
    n_frames = masks.frames.shape[0]
    k = masks.n_objects
    ties = 0
    labeled = []
    for tr in ts.trajectories:
        votes = np.zeros(k, dtype=np.int64)
        for f in range(tr.start_frame, min(tr.end_frame, n_frames - 1) + 1):
            x, y = tr.point_at(f)
            xi = min(max(int(round(x)), 0), w - 1)
            yi = min(max(int(round(y)), 0), h - 1)
            votes[masks.frames[f, yi, xi]] += 1
        label = int(votes.argmax())  # argmax picks the smallest id on ties
        if (votes == votes[label]).sum() > 1:
            ties += 1
        labeled.append(replace(tr, object_label=label))
    if ties:
        logger.info("label ties on %d trajectories broken toward smallest id", ties)
    return replace(ts, trajectories=labeled)


@dataclass(frozen=True)
class FlowSampleSet:
    """Flow samples of one object on one frame pair, image-center coordinates."""

    samples: np.ndarray  # (n, 4): x, y, u, v

    def __len__(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True)
class LabeledFlow:
    """Per (frame pair, object) flow samples with centered coordinates."""

    image_size: tuple[int, int]
    stride: int
    n_pairs: int
    n_objects: int
    _samples: dict[tuple[int, int], np.ndarray]

    def get(self, pair: int, obj: int) -> FlowSampleSet:
        arr = self._samples.get((pair, obj))
        if arr is None:
            arr = np.empty((0, 4), dtype=np.float64)
        return FlowSampleSet(samples=arr)


def center_coordinates(xy: np.ndarray, image_size: tuple[int, int]) -> np.ndarray:
    """Shift pixel coordinates so the image center becomes the origin."""
    w, h = image_size
    return np.asarray(xy, dtype=np.float64) - np.array([w / 2.0, h / 2.0])


def label_flow(flow: FlowFieldSequence, masks: InstanceMaskSequence,
               stride: int = 1) -> LabeledFlow:
    """Group flow vectors by the instance id of their source pixel.

    Coordinates are re-expressed relative to the image center before any model
    fitting. ``stride`` subsamples the pixel grid uniformly in both axes.
    """
    if flow.image_size != masks.image_size:
        raise ValueError("flow and mask dimensions disagree")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    w, h = masks.image_size
    k = masks.n_objects
    ys, xs = np.mgrid[0:h:stride, 0:w:stride]
    xs = xs.ravel()
    ys = ys.ravel()
    centered = center_coordinates(np.column_stack([xs, ys]), (w, h))
    samples: dict[tuple[int, int], np.ndarray] = {}
    for m in range(len(flow)):
        labels = masks.frames[m, ys, xs]
        uv = flow.flows[m, ys, xs, :]
        for obj in range(k):
            sel = labels == obj
            if not sel.any():
                continue
            samples[(m, obj)] = np.column_stack([centered[sel], uv[sel]])
    return LabeledFlow(image_size=(w, h), stride=stride, n_pairs=len(flow),
                       n_objects=k, _samples=samples)
