"""File-level orchestration: load inputs, segment, score, write outputs."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .affinity import dump_debug_json
from .clustering import ClusteringResult
from .io import FormatError, load_flow, load_masks, load_trajectories, write_ppm
from .metrics import classification_error, pixel_mean_iou
from .scene import make_scene
from .segmenter import MotionSegmenter

LABEL_TIE_BREAK = "smallest_object_id"

# fixed render palette, one color per cluster id (cycled); the background
# cluster is always drawn dark gray
PALETTE = np.array([
    (230, 80, 60), (70, 140, 230), (90, 190, 90), (235, 190, 60),
    (170, 90, 200), (80, 200, 200), (240, 130, 190), (150, 110, 70),
    (110, 110, 240), (180, 220, 90), (220, 110, 80), (100, 170, 140),
], dtype=np.uint8)
BACKGROUND_COLOR = np.array((45, 45, 45), dtype=np.uint8)


class PipelineError(RuntimeError):
    """A pipeline stage failed; the message names the stage."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    trajectories: str
    flow_dir: str
    masks_dir: str
    n_clusters: int
    f_gap: int = 3
    ork_quantile: float = 0.15
    eps_quantile: float = 0.2
    coupling: float = 0.025
    seed: int = 0
    flow_stride: int = 1
    out_dir: str = "out"
    max_iter: int = 50
    tol: float = 1e-6
    n_init: int = 10
    debug_dump: bool = False

    def validate(self):
        if not 0.0 < self.ork_quantile <= 1.0:
            raise ValueError("ork-quantile must lie in (0, 1]")
        if not 0.0 <= self.eps_quantile <= 1.0:
            raise ValueError("eps-quantile must lie in [0, 1]")
        if self.coupling < 0:
            raise ValueError("lambda must be >= 0")
        if self.n_clusters < 1:
            raise ValueError("clusters must be >= 1")


@dataclass
class Report:
    config: dict
    label_tie_break: str
    n_objects: int
    n_trajectories: int
    n_frames: int
    views_used: list
    model_counts: dict
    object_clusters: list
    background_cluster: int
    classification_error_pct: Optional[float]
    pixel_mean_iou: Optional[float]
    warnings: list = field(default_factory=list)
    timings_sec: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def render_labels(result: ClusteringResult, frame: int) -> np.ndarray:
    """Color raster of one frame's pixel clusters (background set apart)."""
    pixel = result.pixel_labels
    if not 0 <= frame < pixel.shape[0]:
        raise ValueError(f"frame {frame} out of range")
    colors = PALETTE[np.arange(int(pixel.max()) + 1) % len(PALETTE)].copy()
    colors[result.background_cluster] = BACKGROUND_COLOR
    return colors[pixel[frame]]


def write_labels_csv(path, ts, trajectory_labels) -> None:
    rows = sorted(zip((tr.id for tr in ts.trajectories), trajectory_labels))
    lines = ["trajectory_id,cluster"]
    lines += [f"{tid},{int(label)}" for tid, label in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def read_labels_csv(path) -> dict[int, int]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "trajectory_id,cluster":
        raise FormatError(f"{path}: expected 'trajectory_id,cluster' header")
    out = {}
    for ln in lines[1:]:
        if not ln.strip():
            continue
        tid, label = ln.split(",")
        out[int(tid)] = int(label)
    return out


def run_pipeline(cfg: PipelineConfig, gt_pixel_labels=None) -> Report:
    """Execute the whole segmentation pipeline on on-disk inputs.

    Writes ``report.json``, ``labels.csv`` and per-frame ``frame_%04d.ppm``
    rasters into ``cfg.out_dir``. Ground-truth trajectory labels embedded in
    the trajectory file (gt_label >= 0) trigger error scoring; pixel IoU is
    added when ``gt_pixel_labels`` rasters are supplied in-process.
    """
    cfg.validate()
    timings = {}

    t0 = time.perf_counter()
    try:
        ts = load_trajectories(cfg.trajectories)
        masks = load_masks(cfg.masks_dir)
        flow = load_flow(cfg.flow_dir)
        scene = make_scene(ts, flow, masks)
    except (FormatError, OSError, ValueError) as exc:
        raise PipelineError("ingest", exc) from exc
    timings["ingest"] = time.perf_counter() - t0

    seg = MotionSegmenter(
        n_clusters=cfg.n_clusters, frame_gap=cfg.f_gap,
        ork_quantile=cfg.ork_quantile, eps_quantile=cfg.eps_quantile,
        coupling=cfg.coupling, max_iter=cfg.max_iter, tol=cfg.tol,
        flow_stride=cfg.flow_stride, random_state=cfg.seed,
        n_init=cfg.n_init)
    seg.fit(scene)
    timings.update(seg.timings_)

    gt_labels = [tr.gt_motion_label for tr in seg.labeled_trajectories_.trajectories]
    error_pct = None
    if all(g is not None for g in gt_labels):
        error_pct = classification_error(seg.trajectory_labels_,
                                         np.asarray(gt_labels))
    iou = None
    if gt_pixel_labels is not None:
        iou = pixel_mean_iou(seg.pixel_labels_, gt_pixel_labels)

    t0 = time.perf_counter()
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_labels_csv(out_dir / "labels.csv", seg.labeled_trajectories_,
                     seg.trajectory_labels_)
    for frame in range(scene.frame_count):
        write_ppm(out_dir / f"frame_{frame:04d}.ppm",
                  render_labels(seg.result_, frame))
    if cfg.debug_dump:
        dump_debug_json(out_dir / "debug_affinity.json",
                        seg.residual_tensor_, seg.affinities_)
    timings["outputs"] = time.perf_counter() - t0

    report = Report(
        config={**asdict(cfg)},
        label_tie_break=LABEL_TIE_BREAK,
        n_objects=scene.objects.count,
        n_trajectories=len(ts),
        n_frames=scene.frame_count,
        views_used=list(seg.views_),
        model_counts=seg.model_counts_,
        object_clusters=[int(c) for c in seg.labels_],
        background_cluster=seg.background_cluster_,
        classification_error_pct=error_pct,
        pixel_mean_iou=iou,
        warnings=list(seg.warnings_),
        timings_sec={k: round(v, 6) for k, v in timings.items()},
    )
    (out_dir / "report.json").write_text(report.to_json() + "\n")
    return report
