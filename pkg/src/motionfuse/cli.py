"""Command-line entry points: segment, synth, score.

Exit codes: 0 success, 2 input error, 3 numerical failure (no usable motion
view).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .io import FormatError, write_flow_dir, write_masks, write_pgm, write_trajectories
from .metrics import classification_error
from .pipeline import PipelineConfig, PipelineError, read_labels_csv, run_pipeline
from .segmenter import BothViewsUnavailableError
from .synth import SceneGenerationError, generate_scene, load_scene_config

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motionfuse",
        description="Object-level motion segmentation from trajectories, "
                    "flow and instance masks.")
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="run the segmentation pipeline")
    seg.add_argument("--trajectories", required=True, help="trajectory file")
    seg.add_argument("--flow-dir", required=True, help="directory of .flo files")
    seg.add_argument("--masks-dir", required=True, help="directory of PGM masks")
    seg.add_argument("--clusters", type=int, required=True,
                     help="number of motion groups")
    seg.add_argument("--f-gap", type=int, default=3,
                     help="frame gap for fundamental matrices")
    seg.add_argument("--ork-quantile", type=float, default=0.15,
                     help="inlier rank quantile t")
    seg.add_argument("--eps-quantile", type=float, default=0.2,
                     help="affinity sparsification quantile")
    seg.add_argument("--lambda", dest="coupling", type=float, default=0.025,
                     help="co-regularization coupling weight")
    seg.add_argument("--seed", type=int, default=0)
    seg.add_argument("--flow-stride", type=int, default=1,
                     help="flow sample subsampling stride")
    seg.add_argument("--out", default="out", help="output directory")

    syn = sub.add_parser("synth", help="generate a synthetic scene")
    syn.add_argument("--config", required=True, help="scene config JSON")
    syn.add_argument("--out", required=True, help="output directory")

    score = sub.add_parser("score", help="score predicted labels against truth")
    score.add_argument("--pred", required=True, help="predicted labels.csv")
    score.add_argument("--gt", required=True, help="ground-truth labels.csv")
    return parser


def _cmd_segment(args) -> int:
    cfg = PipelineConfig(
        trajectories=args.trajectories, flow_dir=args.flow_dir,
        masks_dir=args.masks_dir, n_clusters=args.clusters,
        f_gap=args.f_gap, ork_quantile=args.ork_quantile,
        eps_quantile=args.eps_quantile, coupling=args.coupling,
        seed=args.seed, flow_stride=args.flow_stride, out_dir=args.out)
    try:
        report = run_pipeline(cfg)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BothViewsUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {Path(cfg.out_dir) / 'report.json'}")
    if report.classification_error_pct is not None:
        print(f"classification error: {report.classification_error_pct:.4f}%")
    for warning in report.warnings:
        print(f"warning: {warning}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    try:
        cfg = load_scene_config(args.config)
        ts, flow, masks, gt = generate_scene(cfg)
    except (FormatError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_trajectories(out / "trajectories.txt", ts)
    write_flow_dir(out / "flow", flow)
    write_masks(out / "masks", masks.frames)
    gt_dir = out / "gt_masks"
    gt_dir.mkdir(parents=True, exist_ok=True)
    maxval = max(int(gt.pixel_labels.max()), 1)
    for i, raster in enumerate(gt.pixel_labels):
        write_pgm(gt_dir / f"gt_{i:04d}.pgm", raster, maxval=maxval)
    print(f"wrote scene with {len(ts)} trajectories, "
          f"{cfg.frame_count} frames to {out}")
    return EXIT_OK


def _cmd_score(args) -> int:
    try:
        pred = read_labels_csv(args.pred)
        gt = read_labels_csv(args.gt)
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if set(pred) != set(gt):
        print("error: trajectory ids disagree between files", file=sys.stderr)
        return EXIT_INPUT
    ids = sorted(pred)
    err = classification_error(np.array([pred[i] for i in ids]),
                               np.array([gt[i] for i in ids]))
    print(f"classification error: {err:.4f}%")
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "segment":
            return _cmd_segment(args)
        if args.command == "synth":
            return _cmd_synth(args)
        return _cmd_score(args)
    except SceneGenerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
