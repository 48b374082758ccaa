"""Readers and writers for the on-disk formats.

Formats:
  - trajectories: text, header ``N F W H``, then per track a line
    ``id start_frame length gt_label`` followed by ``length`` lines of
    ``x y``; gt_label is -1 when unknown.
  - flow: Middlebury .flo, little-endian float32 magic 202021.25, int32
    width/height, row-major interleaved (u, v) float32 pairs.
  - masks: binary PGM (P5), pixel value = instance id.
  - rendered labels: binary PPM (P6).
"""

from __future__ import annotations

import logging
import re
import warnings
from pathlib import Path

import numpy as np

from .scene import (
    FlowFieldSequence,
    InstanceMaskSequence,
    Trajectory,
    TrajectorySet,
)

logger = logging.getLogger(__name__)

FLO_MAGIC = 202021.25


class FormatError(ValueError):
    """Raised when an input file does not conform to its declared format."""


def _fmt_float(x: float) -> str:
    # repr gives the shortest string that round-trips a float64 exactly
    return repr(float(x))


def load_trajectories(path) -> TrajectorySet:
    """Parse a trajectory file into a :class:`TrajectorySet`.

    Tracks with fewer than 2 points raise; tracks with out-of-bounds points
    are dropped with a warning naming the track.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise FormatError(f"{path}: empty file")

    def parse(line_no: int, n_fields: int, kinds) -> list:
        if line_no >= len(lines):
            raise FormatError(f"{path}: unexpected end of file at line {line_no + 1}")
        fields = lines[line_no].split()
        if len(fields) != n_fields:
            raise FormatError(
                f"{path}: line {line_no + 1}: expected {n_fields} fields, "
                f"got {len(fields)}")
        try:
            return [kind(f) for kind, f in zip(kinds, fields)]
        except ValueError as exc:
            raise FormatError(f"{path}: line {line_no + 1}: {exc}") from None

    n_tracks, frame_count, width, height = parse(0, 4, (int, int, int, int))
    if n_tracks <= 0:
        raise FormatError(f"{path}: empty trajectory set")

    trajectories = []
    dropped = []
    cursor = 1
    for _ in range(n_tracks):
        tid, start, length, gt = parse(cursor, 4, (int, int, int, int))
        cursor += 1
        if length < 2:
            raise FormatError(
                f"{path}: track {tid}: length {length} violates minimum of 2")
        pts = np.empty((length, 2), dtype=np.float64)
        for i in range(length):
            pts[i] = parse(cursor, 2, (float, float))
            cursor += 1
        in_bounds = np.all((pts[:, 0] >= 0) & (pts[:, 0] < width)
                           & (pts[:, 1] >= 0) & (pts[:, 1] < height))
        if not in_bounds:
            dropped.append(tid)
            continue
        trajectories.append(Trajectory(
            id=tid, start_frame=start, points=pts,
            gt_motion_label=None if gt < 0 else gt))
    if cursor != len(lines):
        raise FormatError(f"{path}: trailing data at line {cursor + 1}")
    if dropped:
        warnings.warn(
            f"{path}: dropped tracks with out-of-bounds points: {dropped}")
    if not trajectories:
        raise FormatError(f"{path}: no usable trajectories")

    ts = TrajectorySet(trajectories=trajectories, frame_count=frame_count,
                       image_size=(width, height))
    ts.validate()
    return ts


def write_trajectories(path, ts: TrajectorySet) -> None:
    """Write the canonical text form of a trajectory set."""
    w, h = ts.image_size
    out = [f"{len(ts.trajectories)} {ts.frame_count} {w} {h}"]
    for tr in ts.trajectories:
        gt = -1 if tr.gt_motion_label is None else int(tr.gt_motion_label)
        out.append(f"{tr.id} {tr.start_frame} {len(tr.points)} {gt}")
        for x, y in np.asarray(tr.points):
            out.append(f"{_fmt_float(x)} {_fmt_float(y)}")
    Path(path).write_text("\n".join(out) + "\n")


def _indexed_files(directory, suffix: str) -> list[Path]:
    """Files named with a frame index, validated to cover 0..n-1."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FormatError(f"{directory}: not a directory")
    found = {}
    for p in sorted(directory.glob(f"*{suffix}")):
        nums = re.findall(r"\d+", p.stem)
        if not nums:
            raise FormatError(f"{p}: file name carries no frame index")
        found[int(nums[-1])] = p
    if not found:
        raise FormatError(f"{directory}: no {suffix} files")
    missing = sorted(set(range(len(found))) - set(found))
    if missing:
        raise FormatError(f"{directory}: missing frame indices {missing}")
    return [found[i] for i in range(len(found))]


def read_flo(path) -> np.ndarray:
    """Read one Middlebury .flo raster as (H, W, 2) float64."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 12:
        raise FormatError(f"{path}: truncated header")
    magic = np.frombuffer(raw, dtype="<f4", count=1)[0]
    if magic != np.float32(FLO_MAGIC):
        raise FormatError(f"{path}: bad magic number {magic!r}")
    w, h = (int(v) for v in np.frombuffer(raw, dtype="<i4", count=2, offset=4))
    if w <= 0 or h <= 0:
        raise FormatError(f"{path}: invalid dimensions {w}x{h}")
    expect = 12 + 8 * w * h
    if len(raw) != expect:
        raise FormatError(f"{path}: expected {expect} bytes, got {len(raw)}")
    data = np.frombuffer(raw, dtype="<f4", offset=12).reshape(h, w, 2)
    return data.astype(np.float64)


def write_flo(path, flow: np.ndarray) -> None:
    flow = np.asarray(flow)
    h, w = flow.shape[:2]
    header = np.array([FLO_MAGIC], dtype="<f4").tobytes()
    header += np.array([w, h], dtype="<i4").tobytes()
    Path(path).write_bytes(header + flow.astype("<f4").tobytes())


def load_flow(directory) -> FlowFieldSequence:
    """Load all .flo files of a directory as one flow sequence."""
    files = _indexed_files(directory, ".flo")
    rasters = []
    shape = None
    for idx, p in enumerate(files):
        flow = read_flo(p)
        if shape is None:
            shape = flow.shape
        elif flow.shape != shape:
            raise FormatError(f"{p}: dimension mismatch across flow files")
        if not np.all(np.isfinite(flow)):
            raise FormatError(f"{p}: non-finite flow values at frame pair {idx}")
        rasters.append(flow)
    return FlowFieldSequence(flows=np.stack(rasters))


def read_pgm(path) -> np.ndarray:
    """Read a binary PGM (P5) raster as (H, W) int32."""
    path = Path(path)
    raw = path.read_bytes()
    header = []
    pos = 0
    while len(header) < 4:
        while pos < len(raw) and raw[pos] in b" \t\r\n":
            pos += 1
        if pos < len(raw) and raw[pos:pos + 1] == b"#":
            while pos < len(raw) and raw[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and raw[pos] not in b" \t\r\n":
            pos += 1
        header.append(raw[start:pos])
    if header[0] != b"P5":
        raise FormatError(f"{path}: not a binary PGM (P5) file")
    try:
        w, h, maxval = int(header[1]), int(header[2]), int(header[3])
    except ValueError:
        raise FormatError(f"{path}: malformed PGM header") from None
    pos += 1  # single whitespace after maxval
    dtype = ">u2" if maxval > 255 else "u1"
    count = w * h
    pixels = np.frombuffer(raw, dtype=dtype, count=count, offset=pos)
    if pixels.size != count:
        raise FormatError(f"{path}: truncated pixel data")
    return pixels.reshape(h, w).astype(np.int32)


def write_pgm(path, raster: np.ndarray, maxval: int | None = None) -> None:
    raster = np.asarray(raster)
    if maxval is None:
        maxval = max(int(raster.max()), 1)
    h, w = raster.shape
    header = f"P5\n{w} {h}\n{maxval}\n".encode()
    dtype = ">u2" if maxval > 255 else "u1"
    Path(path).write_bytes(header + raster.astype(dtype).tobytes())


def load_masks(directory) -> InstanceMaskSequence:
    """Load per-frame PGM masks, compacting instance ids to 0..k-1.

    The compaction map is recorded on the returned sequence; background id 0
    always maps to 0.
    """
    files = _indexed_files(directory, ".pgm")
    rasters = []
    shape = None
    for idx, p in enumerate(files):
        m = read_pgm(p)
        if shape is None:
            shape = m.shape
        elif m.shape != shape:
            raise FormatError(
                f"{p}: raster {m.shape[1]}x{m.shape[0]} does not match "
                f"{shape[1]}x{shape[0]} of earlier frames")
        rasters.append(m)
    frames = np.stack(rasters)
    used = np.unique(frames)
    used = np.union1d(used, [0])  # background always exists
    id_map = {int(orig): new for new, orig in enumerate(used)}
    lut = np.zeros(int(used.max()) + 1, dtype=np.int32)
    for orig, new in id_map.items():
        lut[orig] = new
    return InstanceMaskSequence(frames=lut[frames], id_map=id_map)


def write_masks(directory, frames: np.ndarray) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    maxval = max(int(frames.max()), 1)
    for i, raster in enumerate(frames):
        write_pgm(directory / f"mask_{i:04d}.pgm", raster, maxval=maxval)


def write_flow_dir(directory, flow: FlowFieldSequence) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for i in range(len(flow)):
        write_flo(directory / f"flow_{i:04d}.flo", flow.flows[i])


def write_ppm(path, image: np.ndarray) -> None:
    """Write an (H, W, 3) uint8 image as binary PPM (P6)."""
    image = np.asarray(image, dtype=np.uint8)
    h, w = image.shape[:2]
    Path(path).write_bytes(f"P6\n{w} {h}\n255\n".encode() + image.tobytes())
