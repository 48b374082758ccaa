"""Synthetic rigid-scene generator: the desk-scale oracle for the pipeline.

A scene is a pinhole camera moving past rigid surface patches. Each patch is
a rectangle in its own frame, optionally slanted and gently curved
(z = gx*a + gy*b + qx*a^2 + qy*b^2 over (a, b) in the extent box), which
gives every object a well-defined dense surface for exact flow while keeping
its tracked points non-coplanar. Object 0 is the background patch; it must
cover the whole image at every frame.

Everything derives from closed-form projection and ray-surface intersection,
so trajectories, flow rasters, masks and ground truth are mutually exact and
bit-reproducible for a given (config, seed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull

from .epipolar import FundamentalMatrix, _normalize_fundamental
from .scene import (
    FlowFieldSequence,
    InstanceMaskSequence,
    Scene,
    Trajectory,
    TrajectorySet,
    make_scene,
)

DEFAULT_FOCAL = 500.0


class SceneGenerationError(ValueError):
    """Raised when a configuration cannot produce a consistent scene."""


def axis_angle_to_matrix(aa) -> np.ndarray:
    """Rodrigues rotation from an axis-angle vector (angle = vector norm)."""
    aa = np.asarray(aa, dtype=np.float64)
    theta = np.linalg.norm(aa)
    if theta < 1e-15:
        return np.eye(3)
    k = aa / theta
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(theta) * kx + (1 - np.cos(theta)) * (kx @ kx)


def _skew(v: np.ndarray) -> np.ndarray:
    return np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])


@dataclass(frozen=True)
class CameraPath:
    """World-to-camera rotation (axis-angle) and camera center per frame."""

    positions: np.ndarray    # (F, 3)
    axis_angles: np.ndarray  # (F, 3)

    @classmethod
    def static(cls, frame_count: int) -> "CameraPath":
        return cls(positions=np.zeros((frame_count, 3)),
                   axis_angles=np.zeros((frame_count, 3)))


@dataclass(frozen=True)
class PatchObject:
    """A rigid curved rectangle patch with a per-frame rigid motion."""

    name: str
    motion_group: int
    center: np.ndarray        # (3,) world position of the patch origin at rest
    extent: tuple[float, float]   # half-sizes along local a, b
    slant: tuple[float, float]    # gx, gy
    curvature: tuple[float, float]  # qx, qy
    displacements: np.ndarray  # (F, 3) world offset per frame
    axis_angles: np.ndarray    # (F, 3) rotation about the patch origin per frame
    n_tracks: int = 12
    # trajectory sampling region; background patches extend past the view
    # frustum, so their tracked points come from a smaller inner region
    track_extent: tuple[float, float] | None = None

    @classmethod
    def static(cls, name, motion_group, center, extent, slant, curvature,
               frame_count, n_tracks=12, track_extent=None) -> "PatchObject":
        zeros = np.zeros((frame_count, 3))
        return cls(name=name, motion_group=motion_group,
                   center=np.asarray(center, dtype=np.float64),
                   extent=tuple(extent), slant=tuple(slant),
                   curvature=tuple(curvature), displacements=zeros,
                   axis_angles=zeros.copy(), n_tracks=n_tracks,
                   track_extent=track_extent)

    def with_velocity(self, velocity) -> "PatchObject":
        f = self.displacements.shape[0]
        steps = np.arange(f)[:, None] * np.asarray(velocity, dtype=np.float64)
        return replace(self, displacements=steps)

    def surface_height(self, a, b):
        gx, gy = self.slant
        qx, qy = self.curvature
        return gx * a + gy * b + qx * a * a + qy * b * b

    def local_points(self, ab: np.ndarray) -> np.ndarray:
        a, b = ab[:, 0], ab[:, 1]
        return np.column_stack([a, b, self.surface_height(a, b)])

    def boundary_ring(self, per_side: int = 16) -> np.ndarray:
        ex, ey = self.extent
        s = np.linspace(-1.0, 1.0, per_side, endpoint=False)
        ring = np.concatenate([
            np.column_stack([s * ex, np.full_like(s, -ey)]),
            np.column_stack([np.full_like(s, ex), s * ey]),
            np.column_stack([-s * ex, np.full_like(s, ey)]),
            np.column_stack([np.full_like(s, -ex), -s * ey]),
        ])
        return self.local_points(ring)


def subpatch(parent: PatchObject, name: str, motion_group: int,
             offset: tuple[float, float], extent: tuple[float, float],
             n_tracks: int = 12) -> PatchObject:
    """A smaller patch lying exactly on a parent patch's surface.

    Re-expands the parent's height field around the offset so the sub-patch
    shares the parent's geometry exactly (the field has no cross term, so the
    re-expansion is closed-form).
    """
    da, db = offset
    gx, gy = parent.slant
    qx, qy = parent.curvature
    center = parent.center + np.array([da, db, parent.surface_height(da, db)])
    slant = (gx + 2 * qx * da, gy + 2 * qy * db)
    return PatchObject(
        name=name, motion_group=motion_group, center=center,
        extent=tuple(extent), slant=slant, curvature=parent.curvature,
        displacements=parent.displacements.copy(),
        axis_angles=parent.axis_angles.copy(), n_tracks=n_tracks)


@dataclass(frozen=True)
class NoiseSpec:
    trajectory_sigma: float = 0.0
    flow_sigma: float = 0.0


@dataclass(frozen=True)
class SceneConfig:
    image_size: tuple[int, int]
    frame_count: int
    camera: CameraPath
    objects: list[PatchObject]  # objects[0] is the background patch
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    focal: float = DEFAULT_FOCAL
    seed: int = 0

    @property
    def principal_point(self) -> tuple[float, float]:
        return self.image_size[0] / 2.0, self.image_size[1] / 2.0

    def motion_groups(self) -> np.ndarray:
        return np.array([o.motion_group for o in self.objects], dtype=np.int64)

    def n_motion_groups(self) -> int:
        return len(set(o.motion_group for o in self.objects))

    def to_dict(self) -> dict:
        return {
            "image_size": list(self.image_size),
            "frame_count": self.frame_count,
            "focal": self.focal,
            "seed": self.seed,
            "noise": {"trajectory_sigma": self.noise.trajectory_sigma,
                      "flow_sigma": self.noise.flow_sigma},
            "camera": {"positions": self.camera.positions.tolist(),
                       "axis_angles": self.camera.axis_angles.tolist()},
            "objects": [{
                "name": o.name,
                "motion_group": o.motion_group,
                "center": np.asarray(o.center).tolist(),
                "extent": list(o.extent),
                "slant": list(o.slant),
                "curvature": list(o.curvature),
                "displacements": np.asarray(o.displacements).tolist(),
                "axis_angles": np.asarray(o.axis_angles).tolist(),
                "n_tracks": o.n_tracks,
                "track_extent": None if o.track_extent is None
                                else list(o.track_extent),
            } for o in self.objects],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SceneConfig":
        cam = CameraPath(
            positions=np.asarray(data["camera"]["positions"], dtype=np.float64),
            axis_angles=np.asarray(data["camera"]["axis_angles"],
                                   dtype=np.float64))
        objects = [PatchObject(
            name=o["name"], motion_group=int(o["motion_group"]),
            center=np.asarray(o["center"], dtype=np.float64),
            extent=tuple(o["extent"]), slant=tuple(o["slant"]),
            curvature=tuple(o["curvature"]),
            displacements=np.asarray(o["displacements"], dtype=np.float64),
            axis_angles=np.asarray(o["axis_angles"], dtype=np.float64),
            n_tracks=int(o.get("n_tracks", 12)),
            track_extent=None if o.get("track_extent") is None
                         else tuple(o["track_extent"]),
        ) for o in data["objects"]]
        noise = data.get("noise", {})
        return cls(
            image_size=tuple(data["image_size"]),
            frame_count=int(data["frame_count"]),
            camera=cam, objects=objects,
            noise=NoiseSpec(
                trajectory_sigma=float(noise.get("trajectory_sigma", 0.0)),
                flow_sigma=float(noise.get("flow_sigma", 0.0))),
            focal=float(data.get("focal", DEFAULT_FOCAL)),
            seed=int(data.get("seed", 0)))


@dataclass(frozen=True)
class GroundTruth:
    trajectory_labels: np.ndarray  # (n_trajectories,)
    pixel_labels: np.ndarray       # (F, H, W)


def load_scene_config(path) -> SceneConfig:
    """Load a scene config from JSON; supports preset shorthand.

    A config is either a full scene description or
    ``{"preset": name, "seed": ..., "trajectory_noise": ..., "flow_noise": ...}``.
    """
    data = json.loads(Path(path).read_text())
    if "preset" in data:
        tn = data.get("trajectory_noise")
        fn = data.get("flow_noise")
        return preset(data["preset"], seed=int(data.get("seed", 0)),
                      trajectory_noise=None if tn is None else float(tn),
                      flow_noise=None if fn is None else float(fn))
    return SceneConfig.from_dict(data)


# -- projection machinery ----------------------------------------------------

def _camera_frame(cfg: SceneConfig, frame: int):
    rot = axis_angle_to_matrix(cfg.camera.axis_angles[frame])
    return rot, cfg.camera.positions[frame]


def _object_frame(obj: PatchObject, frame: int):
    rot = axis_angle_to_matrix(obj.axis_angles[frame])
    return rot, obj.center + obj.displacements[frame]


def object_points_world(obj: PatchObject, frame: int,
                        local_pts: np.ndarray) -> np.ndarray:
    rot, origin = _object_frame(obj, frame)
    return local_pts @ rot.T + origin


def project(cfg: SceneConfig, frame: int, world_pts: np.ndarray) -> np.ndarray:
    rot, center = _camera_frame(cfg, frame)
    cam = (world_pts - center) @ rot.T
    z = cam[:, 2]
    if np.any(z <= 0):
        raise SceneGenerationError(f"points behind camera at frame {frame}")
    cx, cy = cfg.principal_point
    return np.column_stack([cfg.focal * cam[:, 0] / z + cx,
                            cfg.focal * cam[:, 1] / z + cy])


def _backproject_onto(cfg: SceneConfig, frame: int, obj: PatchObject,
                      pixels: np.ndarray) -> np.ndarray:
    """Intersect pixel rays with the object's surface; returns patch-local points.

    The surface height field is quadratic, so the ray parameter solves a
    scalar quadratic per pixel; the root continuous in the curvature (the one
    approaching the planar solution) is the physical one here.
    """
    cam_rot, cam_center = _camera_frame(cfg, frame)
    obj_rot, obj_origin = _object_frame(obj, frame)
    cx, cy = cfg.principal_point
    dirs_cam = np.column_stack([
        (pixels[:, 0] - cx) / cfg.focal,
        (pixels[:, 1] - cy) / cfg.focal,
        np.ones(len(pixels)),
    ])
    dirs = dirs_cam @ cam_rot @ obj_rot  # = obj_rot.T @ cam_rot.T @ d, rowwise
    origin = obj_rot.T @ (cam_center - obj_origin)

    gx, gy = obj.slant
    qx, qy = obj.curvature
    ox, oy, oz = origin
    dx, dy, dz = dirs[:, 0], dirs[:, 1], dirs[:, 2]
    qa = qx * dx * dx + qy * dy * dy
    qb = gx * dx + gy * dy + 2 * qx * ox * dx + 2 * qy * oy * dy - dz
    qc = gx * ox + gy * oy + qx * ox * ox + qy * oy * oy - oz

    linear = np.abs(qa) < 1e-14
    with np.errstate(divide="ignore", invalid="ignore"):
        t_planar = -qc / qb
        disc = qb * qb - 4 * qa * qc
        if np.any(disc[~linear] < 0):
            raise SceneGenerationError(
                f"object '{obj.name}': surface does not cover a pixel ray "
                f"at frame {frame}")
        sq = np.sqrt(np.maximum(disc, 0.0))
        stable = np.where(qb >= 0, -(qb + sq) / 2.0, -(qb - sq) / 2.0)
        t = np.where(linear, t_planar, qc / stable)
    if np.any(~np.isfinite(t)) or np.any(t <= 0):
        raise SceneGenerationError(
            f"object '{obj.name}': no forward ray-surface intersection "
            f"at frame {frame}")
    return origin + t[:, None] * dirs


def flow_at(cfg: SceneConfig, frame: int, positions: np.ndarray,
            object_index: int) -> np.ndarray:
    """Continuous flow of one object's surface at arbitrary image positions."""
    obj = cfg.objects[object_index]
    local = _backproject_onto(cfg, frame, obj, np.asarray(positions,
                                                          dtype=np.float64))
    world_next = object_points_world(obj, frame + 1, local)
    return project(cfg, frame + 1, world_next) - positions


def region_map(cfg: SceneConfig, frame: int) -> np.ndarray:
    """Instance-id raster for one frame: hulls of projected patch boundaries."""
    w, h = cfg.image_size
    raster = np.zeros((h, w), dtype=np.int32)
    for idx, obj in enumerate(cfg.objects):
        if idx == 0:
            continue  # background is everything left over
        img = project(cfg, frame, object_points_world(obj, frame,
                                                      obj.boundary_ring()))
        if (img[:, 0] < 0).any() or (img[:, 0] >= w).any() \
                or (img[:, 1] < 0).any() or (img[:, 1] >= h).any():
            raise SceneGenerationError(
                f"object '{obj.name}' projects outside the image at frame {frame}")
        hull = ConvexHull(img)
        normals = hull.equations[:, :2]
        offsets = hull.equations[:, 2]
        x0, x1 = int(np.floor(img[:, 0].min())), int(np.ceil(img[:, 0].max()))
        y0, y1 = int(np.floor(img[:, 1].min())), int(np.ceil(img[:, 1].max()))
        ys, xs = np.mgrid[y0:y1 + 1, x0:x1 + 1]
        pts = np.column_stack([xs.ravel(), ys.ravel()]).astype(np.float64)
        inside = np.all(pts @ normals.T + offsets <= 1e-9, axis=1)
        raster[pts[inside, 1].astype(int), pts[inside, 0].astype(int)] = idx
    return raster


def exact_flow(cfg: SceneConfig, frame: int,
               regions: np.ndarray | None = None) -> np.ndarray:
    """Dense displacement raster for the frame pair (frame, frame + 1)."""
    if frame >= cfg.frame_count - 1:
        raise ValueError("frame must be below frame_count - 1")
    if regions is None:
        regions = region_map(cfg, frame)
    w, h = cfg.image_size
    flow = np.zeros((h, w, 2))
    for idx in range(len(cfg.objects)):
        sel = regions == idx
        if not sel.any():
            continue
        ys, xs = np.nonzero(sel)
        pix = np.column_stack([xs, ys]).astype(np.float64)
        flow[ys, xs] = flow_at(cfg, frame, pix, idx)
    return flow


def ground_truth_fundamental(cfg: SceneConfig, object_index: int, m0: int,
                             m1: int) -> FundamentalMatrix:
    """Analytic fundamental matrix of one rigid object between two frames."""
    obj = cfg.objects[object_index]
    k = np.array([[cfg.focal, 0, cfg.principal_point[0]],
                  [0, cfg.focal, cfg.principal_point[1]],
                  [0, 0, 1.0]])
    mats = []
    for m in (m0, m1):
        cam_rot, cam_center = _camera_frame(cfg, m)
        obj_rot, obj_origin = _object_frame(obj, m)
        mats.append((cam_rot @ obj_rot, cam_rot @ (obj_origin - cam_center)))
    (a0, b0), (a1, b1) = mats
    r_rel = a1 @ a0.T
    t_rel = b1 - r_rel @ b0
    if np.linalg.norm(t_rel) < 1e-12:
        raise SceneGenerationError(
            f"object '{obj.name}': zero baseline between frames {m0} and {m1}")
    k_inv = np.linalg.inv(k)
    f = k_inv.T @ _skew(t_rel) @ r_rel @ k_inv
    return FundamentalMatrix(entries=_normalize_fundamental(f),
                             object_id=object_index, frame_pair=(m0, m1))


# -- scene assembly ----------------------------------------------------------

def _project_track(cfg: SceneConfig, obj: PatchObject, local_pt: np.ndarray):
    pts = np.empty((cfg.frame_count, 2))
    for m in range(cfg.frame_count):
        world = object_points_world(obj, m, local_pt[None, :])
        pts[m] = project(cfg, m, world)[0]
    return pts


def generate_scene(cfg: SceneConfig):
    """Produce (TrajectorySet, FlowFieldSequence, InstanceMaskSequence, GroundTruth).

    Deterministic for a given (cfg, seed): the rng is consumed in a fixed
    order (track sampling per object, then trajectory noise, then flow noise).
    Track points are rejection-sampled so that every track stays on its own
    object's mask region across all frames; background points occluded by a
    foreground object at any frame are not tracked.
    """
    rng = np.random.default_rng(cfg.seed)
    w, h = cfg.image_size
    f_count = cfg.frame_count

    masks_frames = np.stack([region_map(cfg, m) for m in range(f_count)])

    trajectories = []
    gt_traj = []
    next_id = 0
    frame_idx = np.arange(f_count)
    for idx, obj in enumerate(cfg.objects):
        ex, ey = obj.track_extent if obj.track_extent is not None else obj.extent
        scale = np.array([ex, ey])
        kept = 0
        for _ in range(400 * obj.n_tracks):
            if kept == obj.n_tracks:
                break
            ab = rng.uniform(-0.85, 0.85, size=2) * scale
            pts = _project_track(cfg, obj, obj.local_points(ab[None, :])[0])
            if (pts[:, 0] < 0).any() or (pts[:, 0] >= w).any() \
                    or (pts[:, 1] < 0).any() or (pts[:, 1] >= h).any():
                if idx > 0:
                    raise SceneGenerationError(
                        f"object '{obj.name}' projects outside the image at "
                        f"frame {int((pts[:, 0] < 0).argmax())}")
                continue  # background points may leave the view; resample
            xi = np.clip(np.round(pts[:, 0]).astype(int), 0, w - 1)
            yi = np.clip(np.round(pts[:, 1]).astype(int), 0, h - 1)
            if not (masks_frames[frame_idx, yi, xi] == idx).all():
                continue  # occluded or off-region at some frame
            trajectories.append(Trajectory(
                id=next_id, start_frame=0, points=pts,
                object_label=idx, gt_motion_label=obj.motion_group))
            gt_traj.append(obj.motion_group)
            next_id += 1
            kept += 1
        if kept < obj.n_tracks:
            raise SceneGenerationError(
                f"object '{obj.name}': could not place {obj.n_tracks} visible "
                f"tracks ({kept} found)")

    if cfg.noise.trajectory_sigma > 0:
        jitter_scale = cfg.noise.trajectory_sigma
        noisy = []
        for tr in trajectories:
            pts = tr.points + rng.normal(0.0, jitter_scale, tr.points.shape)
            pts[:, 0] = np.clip(pts[:, 0], 0.0, w - 1e-6)
            pts[:, 1] = np.clip(pts[:, 1], 0.0, h - 1e-6)
            noisy.append(replace(tr, points=pts))
        trajectories = noisy

    flows = np.stack([exact_flow(cfg, m, regions=masks_frames[m])
                      for m in range(f_count - 1)])
    if cfg.noise.flow_sigma > 0:
        flows = flows + rng.normal(0.0, cfg.noise.flow_sigma, flows.shape)

    groups = cfg.motion_groups()
    gt = GroundTruth(trajectory_labels=np.array(gt_traj, dtype=np.int64),
                     pixel_labels=groups[masks_frames])
    ts = TrajectorySet(trajectories=trajectories, frame_count=f_count,
                       image_size=(w, h))
    return ts, FlowFieldSequence(flows=flows), \
        InstanceMaskSequence(frames=masks_frames,
                             id_map={i: i for i in range(len(cfg.objects))}), gt


def generate(cfg: SceneConfig) -> tuple[Scene, GroundTruth]:
    ts, flow, masks, gt = generate_scene(cfg)
    return make_scene(ts, flow, masks), gt


# -- scenario presets --------------------------------------------------------
#
# Each preset is a background plus one static patch riding its surface (or
# hanging close in front of it) plus 5 patches moving as one rigid group on a
# shallow depth ladder. The 2-member static group always co-occurs under the
# rank-2 inlier rule, and the depth ladder chains the movers, so both groups
# stay internally connected; the presets differ in where the mover group sits
# and how it moves, targeting one documented failure mode each.

def _preset_base(frame_count: int, seed: int, noise: NoiseSpec,
                 camera: CameraPath, bg: PatchObject,
                 movers: list[PatchObject]) -> SceneConfig:
    statics = [
        subpatch(bg, "static_left", 0, offset=(-4.6, -2.6), extent=(2.2, 1.7)),
    ]
    return SceneConfig(image_size=(320, 240), frame_count=frame_count,
                       camera=camera, objects=[bg] + statics + movers,
                       noise=noise, seed=seed)


def _mover_row(frame_count: int, velocity, depths, y_world: float,
               xs=(-4.4, -2.2, 0.0, 2.2, 4.4),
               extent=(0.6, 0.55)) -> list[PatchObject]:
    movers = []
    for i, (x, z) in enumerate(zip(xs, depths)):
        patch = PatchObject.static(
            f"mover_{i}", 1, center=(x * z / 20.0, y_world * z / 20.0, z),
            extent=extent, slant=(0.10, -0.08), curvature=(0.22, 0.18),
            frame_count=frame_count, n_tracks=12)
        movers.append(patch.with_velocity(velocity))
    return movers


def preset_two_motion(seed: int = 0, trajectory_noise: float = 0.0,
                      flow_noise: float = 0.0) -> SceneConfig:
    """Two well-separated motions; both views resolve the grouping."""
    f_count = 12
    m = np.arange(f_count, dtype=np.float64)
    positions = np.column_stack([
        0.20 * m + 0.04 * np.sin(0.9 * m),
        0.05 * np.sin(0.7 * m),
        0.02 * m,
    ])
    camera = CameraPath(positions=positions,
                        axis_angles=np.zeros((f_count, 3)))
    bg = PatchObject.static("background", 0, center=(1.2, 0.2, 30.0),
                            extent=(15.0, 9.5), slant=(0.24, 0.18),
                            curvature=(0.05, -0.04),
                            frame_count=f_count, n_tracks=14,
                            track_extent=(5.0, 4.2))
    movers = _mover_row(f_count, velocity=(0.11, -0.15, 0.0),
                        depths=(20.0, 20.4, 20.8, 21.2, 21.6), y_world=2.6)
    return _preset_base(f_count, seed,
                        NoiseSpec(trajectory_noise, flow_noise), camera, bg,
                        movers)


def preset_epipolar_plane(seed: int = 0, trajectory_noise: float = 0.05,
                          flow_noise: float = 0.0) -> SceneConfig:
    """Mover translating parallel to the camera baseline.

    Every image point, mover included, keeps its row (y' = y exactly), so the
    epipolar view cannot tell the mover from the static scene; the flow view
    separates it by displacement magnitude. A trace of trajectory noise is on
    by default: with bit-exact tracks the epipolar residuals of this scene
    collapse to float rounding noise, which is not the regime the preset is
    meant to exercise.
    """
    f_count = 12
    m = np.arange(f_count, dtype=np.float64)
    positions = np.column_stack([
        0.25 * m + 0.03 * np.sin(1.1 * m),
        np.zeros(f_count),
        np.zeros(f_count),
    ])
    camera = CameraPath(positions=positions,
                        axis_angles=np.zeros((f_count, 3)))
    # road-like deep background: strong depth recession keeps the static
    # epipolar geometry well conditioned under noise, and the inverse depth
    # of a plane is affine in image coordinates so the flow fit stays tight
    bg = PatchObject.static("background", 0, center=(1.4, 0.0, 30.0),
                            extent=(19.0, 14.0), slant=(0.24, 1.8),
                            curvature=(0.05, -0.04),
                            frame_count=f_count, n_tracks=14,
                            track_extent=(8.5, 7.0))
    movers = _mover_row(f_count, velocity=(0.33, 0.0, 0.0),
                        depths=(20.0, 20.4, 20.8, 21.2, 21.6), y_world=1.2)
    return _preset_base(f_count, seed,
                        NoiseSpec(trajectory_noise, flow_noise), camera, bg,
                        movers)


def preset_strong_parallax(seed: int = 0, trajectory_noise: float = 0.0,
                           flow_noise: float = 0.0) -> SceneConfig:
    """Static foreground at strongly different depth, slow generic mover.

    Parallax makes the close static pair flow very differently from the
    background, while the mover group's flow stays near the background's; the
    flow view therefore groups the movers with the background and splits off
    the close pair. The epipolar view sees through it: statics satisfy the
    camera geometry exactly, the movers do not.
    """
    f_count = 16
    m = np.arange(f_count, dtype=np.float64)
    positions = np.column_stack([
        0.09 * m + 0.012 * np.sin(0.8 * m),
        np.zeros(f_count),
        np.zeros(f_count),
    ])
    camera = CameraPath(positions=positions,
                        axis_angles=np.zeros((f_count, 3)))
    bg = PatchObject.static("background", 0, center=(0.7, 0.0, 30.0),
                            extent=(15.0, 9.5), slant=(0.22, 0.16),
                            curvature=(0.05, -0.04),
                            frame_count=f_count, n_tracks=14,
                            track_extent=(5.0, 4.2))
    close_a = PatchObject.static(
        "close_a", 0, center=(-0.45, -1.1, 8.0), extent=(0.55, 0.45),
        slant=(0.12, 0.10), curvature=(0.5, 0.4), frame_count=f_count)
    close_b = PatchObject.static(
        "close_b", 0, center=(0.95, -1.25, 8.0), extent=(0.55, 0.45),
        slant=(0.12, 0.10), curvature=(0.5, 0.4), frame_count=f_count)
    movers = _mover_row(f_count, velocity=(0.015, 0.012, 0.0),
                        depths=(28.9, 29.05, 29.2, 29.35), y_world=1.3,
                        xs=(-3.6, -1.2, 1.2, 3.6), extent=(1.0, 0.85))
    return SceneConfig(image_size=(320, 240), frame_count=f_count,
                       camera=camera,
                       objects=[bg, close_a, close_b] + movers,
                       noise=NoiseSpec(trajectory_noise, flow_noise),
                       seed=seed)


def preset_pure_rotation(seed: int = 0, trajectory_noise: float = 0.0,
                         flow_noise: float = 0.0) -> SceneConfig:
    """Panning camera, static scene: zero baseline degenerates every
    fundamental matrix, exercising the single-view fallback."""
    f_count = 8
    m = np.arange(f_count, dtype=np.float64)
    axis_angles = np.column_stack([
        np.zeros(f_count), -0.004 * m, np.zeros(f_count)])
    camera = CameraPath(positions=np.zeros((f_count, 3)),
                        axis_angles=axis_angles)
    bg = PatchObject.static("background", 0, center=(0.6, 0.1, 30.0),
                            extent=(15.0, 9.5), slant=(0.22, 0.16),
                            curvature=(0.05, -0.04),
                            frame_count=f_count, n_tracks=14,
                            track_extent=(5.0, 4.2))
    statics = [
        subpatch(bg, "static_left", 0, offset=(-4.4, -2.4), extent=(2.2, 1.7)),
        subpatch(bg, "static_right", 0, offset=(4.6, -0.5), extent=(2.2, 1.7)),
    ]
    return SceneConfig(image_size=(320, 240), frame_count=f_count,
                       camera=camera, objects=[bg] + statics,
                       noise=NoiseSpec(trajectory_noise, flow_noise),
                       seed=seed)


PRESETS = {
    "two_motion": preset_two_motion,
    "epipolar_plane": preset_epipolar_plane,
    "strong_parallax": preset_strong_parallax,
    "pure_rotation": preset_pure_rotation,
}


def preset(name: str, seed: int = 0, trajectory_noise: float | None = None,
           flow_noise: float | None = None) -> SceneConfig:
    """Build a named preset; None keeps the preset's own noise defaults."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset '{name}'; have {sorted(PRESETS)}")
    kwargs = {"seed": seed}
    if trajectory_noise is not None:
        kwargs["trajectory_noise"] = trajectory_noise
    if flow_noise is not None:
        kwargs["flow_noise"] = flow_noise
    return PRESETS[name](**kwargs)
