"""Fundamental-matrix estimation and Sampson residuals.

The estimator is the normalized eight-point algorithm: Hartley conditioning,
algebraic least squares on the 9-entry design system, rank-2 enforcement,
denormalization, Frobenius normalization with a fixed sign convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# ratio of the 8th to the largest design singular value below which the
# correspondence geometry cannot pin down a unique epipolar constraint
DEGENERACY_SIGMA_RATIO = 1e-8
# below this displacement (px) the frame pair carries no baseline evidence
MIN_DISPLACEMENT = 1e-6
SAMPSON_EPS = 1e-20


class DegenerateGeometryError(ValueError):
    """Raised when point geometry admits no usable conditioning transform."""


@dataclass(frozen=True)
class Correspondences:
    """Paired image points of one object observed in two frames."""

    pts_a: np.ndarray  # (n, 2) frame m
    pts_b: np.ndarray  # (n, 2) frame m + f

    def __post_init__(self):
        object.__setattr__(self, "pts_a", np.asarray(self.pts_a, dtype=np.float64))
        object.__setattr__(self, "pts_b", np.asarray(self.pts_b, dtype=np.float64))
        if self.pts_a.shape != self.pts_b.shape or self.pts_a.ndim != 2 \
                or self.pts_a.shape[1] != 2:
            raise ValueError("correspondences need matching (n, 2) point arrays")

    def __len__(self) -> int:
        return self.pts_a.shape[0]


@dataclass(frozen=True)
class FundamentalMatrix:
    """Rank-2, unit-Frobenius-norm epipolar constraint p_b' F p_a = 0."""

    entries: np.ndarray  # (3, 3)
    object_id: int = -1
    frame_pair: tuple[int, int] = (-1, -1)
    valid: bool = True
    status: str = "valid"  # valid | degenerate | insufficient


def hartley_normalize(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Translate and scale points to zero centroid and mean norm sqrt(2).

    Returns the conditioned points and the 3x3 similarity transform that maps
    original homogeneous points onto them.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[0] < 2:
        raise ValueError("need at least 2 points to normalize")
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    mean_dist = np.linalg.norm(centered, axis=1).mean()
    if mean_dist < 1e-12:
        raise DegenerateGeometryError("all points coincident")
    s = np.sqrt(2.0) / mean_dist
    transform = np.array([
        [s, 0.0, -s * centroid[0]],
        [0.0, s, -s * centroid[1]],
        [0.0, 0.0, 1.0],
    ])
    return centered * s, transform


def _design_matrix(pts_a: np.ndarray, pts_b: np.ndarray) -> np.ndarray:
    x, y = pts_a[:, 0], pts_a[:, 1]
    u, v = pts_b[:, 0], pts_b[:, 1]
    one = np.ones_like(x)
    return np.column_stack([u * x, u * y, u, v * x, v * y, v, x, y, one])


def detect_degeneracy(c: Correspondences, singular_values: np.ndarray) -> bool:
    """True when the design system cannot support a unique rank-2 solution.

    Flags rank-deficient designs (coplanar points, homography-consistent
    motion, zero baseline) via the 8th/1st singular-value ratio, and frame
    pairs where no point moved.
    """
    disp = np.linalg.norm(c.pts_b - c.pts_a, axis=1)
    if np.all(disp < MIN_DISPLACEMENT):
        return True
    s = np.asarray(singular_values, dtype=np.float64)
    if s[0] <= 0.0:
        return True
    return bool(s[7] / s[0] < DEGENERACY_SIGMA_RATIO)


def _normalize_fundamental(f: np.ndarray) -> np.ndarray:
    f = f / np.linalg.norm(f)
    flat = np.abs(f).argmax()
    if f.flat[flat] < 0:
        f = -f
    return f


def _invalid(status: str, object_id: int, frame_pair) -> FundamentalMatrix:
    return FundamentalMatrix(entries=np.zeros((3, 3)), object_id=object_id,
                             frame_pair=tuple(frame_pair), valid=False,
                             status=status)


def estimate_fundamental(c: Correspondences, object_id: int = -1,
                         frame_pair=(-1, -1)) -> FundamentalMatrix:
    """Fit a fundamental matrix with the normalized eight-point algorithm.

    Fewer than 8 correspondences or a degenerate configuration yield an
    invalid model rather than an exception; the pipeline keeps going and
    simply has one fewer hypothesis.
    """
    if len(c) < 8:
        return _invalid("insufficient", object_id, frame_pair)
    try:
        na, ta = hartley_normalize(c.pts_a)
        nb, tb = hartley_normalize(c.pts_b)
    except DegenerateGeometryError:
        return _invalid("degenerate", object_id, frame_pair)
    design = _design_matrix(na, nb)
    _, svals, vt = np.linalg.svd(design)
    if detect_degeneracy(c, svals):
        return _invalid("degenerate", object_id, frame_pair)
    f = vt[-1].reshape(3, 3)
    uf, sf, vf = np.linalg.svd(f)
    sf[2] = 0.0
    f = uf @ np.diag(sf) @ vf
    f = tb.T @ f @ ta
    f = _normalize_fundamental(f)
    return FundamentalMatrix(entries=f, object_id=object_id,
                             frame_pair=tuple(frame_pair), valid=True)


def _entries(f) -> np.ndarray:
    if isinstance(f, FundamentalMatrix):
        return f.entries
    return np.asarray(f, dtype=np.float64)


def sampson_distances(f, pts_a: np.ndarray, pts_b: np.ndarray) -> np.ndarray:
    """Vectorized Sampson distances; +inf marks an undefined quotient.

    d = (p_b' F p_a)^2 / ((F p_a)_1^2 + (F p_a)_2^2 + (F' p_b)_1^2 + (F' p_b)_2^2)
    """
    fm = _entries(f)
    pa = np.column_stack([np.asarray(pts_a, np.float64),
                          np.ones(len(pts_a))])
    pb = np.column_stack([np.asarray(pts_b, np.float64),
                          np.ones(len(pts_b))])
    line_b = pa @ fm.T  # rows are F p_a
    line_a = pb @ fm    # rows are F^T p_b
    num = np.einsum("ij,ij->i", pb, line_b) ** 2
    den = line_b[:, 0] ** 2 + line_b[:, 1] ** 2 \
        + line_a[:, 0] ** 2 + line_a[:, 1] ** 2
    out = np.empty(len(pa))
    tiny = den < SAMPSON_EPS
    np.divide(num, den, out=out, where=~tiny)
    out[tiny & (num < SAMPSON_EPS)] = 0.0
    out[tiny & (num >= SAMPSON_EPS)] = np.inf
    return out


def sampson_distance(f, p: np.ndarray, p_next: np.ndarray) -> float:
    """Sampson distance of one correspondence (p in frame m, p_next in m+f)."""
    return float(sampson_distances(f, np.atleast_2d(p), np.atleast_2d(p_next))[0])


def mean_sampson(f, c: Correspondences) -> float:
    """Mean of the finite Sampson distances of a correspondence set.

    NaN marks a missing residual (no usable correspondences), which the
    affinity stage treats as absent evidence rather than agreement.
    """
    if len(c) == 0:
        return float("nan")
    d = sampson_distances(f, c.pts_a, c.pts_b)
    finite = np.isfinite(d)
    if not finite.any():
        return float("nan")
    return float(d[finite].mean())
