"""Co-regularized multi-view spectral clustering and label propagation.

Each view contributes a normalized affinity operator; alternating eigenvector
updates maximize

    sum_v tr(U_v' L_v U_v) + coupling * sum_{v<w} tr(U_v U_v' U_w U_w')

which rewards per-view structure plus consensus between view embeddings. The
final discretization runs k-means on the row-normalized column-wise
concatenation of all view embeddings.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .scene import InstanceMaskSequence, TrajectorySet
from .validation import check_affinity

KMEANS_MAX_ITER = 100


def normalized_laplacian(a: np.ndarray) -> np.ndarray:
    """Symmetric degree normalization D^{-1/2} A D^{-1/2}.

    Isolated vertices (zero degree) get identity rows so they stay
    well-defined unit-eigenvalue directions.
    """
    a = check_affinity(a)
    d = a.sum(axis=1)
    inv_sqrt = np.zeros_like(d)
    np.divide(1.0, np.sqrt(d), out=inv_sqrt, where=d > 0)
    lap = inv_sqrt[:, None] * a * inv_sqrt[None, :]
    isolated = np.flatnonzero(d == 0)
    lap[isolated, isolated] = 1.0
    return lap


def _top_eigenvectors(m: np.ndarray, n: int) -> np.ndarray:
    """Top-n eigenvectors, ordered by descending eigenvalue with a fixed
    sign convention (first nonzero component positive)."""
    w, v = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")[:n]
    u = v[:, order]
    for col in range(u.shape[1]):
        nz = np.flatnonzero(np.abs(u[:, col]) > 1e-12)
        if nz.size and u[nz[0], col] < 0:
            u[:, col] = -u[:, col]
    return u


def _objective(laplacians, embeddings, coupling: float) -> float:
    obj = sum(float(np.trace(u.T @ lap @ u))
              for lap, u in zip(laplacians, embeddings))
    n_views = len(embeddings)
    for v in range(n_views):
        for w in range(v + 1, n_views):
            obj += coupling * float(
                np.linalg.norm(embeddings[v].T @ embeddings[w], "fro") ** 2)
    return obj


def coregularized_spectral(laplacians, n_clusters: int, coupling: float,
                           max_iter: int = 50, tol: float = 1e-6):
    """Alternating eigenvector maximization over the view embeddings.

    Returns (embeddings, info); info carries the objective value recorded
    after every per-view update (monotonically non-decreasing), the sweep
    count, and the largest per-update orthonormality deviation.
    """
    laps = [check_affinity(lap, integer=False) for lap in laplacians]
    k = laps[0].shape[0]
    if any(lap.shape[0] != k for lap in laps):
        raise ValueError("all views must share the same object count")
    if not 1 <= n_clusters <= k:
        raise ValueError(f"cluster count {n_clusters} outside 1..{k}")
    if coupling < 0:
        raise ValueError("coupling weight must be >= 0")

    embeddings = [_top_eigenvectors(lap, n_clusters) for lap in laps]
    objective_path = [_objective(laps, embeddings, coupling)]
    ortho_dev = 0.0
    sweeps = 0
    for _ in range(max_iter):
        sweeps += 1
        previous = objective_path[-1]
        for v in range(len(laps)):
            m = laps[v].copy()
            for w in range(len(laps)):
                if w != v:
                    m += coupling * (embeddings[w] @ embeddings[w].T)
            embeddings[v] = _top_eigenvectors(m, n_clusters)
            gram = embeddings[v].T @ embeddings[v]
            ortho_dev = max(ortho_dev, float(
                np.abs(gram - np.eye(n_clusters)).max()))
            objective_path.append(_objective(laps, embeddings, coupling))
        if abs(objective_path[-1] - previous) < tol:
            break
    info = {"objective_path": objective_path, "n_sweeps": sweeps,
            "orthonormality_deviation": ortho_dev}
    return embeddings, info


def row_normalize(u: np.ndarray) -> np.ndarray:
    """Scale rows to unit length; zero rows are left as-is."""
    u = np.asarray(u, dtype=np.float64)
    norms = np.linalg.norm(u, axis=1, keepdims=True)
    return np.divide(u, norms, out=u.copy(), where=norms > 0)


def _kmeans_once(x: np.ndarray, n: int, rng: np.random.Generator):
    # k-means++ seeding
    centers = np.empty((n, x.shape[1]))
    centers[0] = x[rng.integers(len(x))]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for i in range(1, n):
        total = d2.sum()
        if total <= 0:
            centers[i] = x[rng.integers(len(x))]
        else:
            centers[i] = x[rng.choice(len(x), p=d2 / total)]
        d2 = np.minimum(d2, ((x - centers[i]) ** 2).sum(axis=1))

    labels = np.zeros(len(x), dtype=np.int64)
    for _ in range(KMEANS_MAX_ITER):
        dist = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = dist.argmin(axis=1)
        for c in range(n):
            sel = new_labels == c
            if sel.any():
                centers[c] = x[sel].mean(axis=0)
            else:
                # reseed an empty cluster at the point farthest from its center
                farthest = dist[np.arange(len(x)), new_labels].argmax()
                centers[c] = x[farthest]
                new_labels[farthest] = c
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    dist = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    wcss = float(dist[np.arange(len(x)), labels].sum())
    return labels, wcss


def kmeans_assign(u: np.ndarray, n_clusters: int, seed: int,
                  restarts: int = 10) -> np.ndarray:
    """Best-of-restarts k-means on embedding rows, deterministic given seed."""
    x = np.asarray(u, dtype=np.float64)
    if n_clusters < 1:
        raise ValueError("need at least one cluster")
    distinct = np.unique(x, axis=0)
    if len(distinct) < n_clusters:
        warnings.warn(
            f"only {len(distinct)} distinct rows for {n_clusters} clusters; "
            "duplicating centers")
        centers = distinct[np.arange(n_clusters) % len(distinct)]
        dist = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        return dist.argmin(axis=1)
    rng = np.random.default_rng(seed)
    best_labels, best_wcss = None, np.inf
    for _ in range(max(1, restarts)):
        labels, wcss = _kmeans_once(x, n_clusters, rng)
        if wcss < best_wcss:
            best_labels, best_wcss = labels, wcss
    return best_labels


@dataclass(frozen=True)
class ClusteringResult:
    """Motion-group labels at object, trajectory and pixel granularity."""

    object_labels: np.ndarray      # (k,)
    trajectory_labels: np.ndarray  # (n_trajectories,)
    pixel_labels: np.ndarray       # (F, H, W)
    background_cluster: int
    embeddings: Optional[list[np.ndarray]] = None


def propagate_labels(object_labels: np.ndarray, ts: TrajectorySet,
                     masks: InstanceMaskSequence,
                     embeddings=None) -> ClusteringResult:
    """Carry object cluster ids onto trajectories and pixels."""
    object_labels = np.asarray(object_labels, dtype=np.int64)
    traj = np.array([object_labels[tr.object_label] for tr in ts.trajectories],
                    dtype=np.int64)
    pixels = object_labels[masks.frames]
    return ClusteringResult(object_labels=object_labels,
                            trajectory_labels=traj,
                            pixel_labels=pixels,
                            background_cluster=int(object_labels[0]),
                            embeddings=embeddings)


class CoRegularizedSpectralClustering(BaseEstimator, ClusterMixin):
    """Multi-view spectral clustering over precomputed affinity matrices.

    Parameters follow scikit-learn conventions; ``fit`` takes a list of
    symmetric nonnegative (k, k) affinity matrices, one per view.
    """

    def __init__(self, n_clusters=2, coupling=0.025, max_iter=50, tol=1e-6,
                 random_state=0, n_init=10):
        self.n_clusters = n_clusters
        self.coupling = coupling
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state
        self.n_init = n_init

    def fit(self, X, y=None):
        views = [check_affinity(a, integer=False) for a in X]
        if not views:
            raise ValueError("need at least one affinity view")
        laps = [normalized_laplacian(a) for a in views]
        embeddings, info = coregularized_spectral(
            laps, self.n_clusters, self.coupling, self.max_iter, self.tol)
        stacked = row_normalize(np.hstack(embeddings))
        self.labels_ = kmeans_assign(stacked, self.n_clusters,
                                     seed=self.random_state,
                                     restarts=self.n_init)
        self.embeddings_ = embeddings
        self.objective_path_ = info["objective_path"]
        self.n_iter_ = info["n_sweeps"]
        self.orthonormality_deviation_ = info["orthonormality_deviation"]
        return self


def spectral_cluster(affinity: np.ndarray, n_clusters: int, seed: int,
                     restarts: int = 10) -> np.ndarray:
    """Single-view spectral clustering (top eigenvectors + k-means)."""
    lap = normalized_laplacian(affinity)
    u = _top_eigenvectors(lap, n_clusters)
    return kmeans_assign(row_normalize(u), n_clusters, seed, restarts)
