"""The end-to-end estimator: scene in, motion-group labels out."""

from __future__ import annotations

import time

import numpy as np
from sklearn.base import BaseEstimator

from .affinity import (
    ViewUnavailableError,
    build_affinity,
    compute_residual_tensor,
    ork_inlier_masks,
    sparsify_epsilon,
)
from .clustering import (
    coregularized_spectral,
    kmeans_assign,
    normalized_laplacian,
    propagate_labels,
    row_normalize,
)
from .model_bank import VIEWS, fit_model_bank
from .scene import Scene, assign_trajectory_labels, label_flow


class BothViewsUnavailableError(RuntimeError):
    """Neither motion-cue view produced a valid model; nothing to cluster."""


class MotionSegmenter(BaseEstimator):
    """Cluster a scene's objects by motion, fusing epipolar and flow cues.

    Follows the scikit-learn estimator protocol: all constructor arguments
    are hyperparameters stored verbatim, ``fit`` takes a :class:`Scene` and
    exposes the results as trailing-underscore attributes. ``labels_`` holds
    the per-object cluster ids; trajectory and pixel labels are propagated
    from them.
    """

    def __init__(self, n_clusters=2, frame_gap=3, ork_quantile=0.15,
                 eps_quantile=0.2, coupling=0.025, max_iter=50, tol=1e-6,
                 flow_stride=1, random_state=0, n_init=10):
        self.n_clusters = n_clusters
        self.frame_gap = frame_gap
        self.ork_quantile = ork_quantile
        self.eps_quantile = eps_quantile
        self.coupling = coupling
        self.max_iter = max_iter
        self.tol = tol
        self.flow_stride = flow_stride
        self.random_state = random_state
        self.n_init = n_init

    def _check_params(self):
        if not 0.0 < self.ork_quantile <= 1.0:
            raise ValueError("ork_quantile must lie in (0, 1]")
        if not 0.0 <= self.eps_quantile <= 1.0:
            raise ValueError("eps_quantile must lie in [0, 1]")
        if self.coupling < 0:
            raise ValueError("coupling must be >= 0")
        if self.n_clusters < 1:
            raise ValueError("n_clusters must be >= 1")
        if self.frame_gap < 1:
            raise ValueError("frame_gap must be >= 1")
        if self.flow_stride < 1:
            raise ValueError("flow_stride must be >= 1")

    def fit(self, scene: Scene, y=None):
        self._check_params()
        timings = {}
        warnings_ = []

        t0 = time.perf_counter()
        ts = assign_trajectory_labels(scene.trajectories, scene.masks)
        labeled_flow = label_flow(scene.flow, scene.masks,
                                  stride=self.flow_stride)
        timings["labeling"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        k = scene.objects.count
        bank = fit_model_bank(ts, labeled_flow, k, f_gap=self.frame_gap)
        timings["model_fitting"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        views = list(VIEWS)
        tensor = None
        while views:
            try:
                tensor = compute_residual_tensor(bank, ts, labeled_flow,
                                                 views=views)
                break
            except ViewUnavailableError as exc:
                dead = str(exc).split("'")[1]
                warnings_.append(f"view '{dead}' unavailable; "
                                 "continuing without it")
                views = [v for v in views if v != dead]
        if tensor is None or not views:
            raise BothViewsUnavailableError(
                "no view produced a valid motion model")
        timings["residuals"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        affinities = {}
        sparsified = {}
        for view in views:
            masks = ork_inlier_masks(tensor, view, self.ork_quantile)
            affinities[view] = build_affinity(masks, view=view)
            sparsified[view] = sparsify_epsilon(affinities[view],
                                                self.eps_quantile)
        timings["affinity"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        laplacians = [normalized_laplacian(sparsified[v].matrix)
                      for v in views]
        embeddings, info = coregularized_spectral(
            laplacians, self.n_clusters, self.coupling,
            max_iter=self.max_iter, tol=self.tol)
        stacked = row_normalize(np.hstack(embeddings))
        object_labels = kmeans_assign(stacked, self.n_clusters,
                                      seed=self.random_state,
                                      restarts=self.n_init)
        timings["clustering"] = time.perf_counter() - t0

        result = propagate_labels(object_labels, ts, scene.masks,
                                  embeddings=embeddings)

        self.labels_ = result.object_labels
        self.trajectory_labels_ = result.trajectory_labels
        self.pixel_labels_ = result.pixel_labels
        self.background_cluster_ = result.background_cluster
        self.result_ = result
        self.labeled_trajectories_ = ts
        self.views_ = views
        self.residual_tensor_ = tensor
        self.affinities_ = affinities
        self.sparsified_ = sparsified
        self.embeddings_ = embeddings
        self.objective_path_ = info["objective_path"]
        self.model_counts_ = {view: bank.counts(view) for view in VIEWS}
        self.bank_ = bank
        self.warnings_ = warnings_
        self.timings_ = timings
        return self

    def fit_predict(self, scene: Scene, y=None) -> np.ndarray:
        """Fit and return the per-object cluster labels."""
        return self.fit(scene).labels_
