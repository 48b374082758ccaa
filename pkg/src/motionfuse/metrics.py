"""Clustering evaluation: optimal-assignment classification error and IoU."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .validation import check_labels


def _padded_overlap(pred: np.ndarray, gt: np.ndarray) -> np.ndarray:
    """Square contingency table between predicted and ground-truth labels.

    Rows are predicted clusters, columns ground-truth groups, zero-padded to
    square so unmatched clusters count fully as errors.
    """
    pred_ids = np.unique(pred)
    gt_ids = np.unique(gt)
    size = max(len(pred_ids), len(gt_ids))
    table = np.zeros((size, size), dtype=np.int64)
    pred_pos = {c: i for i, c in enumerate(pred_ids)}
    gt_pos = {c: i for i, c in enumerate(gt_ids)}
    for p, g in zip(pred, gt):
        table[pred_pos[p], gt_pos[g]] += 1
    return table


def classification_error(pred, gt) -> float:
    """Misclassified fraction (percent) under the best cluster-to-group match."""
    pred = check_labels(pred, "pred")
    gt = check_labels(gt, "gt")
    if len(pred) != len(gt):
        raise ValueError(f"length mismatch: {len(pred)} vs {len(gt)}")
    table = _padded_overlap(pred, gt)
    rows, cols = linear_sum_assignment(-table)
    matched = table[rows, cols].sum()
    return float(100.0 * (1.0 - matched / len(pred)))


def pixel_mean_iou(pred_labels: np.ndarray, gt_labels: np.ndarray) -> float:
    """Mean per-group IoU between pixel label rasters under the best match."""
    pred = np.asarray(pred_labels).ravel()
    gt = np.asarray(gt_labels).ravel()
    if pred.shape != gt.shape:
        raise ValueError("pixel raster shapes disagree")
    table = _padded_overlap(pred, gt)
    rows, cols = linear_sum_assignment(-table)
    pred_sizes = table.sum(axis=1)
    gt_sizes = table.sum(axis=0)
    ious = []
    for r, c in zip(rows, cols):
        union = pred_sizes[r] + gt_sizes[c] - table[r, c]
        if union > 0:
            ious.append(table[r, c] / union)
    return float(np.mean(ious)) if ious else 0.0
