"""motionfuse: object-level motion segmentation from fused motion cues.

Point trajectories scored by epipolar geometry and dense optical flow scored
by a quadratic parametric model each yield an object affinity matrix; the
two views are fused by co-regularized multi-view spectral clustering.
"""

from .affinity import (
    AffinityView,
    ResidualTensor,
    ViewUnavailableError,
    build_affinity,
    compute_residual_tensor,
    ork_inlier_masks,
    sparsify_epsilon,
)
from .clustering import (
    ClusteringResult,
    CoRegularizedSpectralClustering,
    coregularized_spectral,
    kmeans_assign,
    normalized_laplacian,
    propagate_labels,
    spectral_cluster,
)
from .epipolar import (
    Correspondences,
    FundamentalMatrix,
    estimate_fundamental,
    hartley_normalize,
    mean_sampson,
    sampson_distance,
    sampson_distances,
)
from .flow_model import QuadraticFlowModel, evaluate_model, fit_quadratic, flow_mse
from .io import load_flow, load_masks, load_trajectories, write_trajectories
from .metrics import classification_error, pixel_mean_iou
from .model_bank import MotionModelBank, fit_model_bank
from .pipeline import PipelineConfig, Report, render_labels, run_pipeline
from .scene import (
    FlowFieldSequence,
    InstanceMaskSequence,
    ObjectSet,
    Scene,
    Trajectory,
    TrajectorySet,
    assign_trajectory_labels,
    label_flow,
    make_scene,
)
from .segmenter import BothViewsUnavailableError, MotionSegmenter
from .synth import (
    GroundTruth,
    SceneConfig,
    exact_flow,
    generate,
    generate_scene,
    ground_truth_fundamental,
    preset,
)

__version__ = "0.1.0"

__all__ = [
    "AffinityView", "BothViewsUnavailableError", "ClusteringResult",
    "CoRegularizedSpectralClustering", "Correspondences", "FlowFieldSequence",
    "FundamentalMatrix", "GroundTruth", "InstanceMaskSequence",
    "MotionModelBank", "MotionSegmenter", "ObjectSet", "PipelineConfig",
    "QuadraticFlowModel", "Report", "ResidualTensor", "Scene", "SceneConfig",
    "Trajectory", "TrajectorySet", "ViewUnavailableError",
    "assign_trajectory_labels", "build_affinity", "classification_error",
    "compute_residual_tensor", "coregularized_spectral", "estimate_fundamental",
    "evaluate_model", "exact_flow", "fit_model_bank", "fit_quadratic",
    "flow_mse", "generate", "generate_scene", "ground_truth_fundamental",
    "hartley_normalize", "kmeans_assign", "label_flow", "load_flow",
    "load_masks", "load_trajectories", "make_scene", "mean_sampson",
    "normalized_laplacian", "ork_inlier_masks", "pixel_mean_iou", "preset",
    "propagate_labels", "render_labels", "run_pipeline", "sampson_distance",
    "sampson_distances", "sparsify_epsilon", "spectral_cluster",
    "write_trajectories",
]
