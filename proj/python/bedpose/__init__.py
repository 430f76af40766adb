"""In-bed pose monitoring: segmentation, orientation rectification, triggering and PCK."""

from ._core import (
    BedposeError,
    OrientationModel,
    detect_orientation,
    evaluate,
    extract_bbox,
    fit_orientation_model,
    nend_feature,
    render_scene,
    rotate,
    run_trigger,
    segment_subject,
    sobel,
    stub_estimate,
    threshold_mask,
    train_orientation,
)

__all__ = [
    "BedposeError",
    "OrientationModel",
    "detect_orientation",
    "evaluate",
    "extract_bbox",
    "fit_orientation_model",
    "nend_feature",
    "render_scene",
    "rotate",
    "run_trigger",
    "segment_subject",
    "sobel",
    "stub_estimate",
    "threshold_mask",
    "train_orientation",
]
