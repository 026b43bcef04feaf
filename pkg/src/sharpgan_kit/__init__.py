"""Mask synthesis, map encodings, contour sharpness loss and evaluation metrics
for nucleus-conditioned histopathology image synthesis."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    ValidationReport,
    relabel_sequential,
    rgb_to_gray,
    validate_instance_map,
)
from .maps import binary_mask, contour_map, distance_map  # noqa: E402
from .maskgen import MaskGenConfig, Polygon, generate_polygon, rasterize, synthesize_layout  # noqa: E402
from .segeval import Matching, SegScores, aji, dq_sq_pq, iou_matrix, match_instances  # noqa: E402
from .sharploss import (  # noqa: E402
    LossWeights,
    SharpnessConfig,
    SharpnessResult,
    sharpness,
    sharpness_grad,
    sharpness_rgb,
    total_loss,
)
