"""Generator-input encodings of an instance map: distance, contour and binary masks."""
from __future__ import annotations

import numpy as np

from .core import as_instance_map
from .errors import ModeError

DISTANCE_MODES = ("centroid", "centroid_inverted")

_NEIGHBORS = {
    4: ((-1, 0), (1, 0), (0, -1), (0, 1)),
    8: ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)),
}


def binary_mask(m) -> np.ndarray:
    return (as_instance_map(m) > 0).astype(np.uint8)


def distance_map(m, mode: str = "centroid", normalize: bool = False) -> np.ndarray:
    """Euclidean distance from every nucleus pixel to its nucleus centroid.

    Centroids are the unweighted mean of (row, col) pixel coordinates.
    Background is 0. With ``normalize`` each nucleus is divided by its own
    maximum distance; single-pixel nuclei map to 1. ``centroid_inverted``
    emits 1 - normalized distance on nucleus pixels.
    """
    if mode not in DISTANCE_MODES:
        raise ModeError(f"unknown distance mode {mode!r}")
    if mode == "centroid_inverted" and not normalize:
        raise ModeError("centroid_inverted requires normalize=True")
    labels = as_instance_map(m)
    out = np.zeros(labels.shape, dtype=np.float64)
    fg = labels > 0
    if not fg.any():
        return out

    lab = labels[fg]
    rows, cols = np.nonzero(fg)
    n = int(lab.max()) + 1
    counts = np.bincount(lab, minlength=n).astype(np.float64)
    present = counts > 0
    mean_r = np.zeros(n)
    mean_c = np.zeros(n)
    mean_r[present] = np.bincount(lab, weights=rows, minlength=n)[present] / counts[present]
    mean_c[present] = np.bincount(lab, weights=cols, minlength=n)[present] / counts[present]
    d = np.hypot(rows - mean_r[lab], cols - mean_c[lab])

    if normalize:
        dmax = np.zeros(n)
        np.maximum.at(dmax, lab, d)
        scale = dmax[lab]
        # single-pixel nuclei (and any zero-extent nucleus) map to 1
        d = np.divide(d, scale, out=np.ones_like(d), where=scale > 0)
        if mode == "centroid_inverted":
            d = 1.0 - d
    out[fg] = d
    return out


def contour_map(m, connectivity: int = 8) -> np.ndarray:
    """Mark nucleus pixels with at least one differently-labelled neighbor.

    Pixels outside the image count as background, so nuclei touching the
    border are outlined there too. Shared borders between touching nuclei are
    marked on both sides.
    """
    if connectivity not in _NEIGHBORS:
        raise ValueError("connectivity must be 4 or 8")
    labels = as_instance_map(m)
    h, w = labels.shape
    padded = np.pad(labels, 1, constant_values=0)
    differs = np.zeros(labels.shape, dtype=bool)
    for dr, dc in _NEIGHBORS[connectivity]:
        differs |= padded[1 + dr : 1 + dr + h, 1 + dc : 1 + dc + w] != labels
    return (differs & (labels > 0)).astype(np.uint8)
