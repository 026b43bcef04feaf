"""Image and label-map conventions shared by the rest of the package.

Images are plain numpy arrays of float64 intensities in [0, 1]: gray images
have shape (H, W), RGB images have shape (H, W, 3). Instance maps are 2-D
integer arrays where 0 is background and k >= 1 marks nucleus k.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class ValidationReport:
    issues: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues


def as_gray(img, name: str = "image") -> np.ndarray:
    g = np.asarray(img, dtype=np.float64)
    if g.ndim != 2 or g.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {g.shape}")
    if not np.all(np.isfinite(g)) or g.min() < 0.0 or g.max() > 1.0:
        raise ValueError(f"{name} intensities must lie in [0, 1]")
    return g


def as_rgb(img, name: str = "image") -> np.ndarray:
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != 3 or a.shape[0] == 0 or a.shape[1] == 0:
        raise DimensionMismatch(f"{name} must have shape (H, W, 3), got {a.shape}")
    if not np.all(np.isfinite(a)) or a.min() < 0.0 or a.max() > 1.0:
        raise ValueError(f"{name} intensities must lie in [0, 1]")
    return a


def as_instance_map(m, name: str = "instance map") -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {a.shape}")
    if a.size and not np.issubdtype(a.dtype, np.integer):
        if not np.all(a == np.round(a)):
            raise ValueError(f"{name} labels must be integers")
        a = a.astype(np.int64)
    if a.size and a.min() < 0:
        raise ValueError(f"{name} labels must be nonnegative")
    return a


def rgb_to_gray(img) -> np.ndarray:
    """BT.601 luma of an RGB image in [0, 1]."""
    a = as_rgb(img)
    g = a @ LUMA_WEIGHTS
    # r = g = b = v must give v back exactly; the dot product can be 1 ulp off.
    flat = (a[..., 0] == a[..., 1]) & (a[..., 1] == a[..., 2])
    g[flat] = a[..., 0][flat]
    return np.clip(g, 0.0, 1.0)


def to_gray(img) -> np.ndarray:
    """Accept either a gray or an RGB image and return its gray version."""
    a = np.asarray(img)
    if a.ndim == 3:
        return rgb_to_gray(a)
    return as_gray(a)


def relabel_sequential(m) -> np.ndarray:
    """Compact nonzero labels to 1..K, preserving their relative order."""
    a = as_instance_map(m)
    labels = np.unique(a)
    labels = labels[labels != 0]
    lut_keys = np.concatenate(([0], labels))
    out = np.searchsorted(lut_keys, a)
    return out.astype(np.int64)


def validate_instance_map(
    m, shape: tuple[int, int] | None = None, num_labels: int | None = None
) -> ValidationReport:
    """Check an instance map without raising.

    ``shape`` and ``num_labels`` are optional declarations from the caller;
    a declared label 1..num_labels that owns no pixel is reported.
    """
    issues = []
    a = np.asarray(m)
    if a.ndim != 2:
        return ValidationReport([("bad-rank", f"expected a 2-D map, got {a.ndim}-D")])
    if a.shape[0] == 0 or a.shape[1] == 0:
        issues.append(("empty-dimensions", f"empty dimensions {a.shape}"))
    if shape is not None and tuple(a.shape) != tuple(shape):
        issues.append(("dimension-mismatch", f"shape {a.shape} does not match {tuple(shape)}"))
    if a.size == 0:
        return ValidationReport(issues)
    if not np.issubdtype(a.dtype, np.integer):
        issues.append(("non-integer", "labels must be integers"))
        return ValidationReport(issues)
    if a.min() < 0:
        issues.append(("negative-label", "labels must be nonnegative"))
        return ValidationReport(issues)
    labels = np.unique(a)
    labels = labels[labels != 0]
    if labels.size and labels[-1] != labels.size:
        missing = sorted(set(range(1, int(labels[-1]) + 1)) - set(labels.tolist()))
        shown = ", ".join(map(str, missing[:10]))
        issues.append(("non-sequential", f"non-sequential labels, missing {shown}"))
    if num_labels is not None:
        empty = sorted(set(range(1, num_labels + 1)) - set(labels.tolist()))
        if empty:
            issues.append(("empty-label", f"declared labels without pixels: {empty[:10]}"))
        extra = labels[labels > num_labels]
        if extra.size:
            issues.append(("undeclared-label", f"labels above {num_labels}: {extra[:10].tolist()}"))
    return ValidationReport(issues)
