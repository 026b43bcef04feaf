"""Contour sharpness loss with its analytic gradient, and the total GAN objective.

For every contour pixel (i, j) the discrete sharpness sums, over the in-bounds
8-neighbors (p, q),

    exp(-(g[i,j] - g[p,q])**2 / (2 * lam**2)) / dist

with dist the Manhattan distance (1 axial, 2 diagonal). The loss is the sum
over contour pixels divided by the pixel count m*n. Low contrast across a
contour gives a large value, so minimizing the loss sharpens boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LUMA_WEIGHTS, rgb_to_gray
from .errors import DimensionMismatch, EmptyBatch

# (drow, dcol, 1/dist); order is fixed so accumulation is bit-stable
OFFSETS = (
    (-1, -1, 0.5),
    (-1, 0, 1.0),
    (-1, 1, 0.5),
    (0, -1, 1.0),
    (0, 1, 1.0),
    (1, -1, 0.5),
    (1, 0, 1.0),
    (1, 1, 0.5),
)


@dataclass(frozen=True)
class SharpnessConfig:
    lam: float = 0.3

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")


@dataclass(frozen=True)
class SharpnessResult:
    loss: float
    per_pixel: np.ndarray


@dataclass(frozen=True)
class LossWeights:
    beta: float = 1.0
    score_epsilon: float = 1e-7

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if not 0 < self.score_epsilon < 0.5:
            raise ValueError("score_epsilon must lie in (0, 0.5)")


def _check(c, g):
    # any finite intensities are accepted (generators often emit [-1, 1])
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 2 or g.size == 0:
        raise DimensionMismatch(f"image must be a non-empty 2-D array, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("image contains non-finite values")
    c = np.asarray(c)
    if c.shape != g.shape:
        raise DimensionMismatch(f"contour map {c.shape} and image {g.shape} differ in shape")
    return c != 0, g


def _slices(dr: int, dc: int, h: int, w: int):
    """Slices (center, neighbor) covering every in-bounds pair for one offset."""
    ci = slice(max(0, -dr), h - max(0, dr))
    cj = slice(max(0, -dc), w - max(0, dc))
    ni = slice(max(0, dr), h - max(0, -dr))
    nj = slice(max(0, dc), w - max(0, -dc))
    return (ci, cj), (ni, nj)


def _cfg(cfg):
    if cfg is None:
        return SharpnessConfig()
    if isinstance(cfg, SharpnessConfig):
        return cfg
    return SharpnessConfig(float(cfg))


def sharpness(c, g, cfg: SharpnessConfig | float | None = None) -> SharpnessResult:
    """Sharpness loss of gray image ``g`` over the nonzero pixels of contour map ``c``."""
    cfg = _cfg(cfg)
    mask, g = _check(c, g)
    h, w = g.shape
    inv2l2 = 1.0 / (2.0 * cfg.lam * cfg.lam)
    s = np.zeros_like(g)
    for dr, dc, wt in OFFSETS:
        center, nb = _slices(dr, dc, h, w)
        d = g[center] - g[nb]
        s[center] += np.exp(-d * d * inv2l2) * wt
    s[~mask] = 0.0
    return SharpnessResult(loss=float(s.sum() / (h * w)), per_pixel=s)


def sharpness_grad(c, g, cfg: SharpnessConfig | float | None = None) -> np.ndarray:
    """Gradient of the sharpness loss with respect to every pixel of ``g``.

    Each pair term touches both its contour pixel and the neighbor, so
    non-contour pixels next to a contour receive gradient as well.
    """
    cfg = _cfg(cfg)
    mask, g = _check(c, g)
    h, w = g.shape
    lam2 = cfg.lam * cfg.lam
    scale = 1.0 / (h * w)
    grad = np.zeros_like(g)
    for dr, dc, wt in OFFSETS:
        center, nb = _slices(dr, dc, h, w)
        d = g[center] - g[nb]
        t = -(d / lam2) * np.exp(-d * d / (2.0 * lam2)) * (wt * scale)
        t = np.where(mask[center], t, 0.0)
        grad[center] += t
        grad[nb] -= t
    return grad


def sharpness_rgb(c, img, cfg: SharpnessConfig | float | None = None):
    """Sharpness loss of an RGB image through its luma, with per-channel gradients.

    Returns ``(loss, grad)`` where ``grad`` has shape (H, W, 3).
    """
    gray = rgb_to_gray(img)
    if np.asarray(c).shape != gray.shape:
        raise DimensionMismatch(f"contour map {np.asarray(c).shape} and image {gray.shape} differ in shape")
    loss = sharpness(c, gray, cfg).loss
    g = sharpness_grad(c, gray, cfg)
    return loss, g[..., None] * LUMA_WEIGHTS


def total_loss(d_real, d_fake, l_sharp, w: LossWeights | None = None) -> float:
    """GAN objective: E[log D(x,y)] + E[log(1 - D(x,G(x))) + beta * L_sharp].

    Discriminator scores are clamped to [eps, 1 - eps] before taking logs.
    """
    w = w or LossWeights()
    d_real = np.asarray(d_real, dtype=np.float64).ravel()
    d_fake = np.asarray(d_fake, dtype=np.float64).ravel()
    l_sharp = np.asarray(l_sharp, dtype=np.float64).ravel()
    if d_real.size == 0 or d_fake.size == 0:
        raise EmptyBatch("discriminator score lists must be nonempty")
    if d_fake.size != l_sharp.size:
        raise DimensionMismatch("d_fake and l_sharp must have the same length")
    eps = w.score_epsilon
    real_term = np.log(np.clip(d_real, eps, 1.0 - eps)).mean()
    fake_term = (np.log(np.clip(1.0 - d_fake, eps, 1.0 - eps)) + w.beta * l_sharp).mean()
    return float(real_term + fake_term)
