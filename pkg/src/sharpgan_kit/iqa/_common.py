from __future__ import annotations

import numpy as np

from ..core import to_gray
from ..errors import DimensionMismatch, TooSmall


def pair(a, b, min_size: int = 1):
    """Convert both inputs to gray and check they are comparable."""
    a = to_gray(a)
    b = to_gray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"image shapes differ: {a.shape} vs {b.shape}")
    if min(a.shape) < min_size:
        raise TooSmall(f"images must be at least {min_size}x{min_size}, got {a.shape}")
    return a, b


def conv2_same(x: np.ndarray, k: np.ndarray) -> np.ndarray:
    """2-D convolution, zero padded, output the size of ``x`` (MATLAB ``conv2(..., 'same')``)."""
    kh, kw = k.shape
    h, w = x.shape
    full = np.zeros((h + kh - 1, w + kw - 1))
    for u in range(kh):
        for v in range(kw):
            full[u : u + h, v : v + w] += k[u, v] * x
    r0, c0 = kh // 2, kw // 2
    return full[r0 : r0 + h, c0 : c0 + w]


def average_downsample(x: np.ndarray, factor: int) -> np.ndarray:
    """Box-filter with an f x f kernel, then keep every f-th sample."""
    if factor <= 1:
        return x
    k = np.full((factor, factor), 1.0 / (factor * factor))
    return conv2_same(x, k)[::factor, ::factor]
