from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._common import average_downsample, conv2_same, pair

PREWITT_X = np.array([[1.0, 0.0, -1.0], [1.0, 0.0, -1.0], [1.0, 0.0, -1.0]]) / 3.0
PREWITT_Y = PREWITT_X.T


@dataclass(frozen=True)
class GmsdConfig:
    # 170 on the 0..255 scale, expressed for unit-range images
    c: float = 170.0 / 255.0**2
    downsample: int = 2

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.downsample < 1:
            raise ValueError("downsample must be >= 1")


def gradient_magnitude(x: np.ndarray) -> np.ndarray:
    gx = conv2_same(x, PREWITT_X)
    gy = conv2_same(x, PREWITT_Y)
    return np.sqrt(gx * gx + gy * gy)


def gms_map(a, b, cfg: GmsdConfig | None = None) -> np.ndarray:
    cfg = cfg or GmsdConfig()
    a, b = pair(a, b, 4)
    ma = gradient_magnitude(average_downsample(a, cfg.downsample))
    mb = gradient_magnitude(average_downsample(b, cfg.downsample))
    return (2 * ma * mb + cfg.c) / (ma * ma + mb * mb + cfg.c)


def gmsd(a, b, cfg: GmsdConfig | None = None) -> float:
    """Gradient magnitude similarity deviation; 0 for identical images.

    The deviation is the sample standard deviation (N - 1) of the
    similarity map, as in the reference implementation.
    """
    return float(np.std(gms_map(a, b, cfg), ddof=1))
