"""Full-reference image quality metrics. Color inputs are scored on their luma."""
from .fsim import FsimConfig, fsim, phase_congruency
from .gmsd import GmsdConfig, gmsd
from .nrmse import nrmse
from .ssim import SsimConfig, ssim

METRICS = ("ssim", "fsim", "gmsd", "nrmse")

__all__ = [
    "FsimConfig",
    "GmsdConfig",
    "METRICS",
    "SsimConfig",
    "fsim",
    "gmsd",
    "nrmse",
    "phase_congruency",
    "ssim",
]
