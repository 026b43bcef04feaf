"""Feature similarity (FSIM) on luma, with a log-Gabor phase congruency bank.

Constants follow the reference FSIM release: 4 scales x 4 orientations,
minimum wavelength 6, scale multiplier 2, sigma_f/f0 = 0.55, angular spread
ratio 1.2, noise factor k = 2, stability constants T1 = 0.85 and T2 = 160 on
the 0..255 intensity scale. Unit-range inputs are rescaled by
``intensity_scale`` before scoring so these constants keep their meaning.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._common import average_downsample, conv2_same, pair

SCHARR_X = np.array([[3.0, 0.0, -3.0], [10.0, 0.0, -10.0], [3.0, 0.0, -3.0]]) / 16.0
SCHARR_Y = SCHARR_X.T


@dataclass(frozen=True)
class FsimConfig:
    scales: int = 4
    orientations: int = 4
    min_wavelength: float = 6.0
    mult: float = 2.0
    sigma_on_f: float = 0.55
    d_theta_on_sigma: float = 1.2
    noise_k: float = 2.0
    t1: float = 0.85
    t2: float = 160.0
    intensity_scale: float = 255.0
    min_size: int = 8

    def __post_init__(self):
        if self.scales < 2 or self.orientations < 2:
            raise ValueError("need at least 2 scales and 2 orientations")
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError("t1 and t2 must be positive")


def _freq_range(n: int) -> np.ndarray:
    if n % 2:
        return np.arange(-(n - 1) / 2, (n - 1) / 2 + 1) / (n - 1)
    return np.arange(-n / 2, n / 2) / n


def _freq_grid(rows: int, cols: int):
    x, y = np.meshgrid(_freq_range(cols), _freq_range(rows))
    radius = np.fft.ifftshift(np.sqrt(x * x + y * y))
    theta = np.fft.ifftshift(np.arctan2(-y, x))
    return x, y, radius, theta


def lowpass_filter(rows: int, cols: int, cutoff: float = 0.45, order: int = 15) -> np.ndarray:
    x, y = np.meshgrid(_freq_range(cols), _freq_range(rows))
    radius = np.sqrt(x * x + y * y)
    return np.fft.ifftshift(1.0 / (1.0 + (radius / cutoff) ** (2 * order)))


def filter_bank(rows: int, cols: int, cfg: FsimConfig):
    """Radial log-Gabor components per scale and angular spreads per orientation."""
    _, _, radius, theta = _freq_grid(rows, cols)
    radius = radius.copy()
    radius[0, 0] = 1.0
    lp = lowpass_filter(rows, cols)
    log_gabor = []
    for s in range(cfg.scales):
        fo = 1.0 / (cfg.min_wavelength * cfg.mult**s)
        lg = np.exp(-(np.log(radius / fo) ** 2) / (2 * math.log(cfg.sigma_on_f) ** 2)) * lp
        lg[0, 0] = 0.0
        log_gabor.append(lg)

    theta_sigma = math.pi / cfg.orientations / cfg.d_theta_on_sigma
    sin_t, cos_t = np.sin(theta), np.cos(theta)
    spread = []
    for o in range(cfg.orientations):
        angle = o * math.pi / cfg.orientations
        ds = sin_t * math.cos(angle) - cos_t * math.sin(angle)
        dc = cos_t * math.cos(angle) + sin_t * math.sin(angle)
        dtheta = np.abs(np.arctan2(ds, dc))
        spread.append(np.exp(-(dtheta**2) / (2 * theta_sigma**2)))
    return log_gabor, spread


def phase_congruency(im: np.ndarray, cfg: FsimConfig | None = None) -> np.ndarray:
    """Phase congruency map summed over orientations, with noise compensation."""
    cfg = cfg or FsimConfig()
    rows, cols = im.shape
    nscale = cfg.scales
    spectrum = np.fft.fft2(im)
    log_gabor, spread = filter_bank(rows, cols, cfg)
    eps = 1e-4

    energy_all = np.zeros((rows, cols))
    an_all = np.zeros((rows, cols))
    for o in range(cfg.orientations):
        sum_e = np.zeros((rows, cols))
        sum_o = np.zeros((rows, cols))
        sum_an = np.zeros((rows, cols))
        responses = []
        spatial_filters = []
        for s in range(nscale):
            filt = log_gabor[s] * spread[o]
            spatial_filters.append(np.real(np.fft.ifft2(filt)) * math.sqrt(rows * cols))
            eo = np.fft.ifft2(spectrum * filt)
            responses.append(eo)
            an = np.abs(eo)
            sum_an += an
            sum_e += eo.real
            sum_o += eo.imag
            if s == 0:
                em_n = np.sum(filt**2)

        x_energy = np.sqrt(sum_e**2 + sum_o**2) + eps
        mean_e = sum_e / x_energy
        mean_o = sum_o / x_energy
        energy = np.zeros((rows, cols))
        for eo in responses:
            e, od = eo.real, eo.imag
            energy += e * mean_e + od * mean_o - np.abs(e * mean_o - od * mean_e)

        # noise statistics from the finest scale, assuming Rayleigh amplitudes
        median_e2n = np.median(np.abs(responses[0]) ** 2)
        mean_e2n = -median_e2n / math.log(0.5)
        noise_power = mean_e2n / em_n
        est_sum_an2 = sum(f**2 for f in spatial_filters)
        est_sum_aiaj = np.zeros((rows, cols))
        for i in range(nscale - 1):
            for j in range(i + 1, nscale):
                est_sum_aiaj += spatial_filters[i] * spatial_filters[j]
        noise_energy2 = 2 * noise_power * est_sum_an2.sum() + 4 * noise_power * est_sum_aiaj.sum()
        tau = math.sqrt(noise_energy2 / 2)
        noise_mean = tau * math.sqrt(math.pi / 2)
        noise_sigma = math.sqrt((2 - math.pi / 2) * tau**2)
        threshold = (noise_mean + cfg.noise_k * noise_sigma) / 1.7

        energy_all += np.maximum(energy - threshold, 0.0)
        an_all += sum_an
    # zero filter response (flat image): no phase structure
    return np.divide(energy_all, an_all, out=np.zeros_like(energy_all), where=an_all > 0)


def _prepare(a: np.ndarray, cfg: FsimConfig) -> np.ndarray:
    a = a * cfg.intensity_scale
    factor = max(1, round(min(a.shape) / 256))
    return average_downsample(a, factor)


def fsim(a, b, cfg: FsimConfig | None = None) -> float:
    cfg = cfg or FsimConfig()
    a, b = pair(a, b, cfg.min_size)
    ya, yb = _prepare(a, cfg), _prepare(b, cfg)
    pc_a = phase_congruency(ya, cfg)
    pc_b = phase_congruency(yb, cfg)

    def grad_mag(y):
        return np.sqrt(conv2_same(y, SCHARR_X) ** 2 + conv2_same(y, SCHARR_Y) ** 2)

    ga, gb = grad_mag(ya), grad_mag(yb)
    pc_sim = (2 * pc_a * pc_b + cfg.t1) / (pc_a**2 + pc_b**2 + cfg.t1)
    g_sim = (2 * ga * gb + cfg.t2) / (ga**2 + gb**2 + cfg.t2)
    pc_m = np.maximum(pc_a, pc_b)
    total = pc_m.sum()
    if total == 0:
        # no phase structure anywhere (e.g. two constant images)
        return 1.0 if np.array_equal(a, b) else float(np.mean(g_sim * pc_sim))
    return float(np.sum(g_sim * pc_sim * pc_m) / total)
