"""Random nucleus-like polygon layouts rendered as instance maps.

Polygons come from a radial-perturbation sampler: vertex angles are jittered
around a regular n-gon and each vertex radius is jittered around a mean
radius. Every layout is a pure function of (config, seed); randomness comes
from a counter-based Philox generator threaded explicitly through the calls.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import ndimage

from .core import relabel_sequential
from .errors import ConfigError

OVERLAP_POLICIES = ("disjoint", "touching", "overlapping")


@dataclass(frozen=True)
class MaskGenConfig:
    canvas_width: int = 256
    canvas_height: int = 256
    nucleus_count_range: tuple[int, int] = (15, 40)
    radius_range: tuple[float, float] = (6.0, 14.0)
    irregularity: float = 0.4
    spikiness: float = 0.2
    vertex_count_range: tuple[int, int] = (8, 16)
    overlap_policy: str = "touching"
    max_placement_attempts: int = 20

    def validate(self) -> None:
        w, h = self.canvas_width, self.canvas_height
        if w < 1 or h < 1:
            raise ConfigError(f"canvas must be at least 1x1, got {w}x{h}")
        lo, hi = self.nucleus_count_range
        if lo < 0 or lo > hi:
            raise ConfigError(f"bad nucleus_count_range {self.nucleus_count_range}")
        rlo, rhi = self.radius_range
        if not 0 < rlo <= rhi:
            raise ConfigError(f"bad radius_range {self.radius_range}")
        if rhi > max(w, h) / 2:
            raise ConfigError(f"radius_range {self.radius_range} does not fit a {w}x{h} canvas")
        vlo, vhi = self.vertex_count_range
        if vlo < 3 or vlo > vhi:
            raise ConfigError(f"bad vertex_count_range {self.vertex_count_range}")
        if not 0.0 <= self.irregularity <= 1.0:
            raise ConfigError(f"irregularity must be in [0, 1], got {self.irregularity}")
        if not 0.0 <= self.spikiness <= 1.0:
            raise ConfigError(f"spikiness must be in [0, 1], got {self.spikiness}")
        if self.overlap_policy not in OVERLAP_POLICIES:
            raise ConfigError(f"overlap_policy must be one of {OVERLAP_POLICIES}")
        if self.max_placement_attempts < 1:
            raise ConfigError("max_placement_attempts must be positive")

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d


@dataclass(frozen=True)
class Polygon:
    vertices: np.ndarray  # (n, 2) array of (x, y)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError("a polygon needs at least 3 (x, y) vertices")
        object.__setattr__(self, "vertices", v)

    def signed_area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def generate_polygon(
    rng: np.random.Generator,
    cfg: MaskGenConfig,
    center: tuple[float, float],
    mean_radius: float | None = None,
) -> Polygon:
    """Sample one star-shaped polygon around ``center``.

    Vertices are ordered by increasing angle, i.e. counterclockwise in (x, y)
    coordinates (positive shoelace area). Angles are strictly increasing over
    one turn, so the polygon is simple.
    """
    cx, cy = center
    if mean_radius is None:
        mean_radius = rng.uniform(*cfg.radius_range)
    n = int(rng.integers(cfg.vertex_count_range[0], cfg.vertex_count_range[1], endpoint=True))

    step = 2 * math.pi / n
    steps = step * (1.0 + cfg.irregularity * rng.uniform(-1.0, 1.0, size=n))
    steps *= 2 * math.pi / steps.sum()
    # irregularity == 1 can yield a zero step; keep angles strictly increasing
    steps = np.maximum(steps, 1e-9)
    steps *= 2 * math.pi / steps.sum()
    start = rng.uniform(0.0, 2 * math.pi)
    angles = start + np.concatenate(([0.0], np.cumsum(steps[:-1])))

    z = rng.uniform(-1.0, 1.0, size=n)
    radii = np.maximum(mean_radius * (1.0 + cfg.spikiness * z), 1.0)
    verts = np.column_stack((cx + radii * np.cos(angles), cy + radii * np.sin(angles)))
    return Polygon(verts)


def _inside_even_odd(verts: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    inside = np.zeros(px.shape, dtype=bool)
    x0, y0 = verts[:, 0], verts[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    for ax, ay, bx, by in zip(x0, y0, x1, y1):
        crosses = (ay > py) != (by > py)
        if not crosses.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = ax + (py - ay) * (bx - ax) / (by - ay)
        inside ^= crosses & (px < xint)
    return inside


def _rasterize_bbox(poly: Polygon, width: int, height: int):
    """Rasterize into the polygon's bounding box; returns (mask, row0, col0)."""
    v = poly.vertices
    c0 = max(int(math.floor(v[:, 0].min())), 0)
    c1 = min(int(math.ceil(v[:, 0].max())), width - 1)
    r0 = max(int(math.floor(v[:, 1].min())), 0)
    r1 = min(int(math.ceil(v[:, 1].max())), height - 1)
    if c0 > c1 or r0 > r1:
        return np.zeros((0, 0), dtype=bool), 0, 0
    py, px = np.mgrid[r0 : r1 + 1, c0 : c1 + 1].astype(np.float64)
    return _inside_even_odd(v, px, py), r0, c0


def rasterize(poly: Polygon, width: int, height: int) -> np.ndarray:
    """Binary mask of pixels whose centers fall inside ``poly`` (even-odd rule).

    Pixel (row i, col j) has its center at (x, y) = (j, i).
    """
    out = np.zeros((height, width), dtype=np.uint8)
    sub, r0, c0 = _rasterize_bbox(poly, width, height)
    if sub.size:
        out[r0 : r0 + sub.shape[0], c0 : c0 + sub.shape[1]] = sub
    return out


def _inner_ring(sub: np.ndarray) -> np.ndarray:
    eroded = ndimage.binary_erosion(sub, structure=np.ones((3, 3), bool), border_value=0)
    return sub & ~eroded


def _accept(sub: np.ndarray, existing: np.ndarray, policy: str) -> bool:
    overlap = sub & (existing > 0)
    if not overlap.any():
        return True
    if policy == "disjoint":
        return False
    if policy == "touching":
        # candidates may only share their outer one-pixel band
        return not (overlap & ~_inner_ring(sub)).any()
    return True


def synthesize_layout(cfg: MaskGenConfig, seed: int) -> np.ndarray:
    """Place a random number of polygons on the canvas and return an instance map.

    Rejected candidates are retried up to ``max_placement_attempts`` times and
    then dropped. Where nuclei share pixels, the later one owns them.
    """
    cfg.validate()
    rng = make_rng(seed)
    w, h = cfg.canvas_width, cfg.canvas_height
    labels = np.zeros((h, w), dtype=np.int64)
    count = int(rng.integers(cfg.nucleus_count_range[0], cfg.nucleus_count_range[1], endpoint=True))

    next_label = 1
    for _ in range(count):
        for _attempt in range(cfg.max_placement_attempts):
            center = (rng.uniform(0.0, w), rng.uniform(0.0, h))
            poly = generate_polygon(rng, cfg, center)
            sub, r0, c0 = _rasterize_bbox(poly, w, h)
            if not sub.any():
                continue
            window = labels[r0 : r0 + sub.shape[0], c0 : c0 + sub.shape[1]]
            if not _accept(sub, window, cfg.overlap_policy):
                continue
            window[sub] = next_label
            next_label += 1
            break

    return relabel_sequential(labels)
