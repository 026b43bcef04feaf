"""INI-style pipeline configuration.

One file holds a section per component::

    [maskgen]
    canvas_width = 256
    nucleus_count_range = 15, 40
    overlap_policy = touching

    [sharpness]
    lambda = 0.3

Unknown keys are rejected so typos do not silently fall back to defaults.
"""
from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
from pathlib import Path

from .errors import ConfigError
from .iqa import FsimConfig, GmsdConfig, SsimConfig
from .maskgen import MaskGenConfig
from .sharploss import SharpnessConfig

SECTIONS = ("maskgen", "maps", "sharpness", "ssim", "fsim", "gmsd", "seg", "output")

MAPS_DEFAULTS = {"mode": "centroid", "normalize": True, "connectivity": 8}
SEG_DEFAULTS = {"iou_threshold": 0.5}
OUTPUT_DEFAULTS = {"format": "json"}


def load(path=None) -> dict[str, dict[str, str]]:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(p, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{p}: {exc}") from exc
    unknown = set(parser.sections()) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"{p}: unknown sections {sorted(unknown)}")
    return {s: dict(parser[s]) for s in parser.sections()}


def _convert(raw: str, default, key: str):
    try:
        if isinstance(default, bool):
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if isinstance(default, tuple):
            parts = [x.strip() for x in raw.split(",")]
            if len(parts) != len(default):
                raise ValueError(raw)
            return tuple(int(x) if isinstance(d, int) else float(x) for d, x in zip(default, parts))
        if isinstance(default, int):
            f = float(raw)
            if f != int(f):
                raise ValueError(raw)
            return int(f)
        if isinstance(default, float):
            return float(raw)
        return raw.strip()
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def _merge(defaults: dict, raw: dict[str, str], section: str, aliases=None) -> dict:
    aliases = aliases or {}
    out = dict(defaults)
    for k, v in raw.items():
        key = aliases.get(k, k)
        if key not in defaults:
            raise ConfigError(f"[{section}] unknown key {k!r}")
        out[key] = _convert(v, defaults[key], f"[{section}] {k}")
    return out


def _dataclass(cls, raw: dict[str, str], section: str, aliases=None):
    defaults = {f.name: getattr(cls(), f.name) for f in dataclasses.fields(cls)}
    try:
        return cls(**_merge(defaults, raw, section, aliases))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[{section}] {exc}") from exc


def maskgen_config(cfg: dict) -> MaskGenConfig:
    mc = _dataclass(MaskGenConfig, cfg.get("maskgen", {}), "maskgen")
    mc.validate()
    return mc


def sharpness_config(cfg: dict) -> SharpnessConfig:
    return _dataclass(SharpnessConfig, cfg.get("sharpness", {}), "sharpness", {"lambda": "lam"})


def ssim_config(cfg: dict) -> SsimConfig:
    return _dataclass(SsimConfig, cfg.get("ssim", {}), "ssim")


def fsim_config(cfg: dict) -> FsimConfig:
    return _dataclass(FsimConfig, cfg.get("fsim", {}), "fsim")


def gmsd_config(cfg: dict) -> GmsdConfig:
    return _dataclass(GmsdConfig, cfg.get("gmsd", {}), "gmsd")


def maps_settings(cfg: dict) -> dict:
    return _merge(MAPS_DEFAULTS, cfg.get("maps", {}), "maps")


def seg_settings(cfg: dict) -> dict:
    return _merge(SEG_DEFAULTS, cfg.get("seg", {}), "seg")


def output_settings(cfg: dict) -> dict:
    out = _merge(OUTPUT_DEFAULTS, cfg.get("output", {}), "output")
    if out["format"] not in ("json", "csv"):
        raise ConfigError(f"[output] format must be json or csv, got {out['format']!r}")
    return out


def as_plain(obj):
    """Dataclasses and tuples to JSON-ready values."""
    if dataclasses.is_dataclass(obj):
        return {k: as_plain(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: as_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [as_plain(v) for v in obj]
    return obj


def config_hash(effective: dict) -> str:
    blob = json.dumps(as_plain(effective), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()
