"""File formats: 8-bit PNG images, 16-bit PNG instance maps and SGDM float rasters.

SGDM layout: the magic bytes ``SGDM``, width and height as little-endian
uint32, then width*height little-endian float32 values in row-major order.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import FormatError

SGDM_MAGIC = b"SGDM"
_HEADER = struct.Struct("<4sII")
PNG_COMPRESS_LEVEL = 6


def _open(path) -> Image.Image:
    try:
        im = Image.open(path)
        im.load()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise FormatError(f"{path}: not a readable PNG ({exc})") from exc
    return im


def _save(im: Image.Image, path) -> None:
    # fixed encoder settings and no metadata so reruns are byte-identical
    im.save(path, format="PNG", compress_level=PNG_COMPRESS_LEVEL, optimize=False)


def read_image(path) -> np.ndarray:
    """Read an 8-bit gray or RGB(A) PNG as float64 in [0, 1]."""
    im = _open(path)
    if im.mode in ("1", "L", "P", "LA"):
        a = np.asarray(im.convert("L"))
    elif im.mode in ("RGB", "RGBA"):
        a = np.asarray(im.convert("RGB"))
    elif im.mode.startswith("I;16") or im.mode == "I":
        raise FormatError(f"{path}: 16-bit image where an 8-bit image was expected")
    else:
        raise FormatError(f"{path}: unsupported PNG mode {im.mode}")
    return a.astype(np.float64) / 255.0


def write_image(path, img) -> None:
    a = np.asarray(img, dtype=np.float64)
    a8 = np.round(np.clip(a, 0.0, 1.0) * 255.0).astype(np.uint8)
    _save(Image.fromarray(a8), path)


def write_binary(path, mask) -> None:
    """Write a {0,1} raster as an 8-bit PNG with values 0 / 255."""
    a = (np.asarray(mask) != 0).astype(np.uint8) * 255
    _save(Image.fromarray(a), path)


def read_binary(path) -> np.ndarray:
    return (read_image(path) > 0.5).astype(np.uint8)


def read_labels(path) -> np.ndarray:
    """Read an instance map from a 16-bit (or 8-bit) single-channel PNG."""
    im = _open(path)
    if im.mode.startswith("I;16") or im.mode in ("I", "L"):
        a = np.asarray(im)
    else:
        raise FormatError(f"{path}: instance maps must be single-channel, got mode {im.mode}")
    a = a.astype(np.int64)
    if a.size and a.min() < 0:
        raise FormatError(f"{path}: negative labels")
    return a


def write_labels(path, labels) -> None:
    a = np.asarray(labels)
    if a.size and (a.min() < 0 or a.max() > 65535):
        raise ValueError("instance labels must fit in 0..65535")
    _save(Image.fromarray(a.astype(np.uint16)), path)


def write_sgdm(path, values) -> None:
    a = np.asarray(values, dtype="<f4")
    if a.ndim != 2:
        raise ValueError("SGDM rasters are 2-D")
    h, w = a.shape
    with open(path, "wb") as f:
        f.write(_HEADER.pack(SGDM_MAGIC, w, h))
        f.write(np.ascontiguousarray(a).tobytes())


def read_sgdm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: truncated SGDM header")
    magic, w, h = _HEADER.unpack_from(data)
    if magic != SGDM_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    expected = _HEADER.size + 4 * w * h
    if len(data) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    return np.frombuffer(data, dtype="<f4", offset=_HEADER.size).reshape(h, w).astype(np.float64)
