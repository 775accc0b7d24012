"""Deterministic synthetic test images.

Four kinds stand in for the usual photo / graphic / medical / noise test
set: ``natural`` (smooth shading with fine texture), ``blocks`` (flat
coloured shapes), ``xray`` (low-contrast, nearly gray anatomy-like blobs) and
``noise`` (uniform random bytes). Features are laid out in relative
coordinates, so one seed gives the same picture at every resolution.
"""

from __future__ import annotations

import numpy as np

from .image_io import RgbImage

KINDS = ("natural", "blocks", "xray", "noise")


def _grid(size):
    m, n = size
    y, x = np.mgrid[0:m, 0:n].astype(np.float64)
    return y / max(m - 1, 1), x / max(n - 1, 1)


def _blobs(y, x, rng, count, width):
    out = np.zeros_like(x)
    for _ in range(count):
        cy, cx = rng.random(2)
        s = width * (0.5 + rng.random())
        out += rng.uniform(-1, 1) * np.exp(-((y - cy) ** 2 + (x - cx) ** 2) / (2 * s * s))
    return out


def _to_bytes(field):
    return np.clip(np.rint(field), 0, 255).astype(np.uint8)


def natural(size, seed=0) -> RgbImage:
    rng = np.random.default_rng([seed, 1])
    y, x = _grid(size)
    shade = 90 * x + 50 * y + 60 * _blobs(y, x, rng, 12, 0.15)
    texture = 6 * np.sin(40 * x + 7 * np.sin(9 * y)) * np.cos(33 * y)
    grain = np.random.default_rng([seed, 2]).normal(0, 2.0, size)
    base = 60 + shade + texture
    r = base + 25 * _blobs(y, x, rng, 4, 0.25) + grain
    g = 0.85 * base + 10 + grain
    b = 0.7 * base + 30 - 20 * _blobs(y, x, rng, 4, 0.25) + grain
    return RgbImage(_to_bytes(r), _to_bytes(g), _to_bytes(b))


def blocks(size, seed=0) -> RgbImage:
    rng = np.random.default_rng([seed, 3])
    y, x = _grid(size)
    planes = [np.full(x.shape, c) for c in rng.uniform(40, 200, 3)]
    for _ in range(14):
        colour = rng.uniform(10, 250, 3)
        cy, cx = rng.random(2)
        if rng.random() < 0.5:
            hy, hx = rng.uniform(0.05, 0.3, 2)
            mask = (np.abs(y - cy) < hy) & (np.abs(x - cx) < hx)
        else:
            rad = rng.uniform(0.05, 0.25)
            mask = (y - cy) ** 2 + (x - cx) ** 2 < rad * rad
        for p, c in zip(planes, colour):
            p[mask] = c
    shading = 20 * (x - 0.5)
    return RgbImage(*(_to_bytes(p + shading) for p in planes))


def xray(size, seed=0) -> RgbImage:
    rng = np.random.default_rng([seed, 4])
    y, x = _grid(size)
    body = 70 + 45 * np.exp(-((x - 0.5) ** 2) / 0.06) + 25 * _blobs(y, x, rng, 10, 0.1)
    ribs = 10 * np.clip(np.sin(18 * y + 3 * (x - 0.5) ** 2), 0, None) * np.exp(-((x - 0.5) ** 2) / 0.1)
    grain = np.random.default_rng([seed, 5]).normal(0, 1.0, size)
    base = body + ribs + grain
    return RgbImage(_to_bytes(base), _to_bytes(base + 1), _to_bytes(base - 1))


def noise(size, seed=0) -> RgbImage:
    rng = np.random.default_rng([seed, 6])
    return RgbImage.from_array(rng.integers(0, 256, (*size, 3), dtype=np.uint8))


_MAKERS = {"natural": natural, "blocks": blocks, "xray": xray, "noise": noise}


def make(kind: str, size, seed: int = 0) -> RgbImage:
    """Build a test image of ``kind`` with shape ``size`` (rows, cols)."""
    if isinstance(size, int):
        size = (size, size)
    try:
        return _MAKERS[kind](tuple(size), seed)
    except KeyError:
        raise ValueError(f"unknown kind {kind!r}; choose from {KINDS}") from None


def corpus(sizes=(256, 400, 512, 1024), kinds=KINDS, seed: int = 0) -> dict:
    """``{(kind, size): image}`` over every kind and square size."""
    return {(k, s): make(k, s, seed) for s in sizes for k in kinds}
