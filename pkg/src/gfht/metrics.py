"""Pixel-domain randomness statistics.

NPCR/UACI differential measures, directional adjacent-pixel correlation,
scanline serialization and the sliding-window chi-square uniformity test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cipher import encrypt_image
from .image_io import Layer, RgbImage
from .keys import DEFAULT_ROUNDS

DIRECTIONS = ("horizontal", "vertical", "diagonal")
SCANLINES = DIRECTIONS

# (row shift, column shift) of the neighbour in each direction
_OFFSETS = {"horizontal": (0, 1), "vertical": (1, 0), "diagonal": (1, 1)}


def _same_shape(c1, c2):
    a = np.asarray(c1)
    b = np.asarray(c2)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def npcr(c1, c2) -> float:
    """Percentage of positions where the two ciphertexts differ."""
    a, b = _same_shape(c1, c2)
    return 100.0 * np.count_nonzero(a != b) / a.size


def uaci(c1, c2) -> float:
    """Mean absolute intensity difference, as a percentage of 255."""
    a, b = _same_shape(c1, c2)
    diff = np.abs(a.astype(np.int32) - b.astype(np.int32))
    return 100.0 * diff.sum() / (255.0 * a.size)


@dataclass(frozen=True)
class DiffStats:
    """NPCR and UACI for an image pair; aggregate values average the layers."""

    npcr_percent: float
    uaci_percent: float
    per_layer: tuple

    def to_dict(self) -> dict:
        return {
            "npcr_percent": self.npcr_percent,
            "uaci_percent": self.uaci_percent,
            "per_layer": [{"npcr": n, "uaci": u} for n, u in self.per_layer],
        }


def diff_stats(img1: RgbImage, img2: RgbImage) -> DiffStats:
    per_layer = tuple((npcr(a, b), uaci(a, b)) for a, b in zip(img1.layers, img2.layers))
    return DiffStats(
        npcr_percent=float(np.mean([p[0] for p in per_layer])),
        uaci_percent=float(np.mean([p[1] for p in per_layer])),
        per_layer=per_layer,
    )


def pearson(x, y) -> float:
    """Pearson correlation coefficient of two equally shaped arrays.

    Raises ``ValueError`` when either input has zero variance instead of
    returning a misleading 0.
    """
    a, b = _same_shape(x, y)
    a = a.astype(np.float64).ravel()
    b = b.astype(np.float64).ravel()
    a = a - a.mean()
    b = b - b.mean()
    sa = math.sqrt(float(a @ a))
    sb = math.sqrt(float(b @ b))
    if sa == 0.0 or sb == 0.0:
        raise ValueError("correlation undefined for a zero-variance input")
    r = float(a @ b) / (sa * sb)
    return max(-1.0, min(1.0, r))


def _shifted_pair(layer, direction):
    try:
        dr, dc = _OFFSETS[direction]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r}") from None
    arr = np.asarray(layer)
    if arr.ndim != 2:
        raise ValueError("layer must be 2-D")
    m, n = arr.shape
    if m - dr < 1 or n - dc < 1 or (m < 2 and n < 2):
        raise ValueError(f"layer {arr.shape} too small for {direction} neighbours")
    return arr[: m - dr, : n - dc], arr[dr:, dc:]


def scatter_pairs(layer: Layer, direction: str) -> np.ndarray:
    """(K, 2) array of (pixel, neighbour) intensities, row-major over the reference."""
    ref, nb = _shifted_pair(layer, direction)
    return np.column_stack([ref.ravel(), nb.ravel()])


def directional_autocorrelation(layer: Layer, direction: str) -> float:
    ref, nb = _shifted_pair(layer, direction)
    return pearson(ref, nb)


@dataclass(frozen=True)
class CorrelationTriple:
    horizontal: float
    vertical: float
    diagonal: float

    def as_tuple(self):
        return (self.horizontal, self.vertical, self.diagonal)

    def to_dict(self) -> dict:
        return {"horizontal": self.horizontal, "vertical": self.vertical, "diagonal": self.diagonal}


def correlation_triple(layer: Layer) -> CorrelationTriple:
    return CorrelationTriple(*(directional_autocorrelation(layer, d) for d in DIRECTIONS))


def _zigzag_order(m: int, n: int) -> np.ndarray:
    rows, cols = np.indices((m, n))
    d = (rows + cols).ravel()
    r = rows.ravel()
    # odd anti-diagonals run top-right to bottom-left, even ones the reverse
    within = np.where(d % 2 == 1, r, -r)
    return np.lexsort((within, d))


def scanline_serialize(layer: Layer, scanline: str) -> np.ndarray:
    """Flatten a layer in horizontal (row-major), vertical (column-major) or
    diagonal (JPEG zigzag) order."""
    arr = np.asarray(layer)
    if scanline == "horizontal":
        return arr.ravel().copy()
    if scanline == "vertical":
        return arr.T.ravel().copy()
    if scanline == "diagonal":
        return arr.ravel()[_zigzag_order(*arr.shape)]
    raise ValueError(f"unknown scanline {scanline!r}")


def serialize_image(image: RgbImage, scanline: str) -> np.ndarray:
    """Scanline-serialize R, G and B and concatenate them."""
    return np.concatenate([scanline_serialize(x, scanline) for x in image.layers])


def bin_edges(bins: int) -> np.ndarray:
    """Equal-width integer bin edges over [0, 256)."""
    if bins < 2 or bins > 256:
        raise ValueError(f"bins must be in [2, 256], got {bins}")
    return (256 * np.arange(bins + 1)) // bins


def _bin_lookup(bins: int) -> np.ndarray:
    return np.searchsorted(bin_edges(bins), np.arange(256), side="right") - 1


def chi_square_statistic(window, bins: int = 10) -> float:
    """Pearson chi-square of byte counts against equal expected counts K/bins."""
    data = np.asarray(window, dtype=np.uint8).ravel()
    if data.size == 0:
        raise ValueError("empty window")
    observed = np.bincount(_bin_lookup(bins)[data], minlength=bins)
    expected = data.size / bins
    return float(((observed - expected) ** 2).sum() / expected)


# Regularized incomplete gamma, series below a+1 and Lentz continued
# fraction above; both converge to ~1e-15.
_EPS = 1e-16
_TINY = 1e-300


def _gamma_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(10000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_contfrac(a: float, x: float) -> float:
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_p(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_contfrac(a, x)


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_contfrac(a, x)


def chi_square_cdf(x: float, dof: float) -> float:
    """CDF of the chi-square distribution with ``dof`` degrees of freedom."""
    if x < 0:
        raise ValueError("chi-square value must be non-negative")
    if dof <= 0:
        raise ValueError("dof must be positive")
    return regularized_gamma_p(dof / 2.0, x / 2.0)


def chi_square_sf(x: float, dof: float) -> float:
    """Upper tail Pr[X >= x]; accurate where 1 - cdf would cancel."""
    if x < 0:
        raise ValueError("chi-square value must be non-negative")
    if dof <= 0:
        raise ValueError("dof must be positive")
    return regularized_gamma_q(dof / 2.0, x / 2.0)


@dataclass
class GofResult:
    window_size: int
    bins: int
    dof: float
    alpha: float
    scanline: str | None
    windows_total: int
    windows_rejected: int
    r_gof: float
    step: int
    statistics: np.ndarray = field(repr=False, default=None)
    p_values: np.ndarray = field(repr=False, default=None)
    window_means: np.ndarray = field(repr=False, default=None)

    def to_dict(self) -> dict:
        return {
            "window_size": self.window_size,
            "bins": self.bins,
            "dof": self.dof,
            "alpha": self.alpha,
            "scanline": self.scanline,
            "step": self.step,
            "windows_total": self.windows_total,
            "windows_rejected": self.windows_rejected,
            "r_gof": self.r_gof,
        }


def window_step(window: int, overlap: float) -> int:
    if not 0.0 <= overlap < 1.0:
        raise ValueError(f"overlap must be in [0, 1), got {overlap}")
    return max(1, int(round(window * (1.0 - overlap))))


def sliding_window_gof(
    data,
    window: int = 600,
    overlap: float = 0.5,
    bins: int = 10,
    alpha: float = 0.01,
    dof_mode: str = "fixed",
    scanline: str | None = None,
) -> GofResult:
    """Chi-square uniformity test over overlapping windows of a byte stream.

    A window is rejected when its p-value falls below ``alpha``; ``r_gof`` is
    the accepted fraction. ``dof_mode='dynamic'`` uses sqrt(window) + 1
    degrees of freedom instead of bins - 1.
    """
    data = np.asarray(data, dtype=np.uint8).ravel()
    if window < 1:
        raise ValueError("window must be positive")
    if data.size < window:
        raise ValueError(f"data ({data.size} bytes) shorter than one window ({window})")
    if dof_mode == "fixed":
        dof = float(bins - 1)
    elif dof_mode == "dynamic":
        dof = math.sqrt(window) + 1.0
    else:
        raise ValueError(f"unknown dof_mode {dof_mode!r}")
    step = window_step(window, overlap)
    n_windows = (data.size - window) // step + 1
    starts = np.arange(n_windows) * step

    binned = _bin_lookup(bins)[data]
    counts = np.empty((n_windows, bins), dtype=np.int64)
    for b in range(bins):
        csum = np.concatenate(([0], np.cumsum(binned == b, dtype=np.int64)))
        counts[:, b] = csum[starts + window] - csum[starts]
    expected = window / bins
    stats = ((counts - expected) ** 2).sum(axis=1) / expected
    pvals = np.array([chi_square_sf(s, dof) for s in stats])
    rejected = int(np.count_nonzero(pvals < alpha))

    vsum = np.concatenate(([0], np.cumsum(data, dtype=np.int64)))
    means = (vsum[starts + window] - vsum[starts]) / (255.0 * window)
    return GofResult(
        window_size=window,
        bins=bins,
        dof=dof,
        alpha=alpha,
        scanline=scanline,
        windows_total=n_windows,
        windows_rejected=rejected,
        r_gof=1.0 - rejected / n_windows,
        step=step,
        statistics=stats,
        p_values=pvals,
        window_means=means,
    )


def image_gof(image: RgbImage, scanline: str, **kwargs) -> GofResult:
    """Sliding-window test on the scanline-serialized, layer-concatenated image."""
    return sliding_window_gof(serialize_image(image, scanline), scanline=scanline, **kwargs)


def avalanche_npcr(image: RgbImage, passphrase, pixel, rounds: int = DEFAULT_ROUNDS) -> DiffStats:
    """Differential response to zeroing one channel value of one pixel.

    Both images are encrypted with their own salted keys under the same
    passphrase. ``pixel`` is ``(row, col, channel)``; zeroing a value that is
    already zero would leave the image unchanged and is rejected.
    """
    row, col, channel = pixel
    m, n = image.shape
    if not (0 <= row < m and 0 <= col < n and 0 <= channel < 3):
        raise ValueError(f"pixel {pixel} outside image of shape {image.shape}")
    if image.layers[channel][row, col] == 0:
        raise ValueError(f"pixel {pixel} is already zero; nullifying it changes nothing")
    c1 = encrypt_image(image, passphrase, rounds).image
    c2 = encrypt_image(image.replace(row, col, channel, 0), passphrase, rounds).image
    return diff_stats(c1, c2)


def avalanche_campaign(image: RgbImage, passphrase, trials: int, rng, rounds: int = DEFAULT_ROUNDS) -> list:
    """``trials`` avalanche measurements at random non-zero pixel values.

    ``rng`` is a ``numpy.random.Generator``; the original ciphertext is
    computed once and reused.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    stacked = np.stack(image.layers)  # (3, M, N)
    candidates = np.flatnonzero(stacked)
    if candidates.size == 0:
        raise ValueError("image has no non-zero pixel values to nullify")
    base = encrypt_image(image, passphrase, rounds).image
    out = []
    for flat in rng.choice(candidates, size=trials, replace=candidates.size < trials):
        channel, row, col = np.unravel_index(flat, stacked.shape)
        other = encrypt_image(image.replace(row, col, channel, 0), passphrase, rounds).image
        out.append(diff_stats(base, other))
    return out
