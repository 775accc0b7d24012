"""Circular-law checks on image layers treated as random matrices.

A standardized N x N layer scaled by 1/sqrt(N) should, if its entries behave
like i.i.d. noise, have eigenvalues spread uniformly over the unit disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import eigvals


@dataclass(frozen=True)
class EigenSet:
    values: np.ndarray
    source_dim: int

    def __len__(self):
        return len(self.values)


def central_square(layer) -> np.ndarray:
    """Largest centred square sub-matrix (the layer itself if already square)."""
    arr = np.asarray(layer)
    m, n = arr.shape
    k = min(m, n)
    r0 = (m - k) // 2
    c0 = (n - k) // 2
    return arr[r0 : r0 + k, c0 : c0 + k]


def standardize_matrix(layer) -> np.ndarray:
    """Shift to zero mean, scale to unit variance, then divide by sqrt(N)."""
    arr = np.asarray(layer, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"layer must be square, got shape {arr.shape}")
    sd = arr.std()
    if sd == 0.0:
        raise ValueError("zero-variance layer cannot be standardized")
    return (arr - arr.mean()) / sd / math.sqrt(arr.shape[0])


def eigenvalues(matrix, tol: float = 1e-10, max_iter: int | None = None) -> EigenSet:
    arr = np.asarray(matrix, dtype=np.float64)
    return EigenSet(eigvals(arr, tol=tol, max_iter=max_iter), arr.shape[0])


def layer_eigenvalues(layer) -> EigenSet:
    """Eigenvalues of the standardized centred-square part of a layer."""
    return eigenvalues(standardize_matrix(central_square(layer)))


def _values(eigs) -> np.ndarray:
    vals = np.asarray(eigs.values if isinstance(eigs, EigenSet) else eigs, dtype=complex)
    if vals.size == 0:
        raise ValueError("empty eigenvalue set")
    return vals


def esd(eigs, x: float, y: float) -> float:
    """Empirical spectral distribution: fraction with Re <= x and Im <= y."""
    vals = _values(eigs)
    return float(np.count_nonzero((vals.real <= x) & (vals.imag <= y)) / vals.size)


def radial_fraction(eigs, r: float) -> float:
    """Fraction of eigenvalues inside the disk of radius ``r``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    vals = _values(eigs)
    return float(np.count_nonzero(np.abs(vals) <= r) / vals.size)


def circular_law_distance(eigs, sectors: int = 12) -> tuple[float, float]:
    """(KS distance of |lambda| against F(r) = min(r^2, 1), angular chi-square).

    The angular statistic compares eigenvalue counts in ``sectors`` equal
    wedges with the uniform expectation.
    """
    vals = _values(eigs)
    n = vals.size
    if n < 32:
        raise ValueError(f"need at least 32 eigenvalues, got {n}")
    radii = np.sort(np.abs(vals))
    cdf = np.minimum(radii**2, 1.0)
    i = np.arange(1, n + 1)
    ks = float(max((i / n - cdf).max(), (cdf - (i - 1) / n).max()))
    angles = np.mod(np.angle(vals), 2 * np.pi)
    counts = np.bincount(np.minimum((angles / (2 * np.pi) * sectors).astype(int), sectors - 1), minlength=sectors)
    expected = n / sectors
    chi2 = float(((counts - expected) ** 2).sum() / expected)
    return ks, chi2


def sample_unit_disk(n: int, rng) -> np.ndarray:
    """``n`` points uniform on the unit disk, as complex numbers."""
    r = np.sqrt(rng.random(n))
    theta = 2 * np.pi * rng.random(n)
    return r * np.exp(1j * theta)


def calibrate_ks_threshold(n: int, quantile: float = 0.99, trials: int = 2000, rng=None) -> float:
    """Monte-Carlo quantile of the radial KS distance for ideal disk samples."""
    rng = np.random.default_rng(0) if rng is None else rng
    ks = [circular_law_distance(sample_unit_disk(n, rng))[0] for _ in range(trials)]
    return float(np.quantile(ks, quantile))


@dataclass(frozen=True)
class RmtStats:
    dim: int
    radial: dict
    ks_radial: float
    chi2_angle: float
    trace_error: float

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "radial_fraction": {f"{k:g}": v for k, v in self.radial.items()},
            "ks_radial": None if math.isnan(self.ks_radial) else self.ks_radial,
            "chi2_angle": None if math.isnan(self.chi2_angle) else self.chi2_angle,
            "trace_error": self.trace_error,
        }


def rmt_stats(layer, radii=(0.2, 0.5, 0.8), max_dim: int | None = None) -> tuple[RmtStats, EigenSet]:
    """Circular-law summary for one layer.

    ``max_dim`` further crops the centred square, bounding the O(N^3) cost.
    """
    sq = central_square(layer)
    if max_dim is not None and sq.shape[0] > max_dim:
        sq = _crop(sq, max_dim)
    mat = standardize_matrix(sq)
    eigs = eigenvalues(mat)
    ks, chi2 = circular_law_distance(eigs) if len(eigs) >= 32 else (float("nan"), float("nan"))
    return (
        RmtStats(
            dim=eigs.source_dim,
            radial={r: radial_fraction(eigs, r) for r in radii},
            ks_radial=ks,
            chi2_angle=chi2,
            trace_error=float(abs(eigs.values.sum() - np.trace(mat))),
        ),
        eigs,
    )


def _crop(sq: np.ndarray, k: int) -> np.ndarray:
    off = (sq.shape[0] - k) // 2
    return sq[off : off + k, off : off + k]
