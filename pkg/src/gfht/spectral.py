"""Frequency-domain evidence of whiteness.

Spectra are two-sided over normalized frequencies k/N with unit sampling
rate; decibels are 10*log10 of the linear density (reference 1.0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpectrumSample:
    freqs: np.ndarray
    power: np.ndarray
    method: str

    @property
    def power_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(self.power)

    def __len__(self):
        return len(self.freqs)


def _as_signal(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).ravel()
    if arr.size == 0:
        raise ValueError("empty input")
    return arr


def autocorrelation_1d(x, max_lag: int, demean: bool = True) -> np.ndarray:
    """Biased estimate r[l] = (1/N) sum_n x[n] x[n-l] for l = 0..max_lag."""
    arr = _as_signal(x)
    n = arr.size
    if max_lag < 0 or max_lag >= n:
        raise ValueError(f"max_lag must be in [0, {n - 1}], got {max_lag}")
    if demean:
        arr = arr - arr.mean()
    return np.array([arr[l:] @ arr[: n - l] for l in range(max_lag + 1)]) / n


def periodogram(x) -> SpectrumSample:
    """(1/N) |DFT(x)|^2 at every bin k = 0..N-1."""
    arr = _as_signal(x)
    n = arr.size
    power = np.abs(np.fft.fft(arr)) ** 2 / n
    return SpectrumSample(np.arange(n) / n, power, "periodogram")


def _full_autocorrelation(arr: np.ndarray) -> np.ndarray:
    # raw aperiodic r[l], l = 0..N-1; zero padding keeps it linear, not circular
    n = arr.size
    if n <= 2048:
        return np.correlate(arr, arr, mode="full")[n - 1 :] / n
    size = 1 << (2 * n - 1).bit_length()
    spec = np.fft.rfft(arr, size)
    return np.fft.irfft(spec * spec.conj(), size)[:n] / n


def psd_wiener_khinchin(x) -> SpectrumSample:
    """Spectrum as the DFT of the (non-demeaned) autocorrelation sequence.

    Sampling the transform of r[-(N-1)..N-1] at k/N folds negative lags onto
    l + N, so an N-point DFT of r[l] + r[N-l] gives the periodogram exactly.
    """
    arr = _as_signal(x)
    n = arr.size
    r = _full_autocorrelation(arr)
    folded = r.copy()
    folded[1:] += r[1:][::-1]
    power = np.fft.fft(folded).real
    return SpectrumSample(np.arange(n) / n, power, "wiener_khinchin")


def _taper(name: str, n: int) -> np.ndarray:
    if name in ("rectangular", "boxcar", None):
        return np.ones(n)
    if name == "hann":
        return np.hanning(n + 1)[:-1]  # periodic form
    if name == "hamming":
        return np.hamming(n + 1)[:-1]
    raise ValueError(f"unknown window {name!r}")


def welch_psd(x, segment: int = 1024, overlap: float = 0.5, window: str = "rectangular") -> SpectrumSample:
    """Average of per-segment periodograms.

    The taper is normalized by its mean square so white noise of variance
    s^2 sits at s^2 for any window. The mean is kept, so bin 0 carries the DC
    impulse.
    """
    arr = _as_signal(x)
    if segment < 2:
        raise ValueError("segment must be at least 2")
    if arr.size < segment:
        raise ValueError(f"input ({arr.size}) shorter than one segment ({segment})")
    if not 0.0 <= overlap < 1.0:
        raise ValueError("overlap must be in [0, 1)")
    step = max(1, int(round(segment * (1.0 - overlap))))
    n_seg = (arr.size - segment) // step + 1
    w = _taper(window, segment)
    scale = segment * np.mean(w**2)
    acc = np.zeros(segment)
    # chunk to bound memory on multi-megabyte inputs
    for start in range(0, n_seg, 256):
        idx = (np.arange(start, min(n_seg, start + 256)) * step)[:, None] + np.arange(segment)
        acc += (np.abs(np.fft.fft(arr[idx] * w, axis=1)) ** 2).sum(axis=0)
    return SpectrumSample(np.arange(segment) / segment, acc / (n_seg * scale), "welch")


def psd_flatness(spectrum: SpectrumSample) -> tuple[float, float]:
    """(mean dB, max - min dB) over all bins except DC."""
    db = spectrum.power_db[1:]
    if db.size < 2:
        raise ValueError("need at least two non-DC bins")
    return float(db.mean()), float(db.max() - db.min())


def psd_2d(layer) -> np.ndarray:
    """(1/(M N)) |2-D DFT|^2 of a layer, DC at [0, 0]."""
    arr = np.asarray(layer, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("layer must be a non-empty 2-D array")
    return np.abs(np.fft.fft2(arr)) ** 2 / arr.size


def coefficient_of_variation(power2d: np.ndarray) -> float:
    """Std/mean of the non-DC 2-D spectrum; small for a flat envelope."""
    flat = np.asarray(power2d).ravel()[1:]
    return float(flat.std() / flat.mean())
