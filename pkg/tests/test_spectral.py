import numpy as np
import pytest

from gfht import testimages
from gfht.cipher import encrypt_image
from gfht.spectral import (
    SpectrumSample,
    autocorrelation_1d,
    coefficient_of_variation,
    periodogram,
    psd_2d,
    psd_flatness,
    psd_wiener_khinchin,
    welch_psd,
)


def test_autocorrelation_examples():
    r = autocorrelation_1d([1.0, 0, 0, 0], 3, demean=False)
    assert r.tolist() == [0.25, 0, 0, 0]
    r = autocorrelation_1d([1.0, 1, 0, 0], 2, demean=False)
    assert r.tolist() == [0.5, 0.25, 0]
    assert not autocorrelation_1d(np.full(20, 3.0), 5).any()
    with pytest.raises(ValueError):
        autocorrelation_1d([1.0, 2.0], 2)


def test_autocorrelation_of_noise_is_impulse():
    x = np.random.default_rng(0).normal(size=100_000)
    r = autocorrelation_1d(x, 20)
    assert np.all(np.abs(r[1:]) / r[0] < 0.05)


def test_periodogram_examples():
    p = periodogram(np.full(16, 3.0)).power
    assert p[0] == pytest.approx(16 * 9)
    assert np.allclose(p[1:], 0, atol=1e-20)
    n, k0 = 64, 5
    tone = np.cos(2 * np.pi * k0 * np.arange(n) / n)
    peaks = np.argsort(periodogram(tone).power)[-2:]
    assert sorted(peaks.tolist()) == [k0, n - k0]


@pytest.mark.parametrize("n", [17, 256, 3000])
def test_parseval(n):
    x = np.random.default_rng(n).normal(size=n)
    assert periodogram(x).power.sum() == pytest.approx((x**2).sum(), rel=1e-9)
    assert psd_wiener_khinchin(x).power.sum() == pytest.approx((x**2).sum(), rel=1e-9)


@pytest.mark.parametrize("n", [64, 1000, 4096])
def test_wiener_khinchin_equals_periodogram(n):
    x = np.random.default_rng(1).integers(0, 256, n).astype(float)
    a = periodogram(x).power
    b = psd_wiener_khinchin(x).power
    assert np.max(np.abs(a - b) / a) < 1e-6


def test_wiener_khinchin_examples():
    imp = np.zeros(32)
    imp[0] = 2.0
    assert np.allclose(psd_wiener_khinchin(imp).power, 4 / 32)
    const = psd_wiener_khinchin(np.ones(32)).power
    assert const[0] == pytest.approx(32)
    assert np.allclose(const[1:], 0, atol=1e-12)


def test_welch_levels_and_windows():
    x = np.random.default_rng(2).normal(0, 2, 200_000)
    for window in ("rectangular", "hann", "hamming"):
        s = welch_psd(x, 512, 0.5, window)
        assert len(s) == 512
        assert np.mean(s.power[1:]) == pytest.approx(4.0, rel=0.02)
    with pytest.raises(ValueError):
        welch_psd(x, 512, window="kaiser")
    with pytest.raises(ValueError):
        welch_psd(x[:100], 512)


def test_welch_single_segment_is_periodogram():
    x = np.random.default_rng(3).normal(size=256)
    assert np.allclose(welch_psd(x, 256).power, periodogram(x).power)


def test_psd_flatness():
    flat = SpectrumSample(np.arange(8) / 8, np.full(8, 10.0), "test")
    mean_db, ripple = psd_flatness(flat)
    assert mean_db == pytest.approx(10.0) and ripple == 0.0
    bumped = flat.power.copy()
    bumped[3] *= 10 ** 0.1
    assert psd_flatness(SpectrumSample(flat.freqs, bumped, "test"))[1] == pytest.approx(1.0)
    # DC is excluded
    dc = flat.power.copy()
    dc[0] = 1e9
    assert psd_flatness(SpectrumSample(flat.freqs, dc, "test"))[1] == 0.0


def test_psd_2d():
    p = psd_2d(np.full((8, 8), 5.0))
    assert p[0, 0] == pytest.approx(64 * 25)
    assert np.count_nonzero(p > 1e-9) == 1
    x = np.random.default_rng(4).normal(size=(16, 24))
    assert psd_2d(x).sum() == pytest.approx((x**2).sum())


def test_cipher_flattens_2d_spectrum():
    img = testimages.make("natural", 128)
    cipher = encrypt_image(img, "pw").image
    for p, c in zip(img.layers, cipher.layers):
        assert coefficient_of_variation(psd_2d(p)) >= 10 * coefficient_of_variation(psd_2d(c))
