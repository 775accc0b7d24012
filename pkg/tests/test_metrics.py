import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import special, stats

from gfht import testimages
from gfht.metrics import (
    avalanche_campaign,
    avalanche_npcr,
    bin_edges,
    chi_square_cdf,
    chi_square_sf,
    chi_square_statistic,
    correlation_triple,
    directional_autocorrelation,
    npcr,
    pearson,
    regularized_gamma_p,
    regularized_gamma_q,
    scanline_serialize,
    scatter_pairs,
    sliding_window_gof,
    uaci,
    window_step,
)

# numeric quadrature of the chi-square density, computed once with mpmath
F_16919_9 = 0.9500003591516503
# mean |x - y| over all (x, y) in [0, 255]^2 by exhaustive double sum: 5592320 / 65536
MEAN_ABS_DIFF = 21845 / 256

SQUARE = np.array([[1, 2], [3, 4]], dtype=np.uint8)


def test_npcr_examples():
    a = np.arange(4, dtype=np.uint8).reshape(2, 2)
    b = a.copy()
    assert npcr(a, b) == 0.0
    b[1, 0] += 1
    assert npcr(a, b) == 25.0
    with pytest.raises(ValueError):
        npcr(a, np.zeros((3, 3)))


def test_uaci_examples():
    zeros = np.zeros((4, 4), dtype=np.uint8)
    full = np.full((4, 4), 255, dtype=np.uint8)
    assert uaci(zeros, zeros) == 0.0
    assert uaci(zeros, full) == 100.0


def test_uaci_exhaustive_pairs():
    x, y = np.meshgrid(np.arange(256), np.arange(256))
    assert np.abs(x - y).sum() == 5592320
    got = uaci(x.astype(np.uint8), y.astype(np.uint8))
    assert got == pytest.approx(100 * MEAN_ABS_DIFF / 255, rel=1e-12)
    # the continuous limit is 100/3
    assert abs(got - 100 / 3) < 0.2


def test_uaci_random_layers():
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, 256, (2, 512, 512), dtype=np.uint8)
    assert abs(uaci(a, b) - 100 / 3) < 0.5


@settings(max_examples=40, deadline=None)
@given(arrays(np.uint8, (6, 7)), arrays(np.uint8, (6, 7)))
def test_npcr_uaci_symmetry(a, b):
    assert npcr(a, b) == npcr(b, a)
    assert uaci(a, b) == uaci(b, a)
    assert 0 <= uaci(a, b) <= 100
    assert npcr(a, a) == 0


def test_pearson_examples():
    x = np.random.default_rng(1).integers(0, 256, (32, 32))
    assert pearson(x, x) == pytest.approx(1.0)
    assert pearson(x, 255 - x) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        pearson(np.ones(10), np.ones(10))
    with pytest.raises(ValueError):
        pearson(np.arange(10), np.ones(10))


def test_pearson_matches_numpy():
    rng = np.random.default_rng(2)
    x, y = rng.normal(size=(2, 500))
    y = y + 0.3 * x
    assert pearson(x, y) == pytest.approx(np.corrcoef(x, y)[0, 1], abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    arrays(np.float64, 30, elements=st.floats(-100, 100)),
    arrays(np.float64, 30, elements=st.floats(-100, 100)),
    st.floats(0.1, 10),
    st.floats(-50, 50),
)
def test_pearson_affine_invariance(x, y, alpha, beta):
    if np.ptp(x) < 1e-3 or np.ptp(y) < 1e-3:
        return
    r = pearson(x, y)
    assert pearson(alpha * x + beta, y) == pytest.approx(r, abs=1e-9)
    assert pearson(-alpha * x + beta, y) == pytest.approx(-r, abs=1e-9)


def test_independent_uniform_layers_uncorrelated():
    rng = np.random.default_rng(3)
    rs = np.array([abs(pearson(*rng.integers(0, 256, (2, 256, 256)))) for _ in range(1000)])
    # rho ~ N(0, 1/K) with K = 65536, so Pr[|rho| < 0.01] = 0.9895, not above 0.99
    expected = 2 * stats.norm.cdf(0.01 * 256) - 1
    assert abs(np.mean(rs < 0.01) - expected) < 3 * np.sqrt(expected * (1 - expected) / 1000)
    assert np.std(rs) == pytest.approx(np.sqrt(1 - 2 / np.pi) / 256, rel=0.1)


def test_scatter_pairs():
    assert scatter_pairs(SQUARE, "horizontal").tolist() == [[1, 2], [3, 4]]
    assert scatter_pairs(SQUARE, "vertical").tolist() == [[1, 3], [2, 4]]
    assert scatter_pairs(SQUARE, "diagonal").tolist() == [[1, 4]]
    with pytest.raises(ValueError):
        scatter_pairs(SQUARE, "sideways")
    assert scatter_pairs(np.zeros((5, 7)), "diagonal").shape == (24, 2)


def test_directional_autocorrelation():
    ramp = np.tile(np.arange(16), (4, 1))
    assert directional_autocorrelation(ramp, "horizontal") == pytest.approx(1.0)
    assert directional_autocorrelation(ramp, "vertical") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        directional_autocorrelation(np.full((4, 4), 9), "diagonal")


def test_plaintexts_strongly_correlated():
    for kind in ("natural", "blocks", "xray"):
        img = testimages.make(kind, 256)
        for layer in img.layers:
            assert min(correlation_triple(layer).as_tuple()) >= 0.77


def test_scanlines():
    assert scanline_serialize(SQUARE, "horizontal").tolist() == [1, 2, 3, 4]
    assert scanline_serialize(SQUARE, "vertical").tolist() == [1, 3, 2, 4]
    assert scanline_serialize(SQUARE, "diagonal").tolist() == [1, 2, 3, 4]
    grid = np.arange(1, 10).reshape(3, 3)
    assert scanline_serialize(grid, "diagonal").tolist() == [1, 2, 4, 7, 5, 3, 6, 8, 9]
    with pytest.raises(ValueError):
        scanline_serialize(grid, "spiral")


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.sampled_from(["horizontal", "vertical", "diagonal"]))
def test_scanline_is_permutation(m, n, scanline):
    layer = np.arange(m * n).reshape(m, n)
    out = scanline_serialize(layer, scanline)
    assert sorted(out.tolist()) == list(range(m * n))


def test_bin_edges():
    assert bin_edges(10).tolist() == [0, 25, 51, 76, 102, 128, 153, 179, 204, 230, 256]
    assert bin_edges(256).tolist() == list(range(257))
    with pytest.raises(ValueError):
        bin_edges(1)


def test_chi_square_statistic_examples():
    edges = bin_edges(10)
    even = np.concatenate([np.full(10, edges[b]) for b in range(10)])
    assert chi_square_statistic(even) == 0.0
    assert chi_square_statistic(np.zeros(100)) == pytest.approx(900.0)
    # permuting which bins hold the counts does not change the statistic
    skew = np.concatenate([np.full(20, edges[0]), np.full(5, edges[3]), np.full(75, edges[7])])
    moved = np.concatenate([np.full(20, edges[9]), np.full(5, edges[1]), np.full(75, edges[4])])
    assert chi_square_statistic(skew) == chi_square_statistic(moved)


def test_chi_square_statistic_mean_is_dof():
    rng = np.random.default_rng(4)
    vals = [chi_square_statistic(rng.integers(0, 256, 600)) for _ in range(4000)]
    # E_i = K/10 on bins of width 25/26 biases the mean slightly above 9
    assert abs(np.mean(vals) - 9) < 0.4


def test_chi_square_cdf_closed_forms():
    assert chi_square_cdf(0.0, 5) == 0.0
    assert chi_square_sf(0.0, 5) == 1.0
    assert chi_square_cdf(2 * math.log(2), 2) == pytest.approx(0.5, abs=1e-12)
    assert chi_square_cdf(1.3863, 2) == pytest.approx(0.5, abs=1e-4)
    for x in (0.1, 1.0, 7.5, 40.0):
        assert chi_square_cdf(x, 2) == pytest.approx(1 - math.exp(-x / 2), abs=1e-13)
    assert chi_square_cdf(16.919, 9) == pytest.approx(F_16919_9, abs=1e-12)
    assert abs(chi_square_cdf(16.919, 9) - 0.95) < 1e-4


@pytest.mark.parametrize("a", [0.5, 1.0, 4.5, 13.0, 100.0])
@pytest.mark.parametrize("x", [1e-3, 0.7, 5.0, 20.0, 150.0])
def test_incomplete_gamma_vs_scipy(a, x):
    assert regularized_gamma_p(a, x) == pytest.approx(special.gammainc(a, x), abs=1e-12)
    q = regularized_gamma_q(a, x)
    assert q == pytest.approx(special.gammaincc(a, x), rel=1e-9, abs=1e-300)


def test_incomplete_gamma_domain():
    with pytest.raises(ValueError):
        regularized_gamma_p(0, 1)
    with pytest.raises(ValueError):
        chi_square_cdf(-1, 3)
    with pytest.raises(ValueError):
        chi_square_sf(1, 0)


def test_gof_constant_stream_rejected():
    res = sliding_window_gof(np.zeros(480_000, dtype=np.uint8))
    assert res.r_gof == 0.0
    assert res.windows_rejected == res.windows_total


def test_gof_window_count():
    res = sliding_window_gof(np.zeros(3 * 400 * 400, dtype=np.uint8))
    assert res.step == 300
    assert res.windows_total == 1599
    assert window_step(600, 0.0) == 600


def test_gof_matches_direct_statistic():
    data = np.random.default_rng(5).integers(0, 256, 5000).astype(np.uint8)
    res = sliding_window_gof(data, window=600, overlap=0.5)
    for i in (0, 3, len(res.statistics) - 1):
        w = data[i * 300 : i * 300 + 600]
        assert res.statistics[i] == pytest.approx(chi_square_statistic(w))
        assert res.p_values[i] == pytest.approx(stats.chi2.sf(res.statistics[i], 9), rel=1e-9)


def test_gof_uniform_streams():
    rng = np.random.default_rng(6)
    rates = [sliding_window_gof(rng.integers(0, 256, 480_000)).r_gof for _ in range(100)]
    # unequal bin widths bias the statistic upward, so the mean sits a little under 1 - alpha
    assert 0.985 <= np.mean(rates) <= 0.993


def test_gof_dynamic_dof_and_errors():
    data = np.random.default_rng(7).integers(0, 256, 6000)
    res = sliding_window_gof(data, window=600, dof_mode="dynamic")
    assert res.dof == pytest.approx(math.sqrt(600) + 1)
    with pytest.raises(ValueError):
        sliding_window_gof(data, dof_mode="bogus")
    with pytest.raises(ValueError):
        sliding_window_gof(data[:100])
    with pytest.raises(ValueError):
        sliding_window_gof(data, overlap=1.0)


def test_avalanche():
    img = testimages.make("natural", 64)
    stats_ = avalanche_npcr(img, "pw", (3, 4, 1))
    assert stats_.npcr_percent > 98.5
    assert len(stats_.per_layer) == 3
    with pytest.raises(ValueError):
        avalanche_npcr(img, "pw", (64, 0, 0))
    zeroed = img.replace(0, 0, 0, 0)
    with pytest.raises(ValueError):
        avalanche_npcr(zeroed, "pw", (0, 0, 0))


def test_avalanche_campaign_seeded():
    img = testimages.make("xray", 32)
    a = avalanche_campaign(img, "pw", 5, np.random.default_rng(1))
    b = avalanche_campaign(img, "pw", 5, np.random.default_rng(1))
    assert [s.npcr_percent for s in a] == [s.npcr_percent for s in b]
    assert len(a) == 5
    with pytest.raises(ValueError):
        avalanche_campaign(img, "pw", 0, np.random.default_rng(1))
