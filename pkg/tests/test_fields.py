import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roughwave.errors import (
    KernelNotPSDError,
    ParameterError,
    ShapeMismatchError,
)
from roughwave.fields import (
    CovarianceKernel,
    SampledProcess,
    ou_process,
    sample_brownian_1d,
    sample_brownian_2d,
    sample_stationary_gaussian,
    translation_transform,
    white_noise_action,
    white_noise_field,
)
from roughwave.grids import Grid1D, Grid2D

N_SEEDS = 10_000
MC_TOL = 0.05


@pytest.fixture(scope="module")
def unit_grid():
    return Grid1D.from_bounds(0.0, 1.0, 101)


def test_brownian_pinned_at_origin(unit_grid):
    w = sample_brownian_1d(unit_grid, seed=7)
    assert w.values[0] == 0.0


def test_brownian_pin_on_two_sided_grid():
    g = Grid1D.from_bounds(-1.0, 1.0, 201)
    w = sample_brownian_1d(g, seed=3)
    assert w.values[g.nearest_index(0.0)] == 0.0


def test_brownian_seed_reproducible(unit_grid):
    a = sample_brownian_1d(unit_grid, seed=42)
    b = sample_brownian_1d(unit_grid, seed=42)
    c = sample_brownian_1d(unit_grid, seed=43)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_brownian_terminal_variance_and_covariance(unit_grid):
    # Var W(1) = 1 and Cov(W(0.3), W(0.7)) = min = 0.3, estimated over seeds.
    ix3 = unit_grid.nearest_index(0.3)
    ix7 = unit_grid.nearest_index(0.7)
    w1 = np.empty(N_SEEDS)
    w3 = np.empty(N_SEEDS)
    w7 = np.empty(N_SEEDS)
    for s in range(N_SEEDS):
        vals = sample_brownian_1d(unit_grid, seed=s).values
        w1[s], w3[s], w7[s] = vals[-1], vals[ix3], vals[ix7]
    assert np.var(w1) == pytest.approx(1.0, abs=MC_TOL)
    assert np.mean(w3 * w7) == pytest.approx(0.3, abs=MC_TOL)


def test_brownian_sheet_covariance():
    g = Grid2D(Grid1D.from_bounds(0.0, 1.0, 21), Grid1D.from_bounds(0.0, 1.0, 21))
    n = 4000
    a = np.empty(n)
    b = np.empty(n)
    for s in range(n):
        sheet = sample_brownian_2d(g, seed=s).values
        a[s] = sheet[10, 20]  # W(0.5, 1.0)
        b[s] = sheet[20, 10]  # W(1.0, 0.5)
    # E W(x) W(y) = min(x1,y1)*min(x2,y2) = 0.25; Var W(0.5,1) = 0.5.
    assert np.var(a) == pytest.approx(0.5, abs=0.05)
    assert np.mean(a * b) == pytest.approx(0.25, abs=0.05)


def test_stationary_exponential_correlation():
    g = Grid1D.from_bounds(0.0, 2.0, 81)
    kern = CovarianceKernel("exponential", sigma2=1.0, ell=0.5)
    i, j = 20, 40  # distance 0.5 -> correlation e^{-1}
    n = 10_000
    xi = np.empty(n)
    xj = np.empty(n)
    for s in range(n):
        v = sample_stationary_gaussian(g, kern, seed=s).values
        xi[s], xj[s] = v[i], v[j]
    corr = np.mean(xi * xj) / np.sqrt(np.var(xi) * np.var(xj))
    assert corr == pytest.approx(np.exp(-1.0), abs=MC_TOL)


def test_squared_exponential_needs_jitter_but_samples():
    g = Grid1D.from_bounds(0.0, 1.0, 64)
    kern = CovarianceKernel("squared-exponential", sigma2=2.0, ell=0.8)
    p = sample_stationary_gaussian(g, kern, seed=5)
    assert np.all(np.isfinite(p.values))
    # marginal variance should be close to sigma2 in distribution
    n = 3000
    v0 = np.array(
        [sample_stationary_gaussian(g, kern, seed=s).values[32] for s in range(n)]
    )
    assert np.var(v0) == pytest.approx(2.0, rel=0.1)


def test_non_psd_custom_kernel_raises():
    g = Grid1D.from_bounds(0.0, 1.0, 16)
    bad = CovarianceKernel("custom", sigma2=1.0, func=lambda x, y: -np.abs(x - y))
    with pytest.raises(KernelNotPSDError):
        sample_stationary_gaussian(g, bad, seed=0)


def test_kernel_parameter_validation():
    with pytest.raises(ParameterError):
        CovarianceKernel("exponential", sigma2=0.0)
    with pytest.raises(ParameterError):
        CovarianceKernel("exponential", ell=-1.0)
    with pytest.raises(ParameterError):
        CovarianceKernel("pink-noise")


def test_ou_stationary_moments():
    g = Grid1D.from_bounds(0.0, 5.0, 251)
    theta, sigma = 1.5, 0.8
    var_stat = sigma**2 / (2 * theta)
    lag = 25  # 0.5 time units
    n = 8000
    x0 = np.empty(n)
    xlag = np.empty(n)
    for s in range(n):
        v = ou_process(g, theta, sigma, seed=s).values
        x0[s], xlag[s] = v[100], v[100 + lag]
    assert np.var(x0) == pytest.approx(var_stat, rel=0.08)
    want = var_stat * np.exp(-theta * 0.5)
    assert np.mean(x0 * xlag) == pytest.approx(want, abs=5 * var_stat / np.sqrt(n))


def test_ou_parameter_validation():
    g = Grid1D.from_bounds(0.0, 1.0, 11)
    with pytest.raises(ParameterError):
        ou_process(g, theta=0.0, sigma=1.0, seed=0)
    with pytest.raises(ParameterError):
        ou_process(g, theta=1.0, sigma=0.0, seed=0)


@pytest.fixture(scope="module")
def noise_grid():
    return Grid2D(Grid1D.from_bounds(-2.0, 2.0, 81), Grid1D.from_bounds(0.0, 2.0, 41))


def test_white_noise_isometry(noise_grid):
    # Var <W',phi> = integral of phi^2: use the indicator of the unit square.
    def phi(x, t):
        return ((x >= 0.0) & (x <= 1.0) & (t >= 0.0) & (t <= 1.0)).astype(float)

    n = 10_000
    vals = np.array(
        [white_noise_action(white_noise_field(noise_grid, seed=s), phi) for s in range(n)]
    )
    assert np.mean(vals) == pytest.approx(0.0, abs=MC_TOL)
    assert np.var(vals) == pytest.approx(1.0, abs=MC_TOL)


def test_white_noise_disjoint_supports_uncorrelated(noise_grid):
    def left(x, t):
        return ((x >= -2.0) & (x <= -1.0)).astype(float)

    def right(x, t):
        return ((x >= 1.0) & (x <= 2.0)).astype(float)

    n = 10_000
    a = np.empty(n)
    b = np.empty(n)
    for s in range(n):
        w = white_noise_field(noise_grid, seed=s)
        a[s] = white_noise_action(w, left)
        b[s] = white_noise_action(w, right)
    assert np.mean(a * b) == pytest.approx(0.0, abs=MC_TOL)


def test_white_noise_action_shape_error(noise_grid):
    w = white_noise_field(noise_grid, seed=1)
    with pytest.raises(ShapeMismatchError):
        white_noise_action(w, np.zeros((3, 3)))


def test_white_noise_action_accepts_cell_tabulation(noise_grid):
    w = white_noise_field(noise_grid, seed=2)
    tab = np.ones_like(w.increments)
    got = white_noise_action(w, tab)
    assert got == pytest.approx(float(np.sum(w.increments)))


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    lo=st.floats(min_value=-5.0, max_value=0.0),
    width=st.floats(min_value=0.5, max_value=10.0),
)
def test_translation_range_bounded_exactly(seed, lo, width):
    # F^{-1} with range [lo, lo+width] keeps every node inside the range.
    g = Grid1D.from_bounds(0.0, 1.0, 33)
    p = sample_brownian_1d(g, seed=seed)
    q = translation_transform(p, lambda u: lo + width * u)
    assert np.all(q.values >= lo)
    assert np.all(q.values <= lo + width)


def test_translation_identity_on_gaussian_marginals():
    # F = Phi gives F^{-1}(Phi(x)) = x up to CDF round-trip error.
    from scipy.special import ndtri

    g = Grid1D.from_bounds(0.0, 1.0, 65)
    p = sample_brownian_1d(g, seed=11)
    q = translation_transform(p, ndtri)
    assert np.allclose(q.values, p.values, atol=1e-12)


def test_sampled_process_shape_guard():
    g = Grid1D.from_bounds(0.0, 1.0, 11)
    with pytest.raises(ShapeMismatchError):
        SampledProcess(g, np.zeros(10), seed=0, source="bad")
