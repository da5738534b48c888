import numpy as np
import pytest

from roughwave.asymptotics import (
    Classification,
    EpsSeries,
    NormDescriptor,
    Probe,
    association_check,
    autocovariance,
    classify,
    counterexample_families,
    format_classification,
    interchange_check,
    measure_series,
    moment_field,
    norm_interchange,
    series_rows,
)
from roughwave.errors import DomainError, ParameterError
from roughwave.fields import SampledProcess, sample_brownian_1d
from roughwave.grids import Grid1D
from roughwave.mollify import EpsLadder, build_mollifier, embed_derivative, embed_path
from roughwave.smooth import AnalyticField1D, CallableField1D, Interval, constant_field_1d

LADDER = EpsLadder(0.5, 0.5, 8)
DESC = NormDescriptor(Interval(0.0, 1.0), 0, 0.0, 1)


def tabulate(fn, lo, hi, step):
    count = int(round((hi - lo) / step)) + 1
    g = Grid1D(lo, step, count)
    return SampledProcess(g, fn(g.nodes()), seed=0, source="analytic")


# ------------------------------------------------------------- measuring


def test_measure_constant_field_is_one():
    ser = measure_series(
        lambda eps, seed: constant_field_1d(1.0),
        Interval(-1.0, 1.0), 0, 0.0, LADDER,
    )
    assert np.all(ser.measurements == 1.0)
    assert ser.descriptor.p == 0.0
    assert len(ser) == 8


def test_measure_brownian_derivative_grows_pathwise():
    # rough path: the derivative sup must climb as the smoothing shrinks
    step = 0.25 * 0.5**5 / 8.0
    g = Grid1D(-2.0, step, int(round(5.0 / step)) + 1)
    w = sample_brownian_1d(g, seed=21)
    mol = build_mollifier(moments=2)
    ser = measure_series(
        lambda eps, seed: embed_derivative(w, mol, eps, 1),
        Interval(0.0, 1.0), 0, 0.0, EpsLadder(0.25, 0.5, 6),
    )
    assert np.all(np.diff(ser.measurements) > 0.0)


def test_measure_lp_norm_of_seeded_family():
    def factory(eps, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal()
        return AnalyticField1D([lambda x, a=a: np.full_like(x, a)])

    ser = measure_series(factory, Interval(0.0, 1.0), 0, 2.0,
                         EpsLadder(0.5, 0.5, 5), n_samples=400)
    # sup_x |a| = |a|, so the L2 norm estimates E(a^2)^(1/2) = 1
    assert np.all(np.abs(ser.measurements - 1.0) < 0.2)
    assert ser.descriptor.n_samples == 400


def test_measure_domain_violation_propagates():
    step = 0.05 / 8.0
    g = Grid1D(-2.0, step, int(round(4.0 / step)) + 1)
    w = sample_brownian_1d(g, seed=3)
    mol = build_mollifier(moments=2)
    with pytest.raises(DomainError):
        measure_series(
            lambda eps, seed: embed_path(w, mol, eps),
            Interval(-2.0, 2.0), 0, 0.0, EpsLadder(0.5, 0.5, 5),
        )


# ----------------------------------------------------- norm interchange


def test_interchange_on_random_smooth_field():
    def factory(eps, seed):
        rng = np.random.default_rng(seed)
        a, b = rng.standard_normal(2)
        return AnalyticField1D(
            [lambda x, a=a, b=b: a * np.sin(x) + b * np.cos(x)]
        )

    lhs, rhs = interchange_check(
        factory, Interval(-2.0, 2.0), 0, 2.0, 0.1, n_samples=100
    )
    # computed from the same draws the ordering is exact, and for this
    # family genuinely strict (the argmax moves with the sample)
    assert lhs <= rhs
    assert lhs < rhs - 0.1


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_interchange_matrix_inequality(p):
    rng = np.random.default_rng(9)
    samples = rng.standard_normal((200, 50))
    lhs, rhs = norm_interchange(samples, p)
    assert lhs <= rhs + 1e-12


def test_interchange_sup_norm_degenerates():
    rng = np.random.default_rng(2)
    samples = rng.standard_normal((50, 20))
    lhs, rhs = norm_interchange(samples, np.inf)
    assert lhs == rhs


def test_interchange_validation():
    with pytest.raises(ParameterError):
        norm_interchange(np.ones((10, 4)), 0.5)
    with pytest.raises(ParameterError):
        norm_interchange(np.ones(10), 2.0)


# ----------------------------------------------------------- classifier


def test_classify_power_law():
    eps = LADDER.levels()
    c = classify(EpsSeries(LADDER, eps**-2.0, DESC))
    assert c.verdict == "moderate"
    assert abs(c.value - 2.0) <= 0.05
    assert c.residual <= 1e-10


def test_classify_log_type():
    eps = LADDER.levels()
    c = classify(EpsSeries(LADDER, 3.0 * np.abs(np.log(eps)), DESC))
    assert c.verdict == "log-type"
    assert abs(c.value - 3.0) <= 0.1


def test_classify_bounded():
    c = classify(EpsSeries(LADDER, np.full(8, 2.5), DESC))
    assert c.verdict == "bounded"
    assert abs(c.value - 2.5) <= 0.05 * 2.5
    assert c.residual == 0.0


def test_classify_polynomial_decay():
    eps = LADDER.levels()
    c = classify(EpsSeries(LADDER, eps**3.0, DESC))
    assert c.verdict == "negligible-to-order"
    assert c.value == 3.0


def test_classify_superpolynomial_decay_hits_cap():
    eps = LADDER.levels()
    c = classify(EpsSeries(LADDER, np.exp(-1.0 / eps), DESC))
    assert c.verdict == "negligible-to-order"
    assert c.value == 8.0  # default cap
    assert abs(c.exp_rate + 1.0) <= 1e-9
    assert c.residual <= 1e-12


def test_classify_noisy_power_law():
    eps = LADDER.levels()
    rng = np.random.default_rng(5)
    m = eps**-1.5 * (1.0 + 0.01 * rng.standard_normal(8))
    c = classify(EpsSeries(LADDER, m, DESC))
    assert c.verdict == "moderate"
    assert abs(c.value - 1.5) <= 0.05


def test_classify_nonpositive_is_inconclusive():
    m = np.array([1.0, 0.5, 0.0, 0.1, 0.05, 0.02, 0.01, 0.005])
    c = classify(EpsSeries(LADDER, m, DESC))
    assert c.verdict == "inconclusive"


def test_classify_needs_five_levels():
    lad = EpsLadder(0.5, 0.5, 4)
    with pytest.raises(ParameterError):
        classify(EpsSeries(lad, np.ones(4), DESC))


# ------------------------------------------------------------ weak limit


def test_association_identical_fields_trivial():
    probe = Probe(lambda x: np.cos(np.pi * x / 2.0) ** 2, Interval(-1.0, 1.0))
    rep = association_check(
        lambda eps, seed: constant_field_1d(1.0),
        lambda xs: np.ones_like(xs),
        [probe], EpsLadder(0.5, 0.5, 5),
    )
    assert np.all(rep.gaps <= 1e-12)
    assert rep.converged


def test_association_embedded_function_converges():
    # off-center probe, otherwise symmetry kills the leading error term
    mol = build_mollifier(moments=2)
    p_sin = tabulate(np.sin, -3.0, 3.0, 0.0125 / 8.0)
    probe = Probe(
        lambda x: np.cos(np.pi * (x - 0.8) / 1.2) ** 2, Interval(0.2, 1.4)
    )
    rep = association_check(
        lambda eps, seed: embed_path(p_sin, mol, eps),
        np.sin, [probe], EpsLadder(0.2, 0.5, 5),
    )
    assert np.all(np.diff(rep.gaps) < 0.0)
    assert rep.gaps[-1] <= 1e-7
    assert rep.converged


def test_association_distribution_action():
    # approximate identity against a point mass: pairing tends to psi(0)
    mol = build_mollifier(moments=2)

    class PointMass:
        def pair(self, psi, xs):
            return float(np.interp(0.0, xs, psi))

    probe = Probe(lambda x: np.cos(np.pi * x / 2.0) ** 2, Interval(-1.0, 1.0))
    rep = association_check(
        lambda eps, seed: CallableField1D(lambda xs, e=eps: mol.rho(xs / e) / e),
        PointMass(), [probe], EpsLadder(0.2, 0.5, 5),
    )
    assert np.all(np.diff(rep.gaps) < 0.0)
    assert rep.gaps[-1] <= 1e-6


def test_association_needs_probes():
    with pytest.raises(ParameterError):
        association_check(
            lambda eps, seed: constant_field_1d(0.0),
            lambda xs: np.zeros_like(xs), [], LADDER,
        )


# --------------------------------------------------------------- moments


def test_moment_deterministic_exact():
    mt = moment_field(lambda seed: (lambda xs: xs**2), 2,
                      np.linspace(-1, 1, 5), n_samples=100)
    assert np.array_equal(mt.mean, np.linspace(-1, 1, 5) ** 4)
    assert np.all(mt.se == 0.0)


def test_moment_standard_normal_square():
    def factory(seed):
        z = np.random.default_rng(seed).standard_normal()
        return lambda xs, z=z: np.full_like(xs, z)

    mt = moment_field(factory, 2, [0.0, 1.0], n_samples=1000, seed0=3)
    assert np.all(np.abs(mt.mean - 1.0) <= 5.0 * mt.se)


def test_moment_validation():
    fac = lambda seed: (lambda xs: xs)
    with pytest.raises(ParameterError):
        moment_field(fac, 0, [0.0], n_samples=100)
    with pytest.raises(ParameterError):
        moment_field(fac, 1.5, [0.0], n_samples=100)
    with pytest.raises(ParameterError):
        moment_field(fac, 2, [0.0], n_samples=50)


def test_moment_differentiation_under_expectation():
    # finite differences of E(u^2) against the sampled derivative of u^2,
    # same seed sequence on both sides
    x0, h = 0.6, 1e-3

    def factory(seed):
        z = np.random.default_rng(seed).standard_normal()
        return lambda xs, z=z: z * np.sin(xs)

    m3 = moment_field(factory, 2, [x0 - h, x0, x0 + h], n_samples=2000, seed0=11)
    fd = (m3.mean[2] - m3.mean[0]) / (2.0 * h)
    zs = np.array(
        [np.random.default_rng(11 + i).standard_normal() for i in range(2000)]
    )
    deriv = 2.0 * zs**2 * np.sin(x0) * np.cos(x0)
    se = deriv.std(ddof=1) / np.sqrt(deriv.size)
    assert abs(fd - deriv.mean()) <= 5.0 * se


# ------------------------------------------------------------ covariance


def test_autocov_deterministic_is_zero():
    est = autocovariance(
        lambda seed: (lambda xs, ts: xs + ts), [(0.0, 0.0), (1.0, 0.5)],
        n_samples=100,
    )
    assert np.all(est.matrix == 0.0)


def test_autocov_brownian_min_kernel():
    g = Grid1D(0.0, 0.001, 1201)

    def factory(seed):
        w = sample_brownian_1d(g, seed=seed)
        return lambda xs, ts, w=w: np.interp(ts, g.nodes(), w.values)

    pts = [(0.0, 0.3), (0.0, 0.7), (0.0, 1.0)]
    est = autocovariance(factory, pts, n_samples=3000, seed0=17)
    mins = np.array([[min(s, t) for (_, t) in pts] for (_, s) in pts])
    assert np.all(np.abs(est.matrix - mins) <= 5.0 * est.se)
    assert np.array_equal(est.matrix, est.matrix.T)
    assert np.all(np.diag(est.matrix) >= 0.0)


def test_autocov_validation():
    with pytest.raises(ParameterError):
        autocovariance(lambda seed: (lambda xs, ts: xs), [(0.0, 0.0)],
                       n_samples=10)


# --------------------------------------------------------- counterexamples


def test_family_a_moment_identities():
    fam_a, _ = counterexample_families(2.0)
    for eps in LADDER.levels()[:4]:
        assert fam_a.moment(2.0, eps) == 1.0
        assert fam_a.moment(1.0, eps) == pytest.approx(np.exp(-1.0 / eps), rel=1e-12)


def test_family_a_monte_carlo_matches_closed_form():
    fam_a, _ = counterexample_families(2.0)
    rng = np.random.default_rng(123)
    draws = fam_a.sample(0.5, 40000, rng)
    se = draws.std(ddof=1) / np.sqrt(draws.size)
    assert abs(draws.mean() - fam_a.moment(1.0, 0.5)) <= 5.0 * se


def test_family_a_classification():
    fam_a, _ = counterexample_families(2.0)
    c = classify(fam_a.moment_series(1.0, LADDER))
    assert c.verdict == "negligible-to-order"
    assert c.value == 8.0
    assert abs(c.exp_rate - (1.0 - 2.0)) <= 1e-9
    c_eq = classify(fam_a.moment_series(2.0, LADDER))
    assert c_eq.verdict == "bounded"
    assert c_eq.value == 1.0


def test_family_b_l1_bounded():
    _, fam_b = counterexample_families()
    for eps in EpsLadder(0.5, 0.5, 8).levels():
        assert fam_b.l1_moment(eps) <= 1.0 + 1e-12
    ser = fam_b.l1_series(EpsLadder(0.25, 0.5, 8))
    assert np.all(ser.measurements == 1.0)
    c = classify(ser)
    assert c.verdict == "L1-type"
    assert c.value == 1.0


def test_family_b_planted_blowup():
    _, fam_b = counterexample_families()
    omega = 0.37
    # the float indicator is honest at shallow depths
    for k in range(1, 5):
        eps = fam_b.blowup_levels(omega, 1, k0=k)[0]
        assert float(fam_b.value(omega, eps)) == np.exp(1.0 / eps)
    ser = fam_b.pathwise_series(omega, 8)
    assert np.array_equal(ser.measurements, np.exp(1.0 / ser.epsilons))
    assert np.all(np.diff(ser.measurements) > 0.0)
    c = classify(ser)
    assert c.verdict == "inconclusive"  # in particular not moderate


def test_family_b_validation():
    _, fam_b = counterexample_families()
    with pytest.raises(DomainError):
        fam_b.blowup_levels(1.5, 4)
    with pytest.raises(ParameterError):
        fam_b.pathwise_series(0.0, 200)  # overflows e^(1/level)


# ------------------------------------------------------------- plumbing


def test_series_validation():
    with pytest.raises(ParameterError):
        EpsSeries(LADDER, np.ones(5), DESC)
    with pytest.raises(ParameterError):
        EpsSeries(LADDER, -np.ones(8), DESC)
    with pytest.raises(ParameterError):
        EpsSeries(np.array([0.1, 0.2, 0.3]), np.ones(3), DESC)
    ser = EpsSeries(np.array([0.5, 0.25, 0.1]), np.ones(3), DESC)
    assert ser.epsilons.tolist() == [0.5, 0.25, 0.1]


def test_descriptor_validation():
    with pytest.raises(ParameterError):
        NormDescriptor(Interval(0, 1), -1, 0.0, 1)
    with pytest.raises(ParameterError):
        NormDescriptor(Interval(0, 1), 0, 0.5, 1)
    with pytest.raises(ParameterError):
        NormDescriptor(Interval(0, 1), 0, 2.0, 0)


def test_report_helpers():
    eps = LADDER.levels()
    ser = EpsSeries(LADDER, eps**-1.0, DESC)
    rows = series_rows(ser)
    assert len(rows) == 8 and rows[0] == (0.5, 2.0)
    line = format_classification(classify(ser))
    assert "moderate" in line and "residual=" in line
    assert "inconclusive" == format_classification(
        Classification("inconclusive", None, 0.5)
    ).split()[0]
