import numpy as np
import pytest

from transport_hessian.density import (
    build_density,
    cdf,
    dilate,
    from_samples,
    midpoint_grid,
    quantile,
    sample_density,
    translate,
)
from transport_hessian.errors import (
    DegenerateSamples,
    InvalidParameter,
    InvalidSupport,
    NonPositiveDensity,
    NotNormalizable,
    TooFewNodes,
    TooFewSamples,
)


def test_build_density_uniform_is_unchanged():
    p = build_density(np.ones(65), 0.0, 1.0)

    assert p.n == 64
    assert p.spacing == pytest.approx(1.0 / 64)
    assert np.all(p.values == 1.0)
    assert p.p_min == 1.0
    assert p.integral() == pytest.approx(1.0, abs=1e-15)


def test_build_density_normalizes_on_request():
    p = build_density(np.full(33, 5.0), 2.0, 4.0, normalize=True)

    assert np.allclose(p.values, 0.5)
    assert p.integral() == pytest.approx(1.0)


def test_build_density_rejects_unnormalized_mass_without_flag():
    with pytest.raises(NotNormalizable, match="not within"):
        build_density(np.full(33, 2.0), 0.0, 1.0)


def test_build_density_accepts_mass_within_tolerance():
    p = build_density(np.full(33, 1.0005), 0.0, 1.0)
    assert p.integral() == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize(
    "values, lo, hi, error",
    [
        (np.ones(33), 1.0, 1.0, InvalidSupport),
        (np.ones(33), 2.0, 1.0, InvalidSupport),
        (np.ones(33), 0.0, float("inf"), InvalidSupport),
        (np.ones(8), 0.0, 1.0, TooFewNodes),
        (np.r_[np.ones(32), np.nan], 0.0, 1.0, NotNormalizable),
        (np.r_[np.ones(32), -0.1], 0.0, 1.0, NonPositiveDensity),
        (np.zeros(33), 0.0, 1.0, NotNormalizable),
    ],
)
def test_build_density_errors(values, lo, hi, error):
    with pytest.raises(error):
        build_density(values, lo, hi, normalize=True)


def test_build_density_rejects_vanishing_node():
    values = np.ones(33)
    values[10] = 0.0
    with pytest.raises(NonPositiveDensity, match="floor"):
        build_density(values, 0.0, 1.0, normalize=True)


def test_density_is_read_only():
    p = build_density(np.ones(17), 0.0, 1.0)
    with pytest.raises(ValueError):
        p.values[0] = 3.0


def test_evaluate_is_zero_off_support():
    p = build_density(np.ones(17), 0.0, 1.0)
    out = p.evaluate([-0.5, 0.25, 1.5])
    assert out.tolist() == [0.0, 1.0, 0.0]


def test_cdf_endpoints_exact_and_monotone(make_smooth):
    p = make_smooth([0.3, -0.2, 0.1])
    f = cdf(p)

    assert f.knots[0] == 0.0
    assert f.knots[-1] == 1.0
    assert np.all(np.diff(f.knots) > 0.0)
    assert f.evaluate(p.support_lo - 1.0) == 0.0
    assert f.evaluate(p.support_hi + 1.0) == 1.0


def test_midpoint_grid():
    y = midpoint_grid(16)
    assert y[0] == pytest.approx(1.0 / 32)
    assert y[-1] == pytest.approx(31.0 / 32)
    with pytest.raises(InvalidParameter):
        midpoint_grid(8)


def test_quantile_of_uniform():
    p = build_density(np.ones(129), 0.0, 1.0)
    qf = quantile(p, 64)

    assert np.allclose(qf.values, qf.y_grid, atol=1e-14)
    assert np.all(qf.derivative == 1.0)
    assert qf.m == 64


def test_quantile_of_half_uniform_has_constant_derivative():
    p = build_density(np.full(129, 2.0), 0.0, 0.5)
    qf = quantile(p, 2048)
    assert np.all(qf.derivative == 0.5)


def test_quantile_is_monotone_and_inside_support(make_smooth):
    p = make_smooth([0.5, 0.2, -0.1], lo=-2.0, hi=3.0)
    qf = quantile(p, 1024)

    assert np.all(np.diff(qf.values) > 0.0)
    assert qf.values[0] > p.support_lo
    assert qf.values[-1] < p.support_hi
    assert np.allclose(qf.density_values(), p.evaluate(qf.values))


def test_quantile_derivative_matches_linear_density(make_linear):
    p = make_linear(4096)
    qf = quantile(p, 4096)
    # F^-1(y) = sqrt(1 + 3y) - 1 for p = (2/3)(1 + x)
    exact_values = np.sqrt(1.0 + 3.0 * qf.y_grid) - 1.0
    exact_derivative = 1.5 / np.sqrt(1.0 + 3.0 * qf.y_grid)

    assert np.max(np.abs(qf.values - exact_values)) < 1e-7
    assert np.max(np.abs(qf.derivative - exact_derivative)) < 1e-7


def test_cdf_of_linear_density(make_linear):
    p = make_linear(1024)
    f = cdf(p)
    x = p.nodes

    assert float(f.evaluate(0.5)) == pytest.approx(5.0 / 12.0, abs=1e-12)
    assert np.max(np.abs(f.knots - (2.0 / 3.0) * (x + 0.5 * x**2))) <= 1e-12


def test_cdf_inverts_quantile_values(make_smooth):
    p = make_smooth([0.5, -0.3, 0.1], lo=-1.3, hi=2.9)
    qf = quantile(p, 2000)
    assert np.max(np.abs(cdf(p).evaluate(qf.values) - qf.y_grid)) <= 1e-9


def test_linear_density_quantile_at_one_third(make_linear):
    p = make_linear(2048)
    unit = cdf(p).invert_unit(1.0 / 3.0)
    value = p.support_lo + p.length * float(unit)

    assert value == pytest.approx(np.sqrt(2.0) - 1.0, abs=1e-5)
    assert 1.0 / float(p.evaluate_unit(unit)) == pytest.approx(1.5 / np.sqrt(2.0), abs=1e-5)


def test_quantile_values_converge_at_second_order(make_linear):
    errors = []
    for n in (256, 512, 1024):
        qf = quantile(make_linear(n), n)
        exact = np.sqrt(1.0 + 3.0 * qf.y_grid) - 1.0
        errors.append(np.sqrt(np.mean(np.square(qf.values - exact))))

    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(orders >= 1.8)


def test_translate_keeps_values_and_shifts_support(make_smooth):
    p = make_smooth([0.4])
    moved = translate(p, 3.5)

    assert moved.values is p.values
    assert moved.support_lo == p.support_lo + 3.5
    qp, qm = quantile(p, 256), quantile(moved, 256)
    assert np.array_equal(qp.derivative, qm.derivative)
    assert np.allclose(qm.values - qp.values, 3.5)


def test_dilate_scales_support_and_mass():
    p = build_density(np.ones(33), 0.0, 1.0)
    wide = dilate(p, 2.0)

    assert (wide.support_lo, wide.support_hi) == (0.0, 2.0)
    assert np.allclose(wide.values, 0.5)
    assert wide.integral() == pytest.approx(1.0)
    with pytest.raises(InvalidParameter):
        dilate(p, 0.0)


def test_sample_density_evaluates_callable():
    p = sample_density(lambda x: np.exp(-x), 0.0, 1.0, 64)
    assert p.n == 64
    assert p.integral() == pytest.approx(1.0)
    assert p.values[0] > p.values[-1]


def test_from_samples_recovers_uniform():
    rng = np.random.default_rng(7)
    n = 10_000
    # stratified draws: one per cell of width 1/n
    samples = (np.arange(n) + rng.uniform(size=n)) / n
    p = from_samples(samples, bins=100)

    interior = (p.nodes > 0.02) & (p.nodes < 0.98)
    assert np.max(np.abs(p.values[interior] - 1.0)) <= 0.1
    assert p.integral() == pytest.approx(1.0)
    assert p.support_lo < samples.min()
    assert p.support_hi > samples.max()


def test_from_samples_default_bin_count():
    samples = np.linspace(0.0, 1.0, 400)
    p = from_samples(samples)
    # ceil(sqrt(400)) = 20 bins plus one padding bin per side
    assert p.n + 1 == 22


def test_from_samples_errors():
    with pytest.raises(TooFewSamples):
        from_samples(np.linspace(0.0, 1.0, 10))
    with pytest.raises(DegenerateSamples):
        from_samples(np.full(100, 0.3))
    with pytest.raises(NotNormalizable):
        from_samples(np.r_[np.linspace(0.0, 1.0, 99), np.inf])


def test_from_samples_keeps_largest_sample_in_last_bin():
    samples = np.linspace(0.1, 0.7, 100)
    p = from_samples(samples, bins=10)
    peak = float(p.values.max())

    assert p.n + 1 == 12
    assert p.values[0] <= 1e-5 * peak
    assert p.values[-1] <= 1e-5 * peak
    assert p.values[-2] >= 0.5 * peak


def test_from_samples_rejects_too_few_bins():
    samples = np.linspace(0.0, 1.0, 100)
    with pytest.raises(InvalidParameter, match="at least 7"):
        from_samples(samples, bins=6)
    assert from_samples(samples, bins=7).n + 1 == 9
