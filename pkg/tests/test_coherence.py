import numpy as np
import pytest

from cryoplan.coherence import (
    DecayTrace,
    fit_ramsey,
    fit_t1,
    pure_dephasing,
    series_stats,
    tilt_series,
)
from cryoplan.errors import FitError, LifetimeLimitedError, ValidationError
from cryoplan.synth import (
    default_delays,
    synth_ramsey_rotation,
    synth_ramsey_trace,
    synth_t1_trace,
)


# ---------------------------------------------------------------- T1 fits

def test_t1_noiseless_exact_recovery():
    trace = synth_t1_trace(120e-6, amplitude=1.0, offset=0.0)
    fit = fit_t1(trace)
    assert fit.t1_s == pytest.approx(120e-6, rel=1e-6)
    assert fit.amplitude == pytest.approx(1.0, rel=1e-6)
    assert abs(fit.offset) < 1e-7
    assert fit.residual_rms < 1e-9


def test_t1_noiseless_recovery_with_offset():
    trace = synth_t1_trace(65e-6, amplitude=0.8, offset=0.1)
    fit = fit_t1(trace)
    assert fit.t1_s == pytest.approx(65e-6, rel=1e-6)
    assert fit.amplitude == pytest.approx(0.8, rel=1e-6)
    assert fit.offset == pytest.approx(0.1, rel=1e-5)


def test_t1_constant_trace_degenerate():
    trace = DecayTrace(np.linspace(0, 5e-4, 20), np.full(20, 0.5), 0.0, "t1")
    with pytest.raises(FitError, match="degenerate amplitude"):
        fit_t1(trace)


def test_t1_too_few_points():
    trace = DecayTrace(np.linspace(0, 5e-4, 7), np.linspace(1, 0, 7), 0.0, "t1")
    with pytest.raises(FitError, match="at least 8"):
        fit_t1(trace)


def test_t1_kind_checked():
    trace = synth_ramsey_trace(80e-6, 50e3)
    with pytest.raises(ValidationError):
        fit_t1(trace)


def test_t1_noisy_recovery_within_reported_errors():
    # single noisy synthetic recovered within 3 reported sigma
    trace = synth_t1_trace(65e-6, amplitude=1.0, offset=0.0, noise_sigma=0.02, seed=3)
    fit = fit_t1(trace)
    assert abs(fit.t1_s - 65e-6) < 3.0 * fit.t1_stderr_s


def test_t1_monte_carlo_bias_small():
    # 200-replica screen; the acceptance suite runs the full 1000
    t1_true = 65e-6
    estimates, errors = [], []
    for seed in range(200):
        fit = fit_t1(synth_t1_trace(t1_true, amplitude=1.0, offset=0.0,
                                    noise_sigma=0.02, seed=seed))
        estimates.append(fit.t1_s)
        errors.append(fit.t1_stderr_s)
    est = np.array(estimates)
    bias = est.mean() - t1_true
    assert abs(bias) < 3.0 * est.std(ddof=1) / np.sqrt(est.size)
    # reported errors agree with the observed scatter to a factor of ~1.3
    assert np.median(errors) == pytest.approx(est.std(ddof=1), rel=0.3)


# ---------------------------------------------------------------- Ramsey fits

def test_ramsey_noiseless_exact_recovery():
    trace = synth_ramsey_trace(80e-6, 50e3, amplitude=0.5, phase_rad=0.0,
                               tilt_per_s=0.0, offset=0.5)
    fit = fit_ramsey(trace)
    assert fit.t2_s == pytest.approx(80e-6, rel=1e-6)
    assert fit.amplitude == pytest.approx(0.5, rel=1e-6)
    assert fit.frequency_hz == pytest.approx(50e3, rel=1e-6)
    assert abs(fit.phase_rad) < 1e-5
    assert abs(fit.tilt_per_s) < 1e-2  # populations/s on a 240 us span
    assert fit.offset == pytest.approx(0.5, rel=1e-6)


def test_ramsey_tilt_recovery():
    tilt = 200.0
    base = fit_ramsey(synth_ramsey_trace(80e-6, 50e3, tilt_per_s=0.0))
    tilted = fit_ramsey(synth_ramsey_trace(80e-6, 50e3, tilt_per_s=tilt))
    assert tilted.tilt_per_s == pytest.approx(tilt, rel=0.01)
    assert tilted.amplitude == pytest.approx(base.amplitude, rel=0.01)
    assert tilted.t2_s == pytest.approx(base.t2_s, rel=0.01)


def test_ramsey_tilt_neutrality_property():
    # adding beta*t changes only the tilt, every other parameter < 1e-6 relative
    delays = default_delays(240e-6, 241)
    plain = synth_ramsey_trace(80e-6, 50e3, delays_s=delays)
    beta = 150.0
    ramped = DecayTrace(plain.delays_s, plain.populations + beta * plain.delays_s,
                        0.0, "ramsey")
    f0 = fit_ramsey(plain)
    f1 = fit_ramsey(ramped)
    assert f1.tilt_per_s - f0.tilt_per_s == pytest.approx(beta, rel=1e-6)
    assert f1.amplitude == pytest.approx(f0.amplitude, rel=1e-6)
    assert f1.t2_s == pytest.approx(f0.t2_s, rel=1e-6)
    assert f1.frequency_hz == pytest.approx(f0.frequency_hz, rel=1e-6)
    assert f1.offset == pytest.approx(f0.offset, rel=1e-6, abs=1e-9)


def test_ramsey_pure_cosine_flagged_decay_unresolved():
    span = 240e-6
    trace = synth_ramsey_trace(1e6 * span, 50e3, delays_s=default_delays(span, 201))
    fit = fit_ramsey(trace)
    assert "decay unresolved" in fit.flags
    assert fit.t2_s > 100 * span


def test_ramsey_no_fringe_rejected():
    delays = default_delays(240e-6, 101)
    trace = DecayTrace(delays, np.full(delays.size, 0.5) + 1e-12 * delays, 0.0, "ramsey")
    with pytest.raises(FitError, match="fringe|fewer"):
        fit_ramsey(trace)


def test_ramsey_needs_two_periods():
    delays = default_delays(30e-6, 64)  # 1.5 periods at 50 kHz
    trace = synth_ramsey_trace(80e-6, 50e3, delays_s=delays)
    with pytest.raises(FitError, match="periods"):
        fit_ramsey(trace)


def test_ramsey_too_few_points():
    trace = synth_ramsey_trace(80e-6, 50e3, delays_s=default_delays(240e-6, 12))
    with pytest.raises(FitError, match="at least 16"):
        fit_ramsey(trace)


def test_ramsey_noisy_recovery():
    trace = synth_ramsey_trace(80e-6, 50e3, noise_sigma=0.02, seed=5)
    fit = fit_ramsey(trace)
    assert fit.t2_s == pytest.approx(80e-6, rel=0.15)
    assert fit.residual_rms == pytest.approx(0.02, rel=0.2)


# ---------------------------------------------------------------- pure dephasing

def test_pure_dephasing_reference_point():
    assert pure_dephasing(120e-6, 80e-6) == pytest.approx(120e-6, rel=1e-15)


def test_pure_dephasing_equal_times():
    assert pure_dephasing(50e-6, 50e-6) == pytest.approx(100e-6, rel=1e-15)


def test_pure_dephasing_identity_property():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        t1 = float(rng.uniform(1e-6, 1e-3))
        t2 = float(rng.uniform(0.05, 1.999)) * t1
        if t2 >= 2 * t1:
            continue
        t_phi = pure_dephasing(t1, t2)
        assert 1.0 / t2 == pytest.approx(1.0 / (2 * t1) + 1.0 / t_phi, rel=1e-12)


def test_pure_dephasing_lifetime_limited_tagged():
    with pytest.raises(LifetimeLimitedError, match="lifetime-limited"):
        pure_dephasing(50e-6, 100e-6)
    with pytest.raises(LifetimeLimitedError):
        pure_dephasing(50e-6, 120e-6)
    with pytest.raises(ValidationError):
        pure_dephasing(-1e-6, 1e-6)


# ---------------------------------------------------------------- statistics

def test_series_stats_constant():
    stats = series_stats([10e-6, 10e-6, 10e-6])
    assert stats.mean == pytest.approx(10e-6)
    assert stats.standard_deviation == 0.0
    assert stats.standard_error_of_mean == 0.0


def test_series_stats_two_values_closed_form():
    a, b = 3e-6, 7e-6
    stats = series_stats([a, b])
    assert stats.mean == pytest.approx((a + b) / 2)
    assert stats.standard_deviation == pytest.approx(abs(a - b) / np.sqrt(2))


def test_series_stats_sem_relation_and_shuffle_invariance():
    rng = np.random.default_rng(9)
    values = rng.normal(65e-6, 5e-6, size=300)
    stats = series_stats(values)
    assert stats.standard_error_of_mean * np.sqrt(stats.count) == pytest.approx(
        stats.standard_deviation, rel=1e-15)
    shuffled = values.copy()
    rng.shuffle(shuffled)
    stats2 = series_stats(shuffled)
    assert stats2.mean == stats.mean
    assert stats2.standard_deviation == stats.standard_deviation


def test_series_stats_sampling_oracle():
    rng = np.random.default_rng(12)
    values = rng.normal(65e-6, 5e-6, size=300)
    stats = series_stats(values)
    assert abs(stats.mean - 65e-6) < 3 * stats.standard_error_of_mean
    assert stats.normal_fit.mu == stats.mean
    assert stats.normal_fit.sigma == pytest.approx(np.std(values, ddof=0))


def test_series_stats_needs_two():
    with pytest.raises(ValidationError):
        series_stats([1.0])


# ---------------------------------------------------------------- tilt series

def test_tilt_series_zero_series():
    points = [(float(i), 0.0) for i in range(10)]
    report = tilt_series(points)
    assert report.stats.mean == 0.0
    assert report.max_abs_tilt_per_s == 0.0


def test_tilt_series_variance_ratio():
    rng = np.random.default_rng(21)
    a = [(float(i), float(rng.normal(0, 4.0))) for i in range(100)]
    b = [(float(i), float(rng.normal(0, 1.0))) for i in range(100)]
    report = tilt_series(a, other=b)
    assert report.comparison["variance_ratio"] == pytest.approx(16.0, rel=0.30)
    assert abs(report.comparison["mean_difference_per_s"]) < 2.0


def test_tilt_series_sorts_by_time():
    report = tilt_series([(3.0, 5.0), (1.0, -2.0), (2.0, 1.0)])
    assert report.times == (1.0, 2.0, 3.0)
    assert report.tilts_per_s == (-2.0, 1.0, 5.0)
    assert report.max_abs_tilt_per_s == 5.0


def test_tilt_increases_with_drift_slope():
    # in-trace drive drift produces a growing fitted |B|
    mean_abs = []
    for drift in (0.0, 400.0, 800.0):
        tilts = []
        for seed in range(6):
            trace = synth_ramsey_rotation(
                200e-6, 50e3, rotation_error=0.0, rotation_drift_per_s=drift,
                delays_s=default_delays(240e-6, 241), noise_sigma=0.005, seed=seed)
            tilts.append(abs(fit_ramsey(trace).tilt_per_s))
        mean_abs.append(np.mean(tilts))
    assert mean_abs[0] < mean_abs[1] < mean_abs[2]


# ---------------------------------------------------------------- generators

def test_synth_deterministic_given_seed():
    a = synth_t1_trace(100e-6, noise_sigma=0.02, seed=7)
    b = synth_t1_trace(100e-6, noise_sigma=0.02, seed=7)
    assert np.array_equal(a.populations, b.populations)
    c = synth_t1_trace(100e-6, noise_sigma=0.02, seed=8)
    assert not np.array_equal(a.populations, c.populations)


def test_synth_noiseless_evaluates_model_exactly():
    delays = default_delays(500e-6, 51)
    trace = synth_t1_trace(100e-6, amplitude=0.9, offset=0.05, delays_s=delays)
    expected = 0.9 * np.exp(-delays / 100e-6) + 0.05
    assert np.allclose(trace.populations, expected, rtol=0, atol=1e-15)


def test_rotation_error_minima_stay_at_ground_maxima_drop():
    delays = default_delays(100e-6, 2001)
    ideal = synth_ramsey_rotation(1.0, 100e3, rotation_error=0.0, delays_s=delays)
    rotated = synth_ramsey_rotation(1.0, 100e3, rotation_error=0.2, delays_s=delays)
    # minima remain at the ground state for both
    assert ideal.populations.min() == pytest.approx(0.0, abs=1e-6)
    assert rotated.populations.min() == pytest.approx(0.0, abs=1e-6)
    # maxima decrease with the rotation error
    assert rotated.populations.max() < ideal.populations.max() - 0.05


def test_trace_validation():
    with pytest.raises(ValidationError):
        DecayTrace(np.array([0.0, 1.0]), np.array([0.5]), 0.0, "t1")
    with pytest.raises(ValidationError):
        DecayTrace(np.array([1.0, 0.0]), np.array([0.5, 0.5]), 0.0, "t1")
    with pytest.raises(ValidationError):
        DecayTrace(np.array([0.0, 1.0]), np.array([0.5, 2.0]), 0.0, "t1")
    with pytest.raises(ValidationError):
        DecayTrace(np.array([0.0, 1.0]), np.array([0.5, 0.5]), 0.0, "echo")
