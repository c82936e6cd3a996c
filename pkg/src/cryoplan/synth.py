"""Synthetic trace generation for tests, demos and batch pipelines.

Generators are deterministic for a given seed and evaluate the fit
models exactly when noise_sigma is zero.  The rotation-error generator
produces the physical fringe shape of imperfect pi/2 pulses: two
theta-pulses give P(t) = sin^2(theta) * (1 + cos(2 pi f t + phi)) / 2,
so fringe minima stay at the ground state while maxima shrink; a slow
in-trace drift of theta adds the horizontal asymmetry that the tilt
coefficient quantifies.
"""

from __future__ import annotations

import math

import numpy as np

from .coherence import DecayTrace, pure_dephasing, ramsey_model, t1_model
from .errors import ValidationError


def default_delays(span_s: float, points: int) -> np.ndarray:
    return np.linspace(0.0, span_s, points)


def synth_t1_trace(
    t1_s: float,
    amplitude: float = 1.0,
    offset: float = 0.0,
    delays_s=None,
    noise_sigma: float = 0.0,
    seed: int = 0,
    timestamp: float = 0.0,
    label: str = "",
) -> DecayTrace:
    if t1_s <= 0:
        raise ValidationError("t1 must be positive", field="synth.t1")
    t = np.asarray(delays_s if delays_s is not None else default_delays(5.0 * t1_s, 51), dtype=float)
    y = t1_model(t, amplitude, t1_s, offset)
    if noise_sigma > 0:
        y = y + np.random.default_rng(seed).normal(0.0, noise_sigma, t.size)
    return DecayTrace(t, np.clip(y, -0.2, 1.2), timestamp=timestamp, kind="t1", label=label)


def synth_ramsey_trace(
    t2_s: float,
    frequency_hz: float,
    amplitude: float = 0.5,
    phase_rad: float = 0.0,
    tilt_per_s: float = 0.0,
    offset: float = 0.5,
    delays_s=None,
    noise_sigma: float = 0.0,
    seed: int = 0,
    timestamp: float = 0.0,
    label: str = "",
) -> DecayTrace:
    if t2_s <= 0 or frequency_hz <= 0:
        raise ValidationError("t2 and frequency must be positive", field="synth.ramsey")
    if delays_s is None:
        span = 3.0 * t2_s
        delays_s = default_delays(span, max(101, int(6 * span * frequency_hz) + 1))
    t = np.asarray(delays_s, dtype=float)
    y = ramsey_model(t, amplitude, t2_s, frequency_hz, phase_rad, tilt_per_s, offset)
    if noise_sigma > 0:
        y = y + np.random.default_rng(seed).normal(0.0, noise_sigma, t.size)
    return DecayTrace(t, np.clip(y, -0.2, 1.2), timestamp=timestamp, kind="ramsey", label=label)


def synth_ramsey_rotation(
    t2_s: float,
    frequency_hz: float,
    rotation_error: float = 0.0,
    rotation_drift_per_s: float = 0.0,
    phase_rad: float = 0.0,
    delays_s=None,
    noise_sigma: float = 0.0,
    seed: int = 0,
    timestamp: float = 0.0,
    label: str = "",
) -> DecayTrace:
    """Fringe pattern of a Ramsey pair of (pi/2 * (1 + eps)) pulses.

    eps evolves linearly over the trace: eps(t) = rotation_error +
    rotation_drift_per_s * t.  Perfect pulses (eps = 0) give full
    contrast; any eps leaves the minima at the ground state and lowers
    the maxima below 1.
    """
    if delays_s is None:
        span = 3.0 * t2_s
        delays_s = default_delays(span, max(201, int(8 * span * frequency_hz) + 1))
    t = np.asarray(delays_s, dtype=float)
    eps = rotation_error + rotation_drift_per_s * t
    theta = 0.5 * math.pi * (1.0 + eps)
    envelope = np.exp(-t / t2_s)
    y = np.sin(theta) ** 2 * envelope * 0.5 * (1.0 + np.cos(2.0 * np.pi * frequency_hz * t + phase_rad))
    if noise_sigma > 0:
        y = y + np.random.default_rng(seed).normal(0.0, noise_sigma, t.size)
    return DecayTrace(t, np.clip(y, -0.2, 1.2), timestamp=timestamp, kind="ramsey", label=label)


def generate_interleaved_batch(
    hours: float,
    cycle_s: float = 240.0,
    t1_mean_s: float = 100e-6,
    t1_sigma_s: float = 10e-6,
    target_t_phi_s: float = 65e-6,
    ramsey_frequency_hz: float = 50e3,
    noise_sigma: float = 0.02,
    seed: int = 1,
    start_timestamp: float = 0.0,
    label: str = "synthetic",
    tilt_sigma_per_s: float = 0.0,
) -> list[DecayTrace]:
    """Interleaved T1 / Ramsey series mimicking a long looped measurement.

    Per cycle one T1 and one Ramsey trace are produced.  Each cycle draws
    T1 around t1_mean_s and derives T2 so the pure dephasing time equals
    target_t_phi_s, i.e. 1/T2 = 1/(2 T1) + 1/T_phi; fitting the batch and
    recombining the fitted pairs should therefore recover the target.
    """
    if hours <= 0 or cycle_s <= 0:
        raise ValidationError("hours and cycle must be positive", field="synth.batch")
    rng = np.random.default_rng(seed)
    cycles = int(hours * 3600.0 / cycle_s)
    traces: list[DecayTrace] = []
    for i in range(cycles):
        ts = start_timestamp + i * cycle_s
        t1 = max(float(rng.normal(t1_mean_s, t1_sigma_s)), 0.2 * t1_mean_s)
        t2 = 1.0 / (1.0 / (2.0 * t1) + 1.0 / target_t_phi_s)
        # cross-check: recombining must give the target back
        assert abs(pure_dephasing(t1, t2) - target_t_phi_s) < 1e-12 * target_t_phi_s
        tilt = float(rng.normal(0.0, tilt_sigma_per_s)) if tilt_sigma_per_s > 0 else 0.0
        traces.append(
            synth_t1_trace(
                t1, amplitude=1.0, offset=0.0,
                delays_s=default_delays(5.0 * t1_mean_s, 61),
                noise_sigma=noise_sigma, seed=int(rng.integers(0, 2**31)),
                timestamp=ts, label=label,
            )
        )
        traces.append(
            synth_ramsey_trace(
                t2, ramsey_frequency_hz, amplitude=0.5, phase_rad=0.0,
                tilt_per_s=tilt, offset=0.5,
                delays_s=default_delays(3.0 * target_t_phi_s, 181),
                noise_sigma=noise_sigma, seed=int(rng.integers(0, 2**31)),
                timestamp=ts + cycle_s / 2.0, label=label,
            )
        )
    return traces
