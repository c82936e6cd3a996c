"""Fitting and statistics for qubit lifetime and coherence traces.

Models:
    T1 trace:     P(t) = A * exp(-t / T1) + C
    Ramsey trace: P(t) = A * exp(-t / T2) * cos(2*pi*f*t + phi) + B*t + C

The Ramsey tilt coefficient B captures horizontal asymmetry of the
fringe pattern, the signature of drive-power drift producing under- or
over-rotated pi/2 pulses.  Initialisation is deterministic: the fringe
frequency comes from a Lomb-Scargle periodogram peak, the envelope from
a log-linear fit of windowed RMS amplitudes, the tilt and offset from a
linear detrend, so repeated fits of the same trace are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit
from scipy.signal import lombscargle

from .errors import FitError, FitRejectedError, LifetimeLimitedError, ValidationError

MIN_T1_POINTS = 8
MIN_RAMSEY_POINTS = 16
PERIODOGRAM_MIN_SNR = 3.0
DECAY_UNRESOLVED_FACTOR = 100.0  # fitted T2 beyond this multiple of the span
MAX_T2_RELATIVE_ERROR = 0.5


@dataclass(frozen=True)
class DecayTrace:
    delays_s: np.ndarray
    populations: np.ndarray
    timestamp: float
    kind: str  # "t1" | "ramsey"
    label: str = ""

    def __post_init__(self):
        d = np.asarray(self.delays_s, dtype=float)
        p = np.asarray(self.populations, dtype=float)
        object.__setattr__(self, "delays_s", d)
        object.__setattr__(self, "populations", p)
        if self.kind not in ("t1", "ramsey"):
            raise ValidationError(f"bad trace kind {self.kind!r}", field="trace.kind")
        if d.ndim != 1 or d.size != p.size:
            raise ValidationError("delays and populations must be 1-d and equal length", field="trace")
        if d.size and np.any(np.diff(d) <= 0):
            raise ValidationError("delays must be strictly increasing", field="trace.delays")
        if p.size and (p.min() < -0.2 or p.max() > 1.2):
            raise ValidationError("populations outside [-0.2, 1.2]", field="trace.populations")

    @property
    def span_s(self) -> float:
        return float(self.delays_s[-1] - self.delays_s[0])


@dataclass(frozen=True)
class T1Fit:
    amplitude: float
    t1_s: float
    offset: float
    covariance: np.ndarray
    residual_rms: float

    @property
    def t1_stderr_s(self) -> float:
        return float(np.sqrt(self.covariance[1, 1]))


@dataclass(frozen=True)
class RamseyFit:
    amplitude: float
    t2_s: float
    frequency_hz: float
    phase_rad: float
    tilt_per_s: float
    offset: float
    covariance: np.ndarray
    residual_rms: float
    flags: tuple[str, ...] = ()

    @property
    def t2_stderr_s(self) -> float:
        return float(np.sqrt(self.covariance[1, 1]))

    @property
    def tilt_stderr(self) -> float:
        return float(np.sqrt(self.covariance[4, 4]))


def t1_model(t, amplitude, t1, offset):
    return amplitude * np.exp(-t / t1) + offset


def ramsey_model(t, amplitude, t2, frequency, phase, tilt, offset):
    return amplitude * np.exp(-t / t2) * np.cos(2.0 * np.pi * frequency * t + phase) + tilt * t + offset


def fit_t1(trace: DecayTrace) -> T1Fit:
    """Nonlinear least squares of the exponential relaxation model."""
    if trace.kind != "t1":
        raise ValidationError(f"expected a t1 trace, got {trace.kind!r}", field="trace.kind")
    t, y = trace.delays_s, trace.populations
    if t.size < MIN_T1_POINTS:
        raise FitError(f"need at least {MIN_T1_POINTS} points, got {t.size}")
    if float(np.ptp(y)) < 1e-9:
        raise FitError("degenerate amplitude: trace is constant")

    # log-linear bootstrap for the initial guess
    tail = max(2, t.size // 10)
    c0 = float(np.mean(y[-tail:]))
    a0 = float(y[0] - c0)
    if abs(a0) < 1e-9:
        raise FitError("degenerate amplitude: no initial decay contrast")
    resid = (y - c0) / a0
    mask = resid > 1e-3
    if np.count_nonzero(mask) >= 2:
        slope = np.polyfit(t[mask], np.log(resid[mask]), 1)[0]
        t1_0 = -1.0 / slope if slope < 0 else trace.span_s
    else:
        t1_0 = trace.span_s / 3.0
    t1_0 = min(max(t1_0, trace.span_s * 1e-3), trace.span_s * 1e3)

    try:
        popt, pcov = curve_fit(
            t1_model, t, y, p0=[a0, t1_0, c0],
            bounds=([-np.inf, trace.span_s * 1e-6, -np.inf], [np.inf, np.inf, np.inf]),
            maxfev=20000,
        )
    except (RuntimeError, ValueError) as exc:
        raise FitError(f"t1 fit did not converge: {exc}") from exc
    amplitude, t1, offset = (float(v) for v in popt)
    if t1 <= 0:
        raise FitRejectedError(f"fitted T1 {t1:.3g} s is not positive")
    rms = float(np.sqrt(np.mean((y - t1_model(t, *popt)) ** 2)))
    return T1Fit(amplitude=amplitude, t1_s=t1, offset=offset, covariance=pcov, residual_rms=rms)


def _periodogram_peak(t: np.ndarray, r: np.ndarray, span: float) -> tuple[float, float]:
    """(peak frequency Hz, peak SNR) of the detrended residual."""
    diffs = np.diff(t)
    dt = float(np.min(diffs))
    f_lo = 0.5 / span
    f_hi = 0.5 / dt
    r0 = r - r.mean()
    if np.allclose(diffs, diffs[0], rtol=1e-9):
        # uniform sampling: zero-padded FFT periodogram
        n_pad = max(4096, 4 * t.size)
        power = np.abs(np.fft.rfft(r0, n=n_pad)) ** 2
        freqs = np.fft.rfftfreq(n_pad, d=diffs[0])
        mask = (freqs >= f_lo) & (freqs <= f_hi)
        freqs, power = freqs[mask], power[mask]
    else:
        freqs = np.linspace(f_lo, f_hi, 1024)
        power = lombscargle(t, r0, 2.0 * np.pi * freqs, normalize=False)
    peak = int(np.argmax(power))
    snr = float(power[peak] / max(np.median(power), 1e-300))
    return float(freqs[peak]), snr


def fit_ramsey(trace: DecayTrace) -> RamseyFit:
    """Nonlinear least squares of the tilted decaying-fringe model."""
    if trace.kind != "ramsey":
        raise ValidationError(f"expected a ramsey trace, got {trace.kind!r}", field="trace.kind")
    t, y = trace.delays_s, trace.populations
    if t.size < MIN_RAMSEY_POINTS:
        raise FitError(f"need at least {MIN_RAMSEY_POINTS} points, got {t.size}")
    span = trace.span_s

    # deterministic initialisation
    tilt0, c_at0 = np.polyfit(t, y, 1)
    r = y - (tilt0 * t + c_at0)
    f0, snr = _periodogram_peak(t, r, span)
    if snr < PERIODOGRAM_MIN_SNR:
        raise FitError(f"no detectable fringe (periodogram SNR {snr:.2f} < {PERIODOGRAM_MIN_SNR})")
    if span * f0 < 2.0:
        raise FitError(f"trace spans only {span * f0:.2f} fringe periods (need >= 2)")

    # phase and amplitude from quadrature sums at the peak frequency
    w = 2.0 * np.pi * f0
    cos_c = float(np.sum(r * np.cos(w * t)))
    sin_c = float(np.sum(r * np.sin(w * t)))
    phi0 = math.atan2(-sin_c, cos_c)
    a0 = 2.0 * math.hypot(cos_c, sin_c) / t.size

    # envelope from windowed RMS: log-linear slope -> T2
    nwin = 4
    edges = np.linspace(t[0], t[-1], nwin + 1)
    mids, rmss = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = (t >= lo) & (t <= hi)
        if np.count_nonzero(m) >= 2:
            mids.append(0.5 * (lo + hi))
            rmss.append(max(float(np.sqrt(np.mean(r[m] ** 2))), 1e-12))
    slope = np.polyfit(mids, np.log(rmss), 1)[0] if len(mids) >= 2 else 0.0
    t2_0 = -1.0 / slope if slope < 0 else 1e3 * span
    t2_0 = min(max(t2_0, span * 1e-2), 1e3 * span)

    try:
        popt, pcov = curve_fit(
            ramsey_model, t, y, p0=[a0, t2_0, f0, phi0, tilt0, c_at0],
            bounds=(
                [-np.inf, span * 1e-6, 0.0, -2.0 * np.pi, -np.inf, -np.inf],
                [np.inf, np.inf, np.inf, 2.0 * np.pi, np.inf, np.inf],
            ),
            maxfev=40000,
        )
    except (RuntimeError, ValueError) as exc:
        raise FitError(f"ramsey fit did not converge: {exc}") from exc

    amplitude, t2, frequency, phase, tilt, offset = (float(v) for v in popt)
    rms = float(np.sqrt(np.mean((y - ramsey_model(t, *popt)) ** 2)))
    flags: list[str] = []
    if t2 > DECAY_UNRESOLVED_FACTOR * span:
        flags.append("decay unresolved")
    else:
        t2_err = float(np.sqrt(pcov[1, 1]))
        if not math.isfinite(t2_err) or t2_err / t2 > MAX_T2_RELATIVE_ERROR:
            raise FitRejectedError(
                f"T2 relative standard error {t2_err / t2 if math.isfinite(t2_err) else float('inf'):.2f} exceeds "
                f"{MAX_T2_RELATIVE_ERROR}"
            )
    return RamseyFit(
        amplitude=amplitude, t2_s=t2, frequency_hz=frequency, phase_rad=phase,
        tilt_per_s=tilt, offset=offset, covariance=pcov, residual_rms=rms,
        flags=tuple(flags),
    )


def pure_dephasing(t1_s: float, t2_s: float) -> float:
    """Pure dephasing time 2*T2*T1 / (2*T1 - T2).

    Satisfies 1/T2 = 1/(2*T1) + 1/T_phi to machine precision.  Raises
    LifetimeLimitedError for T2 >= 2*T1 where T_phi diverges.
    """
    if t1_s <= 0 or t2_s <= 0:
        raise ValidationError("T1 and T2 must be positive", field="pure_dephasing")
    if t2_s >= 2.0 * t1_s:
        raise LifetimeLimitedError(
            f"lifetime-limited: no pure dephasing (T2 {t2_s:.4g} s >= 2*T1 {2 * t1_s:.4g} s)"
        )
    return 2.0 * t2_s * t1_s / (2.0 * t1_s - t2_s)


@dataclass(frozen=True)
class NormalFit:
    mu: float
    sigma: float


@dataclass(frozen=True)
class SeriesStats:
    mean: float
    standard_deviation: float
    standard_error_of_mean: float
    count: int
    normal_fit: NormalFit


def series_stats(values) -> SeriesStats:
    """Mean, unbiased SD, SEM and the maximum-likelihood normal fit.

    Values are sorted before accumulation so the result is independent of
    input order down to the last bit.
    """
    arr = np.sort(np.asarray(list(values), dtype=float))
    if arr.size < 2:
        raise ValidationError("need at least two values", field="series_stats")
    mean = float(np.mean(arr))
    sd = float(np.std(arr, ddof=1))
    sem = sd / math.sqrt(arr.size)
    return SeriesStats(
        mean=mean,
        standard_deviation=sd,
        standard_error_of_mean=sem,
        count=int(arr.size),
        normal_fit=NormalFit(mu=mean, sigma=float(np.std(arr, ddof=0))),
    )


@dataclass(frozen=True)
class TiltReport:
    times: tuple[float, ...]
    tilts_per_s: tuple[float, ...]
    stats: SeriesStats
    max_abs_tilt_per_s: float
    comparison: dict = field(default_factory=dict)


def tilt_series(points, other=None) -> TiltReport:
    """Source-stability report from a time series of Ramsey tilt values.

    `points` is a sequence of (timestamp, RamseyFit | tilt value); pass a
    second labelled series via `other` to get mean-difference and
    variance-ratio comparison (e.g. optical vs microwave drive).
    """
    def unpack(seq):
        out = []
        for ts, item in seq:
            tilt = item.tilt_per_s if isinstance(item, RamseyFit) else float(item)
            out.append((float(ts), tilt))
        out.sort(key=lambda p: p[0])
        return out

    series = unpack(points)
    if len(series) < 2:
        raise ValidationError("need at least two tilt points", field="tilt_series")
    times = tuple(p[0] for p in series)
    tilts = tuple(p[1] for p in series)
    stats = series_stats(tilts)
    comparison = {}
    if other is not None:
        o = unpack(other)
        if len(o) < 2:
            raise ValidationError("comparison series needs at least two points", field="tilt_series.other")
        ostats = series_stats([p[1] for p in o])
        var_self = stats.standard_deviation ** 2
        var_other = ostats.standard_deviation ** 2
        comparison = {
            "mean_difference_per_s": stats.mean - ostats.mean,
            "variance_ratio": var_self / var_other if var_other > 0 else math.inf,
            "other_stats": ostats,
        }
    return TiltReport(
        times=times,
        tilts_per_s=tilts,
        stats=stats,
        max_abs_tilt_per_s=max(abs(b) for b in tilts),
        comparison=comparison,
    )
