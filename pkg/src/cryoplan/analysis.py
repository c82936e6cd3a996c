"""Batch analysis of coherence trace directories.

Fits every readable trace, applies user-driven exclusion windows (never
automatic), pairs each Ramsey fit with the nearest T1 fit in time to
form the pure-dephasing series, and summarises everything with
histogram statistics and the tilt stability report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coherence import (
    RamseyFit,
    SeriesStats,
    T1Fit,
    TiltReport,
    fit_ramsey,
    fit_t1,
    pure_dephasing,
    series_stats,
    tilt_series,
)
from .errors import FitError, LifetimeLimitedError, ValidationError
from .traceio import read_batch


@dataclass
class BatchSummary:
    t1_fits: list[tuple[float, T1Fit]]
    ramsey_fits: list[tuple[float, RamseyFit]]
    t1_stats: SeriesStats | None
    t2_stats: SeriesStats | None
    t_phi_stats: SeriesStats | None
    t_phi_series: list[tuple[float, float]]
    tilt_report: TiltReport | None
    lifetime_limited_count: int
    excluded_count: int
    exclusions: list[tuple[float, float]]
    warnings: list[str] = field(default_factory=list)

    @property
    def fitted_count(self) -> int:
        return len(self.t1_fits) + len(self.ramsey_fits)


def analyze_batch(trace_dir: str, exclusions: list[tuple[float, float]] | None = None) -> BatchSummary:
    """Fit every trace in a directory and summarise the series.

    `exclusions` is a list of (start, end) timestamp windows to drop,
    e.g. periods of strong two-level-system interaction; every applied
    window is logged in the summary.
    """
    exclusions = [(float(a), float(b)) for a, b in (exclusions or [])]
    for a, b in exclusions:
        if b <= a:
            raise ValidationError(f"empty exclusion window [{a}, {b}]", field="exclusions")
    traces, warnings = read_batch(trace_dir)

    excluded = 0
    kept = []
    for trace in traces:
        if any(a <= trace.timestamp <= b for a, b in exclusions):
            excluded += 1
            continue
        kept.append(trace)

    t1_fits: list[tuple[float, T1Fit]] = []
    ramsey_fits: list[tuple[float, RamseyFit]] = []
    for trace in sorted(kept, key=lambda tr: tr.timestamp):
        try:
            if trace.kind == "t1":
                t1_fits.append((trace.timestamp, fit_t1(trace)))
            else:
                ramsey_fits.append((trace.timestamp, fit_ramsey(trace)))
        except FitError as exc:
            warnings.append(f"{trace.kind} trace at t={trace.timestamp:g}: {exc}")

    t_phi_series: list[tuple[float, float]] = []
    lifetime_limited = 0
    for ts, rfit in ramsey_fits:
        if not t1_fits:
            break
        nearest = min(t1_fits, key=lambda item: abs(item[0] - ts))
        try:
            t_phi_series.append((ts, pure_dephasing(nearest[1].t1_s, rfit.t2_s)))
        except LifetimeLimitedError:
            lifetime_limited += 1

    def maybe_stats(values):
        return series_stats(values) if len(values) >= 2 else None

    tilt = tilt_series(ramsey_fits) if len(ramsey_fits) >= 2 else None
    return BatchSummary(
        t1_fits=t1_fits,
        ramsey_fits=ramsey_fits,
        t1_stats=maybe_stats([f.t1_s for _, f in t1_fits]),
        t2_stats=maybe_stats([f.t2_s for _, f in ramsey_fits]),
        t_phi_stats=maybe_stats([v for _, v in t_phi_series]),
        t_phi_series=t_phi_series,
        tilt_report=tilt,
        lifetime_limited_count=lifetime_limited,
        excluded_count=excluded,
        exclusions=exclusions,
        warnings=warnings,
    )


def render_batch_summary(summary: BatchSummary, machine: bool = False) -> str:
    def us(seconds: float) -> str:
        return f"{seconds * 1e6:.3f}"

    lines = []
    if machine:
        lines.append("metric\tmean_us\tsd_us\tsem_us\tcount")
        for label, stats in (("t1", summary.t1_stats), ("t2", summary.t2_stats),
                             ("t_phi", summary.t_phi_stats)):
            if stats:
                lines.append(f"{label}\t{us(stats.mean)}\t{us(stats.standard_deviation)}"
                             f"\t{us(stats.standard_error_of_mean)}\t{stats.count}")
        if summary.tilt_report:
            t = summary.tilt_report
            lines.append(f"tilt_mean_per_s\t{t.stats.mean:.6g}\tsem\t{t.stats.standard_error_of_mean:.6g}"
                         f"\tmax_abs\t{t.max_abs_tilt_per_s:.6g}")
        lines.append(f"excluded\t{summary.excluded_count}")
        lines.append(f"lifetime_limited\t{summary.lifetime_limited_count}")
        lines.append(f"warnings\t{len(summary.warnings)}")
    else:
        for label, stats in (("T1", summary.t1_stats), ("T2*", summary.t2_stats),
                             ("T_phi", summary.t_phi_stats)):
            if stats:
                lines.append(
                    f"{label}: mean {us(stats.mean)} us, sd {us(stats.standard_deviation)} us, "
                    f"sem {us(stats.standard_error_of_mean)} us (n={stats.count})"
                )
        if summary.tilt_report:
            t = summary.tilt_report
            lines.append(
                f"Tilt B: mean {t.stats.mean:.4g} /s, sem {t.stats.standard_error_of_mean:.4g} /s, "
                f"max |B| {t.max_abs_tilt_per_s:.4g} /s"
            )
        if summary.exclusions:
            lines.append(f"Excluded {summary.excluded_count} trace(s) in {len(summary.exclusions)} window(s)")
        if summary.lifetime_limited_count:
            lines.append(f"{summary.lifetime_limited_count} pair(s) lifetime-limited: no pure dephasing")
        for w in summary.warnings:
            lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"
