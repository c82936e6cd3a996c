"""Report assembly and rendering.

A ReportBundle pairs the solved thermal report with the scenario's
noise-chain results and metadata (tool version, content hash,
assumption flags).  Rendering follows the load/temperature table
conventions of the wiring-comparison workflow: W at the 50 K and 4 K
flanges, mW at the still, uW at the cold plate and mixing chamber;
temperatures in K down to the still and mK below.  Machine format is
tab-separated with a stable row and column order, so byte-identical
scenarios give byte-identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import __version__
from .data import DataContext
from .errors import UnreachableTargetError, ZeroOccupationError
from .noise import (
    OccupationState,
    bose_einstein_occupation,
    cascade_forward,
    chain_floor,
    effective_temperature,
    infer_source_temperature,
)
from .scenario import Scenario, assumption_flags
from .solver import ThermalReport, solve_steady_state
from .units import _round_sig

LOAD_UNITS = {
    "Flange50K": ("W", 1.0),
    "Flange4K": ("W", 1.0),
    "Still": ("mW", 1e3),
    "CP": ("uW", 1e6),
    "MXC": ("uW", 1e6),
}
TEMP_UNITS = {
    "Flange50K": ("K", 1.0),
    "Flange4K": ("K", 1.0),
    "Still": ("K", 1.0),
    "CP": ("mK", 1e3),
    "MXC": ("mK", 1e3),
}
STAGE_ROWS = ["Flange50K", "Flange4K", "Still", "CP", "MXC"]

# a stage row where RF dominates the wiring load on both sides of a
# comparison gets an "attenuators dominate" note
ATTENUATOR_DOMINANCE_SHARE = 0.5


@dataclass
class NoiseResult:
    chain_name: str
    frequency_hz: float
    floor_occupation: float
    floor_temperature_k: float | None
    forward_output_k: float | None = None       # from a configured source temperature
    inferred_source_k: float | None = None      # from a configured target
    target_temperature_k: float | None = None
    source_temperature_k: float | None = None
    error: str | None = None


@dataclass
class ReportBundle:
    scenario_name: str
    thermal: ThermalReport
    noise: dict[str, NoiseResult]
    scenario_hash: str
    assumption_flags: list[str]
    tool_version: str = __version__
    options: dict = field(default_factory=dict)


def run_report(scenario: Scenario, data: DataContext, tolerance_w: float = 1e-5) -> ReportBundle:
    capacity = data.capacity(scenario.capacity_ref)
    thermal = solve_steady_state(scenario, capacity, data.materials, tolerance_w=tolerance_w)
    noise: dict[str, NoiseResult] = {}
    for name, spec in sorted(scenario.noise_chains.items()):
        chain = spec.chain
        floor = chain_floor(chain)
        try:
            floor_t = effective_temperature(floor)
        except ZeroOccupationError:
            floor_t = None
        result = NoiseResult(
            chain_name=name, frequency_hz=chain.frequency_hz,
            floor_occupation=floor.occupation, floor_temperature_k=floor_t,
            target_temperature_k=spec.target_temperature_k,
            source_temperature_k=spec.source_temperature_k,
        )
        if spec.source_temperature_k is not None:
            src = OccupationState(
                bose_einstein_occupation(spec.source_temperature_k, chain.frequency_hz),
                chain.frequency_hz,
            )
            result.forward_output_k = effective_temperature(cascade_forward(src, chain))
        if spec.target_temperature_k is not None:
            target = OccupationState(
                bose_einstein_occupation(spec.target_temperature_k, chain.frequency_hz),
                chain.frequency_hz,
            )
            try:
                result.inferred_source_k = infer_source_temperature(target, chain)
            except UnreachableTargetError as exc:
                result.error = str(exc)
        noise[name] = result
    return ReportBundle(
        scenario_name=scenario.name,
        thermal=thermal,
        noise=noise,
        scenario_hash=scenario.content_hash(),
        assumption_flags=assumption_flags(scenario),
    )


def _fmt(value: float, scale: float, sig: int) -> str:
    v = value * scale
    if sig <= 0:
        return repr(v)
    return f"{_round_sig(v, sig):g}"


def render_machine(bundle: ReportBundle, sig: int = 4) -> str:
    """Deterministic tab-separated report."""
    out = []
    out.append(f"# cryoplan report\t{bundle.tool_version}")
    out.append(f"# scenario\t{bundle.scenario_name}")
    out.append(f"# scenario_hash\t{bundle.scenario_hash}")
    out.append("stage\tconductive\trf\toptical\tstatic\ttotal\tload_unit\ttemperature\ttemp_unit")
    for stage in STAGE_ROWS:
        rep = bundle.thermal.stages[stage]
        lu, ls = LOAD_UNITS[stage]
        tu, tscale = TEMP_UNITS[stage]
        out.append(
            "\t".join([
                stage,
                _fmt(rep.conductive_w, ls, sig), _fmt(rep.rf_w, ls, sig),
                _fmt(rep.optical_w, ls, sig), _fmt(rep.static_w, ls, sig),
                _fmt(rep.total_w, ls, sig), lu,
                _fmt(rep.solved_temperature_k, tscale, sig), tu,
            ])
        )
    out.append(f"still_heater_required\t{_fmt(bundle.thermal.still_heater_required_w, 1e3, sig)}\tmW")
    conv = bundle.thermal.convergence
    out.append(f"convergence\titerations={conv.iterations}\tresidual_w={conv.residual_w:.3e}")
    for name, res in sorted(bundle.noise.items()):
        cols = [f"noise\t{name}", f"frequency_hz={res.frequency_hz:g}",
                f"floor_occupation={res.floor_occupation:.6e}"]
        if res.inferred_source_k is not None:
            cols.append(f"inferred_source_K={_fmt(res.inferred_source_k, 1.0, sig)}")
        if res.forward_output_k is not None:
            cols.append(f"forward_output_K={_fmt(res.forward_output_k, 1.0, sig)}")
        if res.error:
            cols.append(f"error={res.error}")
        out.append("\t".join(cols))
    for flagtext in bundle.assumption_flags:
        out.append(f"assumption\t{flagtext}")
    return "\n".join(out) + "\n"


def render_human(bundle: ReportBundle, sig: int = 4) -> str:
    rows = []
    rows.append(f"Scenario: {bundle.scenario_name}    (hash {bundle.scenario_hash[:12]})")
    rows.append("")
    header = f"{'Stage':<10} {'Conduction':>12} {'RF':>12} {'Optical':>12} {'Static':>12} {'Total':>12} {'Unit':<5} {'T':>10}"
    rows.append(header)
    rows.append("-" * len(header))
    for stage in STAGE_ROWS:
        rep = bundle.thermal.stages[stage]
        lu, ls = LOAD_UNITS[stage]
        tu, tscale = TEMP_UNITS[stage]
        rows.append(
            f"{stage:<10} {_fmt(rep.conductive_w, ls, sig):>12} {_fmt(rep.rf_w, ls, sig):>12} "
            f"{_fmt(rep.optical_w, ls, sig):>12} {_fmt(rep.static_w, ls, sig):>12} "
            f"{_fmt(rep.total_w, ls, sig):>12} {lu:<5} "
            f"{_fmt(rep.solved_temperature_k, tscale, sig):>7} {tu}"
        )
    rows.append("")
    rows.append(f"Still heater required: {_fmt(bundle.thermal.still_heater_required_w, 1e3, sig)} mW")
    conv = bundle.thermal.convergence
    rows.append(f"Converged in {conv.iterations} sweeps, residual {conv.residual_w:.2e} W")
    for name, res in sorted(bundle.noise.items()):
        rows.append("")
        rows.append(f"Noise chain '{name}' @ {res.frequency_hz / 1e9:g} GHz:")
        if res.floor_temperature_k is not None:
            rows.append(f"  thermal floor: {_fmt(res.floor_temperature_k, 1e3, sig)} mK "
                        f"(occupation {res.floor_occupation:.3e})")
        if res.forward_output_k is not None:
            rows.append(f"  source {_fmt(res.source_temperature_k, 1.0, sig)} K -> "
                        f"output {_fmt(res.forward_output_k, 1e3, sig)} mK")
        if res.inferred_source_k is not None:
            rows.append(f"  target {_fmt(res.target_temperature_k, 1e3, sig)} mK -> "
                        f"inferred source {_fmt(res.inferred_source_k, 1.0, sig)} K")
        if res.error:
            rows.append(f"  error: {res.error}")
    if bundle.assumption_flags:
        rows.append("")
        rows.append("Assumptions:")
        for flagtext in bundle.assumption_flags:
            rows.append(f"  - {flagtext}")
    return "\n".join(rows) + "\n"


@dataclass
class ComparisonRow:
    stage: str
    unit: str
    totals: list[float]          # scaled to the row unit
    deltas: list[float]          # vs first scenario, scaled
    temperatures: list[float]    # scaled to the temp unit
    temp_unit: str
    notes: list[str]


@dataclass
class Comparison:
    names: list[str]
    rows: list[ComparisonRow]
    still_heater_mw: list[float]


def compare(bundles: list[ReportBundle]) -> Comparison:
    """Side-by-side loads/temperatures with per-row deltas vs the first bundle."""
    if len(bundles) < 2:
        raise ValueError("need at least two reports to compare")
    stage_sets = [set(b.thermal.stages) for b in bundles]
    if any(s != stage_sets[0] for s in stage_sets):
        raise ValueError("mismatched stage sets between scenarios")
    rows = []
    for stage in STAGE_ROWS:
        lu, ls = LOAD_UNITS[stage]
        tu, ts = TEMP_UNITS[stage]
        totals = [b.thermal.stages[stage].total_w * ls for b in bundles]
        temps = [b.thermal.stages[stage].solved_temperature_k * ts for b in bundles]
        deltas = [t - totals[0] for t in totals]
        notes = []
        shares = []
        for b in bundles:
            rep = b.thermal.stages[stage]
            wiring = rep.total_w - rep.static_w
            shares.append(rep.rf_w / wiring if wiring > 0 else 0.0)
        if min(shares) > ATTENUATOR_DOMINANCE_SHARE:
            notes.append("attenuators dominate")
        rows.append(ComparisonRow(stage, lu, totals, deltas, temps, tu, notes))
    return Comparison(
        names=[b.scenario_name for b in bundles],
        rows=rows,
        still_heater_mw=[b.thermal.still_heater_required_w * 1e3 for b in bundles],
    )


def render_comparison(cmp: Comparison, machine: bool = False, sig: int = 4) -> str:
    if machine:
        out = ["stage\tunit\t" + "\t".join(cmp.names) + "\t" +
               "\t".join(f"delta_{n}" for n in cmp.names[1:]) + "\tnotes"]
        for row in cmp.rows:
            cells = [row.stage, row.unit]
            cells += [f"{_round_sig(v, sig):g}" for v in row.totals]
            cells += [f"{_round_sig(d, sig):g}" for d in row.deltas[1:]]
            cells.append(";".join(row.notes))
            out.append("\t".join(cells))
        return "\n".join(out) + "\n"
    width = max(12, max(len(n) for n in cmp.names) + 2)
    out = [f"{'Stage':<10} {'Unit':<5} " + " ".join(f"{n:>{width}}" for n in cmp.names) +
           " " + " ".join(f"{'d(' + n + ')':>{width}}" for n in cmp.names[1:])]
    for row in cmp.rows:
        cells = f"{row.stage:<10} {row.unit:<5} "
        cells += " ".join(f"{_round_sig(v, sig):>{width}g}" for v in row.totals)
        cells += " " + " ".join(f"{_round_sig(d, sig):>{width}g}" for d in row.deltas[1:])
        if row.notes:
            cells += "   [" + "; ".join(row.notes) + "]"
        out.append(cells)
    out.append("")
    out.append(f"{'T':<10} {'Unit':<5} " + " ".join(f"{n:>{width}}" for n in cmp.names))
    for row in cmp.rows:
        out.append(
            f"{row.stage:<10} {row.temp_unit:<5} "
            + " ".join(f"{_round_sig(t, sig):>{width}g}" for t in row.temperatures)
        )
    return "\n".join(out) + "\n"
