"""Wiring domain types and per-stage load bookkeeping.

A refrigerator is modelled as the fixed flange sequence RT, Flange50K,
Flange4K, Still, CP, MXC.  Loads are attributed to the flange where the
heat arrives: conduction through a segment loads the segment's cold end,
an attenuator loads its mounting flange, a segment's RF signal loss
loads its cold end, optical power loads the photodiode flange.  Heat
leaving a flange toward colder stages is not subtracted, so removing a
line can never increase any stage load.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .materials import Geometry, MaterialLibrary, conduction_load
from .units import db_to_linear

STAGE_ORDER = ["RT", "Flange50K", "Flange4K", "Still", "CP", "MXC"]
_STAGE_INDEX = {name: i for i, name in enumerate(STAGE_ORDER)}

# Table-2 style nominal operating points, used as the solver starting guess.
NOMINAL_TEMPERATURES_K = {
    "RT": 295.0,
    "Flange50K": 40.0,
    "Flange4K": 3.5,
    "Still": 1.4,
    "CP": 0.15,
    "MXC": 0.02,
}


def stage_index(name: str) -> int:
    try:
        return _STAGE_INDEX[name]
    except KeyError:
        raise ValidationError(f"unknown stage {name!r} (expected one of {', '.join(STAGE_ORDER)})",
                              field="stage") from None


@dataclass(frozen=True)
class Stage:
    name: str
    nominal_temperature_k: float
    boundary_kind: str  # "fixed_temperature" | "capacity_limited"

    def __post_init__(self):
        stage_index(self.name)
        if self.boundary_kind not in ("fixed_temperature", "capacity_limited"):
            raise ValidationError(f"bad boundary_kind {self.boundary_kind!r}", field=f"stage.{self.name}")
        if self.nominal_temperature_k <= 0:
            raise ValidationError("nominal temperature must be positive", field=f"stage.{self.name}")


@dataclass(frozen=True)
class CoaxSegment:
    material: str
    length_m: float
    from_stage: str
    to_stage: str
    rf_loss_db: float = 0.0
    geometry: Geometry | None = None

    def __post_init__(self):
        if self.length_m <= 0:
            raise ValidationError("segment length must be > 0", field="segment.length")
        if stage_index(self.from_stage) >= stage_index(self.to_stage):
            raise ValidationError(
                f"segment must run hot to cold, got {self.from_stage} -> {self.to_stage}",
                field="segment",
            )
        if self.rf_loss_db < 0:
            raise ValidationError("segment rf loss must be >= 0 dB", field="segment.rf_loss")


@dataclass(frozen=True)
class Attenuator:
    value_db: float
    stage: str

    def __post_init__(self):
        stage_index(self.stage)
        if not (0.0 <= self.value_db <= 60.0):
            raise ValidationError("attenuator value must lie in [0, 60] dB", field="attenuator")

    def dissipated_fraction(self) -> float:
        return 1.0 - 1.0 / db_to_linear(self.value_db)


@dataclass(frozen=True)
class RfPlan:
    power_at_mxc_w: float
    duty_cycle: float

    def __post_init__(self):
        if self.power_at_mxc_w < 0:
            raise ValidationError("delivered power must be >= 0", field="rf_plan.power_at_mxc")
        if not (0.0 <= self.duty_cycle <= 1.0):
            raise ValidationError("duty cycle must lie in [0, 1]", field="rf_plan.duty_cycle")


@dataclass(frozen=True)
class TransmissionLine:
    role: str  # "control" | "readout"
    count: int
    segments: tuple[CoaxSegment, ...]
    attenuators: tuple[Attenuator, ...] = ()
    rf_plan: RfPlan | None = None
    label: str = ""

    def __post_init__(self):
        if self.role not in ("control", "readout"):
            raise ValidationError(f"bad line role {self.role!r}", field="line.role")
        if self.count < 1:
            raise ValidationError("line count must be >= 1", field="line.count")
        if not self.segments:
            raise ValidationError("line needs at least one segment", field="line.segments")
        for a, b in zip(self.segments, self.segments[1:]):
            if a.to_stage != b.from_stage:
                raise ValidationError(
                    f"segments not contiguous: {a.to_stage} then {b.from_stage}",
                    field="line.segments",
                )
        top = stage_index(self.segments[0].from_stage)
        for att in self.attenuators:
            if stage_index(att.stage) < top:
                raise ValidationError(
                    f"attenuator at {att.stage} sits above the line's first segment",
                    field="line.attenuators",
                )

    @property
    def source_stage(self) -> str:
        return self.segments[0].from_stage

    def stages_touched(self) -> list[str]:
        return [s.to_stage for s in self.segments]


@dataclass(frozen=True)
class OpticalLink:
    count: int
    fiber_from: str
    fiber_to: str
    photodiode_stage: str
    optical_power_w: float
    duty_cycle: float
    fiber_conduction_per_link_w: float = 0.0
    label: str = ""

    def __post_init__(self):
        if self.count < 1:
            raise ValidationError("link count must be >= 1", field="optical.count")
        if self.fiber_from != "RT":
            raise ValidationError("fiber span must start at RT", field="optical.fiber")
        stage_index(self.fiber_to)
        if self.photodiode_stage != self.fiber_to:
            raise ValidationError(
                f"photodiode stage {self.photodiode_stage!r} must equal fiber terminus {self.fiber_to!r}",
                field="optical.photodiode",
            )
        if self.optical_power_w < 0:
            raise ValidationError("optical power must be >= 0", field="optical.power")
        if not (0.0 <= self.duty_cycle <= 1.0):
            raise ValidationError("duty cycle must lie in [0, 1]", field="optical.duty")
        if self.fiber_conduction_per_link_w < 0:
            raise ValidationError("fiber conduction must be >= 0", field="optical.fiber_conduction")


@dataclass
class StageLoads:
    """One flange's load breakdown, W."""

    conductive_w: float = 0.0
    rf_w: float = 0.0
    optical_w: float = 0.0
    static_w: float = 0.0

    @property
    def total_w(self) -> float:
        return self.conductive_w + self.rf_w + self.optical_w + self.static_w

    def add(self, other: "StageLoads") -> None:
        self.conductive_w += other.conductive_w
        self.rf_w += other.rf_w
        self.optical_w += other.optical_w
        self.static_w += other.static_w


def _chain_elements(line: TransmissionLine):
    """Line elements in signal order: attenuators mounted at the source
    flange first, then each segment followed by the attenuators at its
    cold end."""
    atts_by_stage: dict[str, list[Attenuator]] = {}
    for att in line.attenuators:
        atts_by_stage.setdefault(att.stage, []).append(att)
    elements: list[tuple[str, float, str]] = []  # (kind, dB, stage heated)
    for att in atts_by_stage.get(line.source_stage, ()):
        elements.append(("attenuator", att.value_db, att.stage))
    for seg in line.segments:
        if seg.rf_loss_db > 0:
            elements.append(("segment", seg.rf_loss_db, seg.to_stage))
        for att in atts_by_stage.get(seg.to_stage, ()):
            elements.append(("attenuator", att.value_db, att.stage))
    return elements


def required_input_power_w(line: TransmissionLine) -> float:
    """Source power (at the line's hot end, while the drive is on) that
    delivers ``rf_plan.power_at_mxc`` after every attenuator and cable loss."""
    if line.rf_plan is None:
        raise ValidationError("line has no rf_plan", field="line.rf_plan")
    total_db = sum(db for _, db, _ in _chain_elements(line))
    return line.rf_plan.power_at_mxc_w * db_to_linear(total_db)


def rf_dissipation_profile(line: TransmissionLine) -> dict[str, float]:
    """Time-averaged RF heat per stage for the whole line group, W.

    Walks the chain from the source: each attenuator and each lossy
    segment dissipates ``P_in * (1 - 10^(-dB/10))`` at its flange.  All
    contributions scale by duty cycle and line count.  The power still on
    the line after the last element is the delivered power; it is not a
    flange load.
    """
    if line.rf_plan is None:
        raise ValidationError("line has no rf_plan", field="line.rf_plan")
    plan = line.rf_plan
    if plan.duty_cycle == 0.0 and plan.power_at_mxc_w > 0.0:
        # nothing is ever on; an explicit zero map (not an error) keeps
        # duty-cycle sweeps continuous at zero
        return {}
    profile: dict[str, float] = {}
    p = required_input_power_w(line)
    for _, db, stage in _chain_elements(line):
        ratio = db_to_linear(db)
        dissipated = p * (1.0 - 1.0 / ratio)
        p /= ratio
        if dissipated:
            scaled = dissipated * plan.duty_cycle * line.count
            profile[stage] = profile.get(stage, 0.0) + scaled
    return profile


def optical_dissipation(link: OpticalLink) -> dict[str, float]:
    """Per-stage heat from one optical link group, W.

    The photodiode flange absorbs the full delivered optical power
    (count * power * duty) plus the fiber conduction arriving at the
    terminus.  Split is returned as {'optical': at photodiode stage,
    'conductive': fiber} via two dict keys per stage in the summary;
    here we return watts keyed by stage for the optical part only and
    expose the fiber term separately.
    """
    return {link.photodiode_stage: link.count * link.optical_power_w * link.duty_cycle}


def fiber_conduction(link: OpticalLink) -> dict[str, float]:
    if link.fiber_conduction_per_link_w <= 0:
        return {}
    return {link.fiber_to: link.count * link.fiber_conduction_per_link_w}


def stage_load_summary(
    lines: list[TransmissionLine],
    links: list[OpticalLink],
    temps: dict[str, float],
    materials: MaterialLibrary,
    static_w: dict[str, float] | None = None,
) -> dict[str, StageLoads]:
    """Sum conduction, RF and optical heat over all wiring at given flange temperatures."""
    order = sorted(temps, key=stage_index)
    for hot, cold in zip(order, order[1:]):
        if temps[hot] <= temps[cold]:
            raise ValidationError(
                f"temperatures must decrease toward MXC ({hot}={temps[hot]} K, {cold}={temps[cold]} K)",
                field="temperatures",
            )
    summary: dict[str, StageLoads] = {s: StageLoads() for s in STAGE_ORDER if s != "RT"}

    for line in lines:
        for seg in line.segments:
            q = conduction_load(seg, temps[seg.from_stage], temps[seg.to_stage], materials)
            summary[seg.to_stage].conductive_w += q * line.count
        if line.rf_plan is not None:
            for stage, watts in rf_dissipation_profile(line).items():
                summary[stage].rf_w += watts

    for link in links:
        for stage, watts in optical_dissipation(link).items():
            summary[stage].optical_w += watts
        for stage, watts in fiber_conduction(link).items():
            summary[stage].conductive_w += watts

    for stage, watts in (static_w or {}).items():
        if stage != "RT":
            summary[stage].static_w += watts
    return summary
