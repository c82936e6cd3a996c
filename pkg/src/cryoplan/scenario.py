"""Scenario documents: parsing, validation, content hashing, overrides.

One scenario is a single structured-text file.  Every physical value
carries an explicit unit suffix and is parsed against the dimension the
field expects.  Validation reports the offending field path; parse
problems report line numbers.  The content hash is taken over the
canonicalised parsed form, so reordering sections or keys does not
change the hash.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace

from .errors import ParseError, ValidationError
from .materials import MaterialLibrary
from .noise import NoiseChain, NoiseElement
from .thermal import (
    Attenuator,
    CoaxSegment,
    OpticalLink,
    RfPlan,
    Stage,
    TransmissionLine,
    stage_index,
)
from .units import parse_quantity

DEFAULT_STAGES = {
    "RT": Stage("RT", 295.0, "fixed_temperature"),
    "Flange50K": Stage("Flange50K", 40.0, "capacity_limited"),
    "Flange4K": Stage("Flange4K", 3.5, "capacity_limited"),
    "Still": Stage("Still", 1.4, "fixed_temperature"),
    "CP": Stage("CP", 0.15, "capacity_limited"),
    "MXC": Stage("MXC", 0.02, "capacity_limited"),
}


@dataclass(frozen=True)
class NoiseChainSpec:
    chain: NoiseChain
    source_temperature_k: float | None = None
    target_temperature_k: float | None = None


@dataclass
class Scenario:
    name: str
    stages: dict[str, Stage]
    transmission_lines: list[TransmissionLine]
    optical_links: list[OpticalLink]
    capacity_ref: str
    noise_chains: dict[str, NoiseChainSpec] = field(default_factory=dict)
    environment_w: dict[str, float] = field(default_factory=dict)
    provenance: str = ""
    assumptions: list[str] = field(default_factory=list)

    def content_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.canonical_dict(), sort_keys=True, separators=(",", ":")).encode()
        ).hexdigest()

    def canonical_dict(self) -> dict:
        def seg(s: CoaxSegment):
            d = {
                "material": s.material, "length_m": s.length_m,
                "from": s.from_stage, "to": s.to_stage, "rf_loss_db": s.rf_loss_db,
            }
            if s.geometry is not None:
                d["geometry_m2"] = [s.geometry.outer_m2, s.geometry.inner_m2, s.geometry.dielectric_m2]
            return d

        return {
            "name": self.name,
            "stages": {
                n: {"temperature_k": st.nominal_temperature_k, "boundary": st.boundary_kind}
                for n, st in sorted(self.stages.items())
            },
            "lines": [
                {
                    "role": ln.role, "label": ln.label, "count": ln.count,
                    "segments": [seg(s) for s in ln.segments],
                    "attenuators": sorted(
                        [{"db": a.value_db, "stage": a.stage} for a in ln.attenuators],
                        key=lambda d: (stage_index(d["stage"]), d["db"]),
                    ),
                    "rf_plan": None if ln.rf_plan is None else {
                        "power_at_mxc_w": ln.rf_plan.power_at_mxc_w,
                        "duty_cycle": ln.rf_plan.duty_cycle,
                    },
                }
                for ln in sorted(self.transmission_lines, key=lambda l: (l.role, l.label))
            ],
            "optical": [
                {
                    "label": ol.label, "count": ol.count, "fiber_to": ol.fiber_to,
                    "photodiode_stage": ol.photodiode_stage,
                    "optical_power_w": ol.optical_power_w, "duty_cycle": ol.duty_cycle,
                    "fiber_conduction_per_link_w": ol.fiber_conduction_per_link_w,
                }
                for ol in sorted(self.optical_links, key=lambda o: o.label)
            ],
            "capacity_ref": self.capacity_ref,
            "environment_w": dict(sorted(self.environment_w.items())),
            "noise_chains": {
                name: {
                    "frequency_hz": spec.chain.frequency_hz,
                    "elements": [
                        {"label": e.label, "db": e.attenuation_db, "temperature_k": e.temperature_k,
                         "assumed": e.assumed}
                        for e in spec.chain.elements
                    ],
                    "source_temperature_k": spec.source_temperature_k,
                    "target_temperature_k": spec.target_temperature_k,
                }
                for name, spec in sorted(self.noise_chains.items())
            },
        }


_SECTION_RE = re.compile(r"^\[([a-z_]+)(?:\s+(.*?))?\]$")


def parse_scenario_text(text: str, materials: MaterialLibrary, path: str = "<inline>") -> Scenario:
    """Parse and fully validate one scenario document."""
    lines = text.splitlines()
    if not any(l.strip() and not l.strip().startswith("#") for l in lines):
        raise ParseError("empty scenario document", path=path)

    name = None
    provenance: list[str] = []
    capacity_ref = None
    stages = dict(DEFAULT_STAGES)
    overridden: set[str] = set()
    env: dict[str, float] = {}
    tlines: list[TransmissionLine] = []
    links: list[OpticalLink] = []
    chains: dict[str, NoiseChainSpec] = {}
    assumptions: list[str] = []

    section = None      # (kind, argument)
    acc: dict = {}

    def flag(msg: str) -> None:
        if msg not in assumptions:
            assumptions.append(msg)

    def close_section(lineno: int) -> None:
        nonlocal section
        if section is None:
            return
        kind, arg = section
        if kind == "stage":
            pass  # handled inline
        elif kind == "line":
            tlines.append(_build_line(arg, acc, materials, flag, lineno, path))
        elif kind == "optical":
            links.append(_build_optical(arg, acc, flag, lineno, path))
        elif kind == "noise_chain":
            chains[arg] = _build_chain(arg, acc, lineno, path)
        elif kind == "environment":
            pass
        section = None

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION_RE.match(line)
        if m:
            close_section(lineno)
            kind, arg = m.group(1), (m.group(2) or "").strip()
            if kind not in ("stage", "environment", "line", "optical", "noise_chain"):
                raise ParseError(f"unknown section [{kind}]", line=lineno, path=path)
            if kind in ("stage", "line", "noise_chain") and not arg:
                raise ParseError(f"[{kind}] needs a name argument", line=lineno, path=path)
            if kind == "stage":
                if arg in overridden:
                    raise ValidationError("more than one boundary override", field=f"stage.{arg}")
                overridden.add(arg)
            if kind == "noise_chain" and arg in chains:
                raise ValidationError("duplicate noise chain name", field=f"noise_chain.{arg}")
            section = (kind, arg)
            acc = {"_items": []}
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: value', got {line!r}", line=lineno, path=path)
        key, _, val = line.partition(":")
        key, val = key.strip(), val.strip()

        if section is None:
            if key == "scenario":
                name = val
            elif key == "provenance":
                provenance.append(val)
            elif key == "capacity":
                capacity_ref = val
            elif key == "title":
                provenance.insert(0, val)
            else:
                raise ParseError(f"unknown top-level key {key!r}", line=lineno, path=path)
            continue

        kind, arg = section
        if kind == "stage":
            if key != "boundary":
                raise ParseError(f"unknown stage key {key!r}", line=lineno, path=path)
            stages[arg] = _parse_boundary(arg, val, lineno, path)
        elif kind == "environment":
            stage_index(key)
            env[key] = parse_quantity(val, "power", field=f"environment.{key}", line=lineno)
        else:
            acc.setdefault(key, []).append((lineno, val))
            acc["_items"].append((key, lineno, val))
    close_section(len(lines) + 1)

    if name is None:
        raise ParseError("missing 'scenario:' name", path=path)
    if capacity_ref is None:
        raise ParseError("missing 'capacity:' reference", path=path)

    scenario = Scenario(
        name=name,
        stages=stages,
        transmission_lines=tlines,
        optical_links=links,
        capacity_ref=capacity_ref,
        noise_chains=chains,
        environment_w=env,
        provenance="\n".join(provenance),
        assumptions=assumptions,
    )
    _validate(scenario)
    return scenario


def _parse_boundary(stage_name: str, val: str, lineno: int, path: str) -> Stage:
    parts = val.split(None, 1)
    if parts[0] == "fixed" and len(parts) == 2:
        t = parse_quantity(parts[1], "temperature", field=f"stage.{stage_name}.boundary", line=lineno)
        return Stage(stage_name, t, "fixed_temperature")
    if parts[0] == "capacity_limited":
        base = DEFAULT_STAGES[stage_name].nominal_temperature_k
        return Stage(stage_name, base, "capacity_limited")
    raise ParseError(
        f"boundary must be 'fixed <T K>' or 'capacity_limited', got {val!r}", line=lineno, path=path
    )


def _build_line(label, acc, materials, flag, lineno, path) -> TransmissionLine:
    role = label if label in ("control", "readout") else acc.get("role", [(lineno, "control")])[0][1]
    fieldbase = f"line.{label}"
    count = _single_int(acc, "count", fieldbase, path)
    segments = []
    for i, (ln, val) in enumerate(acc.get("segment", [])):
        segments.append(_parse_segment(val, materials, flag, f"{fieldbase}.segments[{i}]", ln, path, label))
    attens = []
    for ln, val in acc.get("attenuator", []):
        m = re.match(r"^(.+?)\s+at\s+(\w+)$", val)
        if not m:
            raise ParseError(f"attenuator syntax: '<dB> dB at <Stage>', got {val!r}", line=ln, path=path)
        db = parse_quantity(m.group(1), "decibel", field=f"{fieldbase}.attenuators", line=ln)
        attens.append(Attenuator(db, m.group(2)))
    plan = None
    if "rf_plan" in acc:
        ln, val = acc["rf_plan"][0]
        m = re.match(r"^(.+?)\s+at\s+MXC\s*,\s*duty\s+(.+)$", val)
        if not m:
            raise ParseError(
                f"rf_plan syntax: '<P dBm> at MXC, duty <d %>', got {val!r}", line=ln, path=path
            )
        power = parse_quantity(m.group(1), "power", field=f"{fieldbase}.rf_plan.power_at_mxc", line=ln)
        duty = parse_quantity(m.group(2), "fraction", field=f"{fieldbase}.rf_plan.duty_cycle", line=ln)
        if not (0.0 <= duty <= 1.0):
            raise ValidationError(f"duty cycle {duty} outside [0, 1]", field=f"{fieldbase}.rf_plan.duty_cycle")
        plan = RfPlan(power_at_mxc_w=power, duty_cycle=duty)
    try:
        return TransmissionLine(
            role=role, count=count, segments=tuple(segments), attenuators=tuple(attens),
            rf_plan=plan, label=label,
        )
    except ValidationError as exc:
        raise ValidationError(str(exc), field=fieldbase) from None


def _parse_segment(val, materials, flag, fieldpath, lineno, path, line_label) -> CoaxSegment:
    # "<material>, <From> -> <To>, <length m>[, loss <x dB>]"
    parts = [p.strip() for p in val.split(",")]
    if len(parts) < 3:
        raise ParseError(
            f"segment syntax: '<material>, <From> -> <To>, <L m>[, loss <x dB>]', got {val!r}",
            line=lineno, path=path,
        )
    material = parts[0]
    m = re.match(r"^(\w+)\s*->\s*(\w+)$", parts[1])
    if not m:
        raise ParseError(f"bad segment span {parts[1]!r}", line=lineno, path=path)
    length = parse_quantity(parts[2], "length", field=f"{fieldpath}.length", line=lineno)
    loss = 0.0
    for extra in parts[3:]:
        if extra.startswith("loss"):
            loss = parse_quantity(extra[4:].strip(), "decibel", field=f"{fieldpath}.rf_loss", line=lineno)
        else:
            raise ParseError(f"unknown segment option {extra!r}", line=lineno, path=path)
    table = materials.get(material)  # raises MaterialError on unknown ids
    flag(f"line {line_label}: segment geometry defaulted from material table {table.name}")
    return CoaxSegment(
        material=material, length_m=length, from_stage=m.group(1), to_stage=m.group(2),
        rf_loss_db=loss, geometry=None,
    )


def _build_optical(label, acc, flag, lineno, path) -> OpticalLink:
    fieldbase = f"optical.{label or '0'}"
    count = _single_int(acc, "count", fieldbase, path)
    ln, span = _single(acc, "fiber", fieldbase, path)
    m = re.match(r"^RT\s*->\s*(\w+)$", span)
    if not m:
        raise ParseError(f"fiber syntax: 'RT -> <Stage>', got {span!r}", line=ln, path=path)
    fiber_to = m.group(1)
    ln2, pd = _single(acc, "photodiode", fieldbase, path)
    power = parse_quantity(_single(acc, "power", fieldbase, path)[1], "power",
                           field=f"{fieldbase}.optical_power")
    duty = parse_quantity(_single(acc, "duty", fieldbase, path)[1], "fraction",
                          field=f"{fieldbase}.duty_cycle")
    if not (0.0 <= duty <= 1.0):
        raise ValidationError(f"duty cycle {duty} outside [0, 1]", field=f"{fieldbase}.duty_cycle")
    if "fiber_conduction" in acc:
        fiber_w = parse_quantity(acc["fiber_conduction"][0][1], "power",
                                 field=f"{fieldbase}.fiber_conduction")
    else:
        fiber_w = 0.0
        flag(f"optical {label or '0'}: fiber conduction defaulted to 0 W")
    return OpticalLink(
        count=count, fiber_from="RT", fiber_to=fiber_to, photodiode_stage=pd,
        optical_power_w=power, duty_cycle=duty, fiber_conduction_per_link_w=fiber_w,
        label=label,
    )


def _build_chain(name, acc, lineno, path) -> NoiseChainSpec:
    fieldbase = f"noise_chain.{name}"
    freq = parse_quantity(_single(acc, "frequency", fieldbase, path)[1], "frequency",
                          field=f"{fieldbase}.frequency")
    elements = []
    for ln, val in acc.get("element", []):
        parts = [p.strip() for p in val.split(",")]
        if len(parts) not in (3, 4):
            raise ParseError(
                f"element syntax: '<label>, <x dB>, <T K>[, assumed]', got {val!r}", line=ln, path=path
            )
        db = parse_quantity(parts[1], "decibel", field=f"{fieldbase}.element", line=ln)
        temp = parse_quantity(parts[2], "temperature", field=f"{fieldbase}.element", line=ln)
        assumed = len(parts) == 4 and parts[3] == "assumed"
        if len(parts) == 4 and not assumed:
            raise ParseError(f"unknown element option {parts[3]!r}", line=ln, path=path)
        elements.append(NoiseElement(db, temp, label=parts[0], assumed=assumed))
    if not elements:
        raise ValidationError("noise chain has no elements", field=fieldbase)
    source_t = None
    if "source_temperature" in acc:
        source_t = parse_quantity(acc["source_temperature"][0][1], "temperature",
                                  field=f"{fieldbase}.source_temperature")
    target_t = None
    if "target" in acc:
        target_t = parse_quantity(acc["target"][0][1], "temperature", field=f"{fieldbase}.target")
    return NoiseChainSpec(
        chain=NoiseChain(elements=tuple(elements), frequency_hz=freq, name=name),
        source_temperature_k=source_t,
        target_temperature_k=target_t,
    )


def _single(acc, key, fieldbase, path):
    if key not in acc:
        raise ValidationError(f"missing required key {key!r}", field=f"{fieldbase}.{key}")
    if len(acc[key]) > 1:
        raise ValidationError(f"duplicate key {key!r}", field=f"{fieldbase}.{key}")
    return acc[key][0]


def _single_int(acc, key, fieldbase, path) -> int:
    ln, val = _single(acc, key, fieldbase, path)
    try:
        n = int(val)
    except ValueError:
        raise ParseError(f"bad integer {val!r} for {key}", line=ln, path=path) from None
    if n < 1:
        raise ValidationError(f"{key} must be >= 1, got {n}", field=f"{fieldbase}.{key}")
    return n


def _validate(scenario: Scenario) -> None:
    temps = [(stage_index(n), s.nominal_temperature_k) for n, s in scenario.stages.items()]
    temps.sort()
    for (ia, ta), (ib, tb) in zip(temps, temps[1:]):
        if ta <= tb:
            raise ValidationError(
                "nominal stage temperatures must decrease toward MXC", field="stages"
            )
    for link in scenario.optical_links:
        stage_index(link.fiber_to)
    for stage in scenario.environment_w:
        if scenario.environment_w[stage] < 0:
            raise ValidationError("static load must be >= 0", field=f"environment.{stage}")


def assumption_flags(scenario: Scenario) -> list[str]:
    """Every defaulted or assumed value, each exactly once."""
    flags = list(scenario.assumptions)
    for name, spec in sorted(scenario.noise_chains.items()):
        for el in spec.chain.elements:
            if el.assumed:
                msg = (f"noise_chain {name}: element '{el.label}' loss assumed "
                       f"({el.attenuation_db:g} dB at {el.temperature_k:g} K)")
                if msg not in flags:
                    flags.append(msg)
    return flags


@dataclass(frozen=True)
class Overrides:
    """Parameter overrides applied on top of a loaded scenario."""

    control_count: int | None = None
    readout_count: int | None = None
    duty_cycle: float | None = None
    optical_power_w: float | None = None
    optical_duty_cycle: float | None = None
    photodiode_stage: str | None = None
    control_attenuators: tuple[tuple[str, float], ...] | None = None  # (stage, dB)
    power_at_mxc_w: float | None = None


def apply_overrides(scenario: Scenario, ov: Overrides) -> Scenario:
    """Return a new scenario with overrides applied and revalidated."""
    lines = []
    for line in scenario.transmission_lines:
        changed = line
        if ov.control_count is not None and line.role == "control":
            if ov.control_count < 1:
                raise ValidationError("count must be >= 1", field="overrides.control_count")
            changed = replace(changed, count=ov.control_count)
        if ov.readout_count is not None and line.role == "readout":
            if ov.readout_count < 1:
                raise ValidationError("count must be >= 1", field="overrides.readout_count")
            changed = replace(changed, count=ov.readout_count)
        if line.role == "control" and changed.rf_plan is not None:
            plan = changed.rf_plan
            if ov.duty_cycle is not None:
                if not (0.0 <= ov.duty_cycle <= 1.0):
                    raise ValidationError("duty cycle outside [0, 1]", field="overrides.duty_cycle")
                plan = replace(plan, duty_cycle=ov.duty_cycle)
            if ov.power_at_mxc_w is not None:
                plan = replace(plan, power_at_mxc_w=ov.power_at_mxc_w)
            changed = replace(changed, rf_plan=plan)
        if line.role == "control" and ov.control_attenuators is not None:
            attens = tuple(Attenuator(db, stage) for stage, db in ov.control_attenuators)
            changed = replace(changed, attenuators=attens)
        lines.append(changed)

    links = []
    for link in scenario.optical_links:
        changed = link
        if ov.optical_power_w is not None:
            if ov.optical_power_w < 0:
                raise ValidationError("optical power must be >= 0", field="overrides.optical_power")
            changed = replace(changed, optical_power_w=ov.optical_power_w)
        duty = ov.optical_duty_cycle if ov.optical_duty_cycle is not None else ov.duty_cycle
        if duty is not None:
            if not (0.0 <= duty <= 1.0):
                raise ValidationError("duty cycle outside [0, 1]", field="overrides.duty_cycle")
            changed = replace(changed, duty_cycle=duty)
        if ov.photodiode_stage is not None:
            stage_index(ov.photodiode_stage)
            changed = replace(changed, fiber_to=ov.photodiode_stage,
                              photodiode_stage=ov.photodiode_stage)
        links.append(changed)

    out = replace(scenario, transmission_lines=lines, optical_links=links)
    _validate(out)
    return out
