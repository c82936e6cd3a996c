import pytest

from cryoplan.errors import MaterialError, ParseError, ScenarioError, ValidationError
from cryoplan.scenario import Overrides, apply_overrides, assumption_flags, parse_scenario_text

MINIMAL = """scenario: test
capacity: xld1000s.capacity

[line control]
count: 2
rf_plan: -63 dBm at MXC, duty 33 %
segment: SCuNi_086, Still -> CP, 0.22 m, loss 1.1 dB
segment: SCuNi_086, CP -> MXC, 0.22 m
attenuator: 10 dB at CP
attenuator: 20 dB at MXC

[optical feed]
count: 2
fiber: RT -> Still
photodiode: Still
power: 50 uW
duty: 33 %
fiber_conduction: 0.05 uW
"""


def test_bundled_all_coax_counts_and_attenuators(data):
    sc = data.load_scenario("all_coax")
    control = next(l for l in sc.transmission_lines if l.role == "control")
    readout = next(l for l in sc.transmission_lines if l.role == "readout")
    assert control.count == 840
    assert readout.count == 168
    assert sorted((a.stage, a.value_db) for a in control.attenuators) == [
        ("CP", 20.0), ("Flange4K", 20.0), ("MXC", 20.0)]
    assert control.rf_plan.duty_cycle == pytest.approx(0.33)
    assert control.rf_plan.power_at_mxc_w == pytest.approx(1e-3 * 10 ** (-6.3), rel=1e-12)
    assert sc.stages["Still"].boundary_kind == "fixed_temperature"
    assert sc.stages["Still"].nominal_temperature_k == 1.4


def test_empty_document_is_parse_error(materials):
    with pytest.raises(ParseError, match="empty scenario"):
        parse_scenario_text("\n\n# only a comment\n", materials)


def test_bad_duty_cycle_names_field(materials):
    text = MINIMAL.replace("duty: 33 %", "duty: 150 %")
    with pytest.raises(ValidationError, match="duty_cycle"):
        parse_scenario_text(text, materials)


def test_bad_rf_duty_names_field(materials):
    text = MINIMAL.replace("duty 33 %", "duty 150 %")
    with pytest.raises(ValidationError, match="rf_plan.duty_cycle"):
        parse_scenario_text(text, materials)


def test_unknown_material_rejected_at_load(materials):
    text = MINIMAL.replace("SCuNi_086, Still -> CP", "Mystery_086, Still -> CP")
    with pytest.raises(MaterialError, match="unknown material"):
        parse_scenario_text(text, materials)


def test_parse_error_carries_line_number(materials):
    text = MINIMAL + "\n[line broken]\ncount: not_a_number\n"
    with pytest.raises(ParseError) as err:
        parse_scenario_text(text, materials)
    assert err.value.line > 0


def test_wrong_unit_dimension_rejected(materials):
    text = MINIMAL.replace("power: 50 uW", "power: 50 mK")
    with pytest.raises(ParseError, match="dimension"):
        parse_scenario_text(text, materials)


def test_duplicate_stage_override_rejected(materials):
    text = MINIMAL + "\n[stage Still]\nboundary: fixed 1.3 K\n[stage Still]\nboundary: fixed 1.2 K\n"
    with pytest.raises(ValidationError, match="boundary override"):
        parse_scenario_text(text, materials)


def test_hash_invariant_under_reordering(materials):
    sc1 = parse_scenario_text(MINIMAL, materials)
    # swap section order and move keys around
    reordered = """scenario: test
capacity: xld1000s.capacity

[optical feed]
duty: 33 %
power: 50 uW
photodiode: Still
fiber: RT -> Still
fiber_conduction: 0.05 uW
count: 2

[line control]
count: 2
segment: SCuNi_086, Still -> CP, 0.22 m, loss 1.1 dB
segment: SCuNi_086, CP -> MXC, 0.22 m
attenuator: 20 dB at MXC
attenuator: 10 dB at CP
rf_plan: -63 dBm at MXC, duty 33 %
"""
    sc2 = parse_scenario_text(reordered, materials)
    assert sc1.content_hash() == sc2.content_hash()


def test_hash_changes_with_content(materials):
    sc1 = parse_scenario_text(MINIMAL, materials)
    sc2 = parse_scenario_text(MINIMAL.replace("count: 2", "count: 3", 1), materials)
    assert sc1.content_hash() != sc2.content_hash()


def test_assumption_flags_unique(data):
    sc = data.load_scenario("experiment_ld400")
    flags = assumption_flags(sc)
    assert len(flags) == len(set(flags))
    assert any("IRF" in f for f in flags)
    assert any("LPF" in f for f in flags)
    # defaulted geometry flagged once per line/material, not per segment
    geometry_flags = [f for f in flags if "geometry defaulted" in f]
    assert len(geometry_flags) == len(set(geometry_flags))


def test_overrides_change_counts_and_duty(data):
    sc = data.load_scenario("optical_coax_sc")
    out = apply_overrides(sc, Overrides(control_count=100, duty_cycle=0.10,
                                        optical_power_w=25e-6))
    control = next(l for l in out.transmission_lines if l.role == "control")
    assert control.count == 100
    assert control.rf_plan.duty_cycle == 0.10
    assert out.optical_links[0].duty_cycle == 0.10
    assert out.optical_links[0].optical_power_w == 25e-6
    # original untouched
    assert next(l for l in sc.transmission_lines if l.role == "control").count == 840


def test_overrides_validate(data):
    sc = data.load_scenario("optical_coax_sc")
    with pytest.raises(ValidationError, match="duty"):
        apply_overrides(sc, Overrides(duty_cycle=1.5))
    with pytest.raises(ValidationError, match="count"):
        apply_overrides(sc, Overrides(control_count=0))


def test_override_photodiode_stage(data):
    sc = data.load_scenario("optical_coax_sc")
    out = apply_overrides(sc, Overrides(photodiode_stage="Flange4K"))
    assert out.optical_links[0].photodiode_stage == "Flange4K"
    assert out.optical_links[0].fiber_to == "Flange4K"


def test_unknown_scenario_name(data):
    with pytest.raises(ScenarioError, match="not found"):
        data.load_scenario("does_not_exist")
