import numpy as np
import pytest

from cryoplan.errors import CapacityExceededError
from cryoplan.scenario import Overrides, apply_overrides, parse_scenario_text
from cryoplan.solver import solve_steady_state
from cryoplan.thermal import STAGE_ORDER

EMPTY = """scenario: empty
capacity: xld1000s.capacity

[line readout]
count: 1
segment: NbTi_086, CP -> MXC, 0.22 m
"""
# a single unheated NbTi stub is the closest valid thing to "no wiring";
# its conduction at the no-load points is ~1e-13 W


def test_no_load_fixed_points(data, capacity):
    sc = parse_scenario_text(EMPTY, data.materials)
    report = solve_steady_state(sc, capacity, data.materials)
    assert report.convergence.iterations <= 2
    temps = report.temperatures_k
    # the no-load points of the shipped capacity curves
    assert temps["Flange50K"] == pytest.approx(34.689, abs=0.02)
    assert temps["Flange4K"] == pytest.approx(2.7223, abs=0.002)
    assert temps["Still"] == 1.4
    assert temps["CP"] == pytest.approx(0.09042, abs=2e-4)
    assert temps["MXC"] == pytest.approx(
        np.sqrt(capacity.mixing_chamber.b_w_per_molps_k2 * capacity.mixing_chamber.t_ex_k ** 2
                / capacity.mixing_chamber.a_w_per_molps_k2), rel=1e-3)


def test_converged_residuals_below_tolerance(data, capacity):
    for name in ("all_coax", "optical_coax_normal", "optical_coax_sc", "optical_coax_sc_4k"):
        sc = data.load_scenario(name)
        report = solve_steady_state(sc, capacity, data.materials)
        assert report.convergence.residual_w < report.convergence.tolerance_w
        assert report.convergence.residual_w < 10e-6


def test_temperatures_strictly_ordered(data, capacity):
    sc = data.load_scenario("all_coax")
    report = solve_steady_state(sc, capacity, data.materials)
    temps = [295.0] + [report.stages[s].solved_temperature_k for s in STAGE_ORDER if s != "RT"]
    assert all(a > b for a, b in zip(temps, temps[1:]))


def test_total_is_sum_of_components(data, capacity):
    report = solve_steady_state(data.load_scenario("optical_coax_normal"), capacity, data.materials)
    for stage, rep in report.stages.items():
        assert rep.total_w == pytest.approx(
            rep.conductive_w + rep.rf_w + rep.optical_w + rep.static_w, rel=1e-12)


def test_still_heater_reported(data, capacity):
    report = solve_steady_state(data.load_scenario("all_coax"), capacity, data.materials)
    assert report.still_heater_required_w == pytest.approx(0.080, rel=0.02)
    report2 = solve_steady_state(data.load_scenario("optical_coax_sc"), capacity, data.materials)
    # the photodiode heat displaces heater power one for one
    assert report2.still_heater_required_w < report.still_heater_required_w - 0.010


def test_optical_still_increase_tracks_photodiode_term(data, capacity):
    # switching from all-coax to the optical feed raises the still row by
    # roughly the photodiode dissipation (13.86 mW), offset by the coax
    # conduction the optical wiring removes (~2.8 mW)
    all_coax = solve_steady_state(data.load_scenario("all_coax"), capacity, data.materials)
    optical = solve_steady_state(data.load_scenario("optical_coax_normal"), capacity, data.materials)
    delta = optical.stages["Still"].total_w - all_coax.stages["Still"].total_w
    assert delta == pytest.approx(13.86e-3, rel=0.25)
    assert optical.stages["Still"].optical_w == pytest.approx(13.86e-3, rel=1e-9)


def test_capacity_exceeded_is_distinct_error(data, capacity):
    sc = data.load_scenario("all_coax")
    sc = apply_overrides(sc, Overrides(control_count=200000))
    with pytest.raises(CapacityExceededError) as err:
        solve_steady_state(sc, capacity, data.materials)
    assert err.value.stage in STAGE_ORDER
    assert err.value.load_w > err.value.max_capacity_w


def test_still_capacity_exceeded(data, capacity):
    sc = data.load_scenario("optical_coax_sc")
    # still cooling budget is ~83 mW; 3 mW per photodiode blows it
    sc = apply_overrides(sc, Overrides(optical_power_w=3e-3, duty_cycle=0.33))
    with pytest.raises(CapacityExceededError) as err:
        solve_steady_state(sc, capacity, data.materials)
    assert err.value.stage == "Still"


def test_solver_deterministic(data, capacity):
    sc = data.load_scenario("optical_coax_sc")
    r1 = solve_steady_state(sc, capacity, data.materials)
    r2 = solve_steady_state(sc, capacity, data.materials)
    for stage in r1.stages:
        assert r1.stages[stage].solved_temperature_k == r2.stages[stage].solved_temperature_k
        assert r1.stages[stage].total_w == r2.stages[stage].total_w


def test_randomized_scenarios_converge_ordered(data, capacity):
    # smaller sweep here; the acceptance suite runs the full 100
    rng = np.random.default_rng(5)
    sc0 = data.load_scenario("optical_coax_normal")
    for _ in range(20):
        ov = Overrides(
            control_count=int(rng.integers(1, 1200)),
            readout_count=int(rng.integers(1, 400)),
            duty_cycle=float(rng.uniform(0.0, 1.0)),
            optical_power_w=float(rng.uniform(0.0, 100e-6)),
        )
        report = solve_steady_state(apply_overrides(sc0, ov), capacity, data.materials)
        temps = [295.0] + [report.stages[s].solved_temperature_k
                           for s in STAGE_ORDER if s != "RT"]
        assert all(a > b for a, b in zip(temps, temps[1:]))
        assert report.convergence.residual_w < 10e-6
