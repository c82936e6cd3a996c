"""Steady-state solve of the staged thermal network.

Loads depend on the flange temperature vector (conduction follows the
neighbour gradients), capacities on each flange's own temperature, so
the equilibrium is found by sweeping the capacity-limited stages hot to
cold, root-solving ``capacity(T) - load(T) = 0`` per stage within the
capacity table's validity range, and iterating sweeps until every
residual is below tolerance.  Sweeps take the full per-stage step while
the worst residual keeps shrinking and fall back to 0.5 relative
damping when it does not; networks with monotone loads converge in a
handful of sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from scipy.optimize import brentq

from .capacity import CapacityModel
from .errors import CapacityExceededError, ConvergenceError, SolverError
from .materials import MaterialLibrary
from .thermal import STAGE_ORDER, StageLoads, stage_index, stage_load_summary

DEFAULT_TOLERANCE_W = 1e-5
DEFAULT_MAX_ITERATIONS = 200
FALLBACK_DAMPING = 0.5


@dataclass
class StageReport:
    conductive_w: float
    rf_w: float
    optical_w: float
    static_w: float
    total_w: float
    solved_temperature_k: float


@dataclass
class Convergence:
    iterations: int
    residual_w: float
    tolerance_w: float


@dataclass
class ThermalReport:
    stages: dict[str, StageReport]
    still_heater_required_w: float
    convergence: Convergence
    temperatures_k: dict[str, float] = field(default_factory=dict)

    def ordered_stages(self) -> list[str]:
        return [s for s in STAGE_ORDER if s in self.stages or s == "RT"]


def solve_steady_state(
    scenario,
    capacity: CapacityModel,
    materials: MaterialLibrary,
    tolerance_w: float = DEFAULT_TOLERANCE_W,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> ThermalReport:
    """Solve flange temperatures for a wiring scenario.

    Fixed-temperature stages stay at their boundary value; the still
    heater tops the still up to its set point, and the report carries the
    heater power needed to hold the configured molar flow.
    """
    temps: dict[str, float] = {}
    fixed: dict[str, bool] = {}
    for name, stage in scenario.stages.items():
        temps[name] = stage.nominal_temperature_k
        fixed[name] = stage.boundary_kind == "fixed_temperature"
    solve_stages = [s for s in STAGE_ORDER if not fixed.get(s, False)]

    def loads_at(t: dict[str, float]) -> dict[str, StageLoads]:
        return stage_load_summary(
            scenario.transmission_lines, scenario.optical_links, t, materials,
            static_w=scenario.environment_w,
        )

    def residuals(t: dict[str, float]) -> dict[str, float]:
        loads = loads_at(t)
        return {s: abs(capacity.capacity_w(s, t) - loads[s].total_w) for s in solve_stages}

    prev_worst = float("inf")
    damping = 1.0
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        for stage in solve_stages:
            t_lo, t_hi = capacity.temperature_bracket(stage)
            # keep the bracket inside the neighbouring stage temperatures
            hotter = [temps[s] for s in STAGE_ORDER if stage_index(s) < stage_index(stage)]
            colder = [temps[s] for s in STAGE_ORDER if stage_index(s) > stage_index(stage) and s in temps]
            if hotter:
                t_hi = min(t_hi, min(hotter) * 0.999999)
            if colder:
                t_lo = max(t_lo, max(colder) * 1.000001)
            if t_lo >= t_hi:
                raise SolverError(f"{stage}: empty temperature bracket [{t_lo}, {t_hi}]")

            def gap(t: float, stage=stage) -> float:
                trial = dict(temps)
                trial[stage] = t
                loads = loads_at(trial)
                return capacity.capacity_w(stage, trial) - loads[stage].total_w

            g_hi = gap(t_hi)
            if g_hi < 0.0:
                trial = dict(temps)
                trial[stage] = t_hi
                raise CapacityExceededError(
                    stage,
                    loads_at(trial)[stage].total_w,
                    capacity.capacity_w(stage, trial),
                )
            g_lo = gap(t_lo)
            if g_lo >= 0.0:
                root = t_lo  # capacity exceeds load over the whole range: clamp at range floor
            else:
                root = brentq(gap, t_lo, t_hi, xtol=1e-9, rtol=1e-12)
            temps[stage] = temps[stage] + damping * (root - temps[stage])

        res = residuals(temps)
        worst = max(res.values()) if res else 0.0
        if worst < tolerance_w:
            break
        damping = 1.0 if worst < prev_worst else FALLBACK_DAMPING
        prev_worst = worst
    else:
        raise ConvergenceError(
            f"no convergence after {max_iterations} sweeps (worst residual {worst:.3g} W)",
            residuals=res, iterations=max_iterations,
        )

    order = [s for s in STAGE_ORDER if s in temps]
    for hot, cold in zip(order, order[1:]):
        if temps[hot] <= temps[cold]:
            raise SolverError(
                f"solved temperatures not ordered: {hot}={temps[hot]:.6g} K <= {cold}={temps[cold]:.6g} K"
            )

    loads = loads_at(temps)
    still_load = loads["Still"].total_w
    still_cooling = capacity.still.cooling_w()
    heater = still_cooling - still_load
    if heater < 0.0:
        raise CapacityExceededError("Still", still_load, still_cooling)

    res = residuals(temps)
    stages = {
        s: StageReport(
            conductive_w=loads[s].conductive_w,
            rf_w=loads[s].rf_w,
            optical_w=loads[s].optical_w,
            static_w=loads[s].static_w,
            total_w=loads[s].total_w,
            solved_temperature_k=temps[s],
        )
        for s in loads
    }
    return ThermalReport(
        stages=stages,
        still_heater_required_w=heater,
        convergence=Convergence(
            iterations=iterations,
            residual_w=max(res.values()) if res else 0.0,
            tolerance_w=tolerance_w,
        ),
        temperatures_k=dict(temps),
    )
