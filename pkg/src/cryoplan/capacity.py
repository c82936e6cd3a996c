"""Cooling-capacity model of the refrigerator.

One capacity file describes the machine: a tabulated two-stage
pulse-tube map (per unit, with multiplicity), the still evaporation
budget at a set molar flow, a power-law cold-plate curve and the
mixing-chamber quadratic balance ``Q = a*ndot*T^2 - b*ndot*T_ex^2``.
Upper-stage tables are net available cooling at the flange, i.e. they
already account for internal parasitics of the integrated system; see
the provenance comments in the shipped file.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError


@dataclass
class PulseTubeMap:
    multiplicity: int
    t50_grid_k: np.ndarray
    t4_grid_k: np.ndarray
    q50_w: np.ndarray  # per pulse tube, shape (len(t50), len(t4))
    q4_w: np.ndarray

    def __post_init__(self):
        for name, grid in (("t50_grid_k", self.t50_grid_k), ("t4_grid_k", self.t4_grid_k)):
            if np.any(np.diff(grid) <= 0):
                raise ValidationError("grid must be strictly increasing", field=f"pulse_tube.{name}")
        if self.q50_w.shape != (self.t50_grid_k.size, self.t4_grid_k.size):
            raise ValidationError("q50 table shape mismatch", field="pulse_tube.q50_w")
        if self.q4_w.shape != self.q50_w.shape:
            raise ValidationError("q4 table shape mismatch", field="pulse_tube.q4_w")

    def _bilinear(self, table: np.ndarray, t50: float, t4: float) -> float:
        x, y = self.t50_grid_k, self.t4_grid_k
        t50 = min(max(t50, x[0]), x[-1])
        t4 = min(max(t4, y[0]), y[-1])
        i = min(int(np.searchsorted(x, t50, side="right")) - 1, x.size - 2)
        j = min(int(np.searchsorted(y, t4, side="right")) - 1, y.size - 2)
        i, j = max(i, 0), max(j, 0)
        fx = (t50 - x[i]) / (x[i + 1] - x[i])
        fy = (t4 - y[j]) / (y[j + 1] - y[j])
        z = (
            table[i, j] * (1 - fx) * (1 - fy)
            + table[i + 1, j] * fx * (1 - fy)
            + table[i, j + 1] * (1 - fx) * fy
            + table[i + 1, j + 1] * fx * fy
        )
        return float(z)

    def q50(self, t50: float, t4: float) -> float:
        return self.multiplicity * self._bilinear(self.q50_w, t50, t4)

    def q4(self, t50: float, t4: float) -> float:
        return self.multiplicity * self._bilinear(self.q4_w, t50, t4)


@dataclass
class StillModel:
    molar_flow_mol_s: float
    heat_of_evaporation_j_mol: float
    temperature_k: float

    def cooling_w(self) -> float:
        return self.molar_flow_mol_s * self.heat_of_evaporation_j_mol


@dataclass
class ColdPlateModel:
    # Q = g * ndot * (T^p - t_base^p)
    g_w_per_molps_kp: float
    exponent: float
    t_base_k: float

    def cooling_w(self, t: float, molar_flow: float) -> float:
        p = self.exponent
        return self.g_w_per_molps_kp * molar_flow * (t ** p - self.t_base_k ** p)

    def temperature_for(self, q_w: float, molar_flow: float) -> float:
        p = self.exponent
        val = q_w / (self.g_w_per_molps_kp * molar_flow) + self.t_base_k ** p
        return val ** (1.0 / p)


@dataclass
class MixingChamberModel:
    # Q = a * ndot * T^2 - b * ndot * t_ex^2
    a_w_per_molps_k2: float
    b_w_per_molps_k2: float
    t_ex_k: float

    def cooling_w(self, t: float, molar_flow: float) -> float:
        return molar_flow * (self.a_w_per_molps_k2 * t * t - self.b_w_per_molps_k2 * self.t_ex_k ** 2)

    def temperature_for(self, q_w: float, molar_flow: float) -> float:
        val = (q_w / molar_flow + self.b_w_per_molps_k2 * self.t_ex_k ** 2) / self.a_w_per_molps_k2
        return math.sqrt(val)


@dataclass
class CapacityModel:
    name: str
    pulse_tube: PulseTubeMap
    still: StillModel
    cold_plate: ColdPlateModel
    mixing_chamber: MixingChamberModel
    provenance: str = ""

    def capacity_w(self, stage: str, temps: dict[str, float]) -> float:
        """Net cooling at `stage` for the given flange temperatures, W."""
        ndot = self.still.molar_flow_mol_s
        if stage == "Flange50K":
            return self.pulse_tube.q50(temps["Flange50K"], temps["Flange4K"])
        if stage == "Flange4K":
            return self.pulse_tube.q4(temps["Flange50K"], temps["Flange4K"])
        if stage == "Still":
            return self.still.cooling_w()
        if stage == "CP":
            return self.cold_plate.cooling_w(temps["CP"], ndot)
        if stage == "MXC":
            return self.mixing_chamber.cooling_w(temps["MXC"], ndot)
        raise ValidationError(f"no capacity model for stage {stage!r}", field="capacity")

    def temperature_bracket(self, stage: str) -> tuple[float, float]:
        """Valid solve range for a capacity-limited stage."""
        if stage == "Flange50K":
            g = self.pulse_tube.t50_grid_k
            return float(g[0]), float(g[-1])
        if stage == "Flange4K":
            g = self.pulse_tube.t4_grid_k
            return float(g[0]), float(g[-1])
        if stage == "CP":
            return self.cold_plate.t_base_k, 1.0
        if stage == "MXC":
            base = self.mixing_chamber.temperature_for(0.0, self.still.molar_flow_mol_s)
            return base, 0.4
        raise ValidationError(f"stage {stage!r} is not capacity limited", field="capacity")


def load_capacity_file(path: str) -> CapacityModel:
    """Parse a sectioned `.capacity` text file (see shipped xld1000s.capacity)."""
    sections: dict[str, dict[str, str]] = {}
    tables: dict[str, list[list[float]]] = {}
    provenance: list[str] = []
    name = os.path.splitext(os.path.basename(path))[0]
    current = None
    current_table = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                provenance.append(line.lstrip("#").strip())
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip()
                sections.setdefault(current, {})
                current_table = None
                continue
            if current is None:
                raise ParseError("content before first [section]", line=lineno, path=path)
            if line.endswith(":") and " " not in line[:-1]:
                current_table = f"{current}.{line[:-1]}"
                tables[current_table] = []
                continue
            if ":" in line:
                key, _, val = line.partition(":")
                sections[current][key.strip()] = val.strip()
                current_table = None
                continue
            if current_table is not None:
                try:
                    tables[current_table].append([float(x) for x in line.split()])
                except ValueError:
                    raise ParseError(f"bad table row {line!r}", line=lineno, path=path) from None
                continue
            raise ParseError(f"unparseable line {line!r}", line=lineno, path=path)

    def need(section: str, key: str) -> str:
        try:
            return sections[section][key]
        except KeyError:
            raise ParseError(f"missing [{section}] {key}", path=path) from None

    pt = sections.get("pulse_tube")
    if pt is None:
        raise ParseError("missing [pulse_tube] section", path=path)
    t50 = np.array([float(x) for x in need("pulse_tube", "t50_grid_k").split()])
    t4 = np.array([float(x) for x in need("pulse_tube", "t4_grid_k").split()])
    q50 = np.array(tables.get("pulse_tube.q50_w", []))
    q4 = np.array(tables.get("pulse_tube.q4_w", []))
    if q50.size == 0 or q4.size == 0:
        raise ParseError("pulse_tube q50_w / q4_w tables missing", path=path)
    ptmap = PulseTubeMap(
        multiplicity=int(need("pulse_tube", "multiplicity")),
        t50_grid_k=t50,
        t4_grid_k=t4,
        q50_w=q50,
        q4_w=q4,
    )
    still = StillModel(
        molar_flow_mol_s=float(need("still", "molar_flow_mol_s")),
        heat_of_evaporation_j_mol=float(need("still", "heat_of_evaporation_j_mol")),
        temperature_k=float(need("still", "temperature_k")),
    )
    if still.molar_flow_mol_s <= 0:
        raise ValidationError("molar flow must be > 0", field="still.molar_flow")
    cp = ColdPlateModel(
        g_w_per_molps_kp=float(need("cp", "g_w_per_molps_kp")),
        exponent=float(need("cp", "exponent")),
        t_base_k=float(need("cp", "t_base_k")),
    )
    mxc = MixingChamberModel(
        a_w_per_molps_k2=float(need("mxc", "a_w_per_molps_k2")),
        b_w_per_molps_k2=float(need("mxc", "b_w_per_molps_k2")),
        t_ex_k=float(need("mxc", "t_ex_k")),
    )
    return CapacityModel(
        name=name, pulse_tube=ptmap, still=still, cold_plate=cp,
        mixing_chamber=mxc, provenance="\n".join(provenance),
    )
