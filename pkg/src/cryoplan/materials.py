"""Tabulated thermal-conductivity data and the coax conduction integral.

Material data ships as human-readable two-column tables (temperature,
effective conductivity of the assembled coax) plus header metadata:
default conductor/dielectric cross sections and, for superconductors,
the critical temperature above which the table already contains
normal-state values.  Conduction between two flanges is
``(A_total / L) * integral(k dT)`` evaluated from the table with
trapezoidal cumulative integration; requests outside the tabulated
range are rejected rather than extrapolated.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import MaterialError, ParseError


@dataclass(frozen=True)
class Geometry:
    """Cross sections of one coax line, m^2."""

    outer_m2: float
    inner_m2: float
    dielectric_m2: float

    @property
    def total_m2(self) -> float:
        return self.outer_m2 + self.inner_m2 + self.dielectric_m2


@dataclass
class MaterialTable:
    name: str
    temperatures_k: np.ndarray          # strictly increasing grid
    conductivity_w_mk: np.ndarray       # effective assembly k(T)
    default_geometry: Geometry
    critical_temperature_k: float | None = None
    provenance: str = ""
    _cum: np.ndarray = field(default=None, repr=False)  # cumulative integral of k dT

    def __post_init__(self):
        t = np.asarray(self.temperatures_k, dtype=float)
        k = np.asarray(self.conductivity_w_mk, dtype=float)
        if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0):
            raise MaterialError(f"{self.name}: temperature grid must be strictly increasing")
        if np.any(k < 0):
            raise MaterialError(f"{self.name}: negative conductivity in table")
        self.temperatures_k = t
        self.conductivity_w_mk = k
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (k[1:] + k[:-1]) * np.diff(t))])
        self._cum = cum

    @property
    def t_min(self) -> float:
        return float(self.temperatures_k[0])

    @property
    def t_max(self) -> float:
        return float(self.temperatures_k[-1])

    def conductivity(self, t: float) -> float:
        self._check_range(t)
        return float(np.interp(t, self.temperatures_k, self.conductivity_w_mk))

    def integral(self, t_cold: float, t_hot: float) -> float:
        """integral of k(T) dT from t_cold to t_hot, W/m."""
        if t_hot < t_cold:
            raise MaterialError(f"{self.name}: integral bounds reversed ({t_cold} > {t_hot})")
        self._check_range(t_cold)
        self._check_range(t_hot)
        return self._cum_at(t_hot) - self._cum_at(t_cold)

    def _cum_at(self, t: float) -> float:
        grid = self.temperatures_k
        i = int(np.searchsorted(grid, t, side="right")) - 1
        i = min(max(i, 0), grid.size - 2)
        t0, t1 = grid[i], grid[i + 1]
        k0, k1 = self.conductivity_w_mk[i], self.conductivity_w_mk[i + 1]
        # exact trapezoid of the linear interpolant on the partial cell
        dt = t - t0
        kt = k0 + (k1 - k0) * dt / (t1 - t0)
        return float(self._cum[i] + 0.5 * (k0 + kt) * dt)

    def _check_range(self, t: float) -> None:
        if not (self.t_min <= t <= self.t_max):
            raise MaterialError(
                f"{self.name}: temperature {t:.6g} K outside tabulated range "
                f"[{self.t_min:.6g}, {self.t_max:.6g}] K (no silent extrapolation)"
            )


class MaterialLibrary:
    """All material tables found in one data directory."""

    def __init__(self, tables: dict[str, MaterialTable]):
        self._tables = dict(tables)

    @classmethod
    def load(cls, data_dir: str) -> "MaterialLibrary":
        mat_dir = os.path.join(data_dir, "materials")
        tables = {}
        if not os.path.isdir(mat_dir):
            raise MaterialError(f"material data directory not found: {mat_dir}")
        for fn in sorted(os.listdir(mat_dir)):
            if fn.endswith(".dat"):
                table = load_material_file(os.path.join(mat_dir, fn))
                tables[table.name] = table
        if not tables:
            raise MaterialError(f"no material tables (*.dat) in {mat_dir}")
        return cls(tables)

    def names(self) -> list[str]:
        return sorted(self._tables)

    def get(self, name: str) -> MaterialTable:
        try:
            return self._tables[name]
        except KeyError:
            raise MaterialError(
                f"unknown material id {name!r} (known: {', '.join(sorted(self._tables))})"
            ) from None


def load_material_file(path: str) -> MaterialTable:
    """Parse one `.dat` table.

    Header lines start with '#'; recognised keys (``# key: value``):
    material, outer_area_m2, inner_area_m2, dielectric_area_m2,
    critical_temperature_k.  Remaining '#' lines are provenance comments.
    Data rows: ``T[K]  k[W/m/K]``.
    """
    name = None
    areas = {"outer_area_m2": None, "inner_area_m2": None, "dielectric_area_m2": None}
    tc = None
    provenance: list[str] = []
    ts: list[float] = []
    ks: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if ":" in body:
                    key, _, val = body.partition(":")
                    key = key.strip().lower()
                    val = val.strip()
                    if key == "material":
                        name = val
                        continue
                    if key in areas:
                        areas[key] = float(val)
                        continue
                    if key == "critical_temperature_k":
                        tc = float(val)
                        continue
                provenance.append(body)
                continue
            cols = line.split()
            if len(cols) != 2:
                raise ParseError("expected two columns: T[K] k[W/m/K]", line=lineno, path=path)
            try:
                ts.append(float(cols[0]))
                ks.append(float(cols[1]))
            except ValueError:
                raise ParseError(f"bad numeric row {line!r}", line=lineno, path=path) from None
    if name is None:
        raise ParseError("missing '# material:' header", path=path)
    if any(v is None for v in areas.values()):
        raise ParseError("missing cross-section headers (outer/inner/dielectric_area_m2)", path=path)
    geometry = Geometry(areas["outer_area_m2"], areas["inner_area_m2"], areas["dielectric_area_m2"])
    return MaterialTable(
        name=name,
        temperatures_k=np.array(ts),
        conductivity_w_mk=np.array(ks),
        default_geometry=geometry,
        critical_temperature_k=tc,
        provenance="\n".join(provenance),
    )


def conduction_load(segment, t_hot: float, t_cold: float, materials: MaterialLibrary) -> float:
    """Steady conduction through one coax segment, W.

    Returns ``(A_total / L) * integral_{t_cold}^{t_hot} k(T) dT``.
    Zero exactly when t_hot == t_cold.
    """
    if t_cold <= 0 or t_hot <= 0:
        raise MaterialError("temperatures must be positive")
    if t_hot < t_cold:
        raise MaterialError(f"t_hot {t_hot} K below t_cold {t_cold} K")
    table = materials.get(segment.material)
    if t_hot == t_cold:
        return 0.0
    geom = segment.geometry or table.default_geometry
    return geom.total_m2 / segment.length_m * table.integral(t_cold, t_hot)
