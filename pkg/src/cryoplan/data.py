"""Runtime data context: material tables, capacity models, bundled scenarios.

The packaged ``cryoplan/data`` directory ships defaults; ``--data-dir``
or the CRYOPLAN_DATA_DIR environment variable point at an alternative
tree with the same layout (materials/, capacity/, scenarios/).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

from .capacity import CapacityModel, load_capacity_file
from .errors import ScenarioError
from .materials import MaterialLibrary
from .scenario import Scenario, parse_scenario_text

ENV_DATA_DIR = "CRYOPLAN_DATA_DIR"


def default_data_dir() -> str:
    return str(resources.files("cryoplan").joinpath("data"))


def resolve_data_dir(override: str | None = None) -> str:
    path = override or os.environ.get(ENV_DATA_DIR) or default_data_dir()
    if not os.path.isdir(path):
        raise ScenarioError(f"data directory not found: {path}")
    return path


@dataclass
class DataContext:
    data_dir: str
    materials: MaterialLibrary

    @classmethod
    def open(cls, data_dir: str | None = None) -> "DataContext":
        path = resolve_data_dir(data_dir)
        return cls(data_dir=path, materials=MaterialLibrary.load(path))

    def capacity(self, ref: str) -> CapacityModel:
        path = os.path.join(self.data_dir, "capacity", ref)
        if not os.path.isfile(path):
            raise ScenarioError(f"capacity file not found: {path}")
        return load_capacity_file(path)

    def scenario_dir(self) -> str:
        return os.path.join(self.data_dir, "scenarios")

    def list_scenarios(self) -> list[str]:
        sdir = self.scenario_dir()
        if not os.path.isdir(sdir):
            return []
        return sorted(
            os.path.splitext(fn)[0] for fn in os.listdir(sdir) if fn.endswith(".scenario")
        )

    def load_scenario(self, name_or_path: str) -> Scenario:
        """Load by bundled name or by explicit file path."""
        if os.path.isfile(name_or_path):
            path = name_or_path
        else:
            path = os.path.join(self.scenario_dir(), f"{name_or_path}.scenario")
            if not os.path.isfile(path):
                raise ScenarioError(
                    f"scenario {name_or_path!r} not found "
                    f"(no such file and not bundled; bundled: {', '.join(self.list_scenarios())})"
                )
        with open(path, "r", encoding="utf-8") as fh:
            return parse_scenario_text(fh.read(), self.materials, path=path)

    def parse_scenario(self, text: str, label: str = "<inline>") -> Scenario:
        return parse_scenario_text(text, self.materials, path=label)
