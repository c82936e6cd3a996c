"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator


class AttenuatorSpec(BaseModel):
    stage: str
    db: float = Field(ge=0, le=60)


class SolveOverrides(BaseModel):
    """Parameter overrides applied on top of the selected scenario."""

    control_count: int | None = Field(default=None, ge=1)
    readout_count: int | None = Field(default=None, ge=1)
    duty_cycle: float | None = Field(default=None, ge=0.0, le=1.0)
    optical_power_uw: float | None = Field(default=None, ge=0.0)
    photodiode_stage: str | None = None
    control_attenuators: list[AttenuatorSpec] | None = None
    power_at_mxc_dbm: float | None = None


class SolveRequest(BaseModel):
    scenario: str | None = None       # bundled scenario name
    scenario_text: str | None = None  # inline scenario document
    overrides: SolveOverrides = Field(default_factory=SolveOverrides)

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.scenario is None) == (self.scenario_text is None):
            raise ValueError("provide exactly one of 'scenario' or 'scenario_text'")
        return self


class StageResult(BaseModel):
    conductive_w: float
    rf_w: float
    optical_w: float
    static_w: float
    total_w: float
    temperature_k: float


class ConvergenceResult(BaseModel):
    iterations: int
    residual_w: float
    tolerance_w: float


class NoiseChainResult(BaseModel):
    frequency_hz: float
    floor_occupation: float
    floor_temperature_k: float | None
    forward_output_k: float | None = None
    inferred_source_k: float | None = None
    target_temperature_k: float | None = None
    source_temperature_k: float | None = None
    error: str | None = None


class SolveResponse(BaseModel):
    scenario_name: str
    scenario_hash: str
    tool_version: str
    stages: dict[str, StageResult]
    still_heater_required_w: float
    convergence: ConvergenceResult
    noise: dict[str, NoiseChainResult]
    assumption_flags: list[str]
    effective_parameters: SolveOverrides
    machine_report: str


class ScenarioInfo(BaseModel):
    name: str
    title: str
    control_count: int | None
    readout_count: int | None
    optical_count: int | None
    photodiode_stage: str | None
    noise_chains: list[str]


class ScenarioListResponse(BaseModel):
    scenarios: list[ScenarioInfo]
    override_schema: dict


class NoiseElementSpec(BaseModel):
    label: str = ""
    db: float = Field(ge=0)
    temperature_k: float = Field(gt=0)
    assumed: bool = False


class NoiseInferRequest(BaseModel):
    scenario: str | None = None    # take the chain from a bundled scenario...
    chain_name: str | None = None
    elements: list[NoiseElementSpec] | None = None  # ...or give it inline
    frequency_ghz: float | None = Field(default=None, gt=0)
    target_temperature_k: float = Field(gt=0)

    @model_validator(mode="after")
    def _chain_source(self):
        inline = self.elements is not None
        named = self.scenario is not None and self.chain_name is not None
        if inline == named:
            raise ValueError("provide either scenario+chain_name or inline elements")
        if inline and self.frequency_ghz is None:
            raise ValueError("inline chains need frequency_ghz")
        return self


class NoiseInferResponse(BaseModel):
    inferred_source_k: float
    target_temperature_k: float
    frequency_hz: float
    floor_temperature_k: float | None
    floor_occupation: float
    assumption_flags: list[str]


class ErrorBody(BaseModel):
    detail: str
    field: str | None = None
    floor_temperature_k: float | None = None
    residuals_w: dict[str, float] | None = None
