// API types mirroring the service's pydantic response models.

export interface StageResult {
    conductive_w: number;
    rf_w: number;
    optical_w: number;
    static_w: number;
    total_w: number;
    temperature_k: number;
}

export interface ConvergenceResult {
    iterations: number;
    residual_w: number;
    tolerance_w: number;
}

export interface NoiseChainResult {
    frequency_hz: number;
    floor_occupation: number;
    floor_temperature_k: number | null;
    forward_output_k: number | null;
    inferred_source_k: number | null;
    target_temperature_k: number | null;
    source_temperature_k: number | null;
    error: string | null;
}

export interface SolveOverrides {
    control_count?: number | null;
    readout_count?: number | null;
    duty_cycle?: number | null;
    optical_power_uw?: number | null;
    photodiode_stage?: string | null;
    control_attenuators?: { stage: string; db: number }[] | null;
    power_at_mxc_dbm?: number | null;
}

export interface SolveResponse {
    scenario_name: string;
    scenario_hash: string;
    tool_version: string;
    stages: Record<string, StageResult>;
    still_heater_required_w: number;
    convergence: ConvergenceResult;
    noise: Record<string, NoiseChainResult>;
    assumption_flags: string[];
    effective_parameters: SolveOverrides;
    machine_report: string;
}

export interface ScenarioInfo {
    name: string;
    title: string;
    control_count: number | null;
    readout_count: number | null;
    optical_count: number | null;
    photodiode_stage: string | null;
    noise_chains: string[];
}

export interface ScenarioListResponse {
    scenarios: ScenarioInfo[];
    override_schema: Record<string, unknown>;
}

export interface NoiseInferResponse {
    inferred_source_k: number;
    target_temperature_k: number;
    frequency_hz: number;
    floor_temperature_k: number | null;
    floor_occupation: number;
    assumption_flags: string[];
}

export interface ApiError {
    detail: string;
    field?: string | null;
    floor_temperature_k?: number | null;
    residuals_w?: Record<string, number> | null;
}
