// Workbench parameter state and its URL encoding.
//
// The only client persistence is the URL: parameters round-trip through
// the query string so a link reproduces the exact workbench state.

import type { SolveOverrides } from "./types";

export interface WorkbenchParams {
    scenario: string;
    overrides: SolveOverrides;
}

export const DEFAULT_SCENARIO = "all_coax";

export function defaultParams(): WorkbenchParams {
    return { scenario: DEFAULT_SCENARIO, overrides: {} };
}

export function encodeParams(params: WorkbenchParams): string {
    const q = new URLSearchParams();
    q.set("scenario", params.scenario);
    const ov = params.overrides;
    if (ov.control_count != null) q.set("control", String(ov.control_count));
    if (ov.readout_count != null) q.set("readout", String(ov.readout_count));
    if (ov.duty_cycle != null) q.set("duty", String(ov.duty_cycle));
    if (ov.optical_power_uw != null) q.set("power_uw", String(ov.optical_power_uw));
    if (ov.photodiode_stage != null) q.set("pd", ov.photodiode_stage);
    if (ov.power_at_mxc_dbm != null) q.set("mxc_dbm", String(ov.power_at_mxc_dbm));
    if (ov.control_attenuators != null) {
        q.set("attens", ov.control_attenuators.map((a) => `${a.stage}:${a.db}`).join(","));
    }
    return q.toString();
}

export function decodeParams(query: string): WorkbenchParams {
    const q = new URLSearchParams(query);
    const overrides: SolveOverrides = {};
    const num = (key: string): number | undefined => {
        const raw = q.get(key);
        if (raw === null || raw === "") return undefined;
        const v = Number(raw);
        return Number.isFinite(v) ? v : undefined;
    };
    const control = num("control");
    if (control !== undefined) overrides.control_count = control;
    const readout = num("readout");
    if (readout !== undefined) overrides.readout_count = readout;
    const duty = num("duty");
    if (duty !== undefined) overrides.duty_cycle = duty;
    const power = num("power_uw");
    if (power !== undefined) overrides.optical_power_uw = power;
    const pd = q.get("pd");
    if (pd) overrides.photodiode_stage = pd;
    const dbm = num("mxc_dbm");
    if (dbm !== undefined) overrides.power_at_mxc_dbm = dbm;
    const attens = q.get("attens");
    if (attens) {
        const parsed = attens
            .split(",")
            .map((pair) => pair.split(":"))
            .filter((bits) => bits.length === 2 && Number.isFinite(Number(bits[1])))
            .map((bits) => ({ stage: bits[0], db: Number(bits[1]) }));
        if (parsed.length > 0) overrides.control_attenuators = parsed;
    }
    return { scenario: q.get("scenario") ?? DEFAULT_SCENARIO, overrides };
}

/** Stable serialisation used to detect edits and to key solve requests. */
export function paramsKey(params: WorkbenchParams): string {
    return encodeParams(params);
}
