// Unit tables and number formatting.
//
// Every number shown in the workbench is a service value passed through
// the same rounding (4 significant digits) and rendering ('%g' style)
// the service uses for its machine-format report, so a displayed cell
// byte-matches the corresponding report cell.  The UI computes no
// physics of its own; the only client-side arithmetic is baseline
// subtraction of two service responses.

import type { SolveResponse, StageResult } from "./types";

export const STAGE_ROWS = ["Flange50K", "Flange4K", "Still", "CP", "MXC"] as const;
export type StageName = (typeof STAGE_ROWS)[number];

export const LOAD_UNITS: Record<StageName, { unit: string; scale: number }> = {
    Flange50K: { unit: "W", scale: 1 },
    Flange4K: { unit: "W", scale: 1 },
    Still: { unit: "mW", scale: 1e3 },
    CP: { unit: "uW", scale: 1e6 },
    MXC: { unit: "uW", scale: 1e6 },
};

export const TEMP_UNITS: Record<StageName, { unit: string; scale: number }> = {
    Flange50K: { unit: "K", scale: 1 },
    Flange4K: { unit: "K", scale: 1 },
    Still: { unit: "K", scale: 1 },
    CP: { unit: "mK", scale: 1e3 },
    MXC: { unit: "mK", scale: 1e3 },
};

export const STAGE_LABELS: Record<StageName, string> = {
    Flange50K: "50K flange",
    Flange4K: "4K flange",
    Still: "Still",
    CP: "Cold plate",
    MXC: "Mixing chamber",
};

/** Round to `sig` significant decimal digits (sig <= 0 keeps full precision). */
export function roundSig(value: number, sig: number): number {
    if (sig <= 0 || value === 0 || !Number.isFinite(value)) return value;
    // decimal significant-digit rounding; exact decimal ties at the last
    // kept digit do not occur for solver outputs
    return Number(value.toPrecision(sig));
}

/** Render like Python's '%g': scientific below 1e-4 or at/above 1e6. */
export function pythonG(value: number): string {
    if (value === 0) return "0";
    if (!Number.isFinite(value)) return value > 0 ? "inf" : "-inf";
    const exp = Math.floor(Math.log10(Math.abs(value)));
    if (exp < -4 || exp >= 6) {
        const [mantissa, rawExp] = value.toExponential().split("e");
        const expNum = Number(rawExp);
        const sign = expNum < 0 ? "-" : "+";
        const digits = String(Math.abs(expNum)).padStart(2, "0");
        return `${trimZeros(mantissa)}e${sign}${digits}`;
    }
    const text = String(value);
    if (text.includes("e")) {
        // shortest repr fell back to exponential inside the fixed range
        return trimZeros(value.toFixed(Math.max(0, 10 - exp)));
    }
    return text;
}

function trimZeros(text: string): string {
    if (!text.includes(".")) return text;
    return text.replace(/0+$/, "").replace(/\.$/, "");
}

/** The formatting applied to one machine-report cell. */
export function formatValue(value: number, scale: number, sig = 4): string {
    return pythonG(roundSig(value * scale, sig));
}

export interface StageRowDisplay {
    stage: StageName;
    label: string;
    conductive: string;
    rf: string;
    optical: string;
    static: string;
    total: string;
    loadUnit: string;
    temperature: string;
    tempUnit: string;
    totalWatts: number;
    temperatureKelvin: number;
}

export function stageRow(stage: StageName, result: StageResult, sig = 4): StageRowDisplay {
    const lu = LOAD_UNITS[stage];
    const tu = TEMP_UNITS[stage];
    return {
        stage,
        label: STAGE_LABELS[stage],
        conductive: formatValue(result.conductive_w, lu.scale, sig),
        rf: formatValue(result.rf_w, lu.scale, sig),
        optical: formatValue(result.optical_w, lu.scale, sig),
        static: formatValue(result.static_w, lu.scale, sig),
        total: formatValue(result.total_w, lu.scale, sig),
        loadUnit: lu.unit,
        temperature: formatValue(result.temperature_k, tu.scale, sig),
        tempUnit: tu.unit,
        totalWatts: result.total_w,
        temperatureKelvin: result.temperature_k,
    };
}

export function displayRows(response: SolveResponse, sig = 4): StageRowDisplay[] {
    return STAGE_ROWS.map((stage) => stageRow(stage, response.stages[stage], sig));
}

/** Parse the stage rows out of a machine-format report (harness cross-check). */
export function parseMachineReport(report: string): Record<string, {
    conductive: string; rf: string; optical: string; static: string; total: string;
    loadUnit: string; temperature: string; tempUnit: string;
}> {
    const rows: Record<string, {
        conductive: string; rf: string; optical: string; static: string; total: string;
        loadUnit: string; temperature: string; tempUnit: string;
    }> = {};
    for (const line of report.split("\n")) {
        const cells = line.split("\t");
        if (cells.length === 9 && (STAGE_ROWS as readonly string[]).includes(cells[0])) {
            rows[cells[0]] = {
                conductive: cells[1], rf: cells[2], optical: cells[3], static: cells[4],
                total: cells[5], loadUnit: cells[6], temperature: cells[7], tempUnit: cells[8],
            };
        }
    }
    return rows;
}

export interface DeltaRow {
    stage: StageName;
    loadDelta: number;          // in the row's load unit
    temperatureDelta: number;   // in the row's temperature unit
    loadDeltaText: string;
    temperatureDeltaText: string;
    unit: string;
    tempUnit: string;
}

/** Baseline comparison: plain client-side subtraction of two service responses. */
export function deltaRows(current: SolveResponse, baseline: SolveResponse, sig = 4): DeltaRow[] {
    return STAGE_ROWS.map((stage) => {
        const lu = LOAD_UNITS[stage];
        const tu = TEMP_UNITS[stage];
        const loadDelta = (current.stages[stage].total_w - baseline.stages[stage].total_w) * lu.scale;
        const tempDelta =
            (current.stages[stage].temperature_k - baseline.stages[stage].temperature_k) * tu.scale;
        return {
            stage,
            loadDelta,
            temperatureDelta: tempDelta,
            loadDeltaText: signed(roundSig(loadDelta, sig)),
            temperatureDeltaText: signed(roundSig(tempDelta, sig)),
            unit: lu.unit,
            tempUnit: tu.unit,
        };
    });
}

function signed(value: number): string {
    const text = pythonG(value);
    return value > 0 ? `+${text}` : text;
}
