// Workbench wiring: controls on the left, stage diagram in the middle,
// noise panel + assumptions on the right.  All numbers come from the
// service; edits debounce into /solve, newer edits cancel older calls.

import { ApiClient, ServiceError } from "./api";
import { deltaRows, displayRows, type StageRowDisplay } from "./format";
import { decodeParams, encodeParams, type WorkbenchParams } from "./state";
import type { ScenarioInfo, SolveResponse } from "./types";

const DEBOUNCE_MS = 300;

const client = new ApiClient("");

interface UiState {
    params: WorkbenchParams;
    lastGood: SolveResponse | null;
    baseline: SolveResponse | null;
    scenarios: ScenarioInfo[];
}

const state: UiState = {
    params: decodeParams(window.location.search),
    lastGood: null,
    baseline: null,
    scenarios: [],
};

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

function syncUrl(): void {
    const query = encodeParams(state.params);
    window.history.replaceState(null, "", `?${query}`);
}

let debounceTimer: number | undefined;

function scheduleSolve(): void {
    window.clearTimeout(debounceTimer);
    debounceTimer = window.setTimeout(() => void runSolve(), DEBOUNCE_MS);
}

async function runSolve(): Promise<void> {
    syncUrl();
    setBanner("");
    clearFieldErrors();
    try {
        const response = await client.solve(state.params.scenario, state.params.overrides);
        state.lastGood = response;
        renderResponse(response);
    } catch (err) {
        if (err instanceof DOMException && err.name === "AbortError") return;
        if (err instanceof ServiceError) {
            if (err.status === 400 && err.body.field) {
                showFieldError(err.body.field, err.body.detail);
            } else if (err.status === 422 && err.body.residuals_w) {
                const parts = Object.entries(err.body.residuals_w)
                    .map(([stage, watts]) => `${stage}: ${watts.toExponential(2)} W`);
                setBanner(`solver did not converge - residuals ${parts.join(", ")} (showing last good result)`);
            } else {
                setBanner(err.body.detail);
            }
        } else {
            setBanner("service unreachable - is `cryoplan serve` running?");
        }
        if (state.lastGood) renderResponse(state.lastGood);
    }
}

function setBanner(text: string): void {
    const banner = el<HTMLDivElement>("banner");
    banner.textContent = text;
    banner.style.display = text ? "block" : "none";
}

function clearFieldErrors(): void {
    for (const node of document.querySelectorAll(".field-error")) node.textContent = "";
}

function showFieldError(field: string, detail: string): void {
    const map: Record<string, string> = {
        duty_cycle: "err-duty",
        control_count: "err-control",
        readout_count: "err-readout",
        optical_power_uw: "err-power",
        photodiode_stage: "err-pd",
        power_at_mxc_dbm: "err-mxc",
    };
    const key = Object.keys(map).find((k) => field.includes(k));
    if (key) {
        el(map[key]).textContent = detail;
    } else {
        setBanner(detail);
    }
}

function renderResponse(response: SolveResponse): void {
    const rows = displayRows(response);
    const deltas = state.baseline ? deltaRows(response, state.baseline) : null;
    const maxLog = Math.log10(Math.max(...rows.map((r) => Math.max(r.totalWatts, 1e-9))));
    const minLog = Math.log10(1e-9);
    const diagram = el<HTMLDivElement>("diagram");
    diagram.innerHTML = "";
    rows.forEach((row, i) => {
        diagram.appendChild(stageCard(row, deltas ? deltas[i] : null, minLog, maxLog));
    });
    el("heater").textContent =
        `Still heater top-up: ${(response.still_heater_required_w * 1e3).toFixed(2)} mW`;
    el("meta").textContent =
        `${response.scenario_name} | hash ${response.scenario_hash.slice(0, 12)} | ` +
        `${response.convergence.iterations} sweep(s), residual ${response.convergence.residual_w.toExponential(1)} W`;
    const flags = el<HTMLUListElement>("assumptions");
    flags.innerHTML = "";
    for (const flag of response.assumption_flags) {
        const li = document.createElement("li");
        li.textContent = flag;
        flags.appendChild(li);
    }
    renderNoiseChains(response);
}

function stageCard(
    row: StageRowDisplay,
    delta: ReturnType<typeof deltaRows>[number] | null,
    minLog: number,
    maxLog: number,
): HTMLDivElement {
    const card = document.createElement("div");
    card.className = "stage-card";
    const width = maxLog > minLog
        ? Math.max(2, (100 * (Math.log10(Math.max(row.totalWatts, 1e-9)) - minLog)) / (maxLog - minLog))
        : 2;
    const deltaText = delta
        ? `<span class="delta">${delta.loadDeltaText} ${delta.unit}, ${delta.temperatureDeltaText} ${delta.tempUnit}</span>`
        : "";
    card.innerHTML = `
      <div class="stage-head">
        <span class="stage-name">${row.label}</span>
        <span class="stage-temp">${row.temperature} ${row.tempUnit}</span>
      </div>
      <div class="bar"><div class="bar-fill" style="width:${width.toFixed(1)}%"></div></div>
      <div class="stage-load">
        <span class="total">${row.total} ${row.loadUnit}</span> ${deltaText}
      </div>
      <div class="breakdown">
        cond ${row.conductive} | rf ${row.rf} | opt ${row.optical} | static ${row.static} ${row.loadUnit}
      </div>`;
    return card;
}

function renderNoiseChains(response: SolveResponse): void {
    const select = el<HTMLSelectElement>("noise-chain");
    const current = select.value;
    select.innerHTML = "";
    const names = Object.keys(response.noise).sort();
    for (const name of names) {
        const option = document.createElement("option");
        option.value = name;
        option.textContent = name;
        select.appendChild(option);
    }
    if (names.includes(current)) select.value = current;
    el("noise-result").textContent = names.length
        ? ""
        : "scenario defines no noise chains; enter an inline chain via the scenario file";
}

async function runNoiseInfer(): Promise<void> {
    const chain = el<HTMLSelectElement>("noise-chain").value;
    const targetMk = Number(el<HTMLInputElement>("noise-target").value);
    const out = el<HTMLDivElement>("noise-result");
    if (!chain || !Number.isFinite(targetMk) || targetMk <= 0) {
        out.textContent = "pick a chain and a positive target";
        return;
    }
    try {
        const res = await client.noiseInfer({
            scenario: state.params.scenario,
            chain_name: chain,
            target_temperature_k: targetMk / 1e3,
        });
        const flags = res.assumption_flags.length
            ? ` (assumptions: ${res.assumption_flags.join("; ")})`
            : "";
        out.textContent =
            `target ${targetMk} mK @ ${(res.frequency_hz / 1e9).toFixed(1)} GHz -> ` +
            `source ${res.inferred_source_k.toPrecision(4)} K${flags}`;
    } catch (err) {
        if (err instanceof ServiceError && err.status === 409) {
            const floor = err.body.floor_temperature_k;
            out.textContent = `unreachable: chain thermal floor ${floor ? (floor * 1e3).toPrecision(4) : "?"} mK exceeds the target`;
        } else if (err instanceof ServiceError) {
            out.textContent = err.body.detail;
        } else {
            out.textContent = "service unreachable";
        }
    }
}

function bindNumberInput(id: string, key: "control_count" | "readout_count" | "optical_power_uw" | "power_at_mxc_dbm", integer: boolean): void {
    const input = el<HTMLInputElement>(id);
    input.addEventListener("input", () => {
        const raw = input.value.trim();
        if (raw === "") {
            delete state.params.overrides[key];
        } else {
            const value = integer ? Number.parseInt(raw, 10) : Number(raw);
            if (Number.isFinite(value)) state.params.overrides[key] = value;
        }
        scheduleSolve();
    });
}

function applyParamsToControls(): void {
    const ov = state.params.overrides;
    el<HTMLSelectElement>("scenario").value = state.params.scenario;
    el<HTMLInputElement>("control-count").value = ov.control_count?.toString() ?? "";
    el<HTMLInputElement>("readout-count").value = ov.readout_count?.toString() ?? "";
    el<HTMLInputElement>("duty").value = ov.duty_cycle != null ? String(ov.duty_cycle * 100) : "";
    el("duty-label").textContent = ov.duty_cycle != null ? `${(ov.duty_cycle * 100).toFixed(0)} %` : "scenario default";
    el<HTMLInputElement>("optical-power").value = ov.optical_power_uw?.toString() ?? "";
    el<HTMLSelectElement>("pd-stage").value = ov.photodiode_stage ?? "";
    el<HTMLInputElement>("mxc-power").value = ov.power_at_mxc_dbm?.toString() ?? "";
}

async function init(): Promise<void> {
    const list = await client.scenarios().catch(() => null);
    if (!list) {
        setBanner("service unreachable - is `cryoplan serve` running?");
        return;
    }
    state.scenarios = list.scenarios;
    const select = el<HTMLSelectElement>("scenario");
    for (const info of list.scenarios) {
        const option = document.createElement("option");
        option.value = info.name;
        option.textContent = info.name;
        option.title = info.title;
        select.appendChild(option);
    }
    if (!list.scenarios.some((s) => s.name === state.params.scenario)) {
        state.params.scenario = list.scenarios[0]?.name ?? "all_coax";
    }
    applyParamsToControls();

    select.addEventListener("change", () => {
        state.params.scenario = select.value;
        scheduleSolve();
    });
    bindNumberInput("control-count", "control_count", true);
    bindNumberInput("readout-count", "readout_count", true);
    bindNumberInput("optical-power", "optical_power_uw", false);
    bindNumberInput("mxc-power", "power_at_mxc_dbm", false);
    const duty = el<HTMLInputElement>("duty");
    duty.addEventListener("input", () => {
        const pct = Number(duty.value);
        state.params.overrides.duty_cycle = pct / 100;
        el("duty-label").textContent = `${pct.toFixed(0)} %`;
        scheduleSolve();
    });
    const pd = el<HTMLSelectElement>("pd-stage");
    pd.addEventListener("change", () => {
        if (pd.value === "") delete state.params.overrides.photodiode_stage;
        else state.params.overrides.photodiode_stage = pd.value;
        scheduleSolve();
    });
    el("solve-now").addEventListener("click", () => void runSolve());
    el("pin-baseline").addEventListener("click", () => {
        state.baseline = state.lastGood;
        el("baseline-label").textContent = state.baseline
            ? `baseline: ${state.baseline.scenario_name} (${state.baseline.scenario_hash.slice(0, 8)})`
            : "";
        if (state.lastGood) renderResponse(state.lastGood);
    });
    el("clear-baseline").addEventListener("click", () => {
        state.baseline = null;
        el("baseline-label").textContent = "";
        if (state.lastGood) renderResponse(state.lastGood);
    });
    el("noise-run").addEventListener("click", () => void runNoiseInfer());

    await runSolve();
}

void init();
