// End-to-end harness: boots the real service, then checks the secondary
// acceptance criterion: for every bundled scenario the displayed
// temperature/load strings byte-match the machine-format report cells,
// and the baseline-delta display equals plain client subtraction of two
// pinned service responses.

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ServiceError } from "../src/api";
import { deltaRows, displayRows, parseMachineReport, roundSig } from "../src/format";
import { decodeParams, encodeParams } from "../src/state";
import type { SolveResponse } from "../src/types";

const PORT = 8796;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
const client = new ApiClient(BASE);

async function waitForService(timeoutMs = 30_000): Promise<void> {
    const start = Date.now();
    for (;;) {
        try {
            const res = await fetch(`${BASE}/health`);
            if (res.ok) return;
        } catch {
            /* not up yet */
        }
        if (Date.now() - start > timeoutMs) throw new Error("service did not come up");
        await new Promise((resolve) => setTimeout(resolve, 250));
    }
}

beforeAll(async () => {
    server = spawn(
        "python3",
        ["-m", "uvicorn", "--factory", "cryoplan.service.app:create_app",
         "--port", String(PORT), "--log-level", "warning"],
        { stdio: "ignore" },
    );
    await waitForService();
}, 40_000);

afterAll(() => {
    server?.kill();
});

describe("UI round-trip against the live service", () => {
    it("lists the bundled scenarios", async () => {
        const list = await client.scenarios();
        const names = list.scenarios.map((s) => s.name);
        for (const expected of ["all_coax", "optical_coax_normal", "optical_coax_sc"]) {
            expect(names).toContain(expected);
        }
    });

    it("displayed values byte-match the machine report for every bundled scenario", async () => {
        const list = await client.scenarios();
        for (const info of list.scenarios) {
            const response = await client.solve(info.name, {});
            const reportRows = parseMachineReport(response.machine_report);
            for (const row of displayRows(response)) {
                const ref = reportRows[row.stage];
                expect(ref, `${info.name}/${row.stage} present in report`).toBeDefined();
                expect(row.conductive, `${info.name}/${row.stage} conductive`).toBe(ref.conductive);
                expect(row.rf, `${info.name}/${row.stage} rf`).toBe(ref.rf);
                expect(row.optical, `${info.name}/${row.stage} optical`).toBe(ref.optical);
                expect(row.static, `${info.name}/${row.stage} static`).toBe(ref.static);
                expect(row.total, `${info.name}/${row.stage} total`).toBe(ref.total);
                expect(row.loadUnit).toBe(ref.loadUnit);
                expect(row.temperature, `${info.name}/${row.stage} T`).toBe(ref.temperature);
                expect(row.tempUnit).toBe(ref.tempUnit);
            }
        }
    }, 60_000);

    it("baseline deltas equal client subtraction of two pinned responses", async () => {
        const baseline: SolveResponse = await client.solve("all_coax", {});
        const current: SolveResponse = await client.solve("optical_coax_sc", {});
        const deltas = deltaRows(current, baseline);
        for (const row of deltas) {
            const scale = row.unit === "W" ? 1 : row.unit === "mW" ? 1e3 : 1e6;
            const independent =
                (current.stages[row.stage].total_w - baseline.stages[row.stage].total_w) * scale;
            expect(row.loadDelta).toBeCloseTo(independent, 12);
            expect(row.loadDeltaText).toBe(
                (independent > 0 ? "+" : "") + String(roundSig(independent, 4)),
            );
        }
        // the cold-plate saving of the superconducting-coax swap is a couple of mW
        const cp = deltas.find((r) => r.stage === "CP")!;
        expect(cp.loadDelta).toBeLessThan(-1500);
        expect(cp.unit).toBe("uW");
    });

    it("re-solving serialized workbench parameters reproduces the displayed response", async () => {
        const params = {
            scenario: "optical_coax_sc",
            overrides: { duty_cycle: 0.1, optical_power_uw: 50 },
        };
        const first = await client.solve(params.scenario, params.overrides);
        const revived = decodeParams(encodeParams(params));
        const second = await client.solve(revived.scenario, revived.overrides);
        expect(second).toEqual(first);
        // 50 uW at 10% duty shows 5 uW per link of optical heat
        const opticalPerLink = second.stages.Still.optical_w / 840;
        expect(opticalPerLink).toBeCloseTo(5e-6, 12);
    });

    it("noise panel: identity on a 0 dB chain and floor handling below it", async () => {
        const identity = await client.noiseInfer({
            elements: [{ label: "open", db: 0, temperature_k: 4 }],
            frequency_ghz: 6,
            target_temperature_k: 0.1,
        });
        expect(identity.inferred_source_k).toBeCloseTo(0.1, 9);

        const inferred = await client.noiseInfer({
            scenario: "experiment_ld400",
            chain_name: "photodiode_drive",
            target_temperature_k: 0.1,
        });
        expect(inferred.inferred_source_k).toBeGreaterThan(17);
        expect(inferred.inferred_source_k).toBeLessThan(31);
        expect(inferred.assumption_flags.length).toBeGreaterThan(0);

        await expect(
            client.noiseInfer({
                scenario: "experiment_ld400",
                chain_name: "photodiode_drive",
                target_temperature_k: 0.02,
            }),
        ).rejects.toSatisfy((err: unknown) => {
            return err instanceof ServiceError && err.status === 409 &&
                typeof err.body.floor_temperature_k === "number";
        });
    });

    it("validation errors carry the field path for inline display", async () => {
        await expect(client.solve("all_coax", { duty_cycle: 1.5 })).rejects.toSatisfy(
            (err: unknown) =>
                err instanceof ServiceError && err.status === 400 &&
                (err.body.field ?? "").includes("duty_cycle"),
        );
    });
});
