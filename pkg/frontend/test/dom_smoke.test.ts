// @vitest-environment happy-dom
//
// Boots the real service, loads the workbench page into a DOM, and
// drives the edit -> debounce -> solve loop plus baseline pinning.

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

const PORT = 8797;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

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

async function until(predicate: () => boolean, timeoutMs = 20_000): Promise<void> {
    const start = Date.now();
    while (!predicate()) {
        if (Date.now() - start > timeoutMs) throw new Error("condition never became true");
        await new Promise((resolve) => setTimeout(resolve, 100));
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

    const html = readFileSync(join(__dirname, "..", "index.html"), "utf-8");
    const body = html.match(/<body>([\s\S]*)<\/body>/)![1].replace(/<script[\s\S]*?<\/script>/, "");
    document.body.innerHTML = body;

    // route the app's relative fetches to the live service
    const realFetch = globalThis.fetch.bind(globalThis);
    globalThis.fetch = ((input: RequestInfo | URL, init?: RequestInit) => {
        const url = typeof input === "string" && input.startsWith("/") ? BASE + input : input;
        return realFetch(url as RequestInfo, init);
    }) as typeof fetch;

    await import("../src/main");
}, 40_000);

afterAll(() => {
    server?.kill();
});

describe("workbench DOM", () => {
    it("renders the five stage cards from the initial solve", async () => {
        await until(() => document.querySelectorAll(".stage-card").length === 5);
        const cards = [...document.querySelectorAll(".stage-card")];
        expect(cards.map((c) => c.querySelector(".stage-name")?.textContent)).toEqual([
            "50K flange", "4K flange", "Still", "Cold plate", "Mixing chamber",
        ]);
        const mxc = cards[4].querySelector(".stage-temp")?.textContent ?? "";
        expect(mxc).toMatch(/mK$/);
        expect(document.getElementById("heater")?.textContent).toContain("Still heater");
    });

    it("debounced edits re-solve and baseline pinning shows deltas", async () => {
        await until(() => document.querySelectorAll(".stage-card").length === 5);
        (document.getElementById("pin-baseline") as HTMLButtonElement).click();
        await until(() => (document.getElementById("baseline-label")?.textContent ?? "") !== "");

        const scenario = document.getElementById("scenario") as HTMLSelectElement;
        scenario.value = "optical_coax_sc";
        scenario.dispatchEvent(new Event("change"));
        await until(() =>
            (document.getElementById("meta")?.textContent ?? "").includes("optical_coax_sc"));
        await until(() => document.querySelectorAll(".delta").length === 5);
        const stillDelta = [...document.querySelectorAll(".stage-card")][2]
            .querySelector(".delta")?.textContent ?? "";
        // the optical feed adds ~11 mW at the still relative to all-coax
        expect(stillDelta).toMatch(/\+1[0-2]\.\d+ mW/);
        expect(window.location.search).toContain("scenario=optical_coax_sc");
    });

    it("noise panel infers a source and reports unreachable targets inline", async () => {
        const scenario = document.getElementById("scenario") as HTMLSelectElement;
        scenario.value = "experiment_ld400";
        scenario.dispatchEvent(new Event("change"));
        await until(() =>
            (document.getElementById("noise-chain") as HTMLSelectElement).options.length >= 3);

        const chain = document.getElementById("noise-chain") as HTMLSelectElement;
        chain.value = "photodiode_drive";
        (document.getElementById("noise-target") as HTMLInputElement).value = "100";
        (document.getElementById("noise-run") as HTMLButtonElement).click();
        await until(() =>
            (document.getElementById("noise-result")?.textContent ?? "").includes("source"));
        expect(document.getElementById("noise-result")?.textContent).toMatch(/2\d\.\d+ K/);

        (document.getElementById("noise-target") as HTMLInputElement).value = "20";
        (document.getElementById("noise-run") as HTMLButtonElement).click();
        await until(() =>
            (document.getElementById("noise-result")?.textContent ?? "").includes("unreachable"));
        expect(document.getElementById("noise-result")?.textContent).toContain("floor");
    });

    it("invalid counts surface as inline field errors and keep the last good state", async () => {
        const control = document.getElementById("control-count") as HTMLInputElement;
        control.value = "0";
        control.dispatchEvent(new Event("input"));
        await until(() => (document.getElementById("err-control")?.textContent ?? "") !== "");
        expect(document.querySelectorAll(".stage-card").length).toBe(5);
        control.value = "";
        control.dispatchEvent(new Event("input"));
        await until(() => (document.getElementById("err-control")?.textContent ?? "") === "");
    });
});
