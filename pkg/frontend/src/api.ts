// Service client.  One solve in flight at a time: a newer request
// aborts its predecessor.

import type {
    ApiError,
    NoiseInferResponse,
    ScenarioListResponse,
    SolveOverrides,
    SolveResponse,
} from "./types";

export class ServiceError extends Error {
    status: number;
    body: ApiError;

    constructor(status: number, body: ApiError) {
        super(body.detail);
        this.status = status;
        this.body = body;
    }
}

export class ApiClient {
    baseUrl: string;
    private solveController: AbortController | null = null;

    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }

    async scenarios(): Promise<ScenarioListResponse> {
        return this.request("GET", "/scenarios");
    }

    async solve(scenario: string, overrides: SolveOverrides): Promise<SolveResponse> {
        this.solveController?.abort();
        const controller = new AbortController();
        this.solveController = controller;
        try {
            return await this.request<SolveResponse>(
                "POST", "/solve", { scenario, overrides }, controller.signal,
            );
        } finally {
            if (this.solveController === controller) this.solveController = null;
        }
    }

    async noiseInfer(body: {
        scenario?: string;
        chain_name?: string;
        elements?: { label: string; db: number; temperature_k: number }[];
        frequency_ghz?: number;
        target_temperature_k: number;
    }): Promise<NoiseInferResponse> {
        return this.request("POST", "/noise/infer", body);
    }

    private async request<T>(
        method: string, path: string, body?: unknown, signal?: AbortSignal,
    ): Promise<T> {
        const response = await fetch(this.baseUrl + path, {
            method,
            headers: body === undefined ? undefined : { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
            signal,
        });
        const payload = await response.json();
        if (!response.ok) {
            throw new ServiceError(response.status, payload as ApiError);
        }
        return payload as T;
    }
}
