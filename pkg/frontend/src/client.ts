/**
 * Thin API client over an injectable transport. The browser build uses
 * fetchTransport; tests replace it with a recorded-session stub, so every
 * number the UI shows can be traced to actual server bytes.
 */
import type {
    LatticeGrid,
    LatticeQuery,
    ProjectDoc,
    ProjectEnvelope,
    RankRow,
    SessionInfo,
    ValuationReport,
    ValuationRequest,
    WhatIfReport,
    WhatIfRequest,
} from "./types.js";

export interface TransportResponse {
    status: number;
    body: unknown;
}

export type Transport = (
    method: string,
    path: string,
    body?: unknown,
) => Promise<TransportResponse>;

/** Raised for any non-2xx response; carries the server's diagnostic. */
export class ApiError extends Error {
    constructor(
        public readonly status: number,
        message: string,
        public readonly errorType: string | null = null,
    ) {
        super(message);
        this.name = "ApiError";
    }
}

export function fetchTransport(baseUrl = ""): Transport {
    return async (method, path, body) => {
        const response = await fetch(baseUrl + path, {
            method,
            headers: body === undefined ? undefined : { "content-type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const text = await response.text();
        return { status: response.status, body: text ? JSON.parse(text) : null };
    };
}

/** Fixed query-parameter order keeps request URLs deterministic. */
const LATTICE_PARAM_ORDER: (keyof LatticeQuery)[] = [
    "portfolio_id",
    "dad_ids",
    "base",
    "horizon",
    "vs",
    "u",
    "d",
    "r",
    "convention",
    "style",
];

export function latticeQueryString(query: LatticeQuery): string {
    const parts: string[] = [];
    for (const key of LATTICE_PARAM_ORDER) {
        const value = query[key];
        if (value !== undefined) {
            parts.push(`${key}=${encodeURIComponent(String(value))}`);
        }
    }
    return parts.join("&");
}

export class ApiClient {
    constructor(private readonly transport: Transport) {}

    private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
        const { status, body: payload } = await this.transport(method, path, body);
        if (status >= 400) {
            const err = payload as { error?: string; type?: string } | null;
            throw new ApiError(status, err?.error ?? `request failed (${status})`, err?.type ?? null);
        }
        return payload as T;
    }

    createSession(projectPath: string): Promise<SessionInfo> {
        return this.call("POST", "/v1/projects", { path: projectPath });
    }

    getProject(sessionId: string): Promise<ProjectEnvelope> {
        return this.call("GET", `/v1/projects/${sessionId}`);
    }

    updateProject(sessionId: string, revision: number, project: ProjectDoc): Promise<SessionInfo> {
        return this.call("PUT", `/v1/projects/${sessionId}`, { revision, project });
    }

    rank(sessionId: string, scenario?: string): Promise<RankRow[]> {
        const suffix = scenario === undefined ? "" : `?scenario=${encodeURIComponent(scenario)}`;
        return this.call("GET", `/v1/projects/${sessionId}/rank${suffix}`);
    }

    valuation(sessionId: string, request: ValuationRequest): Promise<ValuationReport> {
        return this.call("POST", `/v1/projects/${sessionId}/valuation`, request);
    }

    whatif(sessionId: string, request: WhatIfRequest): Promise<WhatIfReport> {
        return this.call("POST", `/v1/projects/${sessionId}/whatif`, request);
    }

    lattice(sessionId: string, query: LatticeQuery): Promise<LatticeGrid> {
        const qs = latticeQueryString(query);
        const suffix = qs ? `?${qs}` : "";
        return this.call("GET", `/v1/projects/${sessionId}/lattice${suffix}`);
    }
}
