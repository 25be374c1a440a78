/**
 * What-if state machine.
 *
 * Owns the ViewState and talks to the service; it never performs valuation
 * arithmetic. Edits are debounced (default 250 ms), at most one valuation
 * round-trip is applied at a time, responses are applied in request order
 * (stale ones discarded), and a rejected edit leaves the previous valid
 * state untouched.
 */
import { ApiClient, ApiError } from "./client.js";
import { buildCompareModel, CompareModel, MixedConventionError } from "./compare.js";
import type {
    LatticeGrid,
    LatticeQuery,
    PortfolioDoc,
    ProjectDoc,
    RankRow,
    ValuationReport,
    ValuationRequest,
    WhatIfReport,
} from "./types.js";

export interface Scheduler {
    /** Schedule fn after delayMs; returns a cancel function. */
    schedule(fn: () => void, delayMs: number): () => void;
}

export const timeoutScheduler: Scheduler = {
    schedule(fn, delayMs) {
        const id = setTimeout(fn, delayMs);
        return () => clearTimeout(id);
    },
};

export type EditableField = "base" | "u" | "d" | "r" | "horizons" | "convention";

export interface ParamEdits {
    base?: number;
    u?: number;
    d?: number;
    r?: number;
    horizons?: number;
    convention?: string;
}

export interface Banner {
    kind: "retry" | "reload" | "blocked" | "error";
    message: string;
}

export interface ViewState {
    sessionId: string | null;
    revision: number;
    projectName: string;
    projectDoc: ProjectDoc | null;
    portfolios: PortfolioDoc[];
    latticeDefaults: ProjectDoc["lattice_defaults"] | null;
    selectedPortfolio: string | null;
    edits: ParamEdits;
    valuation: ValuationReport | null;
    grid: LatticeGrid | null;
    sweep: WhatIfReport | null;
    comparison: CompareModel | null;
    ranking: RankRow[] | null;
    fieldErrors: Record<string, string>;
    banner: Banner | null;
}

const CONVENTIONS = ["one-minus-r", "one-plus-r"];

/** Form-level bounds; the server still owns the real constraint checks. */
function formCheck(field: EditableField, value: number | string): string | null {
    if (field === "convention") {
        return CONVENTIONS.includes(String(value))
            ? null
            : `convention must be one of ${CONVENTIONS.join(", ")}`;
    }
    const num = Number(value);
    if (!Number.isFinite(num)) return "must be a number";
    if (field === "base" && num < 0) return "base value must be >= 0";
    if ((field === "u" || field === "d") && num <= 0) return "factor must be positive";
    if (field === "r" && num < 0) return "rate must be >= 0";
    if (field === "horizons" && (!Number.isInteger(num) || num < 1)) {
        return "horizons must be an integer >= 1";
    }
    return null;
}

function constraintField(message: string): EditableField | null {
    if (message.includes("d < 1 + r")) return "d";
    if (message.includes("1 + r < u")) return "u";
    if (message.includes("u == d")) return "u";
    return null;
}

export class WhatIfController {
    readonly state: ViewState = {
        sessionId: null,
        revision: 0,
        projectName: "",
        projectDoc: null,
        portfolios: [],
        latticeDefaults: null,
        selectedPortfolio: null,
        edits: {},
        valuation: null,
        grid: null,
        sweep: null,
        comparison: null,
        ranking: null,
        fieldErrors: {},
        banner: null,
    };

    private listeners: ((state: ViewState) => void)[] = [];
    private seq = 0;
    private cancelPending: (() => void) | null = null;
    private cancelPendingCommit: (() => void) | null = null;
    private workingDoc: ProjectDoc | null = null;
    private lastOp: Promise<void> = Promise.resolve();

    constructor(
        private readonly client: ApiClient,
        private readonly scheduler: Scheduler = timeoutScheduler,
        private readonly debounceMs = 250,
    ) {}

    onChange(listener: (state: ViewState) => void): void {
        this.listeners.push(listener);
    }

    private notify(): void {
        for (const listener of this.listeners) listener(this.state);
    }

    /** Await the latest in-flight revaluation (test hook). */
    settle(): Promise<void> {
        return this.lastOp;
    }

    async load(projectPath: string): Promise<void> {
        const session = await this.client.createSession(projectPath);
        const envelope = await this.client.getProject(session.session_id);
        this.state.sessionId = session.session_id;
        this.state.revision = envelope.revision;
        this.state.projectName = envelope.project.name;
        this.state.projectDoc = envelope.project;
        this.state.portfolios = envelope.project.portfolios;
        this.state.latticeDefaults = envelope.project.lattice_defaults;
        this.state.ranking = await this.client.rank(session.session_id);
        this.notify();
    }

    selectPortfolio(portfolioId: string): Promise<void> {
        this.state.selectedPortfolio = portfolioId;
        this.notify();
        this.lastOp = this.revalue();
        return this.lastOp;
    }

    /**
     * Apply a field edit. Values outside the form bounds get an inline
     * error and no request; valid edits debounce a revaluation.
     */
    edit(field: EditableField, value: number | string): void {
        const problem = formCheck(field, value);
        if (problem) {
            this.state.fieldErrors = { ...this.state.fieldErrors, [field]: problem };
            this.notify();
            return;
        }
        delete this.state.fieldErrors[field];
        if (field === "convention") {
            this.state.edits.convention = String(value);
        } else {
            this.state.edits[field] = Number(value);
        }
        this.notify();
        if (this.cancelPending) this.cancelPending();
        this.cancelPending = this.scheduler.schedule(() => {
            this.cancelPending = null;
            this.lastOp = this.revalue();
        }, this.debounceMs);
    }

    /**
     * Edit one contribution score. Out-of-range values get an inline error
     * keyed ``contrib.<dad>.<qa>``; valid edits accumulate on a working
     * copy and debounce one PUT + rank refresh. A rejected commit leaves
     * the previous project state untouched.
     */
    editContrib(dadId: string, qaName: string, value: number | string): void {
        const key = `contrib.${dadId}.${qaName}`;
        const num = Number(value);
        if (!Number.isFinite(num) || num < -1 || num > 1) {
            this.state.fieldErrors = {
                ...this.state.fieldErrors,
                [key]: "contribution scores lie in [-1, 1]",
            };
            this.notify();
            return;
        }
        delete this.state.fieldErrors[key];
        if (!this.state.projectDoc) return;
        if (!this.workingDoc) {
            this.workingDoc = structuredClone(this.state.projectDoc);
        }
        const dad = this.workingDoc.dads.find((d) => d.id === dadId);
        if (!dad) return;
        dad.contrib[qaName] = num;
        this.notify();
        if (this.cancelPendingCommit) this.cancelPendingCommit();
        this.cancelPendingCommit = this.scheduler.schedule(() => {
            this.cancelPendingCommit = null;
            this.lastOp = this.commitProjectEdits();
        }, this.debounceMs);
    }

    private async commitProjectEdits(): Promise<void> {
        if (!this.state.sessionId || !this.workingDoc) return;
        const doc = this.workingDoc;
        this.workingDoc = null;
        try {
            const session = await this.client.updateProject(
                this.state.sessionId,
                this.state.revision,
                doc,
            );
            this.state.revision = session.revision;
            this.state.projectDoc = doc;
            this.state.portfolios = doc.portfolios;
            this.state.ranking = await this.client.rank(this.state.sessionId);
            this.state.banner = null;
            this.notify();
        } catch (error) {
            this.applyError(error); // previous project snapshot stays active
        }
    }

    private valuationRequest(): ValuationRequest {
        const { edits } = this.state;
        const request: ValuationRequest = { portfolio_id: this.state.selectedPortfolio! };
        const lattice: ValuationRequest["lattice"] = {};
        if (edits.u !== undefined) lattice.u = edits.u;
        if (edits.d !== undefined) lattice.d = edits.d;
        if (edits.r !== undefined) lattice.r = edits.r;
        if (edits.horizons !== undefined) lattice.horizons = edits.horizons;
        if (edits.convention !== undefined) lattice.convention = edits.convention;
        if (Object.keys(lattice).length > 0) request.lattice = lattice;
        if (edits.base !== undefined) {
            // one combined seed: all of it on the first member, zero on the rest
            const portfolio = this.state.portfolios.find(
                (p) => p.id === this.state.selectedPortfolio,
            );
            if (portfolio) {
                const bases: Record<string, number> = {};
                portfolio.dad_ids.forEach((dadId, index) => {
                    bases[dadId] = index === 0 ? edits.base! : 0;
                });
                request.per_dad_base_values = bases;
            }
        }
        return request;
    }

    private latticeQuery(): LatticeQuery {
        const { edits } = this.state;
        const query: LatticeQuery = { portfolio_id: this.state.selectedPortfolio! };
        if (edits.base !== undefined) query.base = edits.base;
        if (edits.u !== undefined) query.u = edits.u;
        if (edits.d !== undefined) query.d = edits.d;
        if (edits.r !== undefined) query.r = edits.r;
        if (edits.convention !== undefined) query.convention = edits.convention;
        return query;
    }

    private async revalue(): Promise<void> {
        if (!this.state.sessionId || !this.state.selectedPortfolio) return;
        const mySeq = ++this.seq;
        try {
            const valuation = await this.client.valuation(
                this.state.sessionId,
                this.valuationRequest(),
            );
            if (mySeq !== this.seq) return; // a newer request superseded this one
            const grid = await this.client.lattice(this.state.sessionId, this.latticeQuery());
            if (mySeq !== this.seq) return;
            this.state.valuation = valuation;
            this.state.grid = grid;
            this.state.banner = null;
            this.notify();
        } catch (error) {
            if (mySeq !== this.seq) return;
            this.applyError(error);
        }
    }

    private applyError(error: unknown): void {
        // previous valid state stays rendered in every branch
        if (error instanceof ApiError) {
            if (error.status === 422) {
                const field = constraintField(error.message);
                if (field) {
                    this.state.fieldErrors = { ...this.state.fieldErrors, [field]: error.message };
                } else {
                    this.state.banner = { kind: "error", message: error.message };
                }
            } else if (error.status === 409) {
                this.state.banner = { kind: "reload", message: "project changed on the server; reload" };
            } else {
                this.state.banner = { kind: "error", message: error.message };
            }
        } else {
            this.state.banner = { kind: "retry", message: "network failure; retry" };
        }
        this.notify();
    }

    async sweep(lo: number, hi: number, step: number): Promise<void> {
        if (!this.state.sessionId || !this.state.selectedPortfolio) return;
        try {
            this.state.sweep = await this.client.whatif(this.state.sessionId, {
                portfolio_id: this.state.selectedPortfolio,
                lo,
                hi,
                step,
            });
            this.state.banner = null;
        } catch (error) {
            this.applyError(error);
            return;
        }
        this.notify();
    }

    /** Value the combined portfolio and each separate one, then compare. */
    async compare(combinedId: string, separateIds: string[]): Promise<void> {
        if (!this.state.sessionId) return;
        try {
            const combined = await this.client.valuation(this.state.sessionId, {
                portfolio_id: combinedId,
            });
            const separates: ValuationReport[] = [];
            for (const pid of separateIds) {
                separates.push(
                    await this.client.valuation(this.state.sessionId, { portfolio_id: pid }),
                );
            }
            this.state.comparison = buildCompareModel(combined, separates);
            this.state.banner = null;
        } catch (error) {
            if (error instanceof MixedConventionError) {
                this.state.banner = { kind: "blocked", message: error.message };
                this.notify();
                return;
            }
            this.applyError(error);
            return;
        }
        this.notify();
    }
}
