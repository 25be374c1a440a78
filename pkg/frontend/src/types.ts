/** Wire types mirroring the /v1 canonical JSON payloads (snake_case keys). */

export type Recommendation = "switch" | "wait" | "abandon";

export interface SessionInfo {
    session_id: string;
    revision: number;
}

export interface PortfolioDoc {
    id: string;
    dad_ids: string[];
    budget: number | null;
}

export interface DadDoc {
    id: string;
    contrib: Record<string, number>;
    raw_cost: number;
    [key: string]: unknown;
}

export interface ProjectDoc {
    schema_version: number;
    name: string;
    portfolios: PortfolioDoc[];
    dads: DadDoc[];
    lattice_defaults: {
        v_s: number;
        u: number;
        d: number;
        r: number;
        horizons: number;
        convention: string;
        style: string;
    };
    [key: string]: unknown;
}

export interface RankRow {
    dad_id: string;
    benefit: number;
    scaled_benefit: number;
}

export interface ProjectEnvelope {
    session_id: string;
    revision: number;
    project: ProjectDoc;
}

export interface GridNode {
    t: number;
    j: number;
    s: number;
    f: number;
}

export interface ValuationReport {
    engine_version: string;
    portfolio_id: string | null;
    dad_ids: string[];
    per_dad_base_values: Record<string, number>;
    budget: number | null;
    exercise_cost: number;
    v_s: number;
    u: number;
    d: number;
    r: number;
    convention: string;
    style: string;
    horizons: number;
    per_horizon_prices: number[];
    total_price: number;
    final_horizon_price: number;
    recommendation: Recommendation;
    compared_against: string | null;
    grids: { horizon: number; price: number; nodes: GridNode[] }[];
}

export interface LatticeGrid {
    levels: number;
    nodes: GridNode[];
    horizon: number;
    price: number;
    exercise_cost: number;
}

export interface WhatIfRow {
    base_value: number;
    total_price: number;
    recommendation: Recommendation;
}

export interface WhatIfReport {
    base_range: { lo: number; hi: number; step: number };
    rows: WhatIfRow[];
}

export interface LatticeOverrides {
    v_s?: number;
    u?: number;
    d?: number;
    r?: number;
    horizons?: number;
    convention?: string;
    style?: string;
}

export interface ValuationRequest {
    portfolio_id?: string;
    dad_ids?: string[];
    budget?: number;
    per_dad_base_values?: Record<string, number>;
    lattice?: LatticeOverrides;
}

export interface WhatIfRequest extends ValuationRequest {
    lo: number;
    hi: number;
    step: number;
}

export interface LatticeQuery {
    portfolio_id?: string;
    dad_ids?: string;
    base?: number;
    horizon?: number;
    vs?: number;
    u?: number;
    d?: number;
    r?: number;
    convention?: string;
    style?: string;
}
