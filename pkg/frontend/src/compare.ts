/**
 * Side-by-side portfolio comparison: totals table, diversification delta
 * (combined minus the best separate total), and the favourable banner.
 * All numbers are taken verbatim from server valuations.
 */
import type { Recommendation, ValuationReport } from "./types.js";

export class MixedConventionError extends Error {
    constructor(message: string) {
        super(message);
        this.name = "MixedConventionError";
    }
}

export interface CompareRow {
    portfolioId: string;
    label: "combined" | "separate";
    totalPrice: number;
    recommendation: Recommendation;
}

export interface CompareModel {
    rows: CompareRow[];
    delta: number;
    banner: "favourable" | "unfavourable" | "neutral";
}

export function buildCompareModel(
    combined: ValuationReport,
    separates: ValuationReport[],
): CompareModel {
    if (separates.length === 0) {
        throw new MixedConventionError("need at least one separate valuation to compare");
    }
    for (const report of separates) {
        if (report.convention !== combined.convention) {
            throw new MixedConventionError(
                `cannot compare across discount conventions (${report.convention} vs ${combined.convention})`,
            );
        }
    }
    const rows: CompareRow[] = [
        {
            portfolioId: combined.portfolio_id ?? combined.dad_ids.join("+"),
            label: "combined",
            totalPrice: combined.total_price,
            recommendation: combined.recommendation,
        },
        ...separates.map(
            (report): CompareRow => ({
                portfolioId: report.portfolio_id ?? report.dad_ids.join("+"),
                label: "separate",
                totalPrice: report.total_price,
                recommendation: report.recommendation,
            }),
        ),
    ];
    const bestSeparate = Math.max(...separates.map((r) => r.total_price));
    const delta = combined.total_price - bestSeparate;
    const banner = delta > 0 ? "favourable" : delta < 0 ? "unfavourable" : "neutral";
    return { rows, delta, banner };
}

/** CSV export of the comparison panel (numbers stringified verbatim). */
export function compareToCsv(model: CompareModel): string {
    const lines = ["portfolio_id,role,total_price,recommendation"];
    for (const row of model.rows) {
        lines.push(`${row.portfolioId},${row.label},${row.totalPrice},${row.recommendation}`);
    }
    lines.push(`delta,,${model.delta},${model.banner}`);
    return lines.join("\n") + "\n";
}
