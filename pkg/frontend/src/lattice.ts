/**
 * Recombining-lattice layout and SVG rendering.
 *
 * Time runs left to right (one column per level, level t holds t+1 nodes);
 * zero-payoff nodes are muted, supporting the abandon cue. Labels are the
 * server numbers stringified as-is, never reformatted or recomputed.
 */
import type { GridNode } from "./types.js";

export class MalformedGridError extends Error {
    constructor(message: string) {
        super(message);
        this.name = "MalformedGridError";
    }
}

export interface LayoutNode {
    t: number;
    j: number;
    x: number;
    y: number;
    sLabel: string;
    fLabel: string;
    muted: boolean;
}

export interface LayoutEdge {
    fromT: number;
    fromJ: number;
    toT: number;
    toJ: number;
    label: "u" | "d";
}

export interface LatticeLayout {
    levels: number;
    width: number;
    height: number;
    nodes: LayoutNode[];
    edges: LayoutEdge[];
}

export interface LayoutOptions {
    columnGap?: number;
    rowGap?: number;
    margin?: number;
}

function validate(levels: number, nodes: GridNode[]): Map<string, GridNode> {
    if (!Number.isInteger(levels) || levels < 0) {
        throw new MalformedGridError(`levels must be a non-negative integer, got ${levels}`);
    }
    const expected = ((levels + 1) * (levels + 2)) / 2;
    if (!Array.isArray(nodes) || nodes.length !== expected) {
        throw new MalformedGridError(
            `expected ${expected} nodes for ${levels} levels, got ${nodes?.length ?? 0}`,
        );
    }
    const byKey = new Map<string, GridNode>();
    for (const node of nodes) {
        if (
            !Number.isInteger(node.t) ||
            !Number.isInteger(node.j) ||
            node.t < 0 ||
            node.t > levels ||
            node.j < 0 ||
            node.j > node.t ||
            typeof node.s !== "number" ||
            typeof node.f !== "number"
        ) {
            throw new MalformedGridError(`invalid node (${node.t}, ${node.j})`);
        }
        const key = `${node.t}:${node.j}`;
        if (byKey.has(key)) {
            throw new MalformedGridError(`duplicate node (${node.t}, ${node.j})`);
        }
        byKey.set(key, node);
    }
    return byKey;
}

export function layoutGrid(
    grid: { levels: number; nodes: GridNode[] },
    options: LayoutOptions = {},
): LatticeLayout {
    const byKey = validate(grid.levels, grid.nodes);
    const columnGap = options.columnGap ?? 170;
    const rowGap = options.rowGap ?? 64;
    const margin = options.margin ?? 60;

    const nodes: LayoutNode[] = [];
    const centerY = margin + (grid.levels * rowGap) / 2;
    for (let t = 0; t <= grid.levels; t++) {
        for (let j = 0; j <= t; j++) {
            const node = byKey.get(`${t}:${j}`)!;
            nodes.push({
                t,
                j,
                x: margin + t * columnGap,
                y: centerY + (t / 2 - j) * rowGap,
                sLabel: String(node.s),
                fLabel: String(node.f),
                muted: node.f === 0,
            });
        }
    }

    const edges: LayoutEdge[] = [];
    for (let t = 0; t < grid.levels; t++) {
        for (let j = 0; j <= t; j++) {
            edges.push({ fromT: t, fromJ: j, toT: t + 1, toJ: j + 1, label: "u" });
            edges.push({ fromT: t, fromJ: j, toT: t + 1, toJ: j, label: "d" });
        }
    }

    return {
        levels: grid.levels,
        width: 2 * margin + grid.levels * columnGap,
        height: 2 * margin + grid.levels * rowGap,
        nodes,
        edges,
    };
}

export function allPayoffsZero(grid: { nodes: GridNode[] }): boolean {
    return grid.nodes.every((node) => node.f === 0);
}

function escapeXml(text: string): string {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function latticeSvg(layout: LatticeLayout): string {
    const at = new Map(layout.nodes.map((n) => [`${n.t}:${n.j}`, n]));
    const parts: string[] = [
        `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${layout.width} ${layout.height}" class="lattice">`,
    ];
    for (const edge of layout.edges) {
        const a = at.get(`${edge.fromT}:${edge.fromJ}`)!;
        const b = at.get(`${edge.toT}:${edge.toJ}`)!;
        parts.push(
            `<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" class="edge edge-${edge.label}"/>`,
        );
        parts.push(
            `<text x="${(a.x + b.x) / 2}" y="${(a.y + b.y) / 2 - 4}" class="edge-label">${edge.label}</text>`,
        );
    }
    for (const node of layout.nodes) {
        const cls = node.muted ? "node muted" : "node";
        parts.push(`<g class="${cls}" data-t="${node.t}" data-j="${node.j}">`);
        parts.push(`<circle cx="${node.x}" cy="${node.y}" r="26"/>`);
        parts.push(
            `<text x="${node.x}" y="${node.y - 4}" class="s-label">S ${escapeXml(node.sLabel)}</text>`,
        );
        parts.push(
            `<text x="${node.x}" y="${node.y + 12}" class="f-label">f ${escapeXml(node.fLabel)}</text>`,
        );
        parts.push("</g>");
    }
    parts.push("</svg>");
    return parts.join("");
}
