/** Browser wiring: binds the controller to the DOM. No business logic here. */
import { ApiClient, fetchTransport } from "./client.js";
import { compareToCsv } from "./compare.js";
import { allPayoffsZero, latticeSvg, layoutGrid, MalformedGridError } from "./lattice.js";
import { EditableField, ViewState, WhatIfController } from "./controller.js";

const client = new ApiClient(fetchTransport(""));
const controller = new WhatIfController(client);

function el<T extends HTMLElement>(id: string): T {
    return document.getElementById(id) as T;
}

function renderFieldErrors(state: ViewState): void {
    for (const field of ["base", "u", "d", "r", "horizons", "convention"]) {
        const slot = document.getElementById(`error-${field}`);
        if (slot) slot.textContent = state.fieldErrors[field as EditableField] ?? "";
    }
}

function renderValuation(state: ViewState): void {
    const v = state.valuation;
    const list = el<HTMLUListElement>("horizon-prices");
    const badge = el<HTMLSpanElement>("recommendation");
    if (!v) {
        list.innerHTML = "";
        el("total-price").textContent = "";
        badge.textContent = "";
        badge.className = "badge";
        return;
    }
    list.innerHTML = v.per_horizon_prices
        .map((price, i) => `<li>horizon ${i + 1}: ${price}</li>`)
        .join("");
    el("total-price").textContent = String(v.total_price);
    badge.textContent = v.recommendation;
    badge.className = `badge badge-${v.recommendation}`;
}

function renderLattice(state: ViewState): void {
    const host = el<HTMLDivElement>("lattice-host");
    if (!state.grid) {
        host.innerHTML = "";
        return;
    }
    try {
        const layout = layoutGrid(state.grid);
        const zeroBanner = allPayoffsZero(state.grid)
            ? '<p class="badge badge-abandon">every payoff is zero</p>'
            : "";
        host.innerHTML = zeroBanner + latticeSvg(layout);
    } catch (error) {
        if (error instanceof MalformedGridError) {
            host.innerHTML = `<p class="error-panel">${error.message}</p>`;
            return;
        }
        throw error;
    }
}

function renderSweep(state: ViewState): void {
    const body = el<HTMLTableSectionElement>("sweep-body");
    if (!state.sweep) {
        body.innerHTML = "";
        return;
    }
    body.innerHTML = state.sweep.rows
        .map(
            (row) =>
                `<tr><td>${row.base_value}</td><td>${row.total_price}</td><td>${row.recommendation}</td></tr>`,
        )
        .join("");
}

function renderComparison(state: ViewState): void {
    const host = el<HTMLDivElement>("compare-host");
    const model = state.comparison;
    if (!model) {
        host.innerHTML = "";
        return;
    }
    const rows = model.rows
        .map(
            (row) =>
                `<tr><td>${row.portfolioId}</td><td>${row.label}</td><td>${row.totalPrice}</td><td>${row.recommendation}</td></tr>`,
        )
        .join("");
    host.innerHTML = `
      <p class="banner banner-${model.banner}">${model.banner} (delta ${model.delta})</p>
      <table><thead><tr><th>portfolio</th><th>role</th><th>total</th><th>action</th></tr></thead>
      <tbody>${rows}<tr class="delta-row"><td>delta</td><td></td><td>${model.delta}</td><td></td></tr></tbody></table>`;
}

function renderBanner(state: ViewState): void {
    const host = el<HTMLDivElement>("banner-host");
    host.textContent = state.banner ? `${state.banner.kind}: ${state.banner.message}` : "";
}

function renderRanking(state: ViewState): void {
    const body = el<HTMLTableSectionElement>("rank-body");
    if (!state.ranking) {
        body.innerHTML = "";
        return;
    }
    body.innerHTML = state.ranking
        .map(
            (row) =>
                `<tr><td>${row.dad_id}</td><td>${row.benefit}</td><td>${row.scaled_benefit}</td></tr>`,
        )
        .join("");
}

function renderContribEditor(state: ViewState): void {
    const host = el<HTMLDivElement>("contrib-editor");
    const select = el<HTMLSelectElement>("edit-dad");
    const doc = state.projectDoc;
    if (!doc) {
        host.innerHTML = "";
        return;
    }
    if (select.options.length !== doc.dads.length) {
        select.innerHTML = doc.dads.map((d) => `<option value="${d.id}">${d.id}</option>`).join("");
    }
    const dad = doc.dads.find((d) => d.id === select.value) ?? doc.dads[0];
    if (!dad) return;
    host.innerHTML = Object.entries(dad.contrib)
        .map(([qa, score]) => {
            const key = `contrib.${dad.id}.${qa}`;
            const error = state.fieldErrors[key] ?? "";
            return `<label>${qa}
              <input type="number" step="0.1" min="-1" max="1" value="${score}"
                     data-dad="${dad.id}" data-qa="${qa}" class="contrib-input"/>
              <span class="field-error">${error}</span></label>`;
        })
        .join("");
    for (const input of Array.from(host.querySelectorAll<HTMLInputElement>(".contrib-input"))) {
        input.addEventListener("input", () => {
            controller.editContrib(input.dataset.dad!, input.dataset.qa!, input.value);
        });
    }
}

controller.onChange((state) => {
    el("project-name").textContent = state.projectName;
    const select = el<HTMLSelectElement>("portfolio-select");
    if (select.options.length !== state.portfolios.length) {
        select.innerHTML = state.portfolios
            .map((p) => `<option value="${p.id}">${p.id} (${p.dad_ids.join(", ")})</option>`)
            .join("");
    }
    renderFieldErrors(state);
    renderValuation(state);
    renderLattice(state);
    renderSweep(state);
    renderComparison(state);
    renderBanner(state);
    renderRanking(state);
    renderContribEditor(state);
});

el<HTMLSelectElement>("edit-dad").addEventListener("change", () =>
    renderContribEditor(controller.state),
);

el<HTMLButtonElement>("load-button").addEventListener("click", () => {
    void controller.load(el<HTMLInputElement>("project-path").value);
});

el<HTMLSelectElement>("portfolio-select").addEventListener("change", (event) => {
    void controller.selectPortfolio((event.target as HTMLSelectElement).value);
});

for (const field of ["base", "u", "d", "r", "horizons", "convention"] as EditableField[]) {
    const input = document.getElementById(`input-${field}`) as HTMLInputElement | null;
    input?.addEventListener("input", () => controller.edit(field, input.value));
}

el<HTMLButtonElement>("sweep-button").addEventListener("click", () => {
    void controller.sweep(
        Number(el<HTMLInputElement>("sweep-lo").value),
        Number(el<HTMLInputElement>("sweep-hi").value),
        Number(el<HTMLInputElement>("sweep-step").value),
    );
});

el<HTMLButtonElement>("compare-button").addEventListener("click", () => {
    const combined = el<HTMLInputElement>("compare-combined").value;
    const separates = el<HTMLInputElement>("compare-separates")
        .value.split(",")
        .map((s) => s.trim())
        .filter(Boolean);
    void controller.compare(combined, separates);
});

el<HTMLButtonElement>("csv-button").addEventListener("click", () => {
    if (!controller.state.comparison) return;
    const blob = new Blob([compareToCsv(controller.state.comparison)], { type: "text/csv" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "comparison.csv";
    link.click();
    URL.revokeObjectURL(link.href);
});
