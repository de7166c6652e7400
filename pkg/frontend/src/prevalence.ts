import type { PrevalenceTable } from "./api.js";

function cell(tag: "td" | "th", text: string, className?: string): HTMLElement {
    const el = document.createElement(tag);
    el.textContent = text;
    if (className) {
        el.className = className;
    }
    return el;
}

/** Render the live prevalence tally (label, count, percentage rows in
 *  taxonomy order plus a totals line) into the given container. */
export function renderPrevalence(container: HTMLElement, table: PrevalenceTable | null): void {
    container.innerHTML = "";
    if (!table) {
        container.textContent = "prevalence unavailable";
        return;
    }
    const el = document.createElement("table");
    el.className = "prevalence";

    const head = document.createElement("tr");
    for (const title of ["Reason/Label", "Count", "Percentage"]) {
        head.appendChild(cell("th", title));
    }
    el.appendChild(head);

    for (const row of table.rows) {
        const tr = document.createElement("tr");
        tr.appendChild(cell("td", row.label, "label"));
        tr.appendChild(cell("td", String(row.count), "count"));
        tr.appendChild(cell("td", `${row.percentage}%`, "percentage"));
        el.appendChild(tr);
    }

    const totals = document.createElement("tr");
    totals.className = "totals";
    totals.appendChild(cell("td", "Total"));
    totals.appendChild(cell("td", `${table.total_labeled} (of ${table.total_sampled} sampled)`));
    totals.appendChild(cell("td", table.total_labeled > 0 ? "100%" : "0%"));
    el.appendChild(totals);

    container.appendChild(el);
}
