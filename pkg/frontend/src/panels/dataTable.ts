import { el, clear } from "../theme";
import type { App } from "../app";
import type { InstanceRow, InstancesResponse } from "../types";

export interface TableQuery {
  filter: string[];
  sort: string | null;
}

function probabilityCell(row: InstanceRow): HTMLElement {
  const goodPct = (row.probability_good * 100).toFixed(1);
  const badPct = (100 - row.probability_good * 100).toFixed(1);
  const perClass = `Good ${goodPct}% / Bad ${badPct}%`;
  const cell = el("div", {
    class: "prob-bar",
    title: perClass,
    "aria-label": perClass,
    "data-role": "prob-bar",
  });
  const fill = el("div", { class: "prob-fill" });
  fill.style.width = `${goodPct}%`;
  cell.appendChild(fill);
  cell.appendChild(el("span", { class: "prob-text" }, `${goodPct}%`));
  return cell;
}

function headerCell(app: App, panel: HTMLElement, name: string, sortable: boolean): HTMLElement {
  const th = el("th", { "data-column": name }, name);
  if (!sortable) return th;
  th.classList.add("sortable");
  const current = app.tableQuery.sort;
  if (current === `${name}:asc`) th.classList.add("sorted-asc");
  if (current === `${name}:desc`) th.classList.add("sorted-desc");
  th.addEventListener("click", () => {
    app.tableQuery.sort = current === `${name}:desc` ? `${name}:asc` : `${name}:desc`;
    void app.track(renderDataPanel(panel, app));
  });
  return th;
}

async function fetchRows(app: App): Promise<InstancesResponse> {
  return app.api.instances({
    filter: app.tableQuery.filter.length ? app.tableQuery.filter : undefined,
    sort: app.tableQuery.sort ?? undefined,
    limit: 200,
  });
}

export async function renderDataPanel(panel: HTMLElement, app: App): Promise<void> {
  clear(panel);
  const schema = app.schema;
  let page: InstancesResponse;
  try {
    page = await fetchRows(app);
  } catch (err) {
    panel.appendChild(el("p", { class: "error-box", "data-role": "table-error" },
      `could not load instances: ${(err as Error).message}`));
    return;
  }
  app.cacheInstances(page.rows);

  const controls = el("div", { class: "table-controls" });
  const filterInput = el("input", {
    type: "text",
    placeholder: "filter, e.g. age:lt:25 or checking_status:A14",
    "data-role": "table-filter",
  }) as HTMLInputElement;
  filterInput.value = app.tableQuery.filter.join(" ");
  const applyBtn = el("button", { type: "button", "data-role": "apply-filter" }, "Apply");
  applyBtn.addEventListener("click", () => {
    app.tableQuery.filter = filterInput.value.trim().split(/\s+/).filter(Boolean);
    void app.track(renderDataPanel(panel, app));
  });
  const summary = el("span", { class: "table-summary", "data-role": "table-summary" },
    `${page.rows.length} of ${page.total} instances (fold of ${schema.active_fold_size})`);
  controls.append(filterInput, applyBtn, summary);
  panel.appendChild(controls);

  const wrap = el("div", { class: "table-wrap" });
  const table = el("table", { class: "instance-table", "data-role": "instance-table" });
  const thead = el("thead");
  const headRow = el("tr");
  headRow.appendChild(el("th", {}, "id"));
  for (const feature of schema.features) {
    headRow.appendChild(headerCell(app, panel, feature.name, true));
  }
  // the last three columns are fixed and always trail the feature columns
  headRow.appendChild(el("th", { class: "fixed-col" }, "Rated Credit"));
  headRow.appendChild(el("th", { class: "fixed-col" }, "Predicted Credit"));
  headRow.appendChild(el("th", { class: "fixed-col" }, "Probability"));
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = el("tbody");
  for (const row of page.rows) {
    const tr = el("tr", { "data-id": String(row.id) });
    const idCell = el("td", { class: "id-cell" }, String(row.id));
    tr.appendChild(idCell);
    for (const feature of schema.features) {
      const raw = row.values[feature.name];
      const display = feature.display_labels[String(raw)] ?? String(raw);
      tr.appendChild(el("td", {}, display));
    }
    const rated = el("td", { class: `fixed-col label-${row.ground_truth.toLowerCase()}` },
      row.ground_truth);
    if (row.ground_truth_overridden) {
      rated.appendChild(el("span", { class: "override-badge" }, " (edited)"));
    }
    tr.appendChild(rated);
    const predicted = el("td", { class: `fixed-col label-${row.predicted.toLowerCase()}` },
      row.predicted);
    if (row.prediction_overridden) {
      predicted.appendChild(el("span", { class: "override-badge" }, " (edited)"));
    }
    tr.appendChild(predicted);
    const probTd = el("td", { class: "fixed-col" });
    probTd.appendChild(probabilityCell(row));
    tr.appendChild(probTd);
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  wrap.appendChild(table);
  panel.appendChild(wrap);

  if (app.state.selectedInstance !== null) {
    locateRow(panel, app.state.selectedInstance);
  }
}

// Purple highlight plus a text marker; scrolls when the platform supports it.
export function locateRow(panel: HTMLElement, id: number): boolean {
  panel.querySelectorAll("tr.row-located").forEach((row) => {
    row.classList.remove("row-located");
    row.querySelector(".locate-badge")?.remove();
  });
  const row = panel.querySelector<HTMLTableRowElement>(`tr[data-id="${id}"]`);
  if (!row) return false;
  row.classList.add("row-located");
  const idCell = row.querySelector(".id-cell");
  idCell?.appendChild(el("span", { class: "locate-badge" }, " located"));
  if (typeof row.scrollIntoView === "function") {
    row.scrollIntoView({ block: "center" });
  }
  return true;
}
