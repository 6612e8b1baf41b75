import { el, clear, pctText } from "../theme";
import { makeInstanceCard } from "../cards";
import { dotPlot, thresholdSlider, METRIC_DEFS, type DotRow } from "./overview";
import type { App } from "../app";
import type { ConsistencyResult, CounterfactualResult, IndividualResult } from "../types";

const SVG_NS = "http://www.w3.org/2000/svg";

// Donut with the fair share in green and the remainder in red, plus the
// percentage as text in the middle so the encoding never relies on color.
function pie(pct: number, role: string): HTMLElement {
  const box = el("div", { class: "pie-box", "data-role": role, "data-pct": String(pct) });
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", "0 0 42 42");
  svg.setAttribute("class", "pie");
  const circumference = 2 * Math.PI * 15.9;
  const bg = document.createElementNS(SVG_NS, "circle");
  bg.setAttribute("cx", "21");
  bg.setAttribute("cy", "21");
  bg.setAttribute("r", "15.9");
  bg.setAttribute("class", "pie-rest");
  svg.appendChild(bg);
  const arc = document.createElementNS(SVG_NS, "circle");
  arc.setAttribute("cx", "21");
  arc.setAttribute("cy", "21");
  arc.setAttribute("r", "15.9");
  arc.setAttribute("class", "pie-share");
  arc.setAttribute("stroke-dasharray",
    `${(pct / 100) * circumference} ${circumference}`);
  svg.appendChild(arc);
  const text = document.createElementNS(SVG_NS, "text");
  text.setAttribute("x", "21");
  text.setAttribute("y", "23");
  text.setAttribute("text-anchor", "middle");
  text.setAttribute("class", "pie-text");
  text.textContent = pctText(pct);
  svg.appendChild(text);
  box.appendChild(svg);
  return box;
}

function counterfactualSection(result: CounterfactualResult, app: App): HTMLElement {
  const section = el("section", {
    class: "cf-section",
    "data-role": "cf-section",
    "data-feature": result.feature,
  });
  section.appendChild(el("h3", {}, `Counterfactual fairness: ${result.feature}`));
  section.appendChild(el("p", { class: "metric-def" }, METRIC_DEFS.CF));
  const row = el("div", { class: "cf-row" });
  row.appendChild(pie(result.value_pct, "cf-pie"));
  const right = el("div", { class: "cf-right" });
  right.appendChild(el("p", {},
    `${pctText(result.value_pct)} of ${result.breakdown.n} instances keep their rating (${result.verdict})`));
  const grid = el("div", { class: "violator-grid", "data-role": "violator-grid" });
  if (result.breakdown.violating_ids.length === 0) {
    right.appendChild(el("p", { class: "no-violators", "data-role": "no-violators" },
      "no violators"));
  } else {
    for (const id of result.breakdown.violating_ids) {
      const rated = app.instanceById.get(id)?.ground_truth ?? "Good";
      const card = makeInstanceCard(id, rated);
      card.classList.add("violator-card");
      card.addEventListener("click", () => {
        void app.track(app.locateInstance(id));
      });
      grid.appendChild(card);
    }
  }
  right.appendChild(grid);
  row.appendChild(right);
  section.appendChild(row);
  return section;
}

function neighborZoom(app: App, result: ConsistencyResult, id: number): HTMLElement {
  const zoom = el("div", { class: "neighbor-zoom", "data-role": "neighbor-zoom" });
  const neighbors = result.breakdown.neighbor_map[String(id)] ?? [];
  zoom.appendChild(el("h4", {}, `instance ${id} and its ${neighbors.length} nearest neighbors`));
  const list = el("ul", { class: "neighbor-list" });
  const own = app.instanceById.get(id);
  const ownLine = el("li", { class: "neighbor-self" });
  ownLine.appendChild(el("span", {}, `#${id} (selected)`));
  if (own) {
    ownLine.appendChild(el("span",
      { class: `pred-chip chip-${own.predicted.toLowerCase()}` }, own.predicted));
  }
  list.appendChild(ownLine);
  for (const neighborId of neighbors) {
    const line = el("li", { "data-neighbor": String(neighborId) });
    line.appendChild(el("span", {}, `#${neighborId}`));
    const neighbor = app.instanceById.get(neighborId);
    if (neighbor) {
      line.appendChild(el("span",
        { class: `pred-chip chip-${neighbor.predicted.toLowerCase()}` }, neighbor.predicted));
    }
    list.appendChild(line);
  }
  zoom.appendChild(list);
  return zoom;
}

function consistencySection(result: ConsistencyResult, app: App): HTMLElement {
  const section = el("section", { class: "consistency-section", "data-role": "consistency-section" });
  section.appendChild(el("h3", {}, "Consistency"));
  section.appendChild(el("p", { class: "metric-def" }, METRIC_DEFS.Consistency));
  const row = el("div", { class: "cf-row" });
  row.appendChild(pie(result.value_pct, "consistency-pie"));

  const right = el("div", { class: "cf-right" });
  right.appendChild(el("p", {},
    `score ${pctText(result.value_pct)} over ${result.breakdown.n_neighbors} neighbors (${result.verdict})`));
  right.appendChild(el("p", { class: "strip-hint" },
    "each dot is one instance at its own agreement level; green means at or above the individual threshold, red below; click a dot to zoom into its neighbors"));

  const scatter = el("div", { class: "consistency-scatter", "data-role": "consistency-scatter" });
  const threshold = app.state.thresholds.individual;
  const zoomHost = el("div", { class: "zoom-host", "data-role": "zoom-host" });
  for (const [idText, value] of Object.entries(result.breakdown.per_instance)) {
    const id = Number(idText);
    const valuePct = value * 100;
    const ok = valuePct >= threshold;
    const dot = el("button", {
      type: "button",
      class: `scatter-dot ${ok ? "dot-fair" : "dot-unfair"}`,
      "data-role": "scatter-dot",
      "data-id": idText,
      "data-value": String(value),
      title: `instance ${id}: agreement ${pctText(valuePct)} (${ok ? "fair" : "unfair"})`,
    });
    dot.style.left = `${valuePct}%`;
    dot.addEventListener("click", () => {
      zoomHost.innerHTML = "";
      zoomHost.appendChild(neighborZoom(app, result, id));
    });
    scatter.appendChild(dot);
  }
  right.appendChild(scatter);
  right.appendChild(zoomHost);
  row.appendChild(right);
  section.appendChild(row);
  return section;
}

export async function renderIndividualPanel(panel: HTMLElement, app: App): Promise<void> {
  clear(panel);
  panel.appendChild(el("h2", {}, "Individual fairness"));

  let payload;
  try {
    payload = await app.api.individualMetrics();
  } catch (err) {
    panel.appendChild(el("p", { class: "error-box" }, (err as Error).message));
    return;
  }
  const results: IndividualResult[] = payload.results;

  panel.appendChild(thresholdSlider("individual", app.state.thresholds.individual, (value) => {
    void app.track((async () => {
      const doc = await app.api.putThresholds({ ...app.state.thresholds, individual: value });
      app.state.thresholds = doc.thresholds;
      app.syncUrl();
      await renderIndividualPanel(panel, app);
    })());
  }));

  const rows: DotRow[] = results.map((r) => ({
    metric: r.metric_id === "CF" ? `CF (${r.feature})` : r.metric_id,
    value: r.value_pct,
    verdict: r.verdict,
  }));
  panel.appendChild(dotPlot(rows, "individual", app.state.thresholds.individual));

  for (const result of results) {
    if (result.metric_id === "CF") {
      panel.appendChild(counterfactualSection(result, app));
    } else {
      panel.appendChild(consistencySection(result, app));
    }
  }
}
