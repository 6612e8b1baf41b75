import { el, clear, pctText, verdictClass } from "../theme";
import { makeInstanceCard } from "../cards";
import type { App } from "../app";
import type {
  ExplainResponse,
  GroupResult,
  Scope,
  SubgroupResult,
} from "../types";

export const METRIC_DEFS: Record<string, string> = {
  DP: "Share of each side rated Good; the value is the gap between the two shares.",
  EOpp: "Among applicants whose recorded outcome is Good, the share rated Good on each side; the value is the gap.",
  PE: "Among applicants whose recorded outcome is Bad, the share rated Good on each side; the value is the gap.",
  EOdds: "The larger of the Equal Opportunity and Predictive Equality gaps.",
  OT: "Among applicants rated Good, the share whose recorded outcome is Good on each side; the value is the gap.",
  CSP: "The Good-rating gap inside each stratum of a legitimate feature; the value is the worst stratum's gap.",
  CF: "Share of instances whose rating is unchanged when the protected attribute is flipped.",
  Consistency: "Agreement between each instance's rating and its five nearest neighbors.",
};

// numerator membership per metric, used only to color the formula strip;
// the printed rates themselves always come from the service breakdown
function inNumerator(metric: string, predicate: Record<string, unknown>): boolean {
  switch (metric) {
    case "DP":
    case "CSP":
    case "EOdds":
      return predicate.yhat === 1;
    case "EOpp":
      return predicate.y === 1 && predicate.yhat === 1;
    case "PE":
      return predicate.y === 0 && predicate.yhat === 1;
    case "OT":
      return predicate.y === 1 && predicate.yhat === 1;
    default:
      return false;
  }
}

function inDenominator(metric: string, predicate: Record<string, unknown>): boolean {
  switch (metric) {
    case "EOpp":
      return predicate.y === 1;
    case "PE":
      return predicate.y === 0;
    case "OT":
      return predicate.yhat === 1;
    default:
      return true;
  }
}

// --- dot plot ---------------------------------------------------------------

export interface DotRow {
  metric: string;
  value: number;
  verdict: "fair" | "unfair";
}

export function dotPlot(
  rows: DotRow[],
  scope: Scope,
  threshold: number,
  onSelect?: (metric: string) => void,
): HTMLElement {
  const plot = el("div", { class: "dot-plot", "data-role": "dot-plot", "data-scope": scope });
  for (const row of rows) {
    const line = el("div", {
      class: "metric-row",
      "data-role": "metric-row",
      "data-metric": row.metric,
    });
    line.appendChild(el("span", { class: "metric-name" }, row.metric));
    const track = el("div", { class: "dot-track" });
    const zone = el("div", { class: "fair-zone" });
    if (scope === "individual") {
      // fair side sits above the threshold on the individual scale
      zone.style.left = `${threshold}%`;
      zone.style.width = `${100 - threshold}%`;
    } else {
      zone.style.left = "0";
      zone.style.width = `${threshold}%`;
    }
    zone.appendChild(el("span", { class: "zone-label" }, "fair zone"));
    track.appendChild(zone);
    const dot = el("div", {
      class: `dot ${verdictClass(row.verdict)}`,
      "data-role": "metric-dot",
      "data-metric": row.metric,
      "data-verdict": row.verdict,
      "data-value": String(row.value),
      title: `${row.metric} ${pctText(row.value)} (${row.verdict})`,
    });
    dot.style.left = `${Math.min(row.value, 100)}%`;
    track.appendChild(dot);
    line.appendChild(track);
    line.appendChild(el("span", { class: "dot-value" }, pctText(row.value)));
    line.appendChild(
      el("span", { class: `verdict-label verdict-${row.verdict}` }, row.verdict));
    if (onSelect) {
      line.classList.add("selectable");
      line.addEventListener("click", () => onSelect(row.metric));
    }
    plot.appendChild(line);
  }
  return plot;
}

export function thresholdSlider(
  scope: Scope,
  value: number,
  onCommit: (value: number) => void,
): HTMLElement {
  const box = el("div", { class: "slider-box" });
  const id = `slider-${scope}`;
  box.appendChild(el("label", { for: id }, `${scope} threshold`));
  const slider = el("input", {
    type: "range",
    id,
    min: "0",
    max: "100",
    step: "1",
    "data-role": "threshold-slider",
    "data-scope": scope,
  }) as HTMLInputElement;
  slider.value = String(value);
  const readout = el("span", { class: "slider-readout", "data-role": "slider-readout" },
    pctText(value));
  slider.addEventListener("input", () => {
    readout.textContent = pctText(Number(slider.value));
  });
  slider.addEventListener("change", () => onCommit(Number(slider.value)));
  box.append(slider, readout);
  return box;
}

// --- group panel ------------------------------------------------------------

function featurePicker(app: App, panel: HTMLElement): HTMLElement {
  const box = el("div", { class: "feature-picker" });
  for (const spec of app.schema.protected) {
    const id = `pick-${spec.name}`;
    const radio = el("input", {
      type: "radio",
      name: "protected-feature",
      id,
      value: spec.name,
      "data-role": "feature-radio",
    }) as HTMLInputElement;
    radio.checked = spec.name === app.state.protectedFeature;
    radio.addEventListener("change", () => {
      app.state.protectedFeature = spec.name;
      app.syncUrl();
      void app.track(renderGroupPanel(panel, app));
    });
    const label = el("label", { for: id }, `${spec.name} (${spec.protected_label} vs ${spec.unprotected_label})`);
    box.append(radio, label);
  }
  return box;
}

function groupBars(result: GroupResult, app: App): HTMLElement {
  const spec = app.schema.protected.find((s) => s.name === result.feature);
  const sides = [
    { key: "protected", label: spec?.protected_label ?? "protected",
      rate: result.breakdown.rate_protected_pct },
    { key: "unprotected", label: spec?.unprotected_label ?? "unprotected",
      rate: result.breakdown.rate_unprotected_pct },
  ];
  const chart = el("div", { class: "bar-chart", "data-role": "group-bars" });
  const advantaged = result.breakdown.advantaged_group;
  const barByLabel = new Map<string, HTMLElement>();
  for (const side of sides) {
    const row = el("div", { class: "bar-row", "data-group": side.key });
    row.appendChild(el("span", { class: "bar-name" }, side.label));
    const bar = el("div", { class: "bar", "data-role": "group-bar", "data-group": side.key });
    bar.style.width = `${side.rate}%`;
    bar.appendChild(el("span", { class: "bar-value" }, pctText(side.rate)));
    barByLabel.set(side.label, bar);
    row.appendChild(bar);
    if (advantaged === side.label) {
      row.appendChild(el("span", { class: "advantaged-tag" }, "advantaged"));
    }
    chart.appendChild(row);
  }
  const diffRow = el("div", { class: "bar-row diff-row" });
  diffRow.appendChild(el("span", { class: "bar-name" }, "difference"));
  const diff = el("div", {
    class: "bar diff-bar",
    "data-role": "difference-bar",
    title: "difference between the two rates; hover marks the advantaged side",
  });
  diff.style.width = `${result.value_pct}%`;
  diff.appendChild(el("span", { class: "bar-value" }, pctText(result.value_pct)));
  diffRow.appendChild(diff);
  chart.appendChild(diffRow);
  diff.addEventListener("mouseenter", () => {
    if (advantaged) barByLabel.get(advantaged)?.classList.add("bar-advantaged");
  });
  diff.addEventListener("mouseleave", () => {
    if (advantaged) barByLabel.get(advantaged)?.classList.remove("bar-advantaged");
  });
  return chart;
}

function formulaStrip(metric: string, explain: ExplainResponse, app: App): HTMLElement {
  const strip = el("div", { class: "formula-strip", "data-role": "formula-strip" });
  strip.appendChild(el("p", { class: "strip-hint" },
    "each block is one bucket of instances; blocks marked 'counts' form the rate's numerator, the row is its denominator"));
  const spec = app.schema.protected.find((s) => s.name === explain.feature);
  const sides: Array<[boolean, string]> = [
    [true, spec?.protected_label ?? "protected"],
    [false, spec?.unprotected_label ?? "unprotected"],
  ];
  for (const [flag, label] of sides) {
    const row = el("div", { class: "strip-row" });
    row.appendChild(el("span", { class: "strip-label" }, label));
    const blocks = el("div", { class: "strip-blocks" });
    for (const bucket of explain.buckets) {
      if (bucket.predicate.group !== flag) continue;
      if (!inDenominator(metric, bucket.predicate)) continue;
      const numerator = inNumerator(metric, bucket.predicate);
      const block = el("div", {
        class: `strip-block ${numerator ? "block-num" : "block-den"}`,
        title: bucket.title,
      });
      block.style.flexGrow = String(Math.max(bucket.count, 1));
      block.appendChild(el("span", {}, String(bucket.count)));
      if (numerator) block.appendChild(el("span", { class: "block-tag" }, "counts"));
      blocks.appendChild(block);
    }
    row.appendChild(blocks);
    strip.appendChild(row);
  }
  return strip;
}

const CARD_CAP = 60;

function bucketGrid(explain: ExplainResponse, app: App): HTMLElement {
  const grid = el("div", { class: "bucket-grid", "data-role": "bucket-grid" });
  for (const bucket of explain.buckets) {
    const box = el("div", { class: "bucket-box", "data-role": "bucket-box" });
    box.appendChild(el("h4", {}, bucket.title));
    box.appendChild(el("span", { class: "bucket-count", "data-role": "bucket-count" },
      `${bucket.count} instances`));
    const cards = el("div", { class: "bucket-cards" });
    for (const id of bucket.ids.slice(0, CARD_CAP)) {
      const rated = app.instanceById.get(id)?.ground_truth ?? "Good";
      const card = makeInstanceCard(id, rated);
      card.addEventListener("click", () => {
        void app.track(app.locateInstance(id));
      });
      cards.appendChild(card);
    }
    if (bucket.ids.length > CARD_CAP) {
      cards.appendChild(el("span", { class: "bucket-more" },
        `+${bucket.ids.length - CARD_CAP} more`));
    }
    box.appendChild(cards);
    grid.appendChild(box);
  }
  return grid;
}

async function explanationSection(app: App, panel: HTMLElement, results: GroupResult[]): Promise<HTMLElement> {
  const metric = app.state.explainMetric;
  const section = el("section", { class: "explain-section", "data-role": "explain-section" });
  section.appendChild(el("h3", {}, `${metric} explained`));
  section.appendChild(el("p", { class: "metric-def", "data-role": "metric-def" },
    METRIC_DEFS[metric] ?? ""));
  const result = results.find((r) => r.metric_id === metric);
  if (!result) return section;

  if (result.breakdown.components) {
    const parts = el("p", { class: "components", "data-role": "eodds-components" },
      `components: EOpp ${pctText(result.breakdown.components.EOpp)}, PE ${pctText(result.breakdown.components.PE)}`);
    section.appendChild(parts);
  }
  section.appendChild(groupBars(result, app));

  let condition: string | undefined;
  if (metric === "CSP") {
    condition = app.state.legitFeature ?? app.schema.legitimate[0]?.feature;
    const radios = el("div", { class: "condition-radios", "data-role": "condition-radios" });
    radios.appendChild(el("span", {}, "condition:"));
    for (const legit of app.schema.legitimate) {
      const id = `cond-${legit.feature}`;
      const radio = el("input", {
        type: "radio",
        name: "csp-condition",
        id,
        value: legit.feature,
        "data-role": "condition-radio",
      }) as HTMLInputElement;
      radio.checked = legit.feature === condition;
      radio.addEventListener("change", () => {
        app.state.legitFeature = legit.feature;
        app.syncUrl();
        void app.track(renderGroupPanel(panel, app));
      });
      radios.append(radio, el("label", { for: id }, legit.feature));
    }
    section.appendChild(radios);
    if (result.breakdown.strata) {
      const list = el("ul", { class: "strata-list", "data-role": "strata-list" });
      for (const [stratum, gap] of Object.entries(result.breakdown.strata)) {
        list.appendChild(el("li", {}, `${stratum}: gap ${pctText(gap)}`));
      }
      section.appendChild(el("p", { class: "strip-hint" },
        "gap inside every stratum of each eligible condition; the worst one drives the value"));
      section.appendChild(list);
    }
  }

  try {
    const explain = await app.api.explain(metric, result.feature, condition,
      app.state.stratum ?? undefined);
    section.appendChild(formulaStrip(metric, explain, app));
    section.appendChild(bucketGrid(explain, app));
  } catch (err) {
    section.appendChild(el("p", { class: "error-box" },
      `no instance buckets: ${(err as Error).message}`));
  }
  return section;
}

export async function renderGroupPanel(panel: HTMLElement, app: App): Promise<void> {
  clear(panel);
  panel.appendChild(el("h2", {}, "Group fairness"));
  panel.appendChild(featurePicker(app, panel));

  // the dot plot always shows the default CSP condition; the radio below
  // only swaps the explanation's bucket grid
  let payload;
  try {
    payload = await app.api.groupMetrics(app.state.protectedFeature);
  } catch (err) {
    panel.appendChild(el("p", { class: "error-box" }, (err as Error).message));
    return;
  }

  panel.appendChild(thresholdSlider("group", app.state.thresholds.group, (value) => {
    void app.track((async () => {
      const doc = await app.api.putThresholds({ ...app.state.thresholds, group: value });
      app.state.thresholds = doc.thresholds;
      app.syncUrl();
      await renderGroupPanel(panel, app);
    })());
  }));

  const rows: DotRow[] = payload.results.map((r) => ({
    metric: r.metric_id,
    value: r.value_pct,
    verdict: r.verdict,
  }));
  panel.appendChild(dotPlot(rows, "group", app.state.thresholds.group, (metric) => {
    app.state.explainMetric = metric;
    app.syncUrl();
    void app.track(renderGroupPanel(panel, app));
  }));

  panel.appendChild(await explanationSection(app, panel, payload.results));
}

// --- subgroup panel ---------------------------------------------------------

function subgroupDetail(result: SubgroupResult): HTMLElement {
  const box = el("div", { class: "subgroup-detail", "data-role": "subgroup-detail" });
  box.appendChild(el("h4", {}, `${result.metric_id} across ${result.features.join(" x ")}`));
  const table = el("table", { class: "rates-table" });
  const head = el("tr");
  head.append(el("th", {}, "subgroup"), el("th", {}, "rate"), el("th", {}, "role"));
  table.appendChild(head);
  for (const [cell, rate] of Object.entries(result.breakdown.subgroup_rates)) {
    const tr = el("tr", { "data-subgroup": cell });
    tr.appendChild(el("td", {}, cell));
    const rateText = typeof rate === "number"
      ? pctText(rate)
      : Object.entries(rate).map(([k, v]) => `${k} ${pctText(v)}`).join(", ");
    tr.appendChild(el("td", {}, rateText));
    const role = el("td", {});
    if (cell === result.breakdown.most_advantaged) {
      tr.classList.add("row-advantaged");
      role.textContent = "most advantaged";
    } else if (cell === result.breakdown.most_disadvantaged) {
      tr.classList.add("row-disadvantaged");
      role.textContent = "most disadvantaged";
    }
    tr.appendChild(role);
    table.appendChild(tr);
  }
  box.appendChild(table);
  if (result.excluded.length) {
    box.appendChild(el("p", { class: "excluded-note" },
      `excluded (no data): ${result.excluded.join("; ")}`));
  }
  return box;
}

export async function renderSubgroupPanel(panel: HTMLElement, app: App): Promise<void> {
  clear(panel);
  panel.appendChild(el("h2", {}, "Subgroup fairness"));

  const picker = el("div", { class: "feature-picker" });
  for (const spec of app.schema.protected) {
    const id = `sub-${spec.name}`;
    const box = el("input", {
      type: "checkbox",
      id,
      value: spec.name,
      "data-role": "subgroup-check",
    }) as HTMLInputElement;
    box.checked = app.state.subgroupFeatures.includes(spec.name);
    box.addEventListener("change", () => {
      const chosen = Array.from(
        picker.querySelectorAll<HTMLInputElement>("input[data-role='subgroup-check']"))
        .filter((c) => c.checked)
        .map((c) => c.value);
      if (chosen.length < 2) {
        box.checked = true; // a cross product needs at least two features
        return;
      }
      app.state.subgroupFeatures = chosen;
      app.syncUrl();
      void app.track(renderSubgroupPanel(panel, app));
    });
    picker.append(box, el("label", { for: id }, spec.name));
  }
  panel.appendChild(picker);

  let payload;
  try {
    payload = await app.api.subgroupMetrics(app.state.subgroupFeatures);
  } catch (err) {
    panel.appendChild(el("p", { class: "error-box" }, (err as Error).message));
    return;
  }

  panel.appendChild(thresholdSlider("subgroup", app.state.thresholds.subgroup, (value) => {
    void app.track((async () => {
      const doc = await app.api.putThresholds({ ...app.state.thresholds, subgroup: value });
      app.state.thresholds = doc.thresholds;
      app.syncUrl();
      await renderSubgroupPanel(panel, app);
    })());
  }));

  const rows: DotRow[] = payload.results.map((r) => ({
    metric: r.metric_id,
    value: r.value_pct,
    verdict: r.verdict,
  }));
  panel.appendChild(dotPlot(rows, "subgroup", app.state.thresholds.subgroup, (metric) => {
    app.state.explainMetric = metric;
    app.syncUrl();
    void app.track(renderSubgroupPanel(panel, app));
  }));

  const chosen = payload.results.find((r) => r.metric_id === app.state.explainMetric)
    ?? payload.results[0];
  if (chosen) panel.appendChild(subgroupDetail(chosen));
}
