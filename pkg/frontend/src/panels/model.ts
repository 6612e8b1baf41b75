import { el, clear, pctText } from "../theme";
import type { App } from "../app";

export async function renderModelPanel(panel: HTMLElement, app: App): Promise<void> {
  clear(panel);
  panel.appendChild(el("h2", {}, "Model"));

  let summary;
  let weights;
  try {
    [summary, weights] = await Promise.all([app.api.modelSummary(), app.api.modelWeights()]);
  } catch (err) {
    panel.appendChild(el("p", { class: "error-box" }, (err as Error).message));
    return;
  }

  const facts = el("ul", { class: "model-facts", "data-role": "model-facts" });
  facts.appendChild(el("li", { "data-role": "overall-accuracy" },
    `overall accuracy ${pctText(summary.overall_accuracy_pct)} on ${summary.test_size} held-out instances`));
  if (summary.accuracy_good_pct !== null) {
    facts.appendChild(el("li", {}, `accuracy on Good outcomes ${pctText(summary.accuracy_good_pct)}`));
  }
  if (summary.accuracy_bad_pct !== null) {
    facts.appendChild(el("li", {}, `accuracy on Bad outcomes ${pctText(summary.accuracy_bad_pct)}`));
  }
  if (summary.hypothetical) {
    facts.appendChild(el("li", { class: "hypo-tag" }, "reflects unsaved what-if edits"));
  }
  panel.appendChild(facts);

  const histBox = el("div", { class: "hist-box", "data-role": "hist-box" });
  const numeric = app.schema.features.filter((f) => f.kind === "numeric");
  const select = el("select", { "data-role": "hist-feature" }) as HTMLSelectElement;
  for (const feature of numeric) {
    select.appendChild(el("option", { value: feature.name }, feature.name));
  }
  const preferred = numeric.find((f) => f.name === "credit_amount");
  if (preferred) select.value = preferred.name;
  const chart = el("div", { class: "hist-chart", "data-role": "hist-chart" });
  const draw = async () => {
    chart.innerHTML = "";
    const hist = await app.api.histogram(select.value);
    const peak = Math.max(...hist.buckets.map((b) => b.positive + b.negative), 1);
    for (const bucket of hist.buckets) {
      const col = el("div", { class: "hist-col", title: bucket.label });
      const good = el("div", { class: "hist-good" });
      good.style.height = `${(bucket.positive / peak) * 100}%`;
      good.appendChild(el("span", { class: "hist-count" }, `${bucket.positive} Good`));
      const bad = el("div", { class: "hist-bad" });
      bad.style.height = `${(bucket.negative / peak) * 100}%`;
      bad.appendChild(el("span", { class: "hist-count" }, `${bucket.negative} Bad`));
      col.append(good, bad, el("span", { class: "hist-label" }, bucket.label));
      chart.appendChild(col);
    }
  };
  select.addEventListener("change", () => {
    void app.track(draw());
  });
  histBox.append(select, chart);
  panel.appendChild(histBox);
  await draw();

  const weightBox = el("div", { class: "weight-box" });
  weightBox.appendChild(el("h3", {}, `Learned weights (bias ${weights.bias.toFixed(3)})`));
  const scale = Math.max(...weights.weights.map((w) => Math.abs(w.weight)), 1e-9);
  const list = el("div", { class: "weight-list", "data-role": "weight-list" });
  for (const entry of weights.weights) {
    const row = el("div", { class: "weight-row", "data-feature": entry.feature });
    row.appendChild(el("span", { class: "weight-name" }, entry.feature));
    const bar = el("div", { class: `weight-bar weight-${entry.sign}` });
    bar.style.width = `${(Math.abs(entry.weight) / scale) * 100}%`;
    row.appendChild(bar);
    row.appendChild(el("span", { class: "weight-value" },
      `${entry.weight.toFixed(3)} (${entry.sign})`));
    list.appendChild(row);
  }
  weightBox.appendChild(list);
  panel.appendChild(weightBox);
}
