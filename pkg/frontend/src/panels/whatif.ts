import { el, clear, pctText } from "../theme";
import type { App } from "../app";
import type { InstanceRow, Label, OverlayDoc } from "../types";

function flip(label: Label): Label {
  return label === "Good" ? "Bad" : "Good";
}

function toggleCell(app: App, panel: HTMLElement, row: InstanceRow,
                    target: "ground_truth" | "prediction"): HTMLElement {
  const current = target === "ground_truth" ? row.ground_truth : row.predicted;
  const overridden = target === "ground_truth"
    ? row.ground_truth_overridden
    : row.prediction_overridden;
  const button = el("button", {
    type: "button",
    class: `label-toggle label-${current.toLowerCase()}${overridden ? " toggle-overridden" : ""}`,
    "data-role": "label-toggle",
    "data-id": String(row.id),
    "data-target": target,
    title: overridden
      ? `edited; click to revert to the stored value`
      : `click to flip ${target.replace("_", " ")} to ${flip(current)}`,
  }, current + (overridden ? " (edited)" : ""));
  button.addEventListener("click", () => {
    void app.track((async () => {
      if (overridden) {
        await app.api.deleteEdit(row.id, target);
      } else {
        await app.api.postEdit(row.id, target, flip(current));
      }
      await renderWhatifPanel(panel, app);
    })());
  });
  return button;
}

export async function renderWhatifPanel(panel: HTMLElement, app: App): Promise<void> {
  clear(panel);
  panel.appendChild(el("h2", {}, "What-if editor"));
  panel.appendChild(el("p", { class: "strip-hint" },
    "flip labels below and watch the group metrics above recompute against the edited picture; nothing is written back to the stored artifacts"));

  let overlay: OverlayDoc;
  let metrics;
  let summary;
  let page;
  try {
    [overlay, metrics, summary, page] = await Promise.all([
      app.api.edits(),
      app.api.groupMetrics(app.state.protectedFeature),
      app.api.modelSummary(),
      app.api.instances({ limit: 200 }),
    ]);
  } catch (err) {
    panel.appendChild(el("p", { class: "error-box" }, (err as Error).message));
    return;
  }
  app.cacheInstances(page.rows);

  const bar = el("div", { class: "whatif-bar" });
  const badge = el("span", { class: "edit-badge", "data-role": "edit-badge" },
    `${overlay.edits.length} edit${overlay.edits.length === 1 ? "" : "s"}`);
  bar.appendChild(badge);
  const reset = el("button", { type: "button", "data-role": "whatif-reset" }, "Reset all");
  reset.addEventListener("click", () => {
    void app.track((async () => {
      await app.api.clearEdits();
      await renderWhatifPanel(panel, app);
    })());
  });
  bar.appendChild(reset);
  if (summary.hypothetical) {
    bar.appendChild(el("span", { class: "hypo-tag", "data-role": "hypo-tag" },
      "hypothetical accuracy " + pctText(summary.overall_accuracy_pct)));
  } else {
    bar.appendChild(el("span", { class: "hypo-tag" },
      "stored accuracy " + pctText(summary.overall_accuracy_pct)));
  }
  panel.appendChild(bar);

  const strip = el("div", { class: "whatif-metrics", "data-role": "whatif-metrics" });
  for (const result of metrics.results) {
    const chip = el("span", {
      class: `metric-chip verdict-${result.verdict}`,
      "data-role": "whatif-metric",
      "data-metric": result.metric_id,
      "data-value": String(result.value_pct),
    }, `${result.metric_id} ${pctText(result.value_pct)} (${result.verdict})`);
    strip.appendChild(chip);
  }
  panel.appendChild(strip);

  const wrap = el("div", { class: "table-wrap" });
  const table = el("table", { class: "instance-table whatif-table" });
  const head = el("tr");
  head.append(el("th", {}, "id"), el("th", {}, "Rated Credit"),
    el("th", {}, "Predicted Credit"), el("th", {}, "Probability"));
  table.appendChild(head);
  for (const row of page.rows) {
    const tr = el("tr", { "data-id": String(row.id) });
    tr.appendChild(el("td", {}, String(row.id)));
    const ratedTd = el("td", {});
    ratedTd.appendChild(toggleCell(app, panel, row, "ground_truth"));
    tr.appendChild(ratedTd);
    const predTd = el("td", {});
    predTd.appendChild(toggleCell(app, panel, row, "prediction"));
    tr.appendChild(predTd);
    tr.appendChild(el("td", {}, `${(row.probability_good * 100).toFixed(1)}%`));
    table.appendChild(tr);
  }
  wrap.appendChild(table);
  panel.appendChild(wrap);
}
