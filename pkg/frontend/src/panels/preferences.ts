import { el, clear } from "../theme";
import { METRIC_DEFS } from "./overview";
import type { App } from "../app";
import type { PreferenceDoc } from "../types";

export const METRIC_ORDER = [
  "DP", "EOpp", "PE", "EOdds", "OT", "CSP", "CF", "Consistency",
] as const;

const RANKS: Array<{ key: "top1" | "top2" | "top3"; title: string }> = [
  { key: "top1", title: "1st choice" },
  { key: "top2", title: "2nd choice" },
  { key: "top3", title: "3rd choice" },
];

function rankFieldset(rank: { key: string; title: string }): HTMLElement {
  const fieldset = el("fieldset", { class: "rank-fieldset", "data-rank": rank.key });
  fieldset.appendChild(el("legend", {},
    `${rank.title} (check several to record a tie)`));
  for (const metric of METRIC_ORDER) {
    const id = `${rank.key}-${metric}`;
    const box = el("input", {
      type: "checkbox",
      id,
      value: metric,
      "data-role": "rank-check",
      "data-rank": rank.key,
    });
    const label = el("label", { for: id, title: METRIC_DEFS[metric] }, metric);
    fieldset.append(box, label);
  }
  return fieldset;
}

function checkedMetrics(form: HTMLElement, rank: string): string[] {
  return Array.from(form.querySelectorAll<HTMLInputElement>(
    `input[data-role='rank-check'][data-rank='${rank}']`))
    .filter((box) => box.checked)
    .map((box) => box.value);
}

// Client-side mirror of the service's record rules, so a participant sees
// the problem inline instead of a failed round-trip.
export function validateForm(doc: PreferenceDoc): string | null {
  if (!doc.participant_id.trim()) return "participant id must not be empty";
  if (doc.ranking.top1.length === 0) return "pick at least one 1st-choice metric";
  if (doc.ranking.top3.length > 0 && doc.ranking.top2.length === 0) {
    return "a 3rd choice needs a 2nd choice first";
  }
  const seen = new Set<string>();
  for (const tier of [doc.ranking.top1, doc.ranking.top2, doc.ranking.top3]) {
    for (const metric of tier) {
      if (seen.has(metric)) return `metric ${metric} appears at two ranks`;
      seen.add(metric);
    }
  }
  for (const [name, value] of Object.entries(doc.thresholds)) {
    if (!(value >= 0 && value <= 100)) return `${name} threshold must be within 0 and 100`;
  }
  return null;
}

export async function renderPreferencesPanel(panel: HTMLElement, app: App): Promise<void> {
  clear(panel);
  panel.appendChild(el("h2", {}, "Your fairness preferences"));
  panel.appendChild(el("p", { class: "strip-hint" },
    "rank up to three metrics, set the thresholds you find acceptable, and say at which scope fairness matters most to you"));

  const form = el("form", { class: "pref-form", "data-role": "pref-form" });
  const errorBox = el("p", { class: "error-box inline-error", "data-role": "form-error" });
  errorBox.style.display = "none";

  const pidLabel = el("label", { for: "pid" }, "participant id");
  const pid = el("input", { type: "text", id: "pid", "data-role": "participant-id" });
  form.append(pidLabel, pid);

  for (const rank of RANKS) form.appendChild(rankFieldset(rank));

  const thresholds = el("div", { class: "threshold-inputs" });
  for (const scope of ["group", "subgroup", "individual"] as const) {
    const id = `th-${scope}`;
    thresholds.appendChild(el("label", { for: id }, `${scope} threshold`));
    const input = el("input", {
      type: "number",
      id,
      min: "0",
      max: "100",
      "data-role": "threshold-input",
      "data-scope": scope,
    }) as HTMLInputElement;
    input.value = scope === "individual" ? "95" : "10";
    thresholds.appendChild(input);
  }
  form.appendChild(thresholds);

  const scopeBox = el("div", { class: "scope-choice" });
  scopeBox.appendChild(el("span", {}, "fairness scope that matters most:"));
  for (const scope of ["group", "subgroup", "context_dependent"]) {
    const id = `scope-${scope}`;
    const radio = el("input", {
      type: "radio",
      name: "scope-choice",
      id,
      value: scope,
      "data-role": "scope-radio",
    }) as HTMLInputElement;
    if (scope === "group") radio.checked = true;
    scopeBox.append(radio, el("label", { for: id }, scope.replace("_", " ")));
  }
  form.appendChild(scopeBox);

  const concern = el("div", { class: "concern-picker" });
  concern.appendChild(el("span", {}, "features you are most concerned about:"));
  for (const spec of app.schema.protected) {
    const id = `concern-${spec.name}`;
    concern.append(
      el("input", { type: "checkbox", id, value: spec.name, "data-role": "concern-check" }),
      el("label", { for: id }, spec.name));
  }
  form.appendChild(concern);

  form.appendChild(errorBox);
  const submit = el("button", { type: "submit", "data-role": "pref-submit" }, "Submit");
  form.appendChild(submit);
  const okBox = el("p", { class: "ok-box", "data-role": "form-ok" });
  okBox.style.display = "none";
  form.appendChild(okBox);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const doc: PreferenceDoc = {
      participant_id: (pid as HTMLInputElement).value.trim(),
      ranking: {
        top1: checkedMetrics(form, "top1"),
        top2: checkedMetrics(form, "top2"),
        top3: checkedMetrics(form, "top3"),
      },
      thresholds: {
        group: Number(form.querySelector<HTMLInputElement>("input[data-scope='group']")!.value),
        subgroup: Number(form.querySelector<HTMLInputElement>("input[data-scope='subgroup']")!.value),
        individual: Number(form.querySelector<HTMLInputElement>("input[data-scope='individual']")!.value),
      },
      scope_choice: (form.querySelector<HTMLInputElement>(
        "input[data-role='scope-radio']:checked")?.value ?? "group") as PreferenceDoc["scope_choice"],
      feature_concern: Array.from(form.querySelectorAll<HTMLInputElement>(
        "input[data-role='concern-check']")).filter((b) => b.checked).map((b) => b.value),
    };
    const problem = validateForm(doc);
    if (problem) {
      errorBox.textContent = problem;
      errorBox.style.display = "";
      okBox.style.display = "none";
      return;
    }
    errorBox.style.display = "none";
    void app.track((async () => {
      try {
        await app.api.postPreference(doc);
        okBox.textContent = `recorded preferences for ${doc.participant_id}`;
        okBox.style.display = "";
      } catch (err) {
        errorBox.textContent = (err as Error).message;
        errorBox.style.display = "";
      }
    })());
  });

  panel.appendChild(form);
}
