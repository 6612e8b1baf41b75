import { el, clear } from "../theme";
import { METRIC_ORDER } from "./preferences";
import type { App } from "../app";
import type {
  AggregateResponse,
  ConsensusDoc,
  PreferenceDoc,
  Scope,
} from "../types";

function memberCard(record: PreferenceDoc): HTMLElement {
  const card = el("div", { class: "member-card", "data-role": "member-card",
    "data-participant": record.participant_id });
  card.appendChild(el("h4", {}, record.participant_id));
  const list = el("ol", { class: "member-ranking" });
  const tiers: Array<[string, string[]]> = [
    ["1st", record.ranking.top1],
    ["2nd", record.ranking.top2],
    ["3rd", record.ranking.top3],
  ];
  for (const [title, metrics] of tiers) {
    if (metrics.length === 0) continue;
    list.appendChild(el("li", {}, `${title}: ${metrics.join(", ")}`));
  }
  card.appendChild(list);
  card.appendChild(el("p", { class: "member-meta" },
    `thresholds ${record.thresholds.group}/${record.thresholds.subgroup}/${record.thresholds.individual}, scope ${record.scope_choice.replace("_", " ")}`));
  if (record.feature_concern.length) {
    card.appendChild(el("p", { class: "member-meta" },
      `concerned about: ${record.feature_concern.join(", ")}`));
  }
  return card;
}

function weightedTotals(aggregate: AggregateResponse): HTMLElement {
  const box = el("div", { class: "totals-box" });
  box.appendChild(el("h3", {}, `Weighted rank totals (${aggregate.n} ballots, 3/2/1 points)`));
  const list = el("ul", { class: "totals-list", "data-role": "weighted-totals" });
  const ordered = [...METRIC_ORDER].sort(
    (a, b) => (aggregate.weighted_scores[b] ?? 0) - (aggregate.weighted_scores[a] ?? 0));
  for (const metric of ordered) {
    const points = aggregate.weighted_scores[metric] ?? 0;
    const item = el("li", {
      "data-role": "weighted-total",
      "data-metric": metric,
      "data-points": String(points),
    });
    item.appendChild(el("span", { class: "total-metric" }, metric));
    item.appendChild(el("span", { class: "total-points" }, String(points)));
    list.appendChild(item);
  }
  box.appendChild(list);
  return box;
}

function bordaBox(aggregate: AggregateResponse): HTMLElement {
  const box = el("div", { class: "totals-box" });
  box.appendChild(el("h3", {}, "Borda tally (2/1/0 points)"));
  const list = el("ol", { class: "borda-list", "data-role": "borda-list" });
  for (const group of aggregate.borda) {
    list.appendChild(el("li", {
      "data-role": "borda-group",
      "data-points": String(group.points),
    }, `${group.points} points: ${group.metrics.join(", ")}`));
  }
  box.appendChild(list);
  return box;
}

function statsBox(aggregate: AggregateResponse): HTMLElement {
  const box = el("div", { class: "totals-box" });
  box.appendChild(el("h3", {}, "Threshold statistics"));
  const list = el("ul", { "data-role": "threshold-stats" });
  for (const [category, stats] of Object.entries(aggregate.threshold_stats)) {
    const sd = stats.sd === null ? "n/a" : stats.sd.toFixed(2);
    list.appendChild(el("li", { "data-category": category },
      `${category}: mean ${stats.mean.toFixed(2)}, sd ${sd}`));
  }
  box.appendChild(list);
  const counts = el("p", { "data-role": "category-counts" },
    "top-1 scope tally: " + Object.entries(aggregate.category_counts)
      .map(([k, v]) => `${k} ${v}`).join(", "));
  box.appendChild(counts);
  const top1 = el("p", { "data-role": "top1-counts" },
    "top-1 metric tally: " + Object.entries(aggregate.top1_metric_counts)
      .map(([k, v]) => `${k} ${v}`).join(", "));
  box.appendChild(top1);
  return box;
}

function consensusView(app: App, panel: HTMLElement, doc: ConsensusDoc): HTMLElement {
  const box = el("div", { class: "consensus-box" });
  box.appendChild(el("h3", {}, `Consensus for ${doc.team_id}`));
  if (doc.final) {
    // a finalized session is shown read-only; the service refuses changes too
    const view = el("div", { "data-role": "consensus-readonly" });
    view.appendChild(el("span", { class: "final-badge", "data-role": "final-badge" },
      "finalized"));
    const list = el("ul", {});
    for (const item of doc.consensus) {
      list.appendChild(el("li", {}, `${item.metric_id} at ${item.scope} scope`));
    }
    view.appendChild(list);
    if (doc.notes) view.appendChild(el("p", { class: "member-meta" }, doc.notes));
    box.appendChild(view);
    return box;
  }

  const form = el("form", { class: "consensus-form", "data-role": "consensus-form" });
  const current = el("ul", {});
  for (const item of doc.consensus) {
    current.appendChild(el("li", {}, `currently: ${item.metric_id} at ${item.scope} scope`));
  }
  form.appendChild(current);
  const metricSelect = el("select", { "data-role": "consensus-metric" });
  for (const metric of METRIC_ORDER) {
    metricSelect.appendChild(el("option", { value: metric }, metric));
  }
  const scopeSelect = el("select", { "data-role": "consensus-scope" });
  for (const scope of ["group", "subgroup", "individual"]) {
    scopeSelect.appendChild(el("option", { value: scope }, scope));
  }
  const finalBox = el("input", { type: "checkbox", id: "consensus-final",
    "data-role": "consensus-final" });
  const notes = el("input", { type: "text", placeholder: "notes",
    "data-role": "consensus-notes" }) as HTMLInputElement;
  notes.value = doc.notes;
  const error = el("p", { class: "error-box inline-error", "data-role": "consensus-error" });
  error.style.display = "none";
  form.append(metricSelect, scopeSelect, notes,
    finalBox, el("label", { for: "consensus-final" }, "finalize"),
    el("button", { type: "submit", "data-role": "consensus-save" }, "Save consensus"),
    error);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const next: ConsensusDoc = {
      team_id: doc.team_id,
      member_ids: doc.member_ids,
      consensus: [{
        metric_id: (metricSelect as HTMLSelectElement).value,
        scope: (scopeSelect as HTMLSelectElement).value as Scope,
      }],
      notes: notes.value,
      final: (finalBox as HTMLInputElement).checked,
    };
    void app.track((async () => {
      try {
        await app.api.postConsensus(next);
        await renderTeamPanel(panel, app);
      } catch (err) {
        error.textContent = (err as Error).message;
        error.style.display = "";
      }
    })());
  });
  box.appendChild(form);
  return box;
}

export async function renderTeamPanel(panel: HTMLElement, app: App): Promise<void> {
  clear(panel);
  panel.appendChild(el("h2", {}, "Team session"));

  let aggregate: AggregateResponse | null = null;
  let records: PreferenceDoc[] = [];
  let teams: ConsensusDoc[] = [];
  try {
    const [aggregateDoc, preferences, consensusList] = await Promise.all([
      app.api.aggregate(),
      app.api.preferences(),
      app.api.consensusList(),
    ]);
    aggregate = aggregateDoc;
    records = preferences.records;
    teams = consensusList.teams;
  } catch (err) {
    panel.appendChild(el("p", { class: "error-box" },
      `nothing to aggregate yet: ${(err as Error).message}`));
    return;
  }

  const picker = el("div", { class: "team-picker" });
  picker.appendChild(el("span", {}, "team:"));
  for (const team of teams) {
    const button = el("button", {
      type: "button",
      class: "team-tab",
      "data-role": "team-tab",
      "data-team": team.team_id,
    }, team.team_id + (team.final ? " (finalized)" : ""));
    if (team.team_id === app.state.teamId) button.classList.add("active-tab");
    button.addEventListener("click", () => {
      app.state.teamId = team.team_id;
      app.syncUrl();
      void app.track(renderTeamPanel(panel, app));
    });
    picker.appendChild(button);
  }
  panel.appendChild(picker);

  const selected = teams.find((t) => t.team_id === app.state.teamId) ?? teams[0] ?? null;
  const byId = new Map(records.map((r) => [r.participant_id, r]));

  if (selected) {
    const members = el("div", { class: "member-row", "data-role": "member-row" });
    for (const pid of selected.member_ids) {
      const record = byId.get(pid);
      if (record) members.appendChild(memberCard(record));
    }
    panel.appendChild(members);
  }

  panel.appendChild(weightedTotals(aggregate));
  panel.appendChild(bordaBox(aggregate));
  panel.appendChild(statsBox(aggregate));
  if (selected) panel.appendChild(consensusView(app, panel, selected));
}
