import type { Thresholds } from "./types";

export const PANELS = [
  "data",
  "model",
  "group",
  "subgroup",
  "individual",
  "whatif",
  "preferences",
  "team",
] as const;

export type PanelId = (typeof PANELS)[number];

// Everything a deep link needs to restore the identical view. Mirrors the
// server session after each mutation round-trip; thresholds here are the
// last values acknowledged by the server, never locally invented ones.
export interface ViewState {
  panel: PanelId;
  protectedFeature: string;
  subgroupFeatures: string[];
  legitFeature: string | null;
  stratum: string | null;
  explainMetric: string;
  thresholds: Thresholds;
  selectedInstance: number | null;
  session: string;
  teamId: string | null;
}

export const DEFAULT_THRESHOLDS: Thresholds = { group: 10, subgroup: 10, individual: 95 };

export function defaultState(): ViewState {
  return {
    panel: "data",
    protectedFeature: "age_group",
    subgroupFeatures: ["age_group", "gender"],
    legitFeature: null,
    stratum: null,
    explainMetric: "DP",
    thresholds: { ...DEFAULT_THRESHOLDS },
    selectedInstance: null,
    session: "default",
    teamId: null,
  };
}

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("panel", state.panel);
  params.set("feature", state.protectedFeature);
  params.set("features", state.subgroupFeatures.join(","));
  if (state.legitFeature) params.set("legit", state.legitFeature);
  if (state.stratum) params.set("stratum", state.stratum);
  params.set("metric", state.explainMetric);
  params.set("g", String(state.thresholds.group));
  params.set("sg", String(state.thresholds.subgroup));
  params.set("ind", String(state.thresholds.individual));
  if (state.selectedInstance !== null) params.set("id", String(state.selectedInstance));
  if (state.session !== "default") params.set("session", state.session);
  if (state.teamId) params.set("team", state.teamId);
  return params.toString();
}

export function decodeState(hash: string): ViewState {
  const state = defaultState();
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const panel = params.get("panel");
  if (panel && (PANELS as readonly string[]).includes(panel)) {
    state.panel = panel as PanelId;
  }
  const feature = params.get("feature");
  if (feature) state.protectedFeature = feature;
  const features = params.get("features");
  if (features) state.subgroupFeatures = features.split(",").filter(Boolean);
  state.legitFeature = params.get("legit");
  state.stratum = params.get("stratum");
  const metric = params.get("metric");
  if (metric) state.explainMetric = metric;
  const num = (key: string, fallback: number): number => {
    const raw = params.get(key);
    if (raw === null) return fallback;
    const value = Number(raw);
    return Number.isFinite(value) ? value : fallback;
  };
  state.thresholds = {
    group: num("g", DEFAULT_THRESHOLDS.group),
    subgroup: num("sg", DEFAULT_THRESHOLDS.subgroup),
    individual: num("ind", DEFAULT_THRESHOLDS.individual),
  };
  const id = params.get("id");
  state.selectedInstance = id !== null && id !== "" ? Number(id) : null;
  state.session = params.get("session") ?? "default";
  state.teamId = params.get("team");
  return state;
}
