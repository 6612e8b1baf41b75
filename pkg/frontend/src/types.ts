// Response payloads of the audit service. The dashboard renders these
// verbatim; it never recomputes a metric or an aggregate on its own.

export type Verdict = "fair" | "unfair";
export type Scope = "group" | "subgroup" | "individual";
export type Label = "Good" | "Bad";

export interface FeatureSchema {
  name: string;
  kind: "numeric" | "categorical";
  categories: string[];
  display_labels: Record<string, string>;
}

export interface ProtectedSpec {
  name: string;
  source: string;
  predicate: { op: string; operand: unknown };
  protected_label: string;
  unprotected_label: string;
}

export interface LegitimateSpec {
  feature: string;
  strata: string[];
}

export interface SchemaResponse {
  features: FeatureSchema[];
  protected: ProtectedSpec[];
  legitimate: LegitimateSpec[];
  size: number;
  active_fold_size: number;
}

export interface InstanceRow {
  id: number;
  values: Record<string, string | number>;
  groups: Record<string, boolean>;
  ground_truth: Label;
  predicted: Label;
  probability_good: number;
  ground_truth_overridden: boolean;
  prediction_overridden: boolean;
}

export interface InstancesResponse {
  total: number;
  offset: number;
  limit: number;
  rows: InstanceRow[];
}

export interface HistogramBucket {
  label: string;
  positive: number;
  negative: number;
  lo: number | null;
  hi: number | null;
}

export interface HistogramResponse {
  feature: string;
  target: string;
  buckets: HistogramBucket[];
}

export interface ModelSummary {
  overall_accuracy_pct: number;
  accuracy_good_pct: number | null;
  accuracy_bad_pct: number | null;
  test_size: number;
  hypothetical: boolean;
}

export interface WeightEntry {
  feature: string;
  weight: number;
  sign: "positive" | "negative" | "zero";
}

export interface ModelWeights {
  bias: number;
  weights: WeightEntry[];
}

export interface GroupBreakdown {
  rate_protected_pct: number;
  rate_unprotected_pct: number;
  advantaged_group: string | null;
  components?: { EOpp: number; PE: number };
  strata?: Record<string, number>;
}

export interface GroupResult {
  metric_id: string;
  scope: "group";
  feature: string;
  value_pct: number;
  breakdown: GroupBreakdown;
  excluded: string[];
  verdict: Verdict;
}

export interface GroupMetricsResponse {
  feature: string;
  results: GroupResult[];
}

export interface SubgroupResult {
  metric_id: string;
  scope: "subgroup";
  features: string[];
  value_pct: number;
  breakdown: {
    subgroup_rates: Record<string, number | Record<string, number>>;
    most_advantaged: string | null;
    most_disadvantaged: string | null;
    [key: string]: unknown;
  };
  excluded: string[];
  verdict: Verdict;
}

export interface SubgroupMetricsResponse {
  features: string[];
  results: SubgroupResult[];
}

export interface CounterfactualResult {
  metric_id: "CF";
  scope: "individual";
  feature: string;
  value_pct: number;
  breakdown: { violating_ids: number[]; n: number };
  excluded: string[];
  verdict: Verdict;
}

export interface ConsistencyResult {
  metric_id: "Consistency";
  scope: "individual";
  feature: null;
  value_pct: number;
  breakdown: {
    n_neighbors: number;
    per_instance: Record<string, number>;
    neighbor_map: Record<string, number[]>;
  };
  excluded: string[];
  verdict: Verdict;
}

export type IndividualResult = CounterfactualResult | ConsistencyResult;

export interface IndividualMetricsResponse {
  results: IndividualResult[];
}

export interface ExplainBucket {
  title: string;
  predicate: Record<string, unknown>;
  ids: number[];
  count: number;
}

export interface ExplainResponse {
  metric_id: string;
  feature: string;
  legit_feature: string | null;
  stratum: string | null;
  buckets: ExplainBucket[];
}

export interface Thresholds {
  group: number;
  subgroup: number;
  individual: number;
}

export interface SessionDoc {
  session_id: string;
  participant_id: string | null;
  thresholds: Thresholds;
  created_at: string;
}

export interface OverlayEdit {
  instance_id: number;
  target: "ground_truth" | "prediction";
  new_value: number;
}

export interface OverlayDoc {
  session_id: string;
  edits: OverlayEdit[];
  created_at: string;
  updated_at: string;
}

export interface Ranking {
  top1: string[];
  top2: string[];
  top3: string[];
}

export interface PreferenceDoc {
  participant_id: string;
  ranking: Ranking;
  thresholds: Thresholds;
  scope_choice: "group" | "subgroup" | "context_dependent";
  feature_concern: string[];
}

export interface PreferencesResponse {
  records: PreferenceDoc[];
}

export interface BordaGroup {
  points: number;
  metrics: string[];
}

export interface AggregateResponse {
  n: number;
  weighted_scores: Record<string, number>;
  borda: BordaGroup[];
  threshold_stats: Record<string, { mean: number; sd: number | null }>;
  category_counts: Record<string, number>;
  top1_metric_counts: Record<string, number>;
}

export interface TeamAssignResponse {
  assignments: Record<string, number>;
  teams: string[][];
}

export interface ConsensusItem {
  metric_id: string;
  scope: Scope;
}

export interface ConsensusDoc {
  team_id: string;
  member_ids: string[];
  consensus: ConsensusItem[];
  notes: string;
  final: boolean;
}

export interface ConsensusListResponse {
  teams: ConsensusDoc[];
}

export interface ApiErrorBody {
  code: string;
  detail: string;
}
