import type {
  AggregateResponse,
  ConsensusDoc,
  ConsensusListResponse,
  ExplainResponse,
  GroupMetricsResponse,
  HistogramResponse,
  IndividualMetricsResponse,
  InstancesResponse,
  ModelSummary,
  ModelWeights,
  OverlayDoc,
  PreferenceDoc,
  PreferencesResponse,
  SchemaResponse,
  SessionDoc,
  SubgroupMetricsResponse,
  TeamAssignResponse,
  Thresholds,
} from "./types";

export class ApiError extends Error {
  code: string;
  status: number;

  constructor(status: number, code: string, detail: string) {
    super(detail);
    this.status = status;
    this.code = code;
  }
}

interface RequestOptions {
  method?: string;
  params?: Record<string, string | number | string[] | undefined>;
  body?: unknown;
}

// Thin typed client over the service; one instance per browser session
// token. Every endpoint the service exposes has a method here.
export class ApiClient {
  base: string;
  session: string;

  constructor(base = "", session = "default") {
    this.base = base.replace(/\/$/, "");
    this.session = session;
  }

  private url(path: string, params?: RequestOptions["params"]): string {
    const search = new URLSearchParams();
    if (params) {
      for (const [key, value] of Object.entries(params)) {
        if (value === undefined) continue;
        if (Array.isArray(value)) {
          value.forEach((v) => search.append(key, v));
        } else {
          search.append(key, String(value));
        }
      }
    }
    search.append("session", this.session);
    return `${this.base}${path}?${search.toString()}`;
  }

  private async request<T>(path: string, options: RequestOptions = {}): Promise<T> {
    const init: RequestInit = { method: options.method ?? "GET" };
    if (options.body !== undefined) {
      init.body = JSON.stringify(options.body);
      init.headers = { "content-type": "application/json" };
    }
    const response = await fetch(this.url(path, options.params), init);
    if (!response.ok) {
      let code = "error";
      let detail = `request failed with status ${response.status}`;
      try {
        const body = await response.json();
        code = body.code ?? code;
        detail = body.detail ?? detail;
      } catch {
        // non-JSON error body, keep the fallback message
      }
      throw new ApiError(response.status, code, detail);
    }
    return (await response.json()) as T;
  }

  schema(): Promise<SchemaResponse> {
    return this.request("/api/dataset/schema");
  }

  instances(params: { filter?: string[]; sort?: string; limit?: number; offset?: number } = {}): Promise<InstancesResponse> {
    return this.request("/api/instances", { params: { limit: 200, ...params } });
  }

  histogram(feature: string, target = "ground_truth"): Promise<HistogramResponse> {
    return this.request("/api/dataset/histogram", { params: { feature, target } });
  }

  modelSummary(): Promise<ModelSummary> {
    return this.request("/api/model/summary");
  }

  modelWeights(): Promise<ModelWeights> {
    return this.request("/api/model/weights");
  }

  groupMetrics(feature: string, condition?: string): Promise<GroupMetricsResponse> {
    return this.request("/api/metrics/group", { params: { feature, condition } });
  }

  subgroupMetrics(features: string[], condition?: string): Promise<SubgroupMetricsResponse> {
    return this.request("/api/metrics/subgroup", {
      params: { features: features.join(","), condition },
    });
  }

  individualMetrics(): Promise<IndividualMetricsResponse> {
    return this.request("/api/metrics/individual");
  }

  explain(metric: string, feature: string, condition?: string, stratum?: string): Promise<ExplainResponse> {
    return this.request("/api/metrics/explain", {
      params: { metric, feature, condition, stratum },
    });
  }

  sessionDoc(): Promise<SessionDoc> {
    return this.request("/api/session");
  }

  putThresholds(thresholds: Thresholds): Promise<SessionDoc> {
    return this.request("/api/session/thresholds", { method: "PUT", body: thresholds });
  }

  edits(): Promise<OverlayDoc> {
    return this.request("/api/whatif/edits");
  }

  postEdit(instanceId: number, target: string, newValue: string | number): Promise<OverlayDoc> {
    return this.request("/api/whatif/edits", {
      method: "POST",
      body: { instance_id: instanceId, target, new_value: newValue },
    });
  }

  deleteEdit(instanceId: number, target: string): Promise<OverlayDoc> {
    return this.request("/api/whatif/edits", {
      method: "DELETE",
      params: { instance_id: instanceId, target },
    });
  }

  clearEdits(): Promise<OverlayDoc> {
    return this.request("/api/whatif/edits", { method: "DELETE" });
  }

  preferences(): Promise<PreferencesResponse> {
    return this.request("/api/preferences");
  }

  postPreference(record: PreferenceDoc): Promise<PreferenceDoc> {
    return this.request("/api/preferences", { method: "POST", body: record });
  }

  aggregate(): Promise<AggregateResponse> {
    return this.request("/api/preferences/aggregate");
  }

  assignTeams(teamCount: number): Promise<TeamAssignResponse> {
    return this.request("/api/teams/assign", { method: "POST", body: { team_count: teamCount } });
  }

  postConsensus(doc: ConsensusDoc): Promise<ConsensusDoc> {
    return this.request("/api/consensus", { method: "POST", body: doc });
  }

  consensus(teamId: string): Promise<ConsensusDoc> {
    return this.request("/api/consensus", { params: { team_id: teamId } });
  }

  consensusList(): Promise<ConsensusListResponse> {
    return this.request("/api/consensus");
  }
}
