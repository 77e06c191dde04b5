// Typed client for the run-search HTTP API. The fetch function is
// injectable so tests can script a mock server.

export interface TopModel {
  rank: number;
  trial_id: number;
  algorithm: string;
  hyperpartition_id: string;
  score: number;
}

export interface Overview {
  best_score: number | null;
  n_trials: number;
  n_ok: number;
  n_error: number;
  algorithm_coverage: number;
  hyperpartition_coverage: number;
  histogram: number[];
  top_models: TopModel[];
}

export interface BudgetInfo {
  max_trials: number | null;
  max_wall_clock_s: number | null;
  consumed_trials: number;
  consumed_wall_clock_s: number;
}

export interface RunDescriptor {
  id: string;
  dataset_id: string;
  status: string;
  seed: number;
  metric: string;
  budget: BudgetInfo;
  n_trials: number;
  best_score: number | null;
  auto_deactivated: string[];
  created_at: string;
  updated_at: string;
}

export interface AlgorithmSummary {
  name: string;
  enabled: boolean;
  best_score: number | null;
  n_trials: number;
  n_ok: number;
  n_error: number;
  histogram: number[];
  hyperpartition_coverage: number;
}

export interface SequencePoint {
  trial_id: number;
  score: number;
}

export interface HyperpartitionSummary {
  id: string;
  algorithm: string;
  enabled: boolean;
  n_trials: number;
  n_ok: number;
  n_error: number;
  best_score: number | null;
  sequence: SequencePoint[];
}

export interface ScatterPoint {
  value: number;
  score: number;
  trial_id: number;
}

export interface ScatterSeries {
  hyperparameter: string;
  scope: string;
  kind: "integer" | "real";
  scale: "linear" | "log";
  lower: number;
  upper: number;
  points: ScatterPoint[];
  value_histogram: number[];
}

export interface NumericSpec {
  name: string;
  kind: "integer" | "real";
  lower: number;
  upper: number;
  scale: "linear" | "log";
  applies_when?: Record<string, string>;
}

export interface HyperpartitionInfo {
  id: string;
  algorithm: string;
  assignment: Record<string, string>;
  tunables: string[];
}

export interface SpaceInfo {
  algorithms: {
    name: string;
    categoricals: { name: string; values: string[] }[];
    numerics: NumericSpec[];
  }[];
  algorithm_enabled: Record<string, boolean>;
  hyperpartition_enabled: Record<string, boolean>;
  active_ranges: {
    hyperpartition: string;
    hyperparameter: string;
    range: [number, number];
  }[];
  hyperpartitions: HyperpartitionInfo[];
}

export interface TrialRecord {
  trial_id: number;
  run_id: string;
  algorithm: string;
  hyperpartition_id: string;
  config: Record<string, number>;
  status: "ok" | "error";
  score: number | null;
  fold_scores: number[];
  error: string | null;
  elapsed_s: number;
  created_at: string;
}

export interface TrialPage {
  trials: TrialRecord[];
  latest_trial_id: number;
}

export interface SpaceDeltaJson {
  kind: string;
  algorithm?: string;
  hyperpartition?: string;
  hyperparameter?: string;
  range?: [number, number];
}

export interface CommandJson {
  kind: string;
  deltas?: SpaceDeltaJson[];
  add_trials?: number;
  add_wall_clock_s?: number;
}

export interface DatasetMeta {
  id: string;
  name: string;
  n: number;
  d: number;
  classes: string[];
  positive_class: string | null;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: unknown = null,
  ) {
    super(message);
  }
}

export type FetchFn = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base = "",
    private fetchFn: FetchFn = (url, init) => fetch(url, init),
  ) {}

  private async parse<T>(response: Response): Promise<T> {
    if (!response.ok) {
      let code = "http_error";
      let message = `HTTP ${response.status}`;
      let detail: unknown = null;
      try {
        const body = (await response.json()) as {
          error?: { code: string; message: string; detail: unknown };
        };
        if (body.error) {
          ({ code, message, detail } = body.error);
        }
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(response.status, code, message, detail);
    }
    return (await response.json()) as T;
  }

  async get<T>(path: string): Promise<T> {
    return this.parse<T>(await this.fetchFn(this.base + path));
  }

  async post<T>(path: string, body: unknown): Promise<T> {
    return this.parse<T>(
      await this.fetchFn(this.base + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
  }

  runs(): Promise<RunDescriptor[]> {
    return this.get("/runs");
  }

  run(runId: string): Promise<RunDescriptor> {
    return this.get(`/runs/${runId}`);
  }

  datasets(): Promise<DatasetMeta[]> {
    return this.get("/datasets");
  }

  summary(runId: string): Promise<{ run: RunDescriptor; overview: Overview }> {
    return this.get(`/runs/${runId}/summary`);
  }

  algorithms(runId: string): Promise<AlgorithmSummary[]> {
    return this.get(`/runs/${runId}/summary/algorithms`);
  }

  hyperpartitions(
    runId: string,
    algorithm: string,
  ): Promise<HyperpartitionSummary[]> {
    return this.get(
      `/runs/${runId}/summary/hyperpartitions?algorithm=${encodeURIComponent(algorithm)}`,
    );
  }

  scatter(
    runId: string,
    scope: string,
    hyperparameter: string,
  ): Promise<ScatterSeries> {
    return this.get(
      `/runs/${runId}/summary/scatter?scope=${encodeURIComponent(scope)}` +
        `&hyperparameter=${encodeURIComponent(hyperparameter)}`,
    );
  }

  space(runId: string): Promise<SpaceInfo> {
    return this.get(`/runs/${runId}/space`);
  }

  trials(runId: string, since: number): Promise<TrialPage> {
    return this.get(`/runs/${runId}/trials?since=${since}`);
  }

  command(runId: string, command: CommandJson): Promise<RunDescriptor> {
    return this.post(`/runs/${runId}/commands`, command);
  }
}
