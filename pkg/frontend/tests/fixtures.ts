// Golden API payloads used by the snapshot-render tests. Shapes mirror the
// server wire forms exactly.

import type {
  AlgorithmSummary,
  HyperpartitionSummary,
  Overview,
  RunDescriptor,
  ScatterSeries,
  SpaceInfo,
  TrialRecord,
} from "../src/api.js";

export function overviewFixture(): Overview {
  // the classic satisfied-user snapshot: best 0.939, full coverage
  return {
    best_score: 0.939,
    n_trials: 250,
    n_ok: 248,
    n_error: 2,
    algorithm_coverage: 1.0,
    hyperpartition_coverage: 1.0,
    histogram: [0, 1, 2, 4, 9, 14, 30, 55, 83, 50],
    top_models: [
      top(1, 181, "KNN", "KNN:weights=distance,metric=manhattan", 0.939),
      top(2, 97, "SGDLogistic", "SGDLogistic:penalty=l2", 0.938),
      top(3, 204, "KNN", "KNN:weights=uniform,metric=euclidean", 0.938),
      top(4, 77, "ExtraTrees", "ExtraTrees:criterion=gini", 0.937),
      top(5, 130, "KNN", "KNN:weights=distance,metric=euclidean", 0.937),
      top(6, 211, "RandomForest", "RandomForest:criterion=entropy", 0.937),
      top(7, 56, "SGDLogistic", "SGDLogistic:penalty=l1", 0.936),
      top(8, 119, "KNN", "KNN:weights=uniform,metric=manhattan", 0.936),
      top(9, 32, "ExtraTrees", "ExtraTrees:criterion=entropy", 0.936),
      top(10, 240, "RandomForest", "RandomForest:criterion=gini", 0.936),
    ],
  };
}

function top(
  rank: number,
  trial_id: number,
  algorithm: string,
  hyperpartition_id: string,
  score: number,
) {
  return { rank, trial_id, algorithm, hyperpartition_id, score };
}

export function emptyOverviewFixture(): Overview {
  return {
    best_score: null,
    n_trials: 0,
    n_ok: 0,
    n_error: 0,
    algorithm_coverage: 0,
    hyperpartition_coverage: 0,
    histogram: [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    top_models: [],
  };
}

export function twelveModelOverviewFixture(): Overview {
  const base = overviewFixture();
  return {
    ...base,
    n_trials: 12,
    n_ok: 12,
    n_error: 0,
    top_models: Array.from({ length: 12 }, (_, i) =>
      top(i + 1, i + 1, "KNN", "KNN:weights=uniform,metric=euclidean",
          0.95 - i * 0.01)),
  };
}

export function runFixture(status = "finished"): RunDescriptor {
  return {
    id: "run-0001",
    dataset_id: "ds-fixture",
    status,
    seed: 7,
    metric: "f1_cv10",
    budget: {
      max_trials: 250,
      max_wall_clock_s: null,
      consumed_trials: 250,
      consumed_wall_clock_s: 93.5,
    },
    n_trials: 250,
    best_score: 0.939,
    auto_deactivated: [],
    created_at: "2026-08-09T10:00:00+00:00",
    updated_at: "2026-08-09T10:02:00+00:00",
  };
}

export function algorithmSummariesFixture(): AlgorithmSummary[] {
  return [
    {
      name: "ExtraTrees",
      enabled: true,
      best_score: 0.91,
      n_trials: 40,
      n_ok: 40,
      n_error: 0,
      histogram: [0, 0, 0, 0, 0, 2, 6, 14, 12, 6],
      hyperpartition_coverage: 1.0,
    },
    {
      name: "KNN",
      enabled: true,
      best_score: 0.88,
      n_trials: 52,
      n_ok: 51,
      n_error: 1,
      histogram: [0, 0, 1, 2, 4, 8, 16, 14, 6, 0],
      hyperpartition_coverage: 0.75,
    },
    {
      name: "GaussianNB",
      enabled: false,
      best_score: null,
      n_trials: 0,
      n_ok: 0,
      n_error: 0,
      histogram: [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
      hyperpartition_coverage: 0.0,
    },
  ];
}

export function hyperpartitionSummariesFixture(): HyperpartitionSummary[] {
  return [
    {
      id: "ExtraTrees:criterion=gini",
      algorithm: "ExtraTrees",
      enabled: true,
      n_trials: 3,
      n_ok: 3,
      n_error: 0,
      best_score: 0.94,
      sequence: [
        { trial_id: 4, score: 0.83 },
        { trial_id: 9, score: 0.91 },
        { trial_id: 15, score: 0.94 },
      ],
    },
    {
      id: "ExtraTrees:criterion=entropy",
      algorithm: "ExtraTrees",
      enabled: true,
      n_trials: 1,
      n_ok: 1,
      n_error: 0,
      best_score: 0.88,
      sequence: [{ trial_id: 6, score: 0.88 }],
    },
  ];
}

export function scatterFixture(): ScatterSeries {
  // data only spans [3, 17] but the axis must span the declared [1, 30]
  return {
    hyperparameter: "n_neighbors",
    scope: "KNN",
    kind: "integer",
    scale: "linear",
    lower: 1,
    upper: 30,
    points: [
      { value: 3, score: 0.52, trial_id: 2 },
      { value: 8, score: 0.84, trial_id: 5 },
      { value: 12, score: 0.9, trial_id: 9 },
      { value: 17, score: 0.86, trial_id: 11 },
      { value: 30, score: 0.79, trial_id: 14 },
    ],
    value_histogram: [1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
  };
}

export function maxFeaturesScatterFixture(): ScatterSeries {
  return {
    hyperparameter: "max_features",
    scope: "ExtraTrees:criterion=gini",
    kind: "real",
    scale: "linear",
    lower: 0.1,
    upper: 1.0,
    points: [
      { value: 0.35, score: 0.81, trial_id: 4 },
      { value: 0.72, score: 0.9, trial_id: 9 },
      { value: 0.91, score: 0.94, trial_id: 15 },
    ],
    value_histogram: [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0],
  };
}

export function spaceFixture(): SpaceInfo {
  return {
    algorithms: [
      {
        name: "ExtraTrees",
        categoricals: [{ name: "criterion", values: ["gini", "entropy"] }],
        numerics: [
          { name: "n_trees", kind: "integer", lower: 5, upper: 100,
            scale: "linear" },
          { name: "max_features", kind: "real", lower: 0.1, upper: 1.0,
            scale: "linear" },
          { name: "max_depth", kind: "integer", lower: 1, upper: 20,
            scale: "linear" },
        ],
      },
      {
        name: "KNN",
        categoricals: [
          { name: "weights", values: ["uniform", "distance"] },
          { name: "metric", values: ["euclidean", "manhattan"] },
        ],
        numerics: [
          { name: "n_neighbors", kind: "integer", lower: 1, upper: 30,
            scale: "linear" },
        ],
      },
    ],
    algorithm_enabled: { ExtraTrees: true, KNN: true },
    hyperpartition_enabled: {
      "ExtraTrees:criterion=gini": true,
      "ExtraTrees:criterion=entropy": true,
      "KNN:weights=uniform,metric=euclidean": true,
      "KNN:weights=uniform,metric=manhattan": true,
      "KNN:weights=distance,metric=euclidean": true,
      "KNN:weights=distance,metric=manhattan": true,
    },
    active_ranges: [],
    hyperpartitions: [
      { id: "ExtraTrees:criterion=gini", algorithm: "ExtraTrees",
        assignment: { criterion: "gini" },
        tunables: ["n_trees", "max_features", "max_depth"] },
      { id: "ExtraTrees:criterion=entropy", algorithm: "ExtraTrees",
        assignment: { criterion: "entropy" },
        tunables: ["n_trees", "max_features", "max_depth"] },
      { id: "KNN:weights=uniform,metric=euclidean", algorithm: "KNN",
        assignment: { weights: "uniform", metric: "euclidean" },
        tunables: ["n_neighbors"] },
      { id: "KNN:weights=uniform,metric=manhattan", algorithm: "KNN",
        assignment: { weights: "uniform", metric: "manhattan" },
        tunables: ["n_neighbors"] },
      { id: "KNN:weights=distance,metric=euclidean", algorithm: "KNN",
        assignment: { weights: "distance", metric: "euclidean" },
        tunables: ["n_neighbors"] },
      { id: "KNN:weights=distance,metric=manhattan", algorithm: "KNN",
        assignment: { weights: "distance", metric: "manhattan" },
        tunables: ["n_neighbors"] },
    ],
  };
}

export function trialFixture(trial_id: number): TrialRecord {
  return {
    trial_id,
    run_id: "run-0001",
    algorithm: "KNN",
    hyperpartition_id: "KNN:weights=uniform,metric=euclidean",
    config: { n_neighbors: 5 + (trial_id % 10) },
    status: "ok",
    score: 0.8 + (trial_id % 10) / 100,
    fold_scores: [0.8, 0.82],
    error: null,
    elapsed_s: 0.02,
    created_at: "2026-08-09T10:00:00+00:00",
  };
}
