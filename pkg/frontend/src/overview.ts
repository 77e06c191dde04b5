// Overview panel: best score, trial counts, two coverage gauges, the
// 10-bin score histogram, and the top-k leaderboard with focus mode.

import type { Overview, RunDescriptor } from "./api.js";
import { colorFor } from "./colors.js";
import { h } from "./dom.js";

export const LEADERBOARD_LIMIT = 10;

export interface OverviewHandlers {
  onToggleFocus(on: boolean): void;
}

export function focusSets(overview: Overview): {
  algorithms: Set<string>;
  hyperpartitions: Set<string>;
} {
  const algorithms = new Set<string>();
  const hyperpartitions = new Set<string>();
  for (const model of overview.top_models.slice(0, LEADERBOARD_LIMIT)) {
    algorithms.add(model.algorithm);
    hyperpartitions.add(model.hyperpartition_id);
  }
  return { algorithms, hyperpartitions };
}

export function renderHistogram(bins: number[], className = "histogram"): HTMLElement {
  const max = Math.max(...bins, 1);
  const bars = bins.map((count) =>
    h("div", {
      class: "histogram-bar",
      style: `height:${Math.round((count / max) * 100)}%`,
      title: String(count),
    }),
  );
  return h("div", { class: className }, ...bars);
}

export function renderOverview(
  overview: Overview,
  run: RunDescriptor | null,
  focusMode: boolean,
  handlers: OverviewHandlers,
): HTMLElement {
  if (overview.n_trials === 0) {
    return h(
      "section",
      { class: "overview" },
      h("h2", {}, "Overview"),
      h("p", { class: "zero-state" },
        "No models searched yet. Start the run to begin."),
    );
  }
  const best =
    overview.best_score === null ? "–" : overview.best_score.toFixed(3);
  const statusText = run ? ` · ${run.status}` : "";
  const stats = h(
    "div",
    { class: "overview-stats" },
    h("div", { class: "stat" },
      h("span", { class: "stat-value", "data-role": "best-score" }, best),
      h("span", { class: "stat-label" }, "best F1")),
    h("div", { class: "stat" },
      h("span", { class: "stat-value", "data-role": "n-trials" },
        String(overview.n_trials)),
      h("span", { class: "stat-label" },
        `models (${overview.n_ok} ok, ${overview.n_error} err)${statusText}`)),
    gauge("algorithms", overview.algorithm_coverage, "algorithm-coverage"),
    gauge("hyperpartitions", overview.hyperpartition_coverage,
          "hyperpartition-coverage"),
  );

  const focusToggle = h("label", { class: "focus-toggle" },
    h("input", {
      type: "checkbox",
      checked: focusMode,
      change: (evt: Event) =>
        handlers.onToggleFocus((evt.target as HTMLInputElement).checked),
    }),
    " focus mode");

  const rows = overview.top_models
    .slice(0, LEADERBOARD_LIMIT)
    .map((model) =>
      h("tr", { "data-trial": String(model.trial_id) },
        h("td", {}, `#${model.rank}`),
        h("td", {}, model.score.toFixed(4)),
        h("td", {},
          h("span", {
            class: "chip",
            style: `background:${colorFor(model.algorithm)}`,
          }),
          model.algorithm),
        h("td", { class: "hp-id" }, model.hyperpartition_id),
        h("td", {}, `trial ${model.trial_id}`)),
    );

  return h(
    "section",
    { class: "overview" },
    h("h2", {}, "Overview"),
    stats,
    h("div", { class: "overview-histogram" },
      h("h3", {}, "score distribution"),
      renderHistogram(overview.histogram)),
    h("div", { class: "leaderboard" },
      h("h3", {}, `top ${rows.length} models`, focusToggle),
      h("table", {},
        h("thead", {},
          h("tr", {},
            h("th", {}, "rank"), h("th", {}, "score"),
            h("th", {}, "algorithm"), h("th", {}, "hyperpartition"),
            h("th", {}, "trial"))),
        h("tbody", {}, ...rows))),
  );
}

function gauge(label: string, fraction: number, role: string): HTMLElement {
  const percent = `${Math.round(fraction * 100)}%`;
  return h("div", { class: "stat gauge" },
    h("span", { class: "stat-value", "data-role": role }, percent),
    h("div", { class: "gauge-track" },
      h("div", { class: "gauge-fill", style: `width:${percent}` })),
    h("span", { class: "stat-label" }, `${label} searched`));
}
