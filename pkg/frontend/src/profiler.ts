// Three-level profiler: algorithm histograms (server order: best first),
// hyperpartition progress-bar sequences on demand, hyperparameter scatters
// beneath them. In-situ checkboxes and range brushes emit space deltas.

import type {
  AlgorithmSummary,
  HyperpartitionSummary,
  Overview,
  ScatterSeries,
  SpaceDeltaJson,
  SpaceInfo,
} from "./api.js";
import { colorFor } from "./colors.js";
import {
  activeRangeFor,
  algorithmFlagDelta,
  hyperpartitionFlagDelta,
  setRangeDelta,
  snapValue,
  validateDelta,
  wouldDisableEverything,
} from "./config.js";
import { h } from "./dom.js";
import { focusSets, renderHistogram } from "./overview.js";
import { renderScatter } from "./scatter.js";
import type { ViewState } from "./state.js";

export interface ProfilerData {
  overview: Overview;
  algorithms: AlgorithmSummary[];
  space: SpaceInfo;
  hyperpartitions: HyperpartitionSummary[] | null; // for the expanded algorithm
  scatters: ScatterSeries[] | null; // for the expanded hyperpartition
}

export interface ProfilerHandlers {
  onSelectAlgorithm(name: string): void;
  onSelectHyperpartition(id: string): void;
  onDelta(delta: SpaceDeltaJson): void;
  onWarning(message: string): void;
}

export function renderProfiler(
  data: ProfilerData,
  state: ViewState,
  handlers: ProfilerHandlers,
): HTMLElement {
  const focus = state.focusMode ? focusSets(data.overview) : null;
  const rows = data.algorithms.map((summary) =>
    algorithmRow(summary, data, state, handlers, focus),
  );
  return h("section", { class: "profiler" },
    h("h2", {}, "Profiler"),
    h("div", { class: "algorithm-list" }, ...rows));
}

function emitFlagDelta(
  delta: SpaceDeltaJson,
  data: ProfilerData,
  handlers: ProfilerHandlers,
): void {
  const problem = validateDelta(delta);
  if (problem) {
    handlers.onWarning(problem);
    return;
  }
  if (wouldDisableEverything(data.space, delta)) {
    handlers.onWarning(
      "that edit would disable every hyperpartition; nothing was sent");
    return;
  }
  handlers.onDelta(delta);
}

function algorithmRow(
  summary: AlgorithmSummary,
  data: ProfilerData,
  state: ViewState,
  handlers: ProfilerHandlers,
  focus: ReturnType<typeof focusSets> | null,
): HTMLElement {
  const dimmed = focus !== null && !focus.algorithms.has(summary.name);
  const expanded = state.expandedAlgorithm === summary.name;
  const best =
    summary.best_score === null ? "untried" : summary.best_score.toFixed(3);
  const checkbox = h("input", {
    type: "checkbox",
    checked: summary.enabled,
    "data-role": `enable-${summary.name}`,
    change: (evt: Event) => {
      const on = (evt.target as HTMLInputElement).checked;
      emitFlagDelta(algorithmFlagDelta(summary.name, on), data, handlers);
    },
  });
  const header = h("div", { class: "algorithm-header" },
    checkbox,
    h("span", { class: "chip",
                style: `background:${colorFor(summary.name)}` }),
    h("button", {
      class: "name-button",
      "data-role": `select-${summary.name}`,
      click: () => handlers.onSelectAlgorithm(summary.name),
    }, summary.name),
    h("span", { class: "algo-best" }, `best ${best}`),
    h("span", { class: "algo-n" },
      `${summary.n_trials} trials · ` +
      `${Math.round(summary.hyperpartition_coverage * 100)}% partitions`),
    renderHistogram(summary.histogram, "histogram mini"));

  const children: HTMLElement[] = [header];
  if (expanded && data.hyperpartitions) {
    children.push(hyperpartitionSection(data, state, handlers, focus));
  }
  return h("div", {
    class: `algorithm-row${dimmed ? " dimmed" : ""}${expanded ? " expanded" : ""}`,
    "data-algorithm": summary.name,
  }, ...children);
}

function hyperpartitionSection(
  data: ProfilerData,
  state: ViewState,
  handlers: ProfilerHandlers,
  focus: ReturnType<typeof focusSets> | null,
): HTMLElement {
  const blocks = (data.hyperpartitions ?? []).map((summary) => {
    const dimmed = focus !== null && !focus.hyperpartitions.has(summary.id);
    const expanded = state.expandedHyperpartition === summary.id;
    const boxes = summary.sequence.map((point) =>
      h("div", {
        class: "seq-box",
        style: `height:${Math.max(Math.round(point.score * 40), 2)}px`,
        title: `trial ${point.trial_id}: ${point.score.toFixed(3)}`,
        "data-trial": String(point.trial_id),
      }),
    );
    const row = h("div", { class: "hp-header" },
      h("input", {
        type: "checkbox",
        checked: summary.enabled,
        "data-role": `enable-${summary.id}`,
        change: (evt: Event) => {
          const on = (evt.target as HTMLInputElement).checked;
          emitFlagDelta(hyperpartitionFlagDelta(summary.id, on), data, handlers);
        },
      }),
      h("button", {
        class: "name-button",
        "data-role": `select-${summary.id}`,
        click: () => handlers.onSelectHyperpartition(summary.id),
      }, summary.id),
      h("span", { class: "hp-best" },
        summary.best_score === null ? "" : `best ${summary.best_score.toFixed(3)}`),
      h("div", { class: "sequence" }, ...boxes));
    const parts: HTMLElement[] = [row];
    if (expanded && data.scatters) {
      parts.push(hyperparameterSection(summary.id, data, handlers));
    }
    return h("div", {
      class: `hp-row${dimmed ? " dimmed" : ""}${expanded ? " expanded" : ""}`,
      "data-hyperpartition": summary.id,
    }, ...parts);
  });
  return h("div", { class: "hp-list" }, ...blocks);
}

function hyperparameterSection(
  hyperpartitionId: string,
  data: ProfilerData,
  handlers: ProfilerHandlers,
): HTMLElement {
  const plots = (data.scatters ?? []).map((series) =>
    renderScatter(
      series,
      activeRangeFor(data.space, hyperpartitionId, series.hyperparameter),
      {
        onBrush: (lo, hi) => {
          const spec = numericSpec(data.space, hyperpartitionId,
                                   series.hyperparameter);
          const delta = setRangeDelta(
            { hyperpartition: hyperpartitionId },
            series.hyperparameter,
            spec ? snapValue(spec, lo) : lo,
            spec ? snapValue(spec, hi) : hi,
          );
          const problem = validateDelta(delta);
          if (problem) {
            handlers.onWarning(problem);
          } else {
            handlers.onDelta(delta);
          }
        },
      },
    ),
  );
  return h("div", { class: "scatter-list" }, ...plots);
}

function numericSpec(space: SpaceInfo, hyperpartitionId: string, name: string) {
  const algorithm = hyperpartitionId.split(":", 1)[0];
  const algo = space.algorithms.find((a) => a.name === algorithm);
  return algo?.numerics.find((n) => n.name === name) ?? null;
}
