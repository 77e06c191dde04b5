import { describe, expect, it, vi } from "vitest";

import { renderProfiler } from "../src/profiler.js";
import { renderScatter, PLOT_WIDTH } from "../src/scatter.js";
import { visiblePoints, MAX_POINTS } from "../src/scatter.js";
import { initialViewState, toggleAlgorithm, toggleHyperpartition } from "../src/state.js";
import {
  algorithmSummariesFixture,
  hyperpartitionSummariesFixture,
  maxFeaturesScatterFixture,
  overviewFixture,
  scatterFixture,
  spaceFixture,
} from "./fixtures.js";

const handlers = {
  onSelectAlgorithm: () => undefined,
  onSelectHyperpartition: () => undefined,
  onDelta: () => undefined,
  onWarning: () => undefined,
};

function profilerData(overrides = {}) {
  return {
    overview: overviewFixture(),
    algorithms: algorithmSummariesFixture(),
    space: spaceFixture(),
    hyperpartitions: null,
    scatters: null,
    ...overrides,
  };
}

describe("algorithm level", () => {
  it("keeps the payload order: best score first, untried last", () => {
    const el = renderProfiler(profilerData(), initialViewState(), handlers);
    const names = [...el.querySelectorAll(".algorithm-row")].map(
      (row) => row.getAttribute("data-algorithm"));
    expect(names).toEqual(["ExtraTrees", "KNN", "GaussianNB"]);
  });

  it("clicking an algorithm dispatches selection", () => {
    const onSelectAlgorithm = vi.fn();
    const el = renderProfiler(profilerData(), initialViewState(),
                              { ...handlers, onSelectAlgorithm });
    (el.querySelector('[data-role="select-KNN"]') as HTMLButtonElement).click();
    expect(onSelectAlgorithm).toHaveBeenCalledWith("KNN");
  });

  it("focus mode dims algorithms without a top-k model", () => {
    const state = { ...initialViewState(), focusMode: true };
    const el = renderProfiler(profilerData(), state, handlers);
    // GaussianNB owns no top model in the fixture
    const dimmed = el.querySelector('[data-algorithm="GaussianNB"]')!;
    expect(dimmed.className).toContain("dimmed");
    const lit = el.querySelector('[data-algorithm="ExtraTrees"]')!;
    expect(lit.className).not.toContain("dimmed");
  });

  it("matches the golden snapshot", () => {
    const el = renderProfiler(profilerData(), initialViewState(), handlers);
    expect(el.outerHTML).toMatchSnapshot();
  });
});

describe("hyperpartition level", () => {
  it("renders one box per trial in chronological order", () => {
    const state = toggleAlgorithm(initialViewState(), "ExtraTrees");
    const el = renderProfiler(
      profilerData({ hyperpartitions: hyperpartitionSummariesFixture() }),
      state, handlers);
    const row = el.querySelector(
      '[data-hyperpartition="ExtraTrees:criterion=gini"]')!;
    const boxes = [...row.querySelectorAll(".seq-box")];
    expect(boxes).toHaveLength(3);
    expect(boxes.map((b) => b.getAttribute("data-trial")))
      .toEqual(["4", "9", "15"]);
    // box height encodes the score
    const heights = boxes.map(
      (b) => Number(/height:(\d+)px/.exec(b.getAttribute("style")!)![1]));
    expect(heights[0]).toBeLessThan(heights[2]);
  });

  it("is rendered only when its algorithm is expanded", () => {
    const el = renderProfiler(
      profilerData({ hyperpartitions: hyperpartitionSummariesFixture() }),
      initialViewState(), handlers);
    expect(el.querySelector(".hp-list")).toBeNull();
  });
});

describe("hyperparameter level", () => {
  it("scatter axis spans the declared range, not the data range", () => {
    const el = renderScatter(scatterFixture(), null,
                             { onBrush: () => undefined });
    const labels = [...el.querySelectorAll(".axis-label")].map(
      (t) => t.textContent);
    expect(labels).toEqual(["1", "30"]); // declared bounds, data is [3, 17+30]
    const xs = [...el.querySelectorAll("circle.point")].map(
      (c) => Number(c.getAttribute("cx")));
    expect(Math.min(...xs)).toBeGreaterThan(0); // value 3 sits inside the axis
    expect(Math.max(...xs)).toBe(PLOT_WIDTH); // value 30 = declared upper
  });

  it("renders scatters only under an expanded hyperpartition", () => {
    let state = toggleAlgorithm(initialViewState(), "ExtraTrees");
    const data = profilerData({
      hyperpartitions: hyperpartitionSummariesFixture(),
      scatters: [maxFeaturesScatterFixture()],
    });
    let el = renderProfiler(data, state, handlers);
    expect(el.querySelector(".scatter-list")).toBeNull();

    state = toggleHyperpartition(state, "ExtraTrees:criterion=gini");
    el = renderProfiler(data, state, handlers);
    expect(el.querySelector(".scatter-list")).not.toBeNull();
    expect(el.querySelectorAll(".scatter-block")).toHaveLength(1);
  });

  it("marks the active range when one is set", () => {
    const el = renderScatter(maxFeaturesScatterFixture(), [0.7, 1.0],
                             { onBrush: () => undefined });
    const rect = el.querySelector(".active-range")!;
    const x = Number(rect.getAttribute("x"));
    expect(x).toBeCloseTo(((0.7 - 0.1) / 0.9) * PLOT_WIDTH, 6);
  });

  it("downsamples beyond the point budget with a deterministic stride", () => {
    const base = maxFeaturesScatterFixture();
    const many = {
      ...base,
      points: Array.from({ length: 4001 }, (_, i) => ({
        value: 0.1 + 0.9 * (i / 4000),
        score: 0.5,
        trial_id: i + 1,
      })),
    };
    const visible = visiblePoints(many);
    expect(visible.length).toBeLessThanOrEqual(MAX_POINTS);
    expect(visible[0].trial_id).toBe(1);
    expect(visiblePoints(many)).toEqual(visible); // deterministic
  });
});
