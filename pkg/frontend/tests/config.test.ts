import { describe, expect, it, vi } from "vitest";

import {
  algorithmFlagDelta,
  hyperpartitionFlagDelta,
  setRangeDelta,
  validateDelta,
  wouldDisableEverything,
} from "../src/config.js";
import { brushInterval, renderScatter, PLOT_WIDTH } from "../src/scatter.js";
import { renderProfiler } from "../src/profiler.js";
import { toggleAlgorithm, initialViewState } from "../src/state.js";
import {
  algorithmSummariesFixture,
  hyperpartitionSummariesFixture,
  maxFeaturesScatterFixture,
  overviewFixture,
  spaceFixture,
} from "./fixtures.js";

describe("delta builders and validation", () => {
  it("builds enable/disable deltas", () => {
    expect(algorithmFlagDelta("KNN", false))
      .toEqual({ kind: "disable_algorithm", algorithm: "KNN" });
    expect(hyperpartitionFlagDelta("ExtraTrees:criterion=gini", true)).toEqual({
      kind: "enable_hyperpartition",
      hyperpartition: "ExtraTrees:criterion=gini",
    });
  });

  it("validates the wire schema before sending", () => {
    expect(validateDelta({ kind: "warp", algorithm: "KNN" })).toBeTruthy();
    expect(validateDelta({ kind: "enable_algorithm" })).toBeTruthy();
    expect(
      validateDelta({ kind: "set_range", algorithm: "KNN",
                      hyperparameter: "n_neighbors", range: [9, 9] }),
    ).toBeTruthy();
    expect(
      validateDelta({ kind: "set_range", algorithm: "KNN",
                      hyperparameter: "n_neighbors", range: [3, 9] }),
    ).toBeNull();
  });

  it("flags an edit that would disable every hyperpartition", () => {
    const space = spaceFixture();
    space.algorithm_enabled.KNN = false; // only ExtraTrees effectively left
    expect(
      wouldDisableEverything(space,
                             { kind: "disable_algorithm",
                               algorithm: "ExtraTrees" }),
    ).toBe(true);
    expect(
      wouldDisableEverything(space,
                             { kind: "disable_hyperpartition",
                               hyperpartition: "ExtraTrees:criterion=gini" }),
    ).toBe(false);
  });
});

describe("range brush", () => {
  it("maps brushed pixels to exactly [0.7, 1.0] on max_features", () => {
    const series = maxFeaturesScatterFixture(); // declared [0.1, 1.0]
    const pxLo = ((0.7 - 0.1) / 0.9) * PLOT_WIDTH;
    const interval = brushInterval(series, pxLo, PLOT_WIDTH);
    expect(interval).toEqual([0.7, 1.0]);
  });

  it("treats a click (no drag) as no brush", () => {
    expect(brushInterval(maxFeaturesScatterFixture(), 120, 120)).toBeNull();
  });

  it("emits the delta through mouse events on the overlay", () => {
    const onBrush = vi.fn();
    const el = renderScatter(maxFeaturesScatterFixture(), null, { onBrush });
    const overlay = el.querySelector(".brush-overlay")!;
    const pxLo = ((0.7 - 0.1) / 0.9) * PLOT_WIDTH;
    overlay.dispatchEvent(
      new MouseEvent("mousedown", { clientX: pxLo, bubbles: true }));
    overlay.dispatchEvent(
      new MouseEvent("mousemove", { clientX: PLOT_WIDTH, bubbles: true }));
    overlay.dispatchEvent(
      new MouseEvent("mouseup", { clientX: PLOT_WIDTH, bubbles: true }));
    expect(onBrush).toHaveBeenCalledWith(0.7, 1.0);
  });

  it("orders a right-to-left drag", () => {
    const series = maxFeaturesScatterFixture();
    const pxLo = ((0.7 - 0.1) / 0.9) * PLOT_WIDTH;
    expect(brushInterval(series, PLOT_WIDTH, pxLo)).toEqual([0.7, 1.0]);
  });

  it("rounds integer hyperparameter brushes to whole values", () => {
    const series = {
      ...maxFeaturesScatterFixture(),
      hyperparameter: "n_neighbors",
      kind: "integer" as const,
      lower: 1,
      upper: 30,
    };
    const px = (v: number) => ((v - 1) / 29) * PLOT_WIDTH;
    expect(brushInterval(series, px(4.7), px(11.2))).toEqual([5, 11]);
  });
});

describe("in-situ edits through the profiler", () => {
  function render(handlers: Partial<Parameters<typeof renderProfiler>[2]>) {
    const state = toggleAlgorithm(initialViewState(), "ExtraTrees");
    return renderProfiler(
      {
        overview: overviewFixture(),
        algorithms: algorithmSummariesFixture(),
        space: spaceFixture(),
        hyperpartitions: hyperpartitionSummariesFixture(),
        scatters: null,
      },
      state,
      {
        onSelectAlgorithm: () => undefined,
        onSelectHyperpartition: () => undefined,
        onDelta: () => undefined,
        onWarning: () => undefined,
        ...handlers,
      },
    );
  }

  it("unchecking an algorithm emits a disable delta", () => {
    const onDelta = vi.fn();
    const el = render({ onDelta });
    const box = el.querySelector(
      '[data-role="enable-KNN"]') as HTMLInputElement;
    box.checked = false;
    box.dispatchEvent(new Event("change"));
    expect(onDelta).toHaveBeenCalledWith(
      { kind: "disable_algorithm", algorithm: "KNN" });
  });

  it("re-checking a disabled algorithm emits an enable delta", () => {
    const onDelta = vi.fn();
    const el = render({ onDelta });
    const box = el.querySelector(
      '[data-role="enable-GaussianNB"]') as HTMLInputElement;
    box.checked = true;
    box.dispatchEvent(new Event("change"));
    expect(onDelta).toHaveBeenCalledWith(
      { kind: "enable_algorithm", algorithm: "GaussianNB" });
  });

  it("blocks the edit that would disable everything: warning, no delta", () => {
    const onDelta = vi.fn();
    const onWarning = vi.fn();
    const state = toggleAlgorithm(initialViewState(), "ExtraTrees");
    const space = spaceFixture();
    space.algorithm_enabled.KNN = false;
    const el = renderProfiler(
      {
        overview: overviewFixture(),
        algorithms: algorithmSummariesFixture(),
        space,
        hyperpartitions: hyperpartitionSummariesFixture(),
        scatters: null,
      },
      state,
      {
        onSelectAlgorithm: () => undefined,
        onSelectHyperpartition: () => undefined,
        onDelta,
        onWarning,
      },
    );
    const box = el.querySelector(
      '[data-role="enable-ExtraTrees"]') as HTMLInputElement;
    box.checked = false;
    box.dispatchEvent(new Event("change"));
    expect(onDelta).not.toHaveBeenCalled();
    expect(onWarning).toHaveBeenCalledOnce();
  });

  it("builds the exact paper delta for a max_features restriction", () => {
    expect(
      setRangeDelta({ algorithm: "ExtraTrees" }, "max_features", 0.7, 1.0),
    ).toEqual({
      kind: "set_range",
      algorithm: "ExtraTrees",
      hyperparameter: "max_features",
      range: [0.7, 1.0],
    });
  });
});
