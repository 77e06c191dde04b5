// Hyperparameter scatter plot (value vs score) with the tried-value
// distribution as an area strip beneath, and a drag brush on the value
// axis that emits a set_range edit.
//
// The x axis always spans the DECLARED range of the hyperparameter, not
// the data extent, so sparsely-explored regions stay visible. Log-scale
// specs map through log10. Beyond MAX_POINTS the point cloud is thinned
// with a deterministic stride.

import type { ScatterSeries } from "./api.js";
import { snapValue } from "./config.js";
import { h, svg } from "./dom.js";

export const PLOT_WIDTH = 360;
export const SCATTER_HEIGHT = 140;
export const AREA_HEIGHT = 44;
export const MAX_POINTS = 2000;

export interface ScatterHandlers {
  onBrush(lo: number, hi: number): void;
}

function toAxis(series: ScatterSeries, value: number): number {
  if (series.scale === "log") {
    return (
      ((Math.log10(value) - Math.log10(series.lower)) /
        (Math.log10(series.upper) - Math.log10(series.lower))) *
      PLOT_WIDTH
    );
  }
  return ((value - series.lower) / (series.upper - series.lower)) * PLOT_WIDTH;
}

function fromAxis(series: ScatterSeries, px: number): number {
  const frac = Math.min(Math.max(px / PLOT_WIDTH, 0), 1);
  if (series.scale === "log") {
    const lo = Math.log10(series.lower);
    const hi = Math.log10(series.upper);
    return 10 ** (lo + frac * (hi - lo));
  }
  return series.lower + frac * (series.upper - series.lower);
}

export function brushInterval(
  series: ScatterSeries,
  pxA: number,
  pxB: number,
): [number, number] | null {
  const [a, b] = pxA <= pxB ? [pxA, pxB] : [pxB, pxA];
  const lo = snapValue(series, fromAxis(series, a));
  const hi = snapValue(series, fromAxis(series, b));
  if (!(lo < hi)) return null; // a click or sub-pixel drag is not a brush
  return [lo, hi];
}

export function visiblePoints(series: ScatterSeries): ScatterSeries["points"] {
  const points = series.points;
  if (points.length <= MAX_POINTS) return points;
  const stride = Math.ceil(points.length / MAX_POINTS);
  return points.filter((_, i) => i % stride === 0);
}

export function renderScatter(
  series: ScatterSeries,
  activeRange: [number, number] | null,
  handlers: ScatterHandlers,
): HTMLElement {
  const height = SCATTER_HEIGHT + AREA_HEIGHT + 18;
  const root = svg("svg", {
    class: "scatter",
    width: PLOT_WIDTH,
    height,
    viewBox: `0 0 ${PLOT_WIDTH} ${height}`,
    "data-hyperparameter": series.hyperparameter,
    "data-lower": series.lower,
    "data-upper": series.upper,
  });

  if (activeRange) {
    root.append(
      svg("rect", {
        class: "active-range",
        x: toAxis(series, activeRange[0]),
        y: 0,
        width: Math.max(
          toAxis(series, activeRange[1]) - toAxis(series, activeRange[0]), 1),
        height: SCATTER_HEIGHT,
      }),
    );
  }

  for (const point of visiblePoints(series)) {
    root.append(
      svg("circle", {
        class: "point",
        cx: toAxis(series, point.value),
        cy: SCATTER_HEIGHT - point.score * SCATTER_HEIGHT,
        r: 2.5,
        "data-trial": point.trial_id,
      }),
    );
  }

  // tried-value distribution as an area strip under the scatter
  const bins = series.value_histogram;
  const maxBin = Math.max(...bins, 1);
  const step = PLOT_WIDTH / bins.length;
  const baseline = SCATTER_HEIGHT + AREA_HEIGHT;
  let path = `M 0 ${baseline}`;
  bins.forEach((count, i) => {
    const y = baseline - (count / maxBin) * (AREA_HEIGHT - 4);
    path += ` L ${i * step} ${y} L ${(i + 1) * step} ${y}`;
  });
  path += ` L ${PLOT_WIDTH} ${baseline} Z`;
  root.append(svg("path", { class: "area", d: path }));

  // axis labels: the declared bounds, deliberately not the data extent
  root.append(
    svg("text", { class: "axis-label", x: 0, y: height - 4 },
        formatBound(series, series.lower)),
    svg("text", { class: "axis-label", x: PLOT_WIDTH, y: height - 4,
                  "text-anchor": "end" },
        formatBound(series, series.upper)),
  );

  // brush overlay
  const selection = svg("rect", { class: "brush-selection", x: 0, y: 0,
                                  width: 0, height: SCATTER_HEIGHT });
  const overlay = svg("rect", {
    class: "brush-overlay",
    x: 0, y: 0, width: PLOT_WIDTH, height: SCATTER_HEIGHT,
    fill: "transparent",
  });
  let anchor: number | null = null;
  const localX = (evt: MouseEvent): number => {
    const rect = (overlay as SVGGraphicsElement).getBoundingClientRect();
    return evt.clientX - rect.left;
  };
  overlay.addEventListener("mousedown", (evt) => {
    anchor = localX(evt as MouseEvent);
  });
  overlay.addEventListener("mousemove", (evt) => {
    if (anchor === null) return;
    const x = localX(evt as MouseEvent);
    selection.setAttribute("x", String(Math.min(anchor, x)));
    selection.setAttribute("width", String(Math.abs(x - anchor)));
  });
  overlay.addEventListener("mouseup", (evt) => {
    if (anchor === null) return;
    const interval = brushInterval(series, anchor, localX(evt as MouseEvent));
    anchor = null;
    selection.setAttribute("width", "0");
    if (interval) handlers.onBrush(interval[0], interval[1]);
  });
  root.append(selection, overlay);

  return h("div", { class: "scatter-block" },
    h("h4", {}, series.hyperparameter,
      h("span", { class: "scale-tag" },
        series.scale === "log" ? " (log scale)" : "")),
    root);
}

function formatBound(series: ScatterSeries, value: number): string {
  if (series.kind === "integer") return String(value);
  if (series.scale === "log") return value.toExponential(0);
  return String(value);
}
