"""Figure rendering for the CLI report path: overview, per-algorithm
histograms, hyperpartition sequences, hyperparameter scatters, and
multi-run progression plots, all written as PNG files."""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

EDGE = "#30343a"


def _bar_edges(n_bins: int, lo: float = 0.0, hi: float = 1.0):
    width = (hi - lo) / n_bins
    return [lo + i * width for i in range(n_bins)], width


def render_overview(overview: dict, path: str) -> str:
    fig, (ax_hist, ax_cov) = plt.subplots(
        1, 2, figsize=(9, 3.2), gridspec_kw={"width_ratios": [2, 1]})
    lefts, width = _bar_edges(len(overview["histogram"]))
    ax_hist.bar(lefts, overview["histogram"], width=width, align="edge",
                color="#4878cf", edgecolor=EDGE)
    ax_hist.set_xlabel("cross-validated F1")
    ax_hist.set_ylabel("models")
    best = overview["best_score"]
    ax_hist.set_title(f"{overview['n_trials']} trials, best "
                      f"{best:.3f}" if best is not None else "no scored trials")
    ax_cov.bar(["algorithms", "hyperpartitions"],
               [overview["algorithm_coverage"], overview["hyperpartition_coverage"]],
               color=["#6acc65", "#d65f5f"], edgecolor=EDGE)
    ax_cov.set_ylim(0, 1)
    ax_cov.set_title("coverage")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_algorithms(summaries: list[dict], path: str) -> str:
    n = max(len(summaries), 1)
    fig, axes = plt.subplots(n, 1, figsize=(7, 1.4 * n), sharex=True)
    if n == 1:
        axes = [axes]
    for ax, summary in zip(axes, summaries):
        lefts, width = _bar_edges(len(summary["histogram"]))
        ax.bar(lefts, summary["histogram"], width=width, align="edge",
               color="#4878cf", edgecolor=EDGE)
        best = summary["best_score"]
        label = f"{summary['name']}  "
        label += f"best {best:.3f}, " if best is not None else "untried, "
        label += f"{summary['n_trials']} trials"
        if not summary.get("enabled", True):
            label += " (disabled)"
        ax.set_ylabel(summary["name"], rotation=0, ha="right", va="center",
                      fontsize=9)
        ax.set_title(label, fontsize=8, loc="right", pad=2)
    axes[-1].set_xlabel("cross-validated F1")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_hyperpartitions(summaries: list[dict], path: str) -> str:
    n = max(len(summaries), 1)
    fig, axes = plt.subplots(n, 1, figsize=(7, 1.3 * n), sharey=True)
    if n == 1:
        axes = [axes]
    for ax, summary in zip(axes, summaries):
        scores = [p["score"] for p in summary["sequence"]]
        ax.bar(range(len(scores)), scores, width=0.9, color="#4878cf",
               edgecolor=EDGE)
        ax.set_ylim(0, 1)
        ax.set_title(f"{summary['id']}  ({summary['n_ok']} models)",
                     fontsize=8, loc="left", pad=2)
    axes[-1].set_xlabel("models in chronological order")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_scatter(series: dict, path: str) -> str:
    """Scatter of value vs score with the value distribution area beneath."""
    fig, (ax_sc, ax_area) = plt.subplots(
        2, 1, figsize=(7, 4.6), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]})
    xs = [p["value"] for p in series["points"]]
    ys = [p["score"] for p in series["points"]]
    ax_sc.scatter(xs, ys, s=18, color="#4878cf", alpha=0.75, edgecolor=EDGE,
                  linewidth=0.3)
    ax_sc.set_ylabel("score")
    ax_sc.set_ylim(0, 1.02)
    ax_sc.set_title(f"{series['scope']} / {series['hyperparameter']}")

    lo, hi = series["lower"], series["upper"]
    bins = len(series["value_histogram"])
    if series["scale"] == "log":
        log_lo, log_hi = math.log10(lo), math.log10(hi)
        centers = [10 ** (log_lo + (log_hi - log_lo) * (i + 0.5) / bins)
                   for i in range(bins)]
        ax_sc.set_xscale("log")
    else:
        centers = [lo + (hi - lo) * (i + 0.5) / bins for i in range(bins)]
    ax_area.fill_between(centers, series["value_histogram"], step="mid",
                         color="#6acc65", alpha=0.8)
    ax_area.set_ylabel("tried")
    ax_area.set_xlabel(series["hyperparameter"])
    # the axis spans the declared range, not just the data
    ax_area.set_xlim(lo, hi)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_progression(curves: list[tuple[str, list[float]]], path: str,
                       thresholds: list[float] | None = None) -> str:
    """Best-so-far trajectories for repeated runs (one line per run)."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, best_so_far in curves:
        ax.step(np.arange(1, len(best_so_far) + 1), best_so_far,
                where="post", alpha=0.7, label=label)
    for t in thresholds or []:
        ax.axhline(t, color="#999999", linestyle=":", linewidth=0.8)
    ax.set_xlabel("models tried")
    ax.set_ylabel("best score so far")
    if len(curves) <= 10:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_report(out_dir: str, overview: dict, algorithms: list[dict],
                 hyperpartitions: list[dict], scatters: list[dict],
                 trials_csv: str) -> list[str]:
    """Render every figure next to the delimited trial export."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    csv_path = os.path.join(out_dir, "trials.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(trials_csv)
    written.append(csv_path)
    written.append(render_overview(overview, os.path.join(out_dir, "overview.png")))
    written.append(render_algorithms(algorithms,
                                     os.path.join(out_dir, "algorithms.png")))
    if hyperpartitions:
        name = hyperpartitions[0]["algorithm"]
        written.append(render_hyperpartitions(
            hyperpartitions, os.path.join(out_dir, f"hyperpartitions_{name}.png")))
    for series in scatters:
        fn = f"scatter_{series['scope'].split(':')[0]}_{series['hyperparameter']}.png"
        written.append(render_scatter(series, os.path.join(out_dir, fn)))
    return written
