"""Aggregates served to the overview panel and the three-level profiler.

All functions are pure over (trial list, space): replayed logs produce
bit-identical summaries. Error-status trials never enter score aggregates;
they surface through error counters. Coverage denominators count currently
enabled entities, but history of since-disabled entities stays visible in
histograms and leaderboards.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import Rejection
from .orchestrator import Trial
from .space import SearchSpace

SCORE_BINS = 10
VALUE_BINS = 20
TOP_K = 10


@dataclass
class Overview:
    best_score: Optional[float]
    n_trials: int
    n_ok: int
    n_error: int
    algorithm_coverage: float
    hyperpartition_coverage: float
    histogram: list[int]
    top_models: list[dict]

    def to_json(self) -> dict:
        return {"best_score": self.best_score, "n_trials": self.n_trials,
                "n_ok": self.n_ok, "n_error": self.n_error,
                "algorithm_coverage": self.algorithm_coverage,
                "hyperpartition_coverage": self.hyperpartition_coverage,
                "histogram": self.histogram, "top_models": self.top_models}


@dataclass
class AlgorithmSummary:
    name: str
    enabled: bool
    best_score: Optional[float]
    n_trials: int
    n_ok: int
    n_error: int
    histogram: list[int]
    hyperpartition_coverage: float

    def to_json(self) -> dict:
        return {"name": self.name, "enabled": self.enabled,
                "best_score": self.best_score, "n_trials": self.n_trials,
                "n_ok": self.n_ok, "n_error": self.n_error,
                "histogram": self.histogram,
                "hyperpartition_coverage": self.hyperpartition_coverage}


@dataclass
class HyperpartitionSummary:
    id: str
    algorithm: str
    enabled: bool
    n_trials: int
    n_ok: int
    n_error: int
    best_score: Optional[float]
    sequence: list[dict] = field(default_factory=list)  # chronological

    def to_json(self) -> dict:
        return {"id": self.id, "algorithm": self.algorithm,
                "enabled": self.enabled, "n_trials": self.n_trials,
                "n_ok": self.n_ok, "n_error": self.n_error,
                "best_score": self.best_score, "sequence": self.sequence}


@dataclass
class ScatterSeries:
    hyperparameter: str
    scope: str
    kind: str
    scale: str
    lower: float
    upper: float
    points: list[dict]
    value_histogram: list[int]

    def to_json(self) -> dict:
        return {"hyperparameter": self.hyperparameter, "scope": self.scope,
                "kind": self.kind, "scale": self.scale,
                "lower": self.lower, "upper": self.upper,
                "points": self.points, "value_histogram": self.value_histogram}


def histogram(scores: Sequence[float], bins: int = SCORE_BINS) -> list[int]:
    """Uniform bins over [0, 1], half-open [lo, hi) except the final bin,
    which is closed so a score of exactly 1.0 lands in it."""
    counts = [0] * bins
    edges = [i / bins for i in range(bins)]
    for s in scores:
        idx = _bisect_bin(edges, s, bins)
        counts[idx] += 1
    return counts


def _bisect_bin(edges: list[float], value: float, bins: int) -> int:
    return min(max(bisect.bisect_right(edges, value) - 1, 0), bins - 1)


def _ok_trials(trials: Sequence[Trial]) -> list[Trial]:
    return [t for t in trials if t.status == "ok"]


def overview(trials: Sequence[Trial], space: SearchSpace,
             top_k: int = TOP_K) -> Overview:
    ok = _ok_trials(trials)
    tried_algorithms = {t.algorithm for t in ok}
    tried_hps = {t.hyperpartition_id for t in ok}
    enabled_algorithms = [a.name for a in space.algorithms
                          if space.algorithm_enabled.get(a.name, False)]
    enabled_hps = [hp.id for hp in space.enabled_hyperpartitions()]
    algo_cov = (sum(1 for a in enabled_algorithms if a in tried_algorithms)
                / len(enabled_algorithms)) if enabled_algorithms else 0.0
    hp_cov = (sum(1 for h in enabled_hps if h in tried_hps)
              / len(enabled_hps)) if enabled_hps else 0.0
    ranked = sorted(ok, key=lambda t: (-t.score, t.trial_id))[:top_k]
    top = [{"rank": i + 1, "trial_id": t.trial_id, "algorithm": t.algorithm,
            "hyperpartition_id": t.hyperpartition_id, "score": t.score}
           for i, t in enumerate(ranked)]
    return Overview(
        best_score=max((t.score for t in ok), default=None),
        n_trials=len(trials), n_ok=len(ok), n_error=len(trials) - len(ok),
        algorithm_coverage=algo_cov, hyperpartition_coverage=hp_cov,
        histogram=histogram([t.score for t in ok]), top_models=top)


def algorithm_summaries(trials: Sequence[Trial],
                        space: SearchSpace) -> list[AlgorithmSummary]:
    """Every declared algorithm, sorted by best score descending; untried
    ones trail in alphabetical order."""
    out = []
    for algo in space.algorithms:
        mine = [t for t in trials if t.algorithm == algo.name]
        ok = _ok_trials(mine)
        my_hps = [hp for hp in space.hyperpartitions if hp.algorithm == algo.name]
        enabled_hps = [hp.id for hp in my_hps
                       if space.algorithm_enabled.get(algo.name, False)
                       and space.hyperpartition_enabled.get(hp.id, False)]
        tried = {t.hyperpartition_id for t in ok}
        cov = (sum(1 for h in enabled_hps if h in tried) / len(enabled_hps)
               if enabled_hps else 0.0)
        out.append(AlgorithmSummary(
            name=algo.name,
            enabled=bool(space.algorithm_enabled.get(algo.name, False)),
            best_score=max((t.score for t in ok), default=None),
            n_trials=len(mine), n_ok=len(ok), n_error=len(mine) - len(ok),
            histogram=histogram([t.score for t in ok]),
            hyperpartition_coverage=cov))
    tried_part = sorted([s for s in out if s.best_score is not None],
                        key=lambda s: (-s.best_score, s.name))
    untried = sorted([s for s in out if s.best_score is None],
                     key=lambda s: s.name)
    return tried_part + untried


def hyperpartition_summaries(trials: Sequence[Trial], space: SearchSpace,
                             algorithm: str) -> list[HyperpartitionSummary]:
    if not any(a.name == algorithm for a in space.algorithms):
        raise Rejection("unknown_name", f"unknown algorithm {algorithm!r}",
                        {"name": algorithm})
    out = []
    for hp in space.hyperpartitions:
        if hp.algorithm != algorithm:
            continue
        mine = [t for t in trials if t.hyperpartition_id == hp.id]
        ok = _ok_trials(mine)
        out.append(HyperpartitionSummary(
            id=hp.id, algorithm=algorithm,
            enabled=space.effectively_enabled(hp.id),
            n_trials=len(mine), n_ok=len(ok), n_error=len(mine) - len(ok),
            best_score=max((t.score for t in ok), default=None),
            sequence=[{"trial_id": t.trial_id, "score": t.score}
                      for t in sorted(ok, key=lambda t: t.trial_id)]))
    return out


def scatter(trials: Sequence[Trial], space: SearchSpace, scope: str,
            hyperparameter: str) -> ScatterSeries:
    """Hyperparameter-vs-score series. scope is an algorithm name (merging
    every hyperpartition carrying the name) or a single hyperpartition id."""
    if ":" in scope:
        hps = [space.hyperpartition(scope)]  # unknown id -> unknown_target
    else:
        if not any(a.name == scope for a in space.algorithms):
            raise Rejection("unknown_name", f"unknown scope {scope!r}",
                            {"scope": scope})
        hps = [hp for hp in space.hyperpartitions if hp.algorithm == scope]
    spec = None
    carrier_ids = set()
    for hp in hps:
        for t in hp.tunables:
            if t.name == hyperparameter:
                spec = t
                carrier_ids.add(hp.id)
    if spec is None:
        raise Rejection("unknown_name",
                        f"no tunable {hyperparameter!r} under {scope!r}",
                        {"scope": scope, "hyperparameter": hyperparameter})
    points = [{"value": t.config[hyperparameter], "score": t.score,
               "trial_id": t.trial_id}
              for t in _ok_trials(trials)
              if t.hyperpartition_id in carrier_ids
              and hyperparameter in t.config]
    return ScatterSeries(
        hyperparameter=hyperparameter, scope=scope, kind=spec.kind,
        scale=spec.scale, lower=spec.lower, upper=spec.upper, points=points,
        value_histogram=_value_histogram([p["value"] for p in points], spec))


def _value_histogram(values: Sequence[float], spec) -> list[int]:
    # 20 bins over the declared range; log-scale specs bin in log10 space
    if spec.scale == "log":
        lo, hi = math.log10(spec.lower), math.log10(spec.upper)
        values = [math.log10(v) for v in values]
    else:
        lo, hi = spec.lower, spec.upper
    edges = [lo + (hi - lo) * i / VALUE_BINS for i in range(VALUE_BINS)]
    counts = [0] * VALUE_BINS
    for v in values:
        counts[_bisect_bin(edges, v, VALUE_BINS)] += 1
    return counts


def focus_filter(trials: Sequence[Trial], space: SearchSpace,
                 top_k: int = TOP_K) -> tuple[set[str], set[str]]:
    """Exactly the algorithms / hyperpartitions owning a top-k model."""
    top = overview(trials, space, top_k=top_k).top_models
    return ({m["algorithm"] for m in top},
            {m["hyperpartition_id"] for m in top})


def full_summary(trials: Sequence[Trial], space: SearchSpace) -> dict:
    """Everything the UI needs in one pass (used by the perf benchmark)."""
    return {
        "overview": overview(trials, space).to_json(),
        "algorithms": [s.to_json() for s in algorithm_summaries(trials, space)],
        "hyperpartitions": {
            a.name: [s.to_json()
                     for s in hyperpartition_summaries(trials, space, a.name)]
            for a in space.algorithms
        },
    }
