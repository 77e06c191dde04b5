"""Hierarchical model search space: algorithms, hyperpartitions, tunable ranges.

A hyperpartition pins every categorical choice of an algorithm; only numeric
hyperparameters remain tunable. Spaces are immutable snapshots: every edit
produces a new space via ``apply_delta``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import Rejection


@dataclass(frozen=True)
class HyperparameterSpec:
    """A tunable numeric setting with declared range and scale."""

    name: str
    kind: str  # "integer" | "real"
    lower: float
    upper: float
    scale: str = "linear"  # "linear" | "log"
    applies_when: Optional[dict[str, str]] = None  # categorical name -> required value

    def __post_init__(self):
        if self.kind not in ("integer", "real"):
            raise ValueError(f"{self.name}: kind must be integer|real")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"{self.name}: scale must be linear|log")
        if not self.lower < self.upper:
            raise ValueError(f"{self.name}: lower must be < upper")
        if self.scale == "log" and self.lower <= 0:
            raise ValueError(f"{self.name}: log scale requires lower > 0")
        if self.kind == "integer":
            if self.lower != int(self.lower) or self.upper != int(self.upper):
                raise ValueError(f"{self.name}: integer bounds must be whole numbers")
            if self.upper - self.lower < 1:
                raise ValueError(f"{self.name}: integer range must span >= 1")

    def satisfied_by(self, assignment: dict[str, str]) -> bool:
        if not self.applies_when:
            return True
        return all(assignment.get(k) == v for k, v in self.applies_when.items())


@dataclass(frozen=True)
class CategoricalSpec:
    name: str
    values: tuple[str, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError(f"{self.name}: needs at least one value")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"{self.name}: duplicate values")


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    categoricals: tuple[CategoricalSpec, ...] = ()
    numerics: tuple[HyperparameterSpec, ...] = ()

    def __post_init__(self):
        names = [c.name for c in self.categoricals] + [h.name for h in self.numerics]
        if len(set(names)) != len(names):
            raise ValueError(f"{self.name}: categorical/numeric names must be unique")
        declared = {c.name: set(c.values) for c in self.categoricals}
        for h in self.numerics:
            for cat, val in (h.applies_when or {}).items():
                if cat not in declared or val not in declared[cat]:
                    raise ValueError(
                        f"{self.name}.{h.name}: applies_when references unknown {cat}={val}"
                    )


@dataclass(frozen=True)
class Hyperpartition:
    """An algorithm with all categoricals fixed; one bandit arm each."""

    id: str
    algorithm: str
    assignment: dict[str, str]
    tunables: tuple[HyperparameterSpec, ...]


def hyperpartition_id(algorithm: str, categoricals: Iterable[CategoricalSpec],
                      assignment: dict[str, str]) -> str:
    parts = ",".join(f"{c.name}={assignment[c.name]}" for c in categoricals)
    return f"{algorithm}:{parts}"


def enumerate_hyperpartitions(algorithm: AlgorithmSpec) -> list[Hyperpartition]:
    """Cartesian product of categorical values, declaration order, last varies fastest.

    An algorithm with no categoricals yields one hyperpartition with an
    empty assignment. Tunables are filtered by each spec's applies_when.
    """
    value_lists = [c.values for c in algorithm.categoricals]
    out = []
    for combo in itertools.product(*value_lists):
        assignment = {c.name: v for c, v in zip(algorithm.categoricals, combo)}
        tunables = tuple(h for h in algorithm.numerics if h.satisfied_by(assignment))
        out.append(Hyperpartition(
            id=hyperpartition_id(algorithm.name, algorithm.categoricals, assignment),
            algorithm=algorithm.name,
            assignment=assignment,
            tunables=tunables,
        ))
    return out


@dataclass(frozen=True)
class SearchSpace:
    """Immutable snapshot of the whole space plus enable flags and subranges.

    active_range keys are (hyperpartition id, hyperparameter name); absent
    keys mean the full declared range.
    """

    algorithms: tuple[AlgorithmSpec, ...]
    algorithm_enabled: dict[str, bool]
    hyperpartition_enabled: dict[str, bool]
    active_range: dict[tuple[str, str], tuple[float, float]]
    hyperpartitions: tuple[Hyperpartition, ...] = field(init=False)

    def __post_init__(self):
        hps = tuple(hp for a in self.algorithms for hp in enumerate_hyperpartitions(a))
        object.__setattr__(self, "hyperpartitions", hps)

    @staticmethod
    def fresh(algorithms: Iterable[AlgorithmSpec]) -> "SearchSpace":
        algorithms = tuple(algorithms)
        hps = [hp for a in algorithms for hp in enumerate_hyperpartitions(a)]
        return SearchSpace(
            algorithms=algorithms,
            algorithm_enabled={a.name: True for a in algorithms},
            hyperpartition_enabled={hp.id: True for hp in hps},
            active_range={},
        )

    def algorithm(self, name: str) -> AlgorithmSpec:
        for a in self.algorithms:
            if a.name == name:
                return a
        raise Rejection("unknown_target", f"unknown algorithm: {name}", {"target": name})

    def hyperpartition(self, hp_id: str) -> Hyperpartition:
        for hp in self.hyperpartitions:
            if hp.id == hp_id:
                return hp
        raise Rejection("unknown_target", f"unknown hyperpartition: {hp_id}", {"target": hp_id})

    def effectively_enabled(self, hp_id: str) -> bool:
        """Disabling an algorithm disables all its hyperpartitions."""
        hp = self.hyperpartition(hp_id)
        return bool(self.algorithm_enabled.get(hp.algorithm, False)
                    and self.hyperpartition_enabled.get(hp_id, False))

    def enabled_hyperpartitions(self) -> list[Hyperpartition]:
        return [hp for hp in self.hyperpartitions
                if self.algorithm_enabled.get(hp.algorithm, False)
                and self.hyperpartition_enabled.get(hp.id, False)]

    def range_of(self, hp_id: str, spec: HyperparameterSpec) -> tuple[float, float]:
        return self.active_range.get((hp_id, spec.name), (spec.lower, spec.upper))


@dataclass(frozen=True)
class SpaceDelta:
    """One in-situ edit. Range ops may target a hyperpartition or a whole
    algorithm (fanning out to every hyperpartition carrying the name)."""

    kind: str  # enable_algorithm | disable_algorithm | enable_hyperpartition |
               # disable_hyperpartition | set_range | reset_range
    target: str  # algorithm name or hyperpartition id
    hyperparameter: Optional[str] = None  # range ops only
    range: Optional[tuple[float, float]] = None  # set_range only

    KINDS = ("enable_algorithm", "disable_algorithm", "enable_hyperpartition",
             "disable_hyperpartition", "set_range", "reset_range")

    def __post_init__(self):
        if self.kind not in SpaceDelta.KINDS:
            raise Rejection("invalid_delta", f"unknown delta kind: {self.kind}")
        if self.kind == "set_range" and self.range is None:
            raise Rejection("invalid_delta", "set_range requires a range")
        if self.kind in ("set_range", "reset_range") and not self.hyperparameter:
            raise Rejection("invalid_delta", f"{self.kind} requires a hyperparameter")
        if self.kind != "set_range" and self.range is not None:
            raise Rejection("invalid_delta", f"{self.kind} carries no range")


def delta_from_json(obj: dict) -> SpaceDelta:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise Rejection("invalid_delta", "delta must be an object with a 'kind'")
    kind = obj["kind"]
    target = obj.get("algorithm") or obj.get("hyperpartition") or obj.get("target")
    if not target:
        raise Rejection("invalid_delta", "delta needs an algorithm or hyperpartition target")
    rng = obj.get("range")
    if rng is not None:
        if (not isinstance(rng, (list, tuple)) or len(rng) != 2
                or not all(isinstance(v, (int, float)) for v in rng)):
            raise Rejection("invalid_delta", "range must be [lo, hi]")
        rng = (float(rng[0]), float(rng[1]))
    return SpaceDelta(kind=kind, target=str(target),
                      hyperparameter=obj.get("hyperparameter"), range=rng)


def delta_to_json(delta: SpaceDelta) -> dict:
    out: dict = {"kind": delta.kind}
    if ":" in delta.target:
        out["hyperpartition"] = delta.target
    else:
        out["algorithm"] = delta.target
    if delta.hyperparameter:
        out["hyperparameter"] = delta.hyperparameter
    if delta.range is not None:
        out["range"] = [delta.range[0], delta.range[1]]
    return out


def validate_space(space: SearchSpace) -> list[dict]:
    """Every invariant violation as {code, target, message}; empty list = ok."""
    violations = []
    known_hp = {hp.id: hp for hp in space.hyperpartitions}
    known_algos = {a.name for a in space.algorithms}
    for name in space.algorithm_enabled:
        if name not in known_algos:
            violations.append({"code": "unknown_target", "target": name,
                               "message": f"flag for unknown algorithm {name}"})
    for hp_id in space.hyperpartition_enabled:
        if hp_id not in known_hp:
            violations.append({"code": "unknown_target", "target": hp_id,
                               "message": f"flag for unknown hyperpartition {hp_id}"})
    for (hp_id, hp_name), (lo, hi) in space.active_range.items():
        hp = known_hp.get(hp_id)
        spec = next((t for t in hp.tunables if t.name == hp_name), None) if hp else None
        if spec is None:
            violations.append({"code": "unknown_target", "target": f"{hp_id}/{hp_name}",
                               "message": "active range for unknown hyperparameter"})
            continue
        if not (spec.lower <= lo < hi <= spec.upper):
            violations.append({"code": "empty_range", "target": f"{hp_id}/{hp_name}",
                               "message": f"range [{lo}, {hi}] invalid for "
                                          f"[{spec.lower}, {spec.upper}]"})
        elif spec.kind == "integer" and math.ceil(lo) > math.floor(hi):
            violations.append({"code": "empty_range", "target": f"{hp_id}/{hp_name}",
                               "message": f"range [{lo}, {hi}] contains no integer"})
    if not space.enabled_hyperpartitions():
        violations.append({"code": "no_enabled_hyperpartition", "target": "*",
                           "message": "no hyperpartition is effectively enabled"})
    return violations


def _range_targets(space: SearchSpace, delta: SpaceDelta) -> list[tuple[Hyperpartition, HyperparameterSpec]]:
    """Resolve a range delta to concrete (hyperpartition, spec) pairs."""
    if ":" in delta.target:
        hp = space.hyperpartition(delta.target)
        candidates = [hp]
    else:
        space.algorithm(delta.target)  # raises unknown_target
        candidates = [hp for hp in space.hyperpartitions if hp.algorithm == delta.target]
    pairs = [(hp, t) for hp in candidates for t in hp.tunables if t.name == delta.hyperparameter]
    if not pairs:
        raise Rejection("unknown_target",
                        f"no tunable named {delta.hyperparameter} under {delta.target}",
                        {"target": delta.target, "hyperparameter": delta.hyperparameter})
    return pairs


def apply_delta(space: SearchSpace, delta: SpaceDelta) -> SearchSpace:
    """Pure: returns an updated copy. set_range clips to declared bounds;
    a range that is empty after clipping is rejected."""
    algo_enabled = dict(space.algorithm_enabled)
    hp_enabled = dict(space.hyperpartition_enabled)
    ranges = dict(space.active_range)

    if delta.kind in ("enable_algorithm", "disable_algorithm"):
        space.algorithm(delta.target)
        algo_enabled[delta.target] = delta.kind == "enable_algorithm"
    elif delta.kind in ("enable_hyperpartition", "disable_hyperpartition"):
        space.hyperpartition(delta.target)
        hp_enabled[delta.target] = delta.kind == "enable_hyperpartition"
    elif delta.kind == "set_range":
        lo, hi = delta.range
        for hp, spec in _range_targets(space, delta):
            clo, chi = max(lo, spec.lower), min(hi, spec.upper)
            if not clo < chi:
                raise Rejection("empty_range",
                                f"range [{lo}, {hi}] is empty after clipping to "
                                f"[{spec.lower}, {spec.upper}]",
                                {"target": hp.id, "hyperparameter": spec.name})
            if spec.kind == "integer" and math.ceil(clo) > math.floor(chi):
                raise Rejection("empty_range",
                                f"range [{clo}, {chi}] contains no integer",
                                {"target": hp.id, "hyperparameter": spec.name})
            ranges[(hp.id, spec.name)] = (clo, chi)
    elif delta.kind == "reset_range":
        for hp, spec in _range_targets(space, delta):
            ranges.pop((hp.id, spec.name), None)

    return SearchSpace(algorithms=space.algorithms, algorithm_enabled=algo_enabled,
                       hyperpartition_enabled=hp_enabled, active_range=ranges)


def apply_deltas(space: SearchSpace, deltas: Iterable[SpaceDelta]) -> SearchSpace:
    """All-or-none: any rejection propagates before a new space is returned."""
    for d in deltas:
        space = apply_delta(space, d)
    violations = validate_space(space)
    if violations:
        raise Rejection("invalid_space", "deltas leave the space invalid",
                        {"violations": violations})
    return space


def _sample_one(rng: np.random.Generator, spec: HyperparameterSpec,
                lo: float, hi: float) -> float | int:
    if spec.scale == "log":
        v = 10.0 ** rng.uniform(math.log10(lo), math.log10(hi))
    else:
        v = rng.uniform(lo, hi)
    if spec.kind == "integer":
        iv = int(np.rint(v))
        return int(min(max(iv, math.ceil(lo)), math.floor(hi)))
    return float(v)


def sample_uniform(hp: Hyperpartition, space: SearchSpace, seed: int) -> dict:
    """Independent uniform draws within active ranges (log10-uniform for log
    scale); integers rounded to nearest then clamped. Deterministic in seed."""
    rng = np.random.default_rng(seed)
    config = {}
    for spec in hp.tunables:
        lo, hi = space.range_of(hp.id, spec)
        config[spec.name] = _sample_one(rng, spec, lo, hi)
    return config


def contains(hp: Hyperpartition, space: SearchSpace, config: dict) -> bool:
    """True iff every tunable's value lies within its active range (inclusive)."""
    expected = {t.name for t in hp.tunables}
    if set(config) != expected:
        raise Rejection("config_mismatch",
                        f"config names {sorted(config)} do not match tunables "
                        f"{sorted(expected)}", {"hyperpartition": hp.id})
    for spec in hp.tunables:
        lo, hi = space.range_of(hp.id, spec)
        if not (lo <= config[spec.name] <= hi):
            return False
    return True


def default_space() -> SearchSpace:
    """Built-in registry: 6 desk-scale classifiers, 14 hyperpartitions."""
    return SearchSpace.fresh([
        AlgorithmSpec(
            name="KNN",
            categoricals=(CategoricalSpec("weights", ("uniform", "distance")),
                          CategoricalSpec("metric", ("euclidean", "manhattan"))),
            numerics=(HyperparameterSpec("n_neighbors", "integer", 1, 30),),
        ),
        AlgorithmSpec(
            name="DecisionTree",
            categoricals=(CategoricalSpec("criterion", ("gini", "entropy")),),
            numerics=(HyperparameterSpec("max_depth", "integer", 1, 20),
                      HyperparameterSpec("min_samples_split", "integer", 2, 20)),
        ),
        AlgorithmSpec(
            name="RandomForest",
            categoricals=(CategoricalSpec("criterion", ("gini", "entropy")),),
            numerics=(HyperparameterSpec("n_trees", "integer", 5, 100),
                      HyperparameterSpec("max_features", "real", 0.1, 1.0),
                      HyperparameterSpec("max_depth", "integer", 1, 20)),
        ),
        AlgorithmSpec(
            name="ExtraTrees",
            categoricals=(CategoricalSpec("criterion", ("gini", "entropy")),),
            numerics=(HyperparameterSpec("n_trees", "integer", 5, 100),
                      HyperparameterSpec("max_features", "real", 0.1, 1.0),
                      HyperparameterSpec("max_depth", "integer", 1, 20)),
        ),
        AlgorithmSpec(
            name="SGDLogistic",
            categoricals=(CategoricalSpec("penalty", ("l1", "l2", "none")),),
            numerics=(HyperparameterSpec("learning_rate", "real", 1e-4, 1e-1, scale="log"),
                      HyperparameterSpec("alpha", "real", 1e-6, 1e-1, scale="log"),
                      HyperparameterSpec("epochs", "integer", 5, 100)),
        ),
        AlgorithmSpec(
            name="GaussianNB",
            numerics=(HyperparameterSpec("var_smoothing", "real", 1e-12, 1e-3, scale="log"),),
        ),
    ])


# --- JSON wire forms ---------------------------------------------------------

def space_to_json(space: SearchSpace) -> dict:
    return {
        "algorithms": [
            {
                "name": a.name,
                "categoricals": [{"name": c.name, "values": list(c.values)}
                                 for c in a.categoricals],
                "numerics": [
                    {k: v for k, v in (
                        ("name", h.name), ("kind", h.kind), ("lower", h.lower),
                        ("upper", h.upper), ("scale", h.scale),
                        ("applies_when", h.applies_when),
                    ) if v is not None}
                    for h in a.numerics
                ],
            }
            for a in space.algorithms
        ],
        "algorithm_enabled": dict(space.algorithm_enabled),
        "hyperpartition_enabled": dict(space.hyperpartition_enabled),
        "active_ranges": [
            {"hyperpartition": hp_id, "hyperparameter": name, "range": [lo, hi]}
            for (hp_id, name), (lo, hi) in sorted(space.active_range.items())
        ],
        "hyperpartitions": [
            {"id": hp.id, "algorithm": hp.algorithm, "assignment": hp.assignment,
             "tunables": [t.name for t in hp.tunables]}
            for hp in space.hyperpartitions
        ],
    }


def space_from_json(obj: dict) -> SearchSpace:
    algorithms = tuple(
        AlgorithmSpec(
            name=a["name"],
            categoricals=tuple(CategoricalSpec(c["name"], tuple(c["values"]))
                               for c in a.get("categoricals", [])),
            numerics=tuple(
                HyperparameterSpec(h["name"], h["kind"], float(h["lower"]),
                                   float(h["upper"]), h.get("scale", "linear"),
                                   h.get("applies_when"))
                for h in a.get("numerics", [])
            ),
        )
        for a in obj["algorithms"]
    )
    return SearchSpace(
        algorithms=algorithms,
        algorithm_enabled={k: bool(v) for k, v in obj["algorithm_enabled"].items()},
        hyperpartition_enabled={k: bool(v) for k, v in obj["hyperpartition_enabled"].items()},
        active_range={(r["hyperpartition"], r["hyperparameter"]):
                      (float(r["range"][0]), float(r["range"][1]))
                      for r in obj.get("active_ranges", [])},
    )


def canonical_json(payload) -> str:
    """Stable serialization used for golden files and replay comparisons."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
