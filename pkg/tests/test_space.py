import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsteer.errors import Rejection
from mlsteer.space import (
    AlgorithmSpec,
    CategoricalSpec,
    HyperparameterSpec,
    SearchSpace,
    SpaceDelta,
    apply_delta,
    apply_deltas,
    contains,
    default_space,
    delta_from_json,
    delta_to_json,
    enumerate_hyperpartitions,
    sample_uniform,
    space_from_json,
    space_to_json,
    validate_space,
)


def two_cat_algorithm():
    return AlgorithmSpec(
        name="Demo",
        categoricals=(CategoricalSpec("weights", ("uniform", "distance")),
                      CategoricalSpec("metric", ("euclidean", "manhattan"))),
        numerics=(HyperparameterSpec("n", "integer", 1, 30),),
    )


class TestEnumerate:
    def test_cartesian_product_count(self):
        hps = enumerate_hyperpartitions(two_cat_algorithm())
        assert len(hps) == 4

    def test_last_categorical_varies_fastest(self):
        hps = enumerate_hyperpartitions(two_cat_algorithm())
        assert [hp.assignment["metric"] for hp in hps[:2]] == ["euclidean", "manhattan"]
        assert [hp.assignment["weights"] for hp in hps[:2]] == ["uniform", "uniform"]

    def test_no_categoricals_yields_single_empty_assignment(self):
        algo = AlgorithmSpec(name="Plain",
                             numerics=(HyperparameterSpec("x", "real", 0.0, 1.0),))
        hps = enumerate_hyperpartitions(algo)
        assert len(hps) == 1
        assert hps[0].assignment == {}
        assert hps[0].id == "Plain:"

    def test_applies_when_filters_tunables(self):
        # oracle: filter the full product by the predicate per assignment
        algo = AlgorithmSpec(
            name="Kern",
            categoricals=(CategoricalSpec("kernel", ("a", "b", "c")),),
            numerics=(HyperparameterSpec("degree", "integer", 1, 5,
                                         applies_when={"kernel": "c"}),),
        )
        hps = enumerate_hyperpartitions(algo)
        assert len(hps) == 3
        expected = [(hp.assignment["kernel"] == "c") for hp in hps]
        actual = [any(t.name == "degree" for t in hp.tunables) for hp in hps]
        assert actual == expected

    def test_ids_are_canonical_and_injective(self):
        space = default_space()
        ids = [hp.id for hp in space.hyperpartitions]
        assert len(set(ids)) == len(ids) == 14
        assert "KNN:weights=uniform,metric=euclidean" in ids
        assert "GaussianNB:" in ids

    def test_product_size_property(self):
        for algo in default_space().algorithms:
            expected = math.prod(len(c.values) for c in algo.categoricals)
            assert len(enumerate_hyperpartitions(algo)) == expected


class TestValidate:
    def test_default_space_ok(self):
        assert validate_space(default_space()) == []

    def test_inverted_range_reported(self):
        space = default_space()
        hp = space.hyperpartitions[0]
        bad = SearchSpace(space.algorithms, dict(space.algorithm_enabled),
                          dict(space.hyperpartition_enabled),
                          {(hp.id, "n_neighbors"): (0.9, 0.2)})
        codes = [v["code"] for v in validate_space(bad)]
        assert "empty_range" in codes

    def test_all_algorithms_disabled(self):
        space = default_space()
        bad = SearchSpace(space.algorithms,
                          {a.name: False for a in space.algorithms},
                          dict(space.hyperpartition_enabled), {})
        codes = [v["code"] for v in validate_space(bad)]
        assert codes == ["no_enabled_hyperpartition"]

    def test_unknown_flag_target(self):
        space = default_space()
        bad = SearchSpace(space.algorithms,
                          {**space.algorithm_enabled, "Nope": True},
                          dict(space.hyperpartition_enabled), {})
        codes = [v["code"] for v in validate_space(bad)]
        assert "unknown_target" in codes


class TestApplyDelta:
    def test_set_range_paper_scenario(self):
        # restricting max_features to [0.7, 1.0] on its declared [0.1, 1.0]
        space = default_space()
        out = apply_delta(space, SpaceDelta("set_range", "ExtraTrees",
                                            hyperparameter="max_features",
                                            range=(0.7, 1.0)))
        for hp in out.hyperpartitions:
            if hp.algorithm == "ExtraTrees":
                spec = next(t for t in hp.tunables if t.name == "max_features")
                assert out.range_of(hp.id, spec) == (0.7, 1.0)
        # purity: the input space is untouched
        assert space.active_range == {}

    def test_set_range_clips_to_declared_bounds(self):
        # interval-intersection oracle: [0.05, 0.7] ∩ [0.1, 1.0] = [0.1, 0.7]
        space = default_space()
        out = apply_delta(space, SpaceDelta("set_range", "RandomForest",
                                            hyperparameter="max_features",
                                            range=(0.05, 0.7)))
        hp = next(h for h in out.hyperpartitions if h.algorithm == "RandomForest")
        spec = next(t for t in hp.tunables if t.name == "max_features")
        assert out.range_of(hp.id, spec) == (0.1, 0.7)

    def test_empty_after_clipping_rejected(self):
        space = default_space()
        with pytest.raises(Rejection) as e:
            apply_delta(space, SpaceDelta("set_range", "RandomForest",
                                          hyperparameter="max_features",
                                          range=(1.5, 2.0)))
        assert e.value.code == "empty_range"

    def test_integer_range_with_no_integer_rejected(self):
        space = default_space()
        with pytest.raises(Rejection) as e:
            apply_delta(space, SpaceDelta("set_range", "KNN",
                                          hyperparameter="n_neighbors",
                                          range=(2.2, 2.8)))
        assert e.value.code == "empty_range"

    def test_disable_enable_round_trip(self):
        space = default_space()
        down = apply_delta(space, SpaceDelta("disable_algorithm", "KNN"))
        assert not down.effectively_enabled("KNN:weights=uniform,metric=euclidean")
        up = apply_delta(down, SpaceDelta("enable_algorithm", "KNN"))
        assert up.algorithm_enabled == space.algorithm_enabled
        assert up.hyperpartition_enabled == space.hyperpartition_enabled
        assert up.active_range == space.active_range

    def test_unknown_target_rejected(self):
        with pytest.raises(Rejection) as e:
            apply_delta(default_space(), SpaceDelta("disable_algorithm", "SVM"))
        assert e.value.code == "unknown_target"

    def test_reset_range_restores_full(self):
        space = default_space()
        mid = apply_delta(space, SpaceDelta("set_range", "KNN",
                                            hyperparameter="n_neighbors", range=(5, 10)))
        out = apply_delta(mid, SpaceDelta("reset_range", "KNN",
                                          hyperparameter="n_neighbors"))
        assert out.active_range == {}

    def test_idempotent_enable_disable_and_set_range(self):
        space = default_space()
        d1 = SpaceDelta("disable_algorithm", "KNN")
        once = apply_delta(space, d1)
        twice = apply_delta(once, d1)
        assert once.algorithm_enabled == twice.algorithm_enabled
        d2 = SpaceDelta("set_range", "KNN", hyperparameter="n_neighbors", range=(3, 9))
        r_once = apply_delta(space, d2)
        r_twice = apply_delta(r_once, d2)
        assert r_once.active_range == r_twice.active_range

    def test_apply_deltas_all_or_none(self):
        space = default_space()
        deltas = [SpaceDelta("disable_algorithm", a.name) for a in space.algorithms]
        with pytest.raises(Rejection) as e:
            apply_deltas(space, deltas)
        assert e.value.code == "invalid_space"

    def test_delta_on_single_hyperpartition(self):
        space = default_space()
        target = "KNN:weights=uniform,metric=euclidean"
        out = apply_delta(space, SpaceDelta("set_range", target,
                                            hyperparameter="n_neighbors", range=(2, 6)))
        assert out.active_range == {(target, "n_neighbors"): (2.0, 6.0)}


class TestSampling:
    def test_no_tunables_gives_empty_config(self):
        algo = AlgorithmSpec(name="Fixed",
                             categoricals=(CategoricalSpec("c", ("x", "y")),))
        space = SearchSpace.fresh([algo])
        assert sample_uniform(space.hyperpartitions[0], space, seed=3) == {}

    def test_integer_sample_in_range(self):
        space = default_space()
        hp = space.hyperpartition("KNN:weights=uniform,metric=euclidean")
        for seed in range(50):
            cfg = sample_uniform(hp, space, seed)
            assert isinstance(cfg["n_neighbors"], int)
            assert 1 <= cfg["n_neighbors"] <= 30

    def test_log_scale_is_log10_uniform(self):
        # Monte-Carlo oracle: for log-uniform over [1e-4, 1e-1] the decade
        # [1e-4, 1e-3] holds 1/3 of the mass.
        spec = HyperparameterSpec("lr", "real", 1e-4, 1e-1, scale="log")
        algo = AlgorithmSpec(name="L", numerics=(spec,))
        space = SearchSpace.fresh([algo])
        hp = space.hyperpartitions[0]
        rng = np.random.default_rng(0)
        n = 10_000
        vals = [sample_uniform(hp, space, int(s))["lr"]
                for s in rng.integers(0, 2**31, size=n)]
        frac = sum(1 for v in vals if v <= 1e-3) / n
        assert abs(frac - 1 / 3) < 0.02

    def test_sample_respects_restricted_range(self):
        space = apply_delta(default_space(),
                            SpaceDelta("set_range", "KNN",
                                       hyperparameter="n_neighbors", range=(10, 20)))
        hp = space.hyperpartition("KNN:weights=uniform,metric=euclidean")
        for seed in range(50):
            assert 10 <= sample_uniform(hp, space, seed)["n_neighbors"] <= 20

    def test_deterministic_given_seed(self):
        space = default_space()
        hp = space.hyperpartition("SGDLogistic:penalty=l1")
        assert sample_uniform(hp, space, 42) == sample_uniform(hp, space, 42)

    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_sample_always_contained(self, seed):
        space = default_space()
        for hp in space.hyperpartitions:
            cfg = sample_uniform(hp, space, seed)
            assert contains(hp, space, cfg)


class TestContains:
    def test_boundary_values_inclusive(self):
        space = default_space()
        hp = space.hyperpartition("KNN:weights=uniform,metric=euclidean")
        assert contains(hp, space, {"n_neighbors": 1})
        assert contains(hp, space, {"n_neighbors": 30})

    def test_value_outside_restriction_false(self):
        space = apply_delta(default_space(),
                            SpaceDelta("set_range", "ExtraTrees",
                                       hyperparameter="max_features", range=(0.7, 1.0)))
        hp = next(h for h in space.hyperpartitions if h.algorithm == "ExtraTrees")
        cfg = {"n_trees": 10, "max_features": 0.5, "max_depth": 5}
        assert not contains(hp, space, cfg)

    def test_interior_values_true(self):
        space = default_space()
        hp = next(h for h in space.hyperpartitions if h.algorithm == "RandomForest")
        assert contains(hp, space, {"n_trees": 50, "max_features": 0.5, "max_depth": 10})

    def test_mismatched_names_rejected(self):
        space = default_space()
        hp = space.hyperpartition("KNN:weights=uniform,metric=euclidean")
        with pytest.raises(Rejection) as e:
            contains(hp, space, {"wrong": 3})
        assert e.value.code == "config_mismatch"


class TestWireForms:
    def test_space_json_round_trip(self):
        space = apply_delta(default_space(),
                            SpaceDelta("set_range", "KNN",
                                       hyperparameter="n_neighbors", range=(4, 12)))
        back = space_from_json(space_to_json(space))
        assert back.algorithm_enabled == space.algorithm_enabled
        assert back.hyperpartition_enabled == space.hyperpartition_enabled
        assert back.active_range == space.active_range
        assert [hp.id for hp in back.hyperpartitions] == [hp.id for hp in space.hyperpartitions]

    def test_delta_json_round_trip(self):
        d = SpaceDelta("set_range", "ExtraTrees", hyperparameter="max_features",
                       range=(0.7, 1.0))
        assert delta_from_json(delta_to_json(d)) == d
        d2 = SpaceDelta("disable_hyperpartition", "KNN:weights=uniform,metric=euclidean")
        assert delta_from_json(delta_to_json(d2)) == d2

    def test_malformed_delta_rejected(self):
        with pytest.raises(Rejection) as e:
            delta_from_json({"kind": "set_range", "algorithm": "KNN"})
        assert e.value.code == "invalid_delta"
        with pytest.raises(Rejection):
            delta_from_json({"kind": "warp", "algorithm": "KNN"})
        with pytest.raises(Rejection):
            delta_from_json({"kind": "enable_algorithm"})


class TestSpecInvariants:
    def test_bad_bounds_raise(self):
        with pytest.raises(ValueError):
            HyperparameterSpec("x", "real", 1.0, 1.0)
        with pytest.raises(ValueError):
            HyperparameterSpec("x", "real", -1.0, 1.0, scale="log")
        with pytest.raises(ValueError):
            HyperparameterSpec("x", "integer", 1.5, 3)
        with pytest.raises(ValueError):
            HyperparameterSpec("x", "integer", 3, 3.5)

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            AlgorithmSpec(name="Bad",
                          categoricals=(CategoricalSpec("a", ("x",)),),
                          numerics=(HyperparameterSpec("a", "real", 0, 1),))

    def test_applies_when_must_reference_declared(self):
        with pytest.raises(ValueError):
            AlgorithmSpec(name="Bad",
                          categoricals=(CategoricalSpec("k", ("a", "b")),),
                          numerics=(HyperparameterSpec("d", "integer", 1, 5,
                                                       applies_when={"k": "z"}),))
