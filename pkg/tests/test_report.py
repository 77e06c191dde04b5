import os

from mlsteer.report import (
    render_algorithms,
    render_overview,
    render_progression,
    render_scatter,
)


def test_overview_renders_even_with_zero_trials(tmp_path):
    overview = {"best_score": None, "n_trials": 0, "n_ok": 0, "n_error": 0,
                "algorithm_coverage": 0.0, "hyperpartition_coverage": 0.0,
                "histogram": [0] * 10, "top_models": []}
    path = render_overview(overview, str(tmp_path / "ov.png"))
    assert os.path.getsize(path) > 0


def test_algorithms_figure(tmp_path):
    summaries = [
        {"name": "KNN", "enabled": True, "best_score": 0.91, "n_trials": 9,
         "n_ok": 9, "n_error": 0, "histogram": [0, 0, 0, 0, 0, 1, 2, 3, 2, 1],
         "hyperpartition_coverage": 1.0},
        {"name": "GaussianNB", "enabled": False, "best_score": None,
         "n_trials": 0, "n_ok": 0, "n_error": 0, "histogram": [0] * 10,
         "hyperpartition_coverage": 0.0},
    ]
    path = render_algorithms(summaries, str(tmp_path / "algos.png"))
    assert os.path.getsize(path) > 0


def test_scatter_log_scale(tmp_path):
    series = {"hyperparameter": "alpha", "scope": "SGDLogistic",
              "kind": "real", "scale": "log", "lower": 1e-6, "upper": 1e-1,
              "points": [{"value": 1e-3, "score": 0.8, "trial_id": 1},
                         {"value": 1e-5, "score": 0.6, "trial_id": 2}],
              "value_histogram": [1] + [0] * 18 + [1]}
    path = render_scatter(series, str(tmp_path / "scatter.png"))
    assert os.path.getsize(path) > 0


def test_progression_curves(tmp_path):
    curves = [("run-0001", [0.1, 0.5, 0.5, 0.8]),
              ("run-0002", [0.4, 0.4, 0.9, 0.9])]
    path = render_progression(curves, str(tmp_path / "prog.png"),
                              thresholds=[0.5, 0.9])
    assert os.path.getsize(path) > 0
