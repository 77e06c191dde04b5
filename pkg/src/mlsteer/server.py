"""HTTP/JSON API: datasets, run lifecycle, control commands, incremental
trial feeds, and summaries. The CLI and the web UI are both plain clients
of this contract."""

from __future__ import annotations

import os
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import ERROR_CODES, Rejection
from .orchestrator import Budget, ControlCommand
from .service import RunManager
from .space import delta_from_json, space_to_json
from .store import DataStore
from .summarizer import (
    algorithm_summaries,
    hyperpartition_summaries,
    overview,
    scatter,
)

DATA_DIR_ENV = "MLSTEER_DATA_DIR"


def create_app(data_dir: Optional[str] = None,
               manager: Optional[RunManager] = None) -> FastAPI:
    data_dir = data_dir or os.environ.get(DATA_DIR_ENV, "./mlsteer-data")
    manager = manager or RunManager(DataStore(data_dir))

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        # graceful exit (SIGINT included): pause running runs, flush logs
        manager.shutdown()

    app = FastAPI(title="mlsteer", version="0.1.0", lifespan=lifespan)
    app.state.manager = manager

    @app.exception_handler(Rejection)
    async def rejection_handler(_request: Request, exc: Rejection):
        return JSONResponse(status_code=ERROR_CODES[exc.code],
                            content={"error": exc.to_payload()})

    # --- datasets ---------------------------------------------------------------

    @app.post("/datasets", status_code=201)
    async def add_dataset(request: Request, name: str = "dataset",
                          positive_class: Optional[str] = None):
        body = await request.body()
        return manager.store.add_dataset(body, name=name,
                                         positive_class=positive_class)

    @app.get("/datasets")
    def list_datasets():
        return manager.store.list_datasets()

    @app.get("/datasets/{dataset_id}")
    def get_dataset(dataset_id: str):
        return manager.store.get_dataset_meta(dataset_id)

    # --- runs -------------------------------------------------------------------

    @app.post("/runs", status_code=201)
    def create_run(payload: dict):
        budget_raw = payload.get("budget") or {}
        budget = Budget(max_trials=budget_raw.get("max_trials"),
                        max_wall_clock_s=budget_raw.get("max_wall_clock_s"))
        deltas = [delta_from_json(d) for d in payload.get("deltas", [])]
        knobs = {}
        for src, mapping in (("bandit", {"k": "bandit_k", "c": "bandit_c"}),
                             ("tuner", {"r_min": "r_min",
                                        "n_candidates": "n_candidates",
                                        "xi": "xi"})):
            for field, kw in mapping.items():
                if field in payload.get(src, {}):
                    knobs[kw] = payload[src][field]
        handle = manager.create_run(
            dataset_id=payload.get("dataset_id", ""),
            budget=budget,
            seed=int(payload.get("seed", 0)),
            metric=payload.get("metric", "f1_cv10"),
            algorithms=payload.get("algorithms"),
            deltas=deltas,
            **knobs)
        return handle.describe()

    @app.get("/runs")
    def list_runs():
        return manager.list_descriptors()

    @app.get("/runs/{run_id}")
    def get_run(run_id: str):
        return manager.get(run_id).describe()

    @app.post("/runs/{run_id}/commands")
    def post_command(run_id: str, payload: dict):
        handle = manager.get(run_id)
        return handle.submit(ControlCommand.from_json(payload))

    @app.get("/runs/{run_id}/trials")
    def get_trials(run_id: str, since: int = Query(default=0, ge=0)):
        trials, _space, _desc = manager.get(run_id).snapshot()
        page = [t.to_json() for t in trials if t.trial_id > since]
        return {"trials": page, "latest_trial_id": len(trials)}

    @app.get("/runs/{run_id}/summary")
    def get_summary(run_id: str):
        trials, space, desc = manager.get(run_id).snapshot()
        return {"run": desc, "overview": overview(trials, space).to_json()}

    @app.get("/runs/{run_id}/summary/algorithms")
    def get_algorithm_summaries(run_id: str):
        trials, space, _ = manager.get(run_id).snapshot()
        return [s.to_json() for s in algorithm_summaries(trials, space)]

    @app.get("/runs/{run_id}/summary/hyperpartitions")
    def get_hyperpartition_summaries(run_id: str, algorithm: str):
        trials, space, _ = manager.get(run_id).snapshot()
        return [s.to_json()
                for s in hyperpartition_summaries(trials, space, algorithm)]

    @app.get("/runs/{run_id}/summary/scatter")
    def get_scatter(run_id: str, scope: str, hyperparameter: str):
        trials, space, _ = manager.get(run_id).snapshot()
        return scatter(trials, space, scope, hyperparameter).to_json()

    @app.get("/runs/{run_id}/space")
    def get_space(run_id: str):
        _trials, space, _ = manager.get(run_id).snapshot()
        return space_to_json(space)

    @app.get("/runs/{run_id}/log")
    def get_log(run_id: str):
        manager.get(run_id)  # 404 on unknown run
        with open(manager.store.run_log_path(run_id), encoding="utf-8") as fh:
            return Response(content=fh.read(), media_type="application/x-ndjson")

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    ui_dir = os.path.join(os.path.dirname(__file__), "..", "..", "frontend", "dist")
    ui_dir = os.path.abspath(ui_dir)
    if os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
