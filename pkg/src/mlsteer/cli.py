"""Operator command line.

Every verb is a thin client of the HTTP API: with --server it talks to a
remote process, otherwise it hosts the app in-process over --data-dir and
speaks to it through the same routes. Exit codes: 0 success, 1 runtime
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Optional

import httpx

from .errors import Rejection
from .server import DATA_DIR_ENV, create_app

SERVER_ENV = "MLSTEER_SERVER"
SPARK_BLOCKS = "▁▂▃▄▅▆▇█"


class CliError(Exception):
    pass


class ApiClient:
    """httpx against a remote server, or an in-process ASGI app — one contract."""

    def __init__(self, server: Optional[str], data_dir: str):
        self._manager = None
        if server:
            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings
            with warnings.catch_warnings():
                # starlette nags about its own httpx pin; not actionable here
                warnings.simplefilter("ignore")
                from starlette.testclient import TestClient
            app = create_app(data_dir)
            self._manager = app.state.manager
            self._client = TestClient(app)

    def request(self, method: str, path: str, **kwargs):
        response = self._client.request(method, path, **kwargs)
        if response.status_code >= 400:
            try:
                err = response.json()["error"]
                raise CliError(f"{err['code']}: {err['message']}")
            except (KeyError, ValueError):
                raise CliError(f"HTTP {response.status_code}: {response.text}")
        return response

    def get(self, path: str, **kwargs):
        return self.request("GET", path, **kwargs).json()

    def post(self, path: str, **kwargs):
        return self.request("POST", path, **kwargs).json()

    def close(self) -> None:
        # in-process runs must land on a record boundary before we exit
        if self._manager is not None:
            self._manager.shutdown()
        self._client.close()


def _emit(payload, as_json: bool, plain: str) -> None:
    print(json.dumps(payload, indent=2) if as_json else plain)


def _wait_terminal(client: ApiClient, run_id: str, poll_s: float = 0.2) -> dict:
    while True:
        desc = client.get(f"/runs/{run_id}")
        if desc["status"] in ("finished", "failed", "paused"):
            return desc
        time.sleep(poll_s)


# --- dataset ---------------------------------------------------------------------

def cmd_dataset_add(client: ApiClient, args) -> int:
    with open(args.csv, "rb") as fh:
        body = fh.read()
    params = {"name": args.name or os.path.splitext(os.path.basename(args.csv))[0]}
    if args.positive_class:
        params["positive_class"] = args.positive_class
    meta = client.post("/datasets", content=body, params=params)
    _emit(meta, args.json, f"{meta['id']}  n={meta['n']} d={meta['d']} "
                           f"classes={','.join(meta['classes'])}")
    return 0


def cmd_dataset_ls(client: ApiClient, args) -> int:
    datasets = client.get("/datasets")
    if args.json:
        print(json.dumps(datasets, indent=2))
        return 0
    for meta in datasets:
        print(f"{meta['id']}  {meta['name']}  n={meta['n']} d={meta['d']}")
    return 0


# --- run -------------------------------------------------------------------------

def _create_and_start(client: ApiClient, args, seed: int) -> dict:
    payload = {
        "dataset_id": args.dataset,
        "budget": {"max_trials": args.budget_trials,
                   "max_wall_clock_s": args.budget_seconds},
        "seed": seed,
        "metric": args.metric,
    }
    if args.algorithms:
        payload["algorithms"] = [a.strip() for a in args.algorithms.split(",")]
    desc = client.post("/runs", json=payload)
    return client.post(f"/runs/{desc['id']}/commands", json={"kind": "start"})


def cmd_run_start(client: ApiClient, args) -> int:
    if args.budget_trials is None and args.budget_seconds is None:
        args.budget_trials = 100
    desc = _create_and_start(client, args, args.seed)
    run_id = desc["id"]
    if args.no_wait:
        _emit(desc, args.json, run_id)
        return 0
    desc = _wait_terminal(client, run_id)
    best = desc.get("best_score")
    line = f"{run_id}  {desc['status']}  trials={desc['n_trials']}"
    if best is not None:
        line += f"  best={best:.4f}"
    _emit(desc, args.json, line)
    return 0


def _sparkline(bins: list[int]) -> str:
    top = max(bins) or 1
    return "".join(SPARK_BLOCKS[min(int(b / top * (len(SPARK_BLOCKS) - 1)),
                                    len(SPARK_BLOCKS) - 1)] if b else "·"
                   for b in bins)


def _overview_lines(summary: dict) -> list[str]:
    run, ov = summary["run"], summary["overview"]
    best = f"{ov['best_score']:.4f}" if ov["best_score"] is not None else "-"
    lines = [
        f"run {run['id']}  [{run['status']}]  trials={ov['n_trials']} "
        f"(ok={ov['n_ok']} err={ov['n_error']})  best={best}",
        f"coverage: algorithms {ov['algorithm_coverage']:.0%}  "
        f"hyperpartitions {ov['hyperpartition_coverage']:.0%}",
        f"scores    {_sparkline(ov['histogram'])}  (0 → 1)",
    ]
    for m in ov["top_models"][:5]:
        lines.append(f"  #{m['rank']}  {m['score']:.4f}  trial {m['trial_id']:>4}  "
                     f"{m['hyperpartition_id']}")
    return lines


def cmd_run_watch(client: ApiClient, args) -> int:
    while True:
        summary = client.get(f"/runs/{args.run_id}/summary")
        print("\n".join(_overview_lines(summary)), flush=True)
        if summary["run"]["status"] in ("finished", "failed"):
            return 0
        time.sleep(args.interval)
        print()


def cmd_run_verb(client: ApiClient, args) -> int:
    desc = client.post(f"/runs/{args.run_id}/commands", json={"kind": args.verb})
    _emit(desc, args.json, f"{args.run_id}  {desc['status']}")
    return 0


def cmd_run_reconfigure(client: ApiClient, args) -> int:
    deltas = [json.loads(d) for d in args.delta]
    payload: dict = {"kind": "reconfigure", "deltas": deltas}
    if args.add_trials:
        payload["add_trials"] = args.add_trials
    if args.add_seconds:
        payload["add_wall_clock_s"] = args.add_seconds
    desc = client.post(f"/runs/{args.run_id}/commands", json=payload)
    _emit(desc, args.json, f"{args.run_id}  {desc['status']}  reconfigured")
    return 0


def cmd_run_ls(client: ApiClient, args) -> int:
    runs = client.get("/runs")
    if args.json:
        print(json.dumps(runs, indent=2))
        return 0
    for desc in runs:
        best = desc.get("best_score")
        line = f"{desc['id']}  {desc['status']:>9}  trials={desc['n_trials']:>4}"
        if best is not None:
            line += f"  best={best:.4f}"
        print(line)
    return 0


def _trials_csv(trials: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial_id", "algorithm", "hyperpartition_id", "status",
                     "score", "elapsed_s", "created_at", "config"])
    for t in trials:
        writer.writerow([t["trial_id"], t["algorithm"], t["hyperpartition_id"],
                         t["status"], "" if t["score"] is None else t["score"],
                         t["elapsed_s"], t["created_at"],
                         json.dumps(t["config"], sort_keys=True)])
    return buf.getvalue()


def cmd_run_export(client: ApiClient, args) -> int:
    if args.format == "jsonl":
        text = client.request("GET", f"/runs/{args.run_id}/log").text
    else:
        trials = client.get(f"/runs/{args.run_id}/trials")["trials"]
        text = _trials_csv(trials)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(args.out)
    else:
        sys.stdout.write(text)
    return 0


def cmd_run_report(client: ApiClient, args) -> int:
    from .report import write_report
    summary = client.get(f"/runs/{args.run_id}/summary")
    algorithms = client.get(f"/runs/{args.run_id}/summary/algorithms")
    trials = client.get(f"/runs/{args.run_id}/trials")["trials"]
    scope = args.algorithm
    if scope is None:
        tried = [a for a in algorithms if a["best_score"] is not None]
        scope = tried[0]["name"] if tried else algorithms[0]["name"]
    hyperpartitions = client.get(f"/runs/{args.run_id}/summary/hyperpartitions",
                                 params={"algorithm": scope})
    space = client.get(f"/runs/{args.run_id}/space")
    tunables = next(({"numerics": a["numerics"]} for a in space["algorithms"]
                     if a["name"] == scope), {"numerics": []})
    scatters = []
    for spec in tunables["numerics"]:
        scatters.append(client.get(
            f"/runs/{args.run_id}/summary/scatter",
            params={"scope": scope, "hyperparameter": spec["name"]}))
    written = write_report(args.out_dir, summary["overview"], algorithms,
                           hyperpartitions, scatters, _trials_csv(trials))
    for path in written:
        print(path)
    return 0


# --- experiment repeat -------------------------------------------------------------

def cmd_experiment_repeat(client: ApiClient, args) -> int:
    thresholds = [float(t) for t in args.thresholds.split(",")]
    seeds = list(range(args.seed_base, args.seed_base + args.n))
    results: list[dict] = []
    batch = max(1, args.parallel)
    for i in range(0, len(seeds), batch):
        # each wave runs concurrently on the server; waiting drains the wave
        wave = [_create_and_start(client, args, seed)
                for seed in seeds[i:i + batch]]
        results.extend(_wait_terminal(client, desc["id"]) for desc in wave)

    bests = []
    curves = []
    for desc in results:
        trials = client.get(f"/runs/{desc['id']}/trials")["trials"]
        best_so_far, best = [], 0.0
        for t in trials:
            if t["status"] == "ok" and t["score"] is not None:
                best = max(best, t["score"])
            best_so_far.append(best)
        bests.append(best)
        curves.append((desc["id"], best_so_far))

    counts = {t: sum(1 for b in bests if b > t) for t in thresholds}
    if args.json:
        print(json.dumps({"runs": [d["id"] for d in results], "best_scores": bests,
                          "thresholds": {str(t): c for t, c in counts.items()}},
                         indent=2))
    else:
        print(f"{args.n} runs, seeds {seeds[0]}..{seeds[-1]}")
        print("best scores: " + " ".join(f"{b:.4f}" for b in sorted(bests,
                                                                    reverse=True)))
        for t in thresholds:
            print(f"  {counts[t]} of {args.n} over {t:g}")
    if args.out_dir:
        from .report import render_progression
        os.makedirs(args.out_dir, exist_ok=True)
        with open(os.path.join(args.out_dir, "best_scores.csv"), "w",
                  encoding="utf-8") as fh:
            fh.write("run_id,seed,best_score\n")
            for desc, seed, best in zip(results, seeds, bests):
                fh.write(f"{desc['id']},{seed},{best}\n")
        with open(os.path.join(args.out_dir, "thresholds.csv"), "w",
                  encoding="utf-8") as fh:
            fh.write("threshold,runs_over\n")
            for t in thresholds:
                fh.write(f"{t},{counts[t]}\n")
        render_progression(curves, os.path.join(args.out_dir, "progression.png"),
                           thresholds=thresholds)
        print(args.out_dir)
    return 0


# --- serve -------------------------------------------------------------------------

def cmd_serve(args) -> int:
    import uvicorn

    app = create_app(args.data_dir)
    host, _, port = args.listen.rpartition(":")
    try:
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    except SystemExit as e:  # uvicorn exits nonzero on bind failure
        return int(e.code or 1)
    except OSError as e:
        print(f"cannot listen on {args.listen}: {e}", file=sys.stderr)
        return 1
    return 0


# --- wiring ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlsteer",
                                     description="steerable AutoML search")
    parser.add_argument("--data-dir", default=os.environ.get(DATA_DIR_ENV,
                                                             "./mlsteer-data"))
    parser.add_argument("--server", default=os.environ.get(SERVER_ENV),
                        help="base URL of a running API server; default runs "
                             "in-process against --data-dir")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_dataset = sub.add_parser("dataset", help="manage datasets")
    dsub = p_dataset.add_subparsers(dest="subcommand", required=True)
    p_add = dsub.add_parser("add", help="ingest a CSV dataset")
    p_add.add_argument("csv")
    p_add.add_argument("--name")
    p_add.add_argument("--positive-class")
    p_add.set_defaults(func=cmd_dataset_add)
    p_ls = dsub.add_parser("ls", help="list datasets")
    p_ls.set_defaults(func=cmd_dataset_ls)

    p_run = sub.add_parser("run", help="run lifecycle")
    rsub = p_run.add_subparsers(dest="subcommand", required=True)

    p_start = rsub.add_parser("start", help="create and start a run")
    p_start.add_argument("--dataset", required=True)
    p_start.add_argument("--budget-trials", type=int)
    p_start.add_argument("--budget-seconds", type=float)
    p_start.add_argument("--seed", type=int, default=0)
    p_start.add_argument("--algorithms", help="comma-separated allow-list; "
                                              "everything else is disabled")
    p_start.add_argument("--metric", default="f1_cv10")
    p_start.add_argument("--no-wait", action="store_true",
                         help="print the run id and return immediately")
    p_start.set_defaults(func=cmd_run_start)

    p_watch = rsub.add_parser("watch", help="live textual overview")
    p_watch.add_argument("run_id")
    p_watch.add_argument("--interval", type=float, default=1.0)
    p_watch.set_defaults(func=cmd_run_watch)

    for verb in ("pause", "resume", "stop"):
        p_verb = rsub.add_parser(verb)
        p_verb.add_argument("run_id")
        p_verb.set_defaults(func=cmd_run_verb, verb=verb)

    p_rec = rsub.add_parser("reconfigure", help="apply space deltas")
    p_rec.add_argument("run_id")
    p_rec.add_argument("--delta", action="append", required=True,
                       help="SpaceDelta JSON (repeatable)")
    p_rec.add_argument("--add-trials", type=int)
    p_rec.add_argument("--add-seconds", type=float)
    p_rec.set_defaults(func=cmd_run_reconfigure)

    p_exp = rsub.add_parser("export", help="dump the trial log")
    p_exp.add_argument("run_id")
    p_exp.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p_exp.add_argument("--out")
    p_exp.set_defaults(func=cmd_run_export)

    p_rep = rsub.add_parser("report", help="figures + CSV export of a run")
    p_rep.add_argument("run_id")
    p_rep.add_argument("--out-dir", required=True)
    p_rep.add_argument("--algorithm", help="profile this algorithm "
                                           "(default: current best)")
    p_rep.set_defaults(func=cmd_run_report)

    p_rls = rsub.add_parser("ls", help="list runs")
    p_rls.set_defaults(func=cmd_run_ls)

    p_repeat = sub.add_parser("experiment", help="multi-run harness")
    esub = p_repeat.add_subparsers(dest="subcommand", required=True)
    p_r = esub.add_parser("repeat", help="N independent runs, threshold table")
    p_r.add_argument("--n", type=int, required=True)
    p_r.add_argument("--dataset", required=True)
    p_r.add_argument("--budget-trials", type=int, default=100)
    p_r.add_argument("--budget-seconds", type=float)
    p_r.add_argument("--seed-base", type=int, default=0)
    p_r.add_argument("--metric", default="f1_cv10")
    p_r.add_argument("--algorithms")
    p_r.add_argument("--parallel", type=int, default=1)
    p_r.add_argument("--thresholds", default="0.80,0.85,0.90,0.95")
    p_r.add_argument("--out-dir")
    p_r.set_defaults(func=cmd_experiment_repeat)

    p_serve = sub.add_parser("serve", help="start the API server")
    p_serve.add_argument("--listen",
                         default=os.environ.get("MLSTEER_LISTEN",
                                                "127.0.0.1:8642"))
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    client = ApiClient(args.server, args.data_dir)
    try:
        return args.func(client, args)
    except (CliError, Rejection) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 1
    finally:
        client.close()


if __name__ == "__main__":
    sys.exit(main())
