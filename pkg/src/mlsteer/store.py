"""Filesystem-backed storage: datasets as CSV + sidecar metadata, runs as
append-only NDJSON logs under a configurable root directory."""

from __future__ import annotations

import hashlib
import json
import os
import re
from typing import Optional

from .data import Dataset, load_csv
from .errors import Rejection
from .orchestrator import utcnow

RUN_ID_PATTERN = re.compile(r"^run-(\d{4,})$")


class DataStore:
    def __init__(self, root: str):
        self.root = root
        self.datasets_dir = os.path.join(root, "datasets")
        self.runs_dir = os.path.join(root, "runs")
        os.makedirs(self.datasets_dir, exist_ok=True)
        os.makedirs(self.runs_dir, exist_ok=True)

    # --- datasets ---------------------------------------------------------------

    def add_dataset(self, csv_bytes: bytes, name: str = "dataset",
                    positive_class: Optional[str] = None) -> dict:
        """Ingest CSV bytes; content-addressed id makes re-adds idempotent."""
        dataset_id = "ds-" + hashlib.sha256(csv_bytes).hexdigest()[:10]
        ds = load_csv(csv_bytes, name=name, dataset_id=dataset_id,
                      positive_class=positive_class)
        csv_path = os.path.join(self.datasets_dir, f"{dataset_id}.csv")
        meta_path = os.path.join(self.datasets_dir, f"{dataset_id}.json")
        if not os.path.exists(csv_path):
            with open(csv_path, "wb") as fh:
                fh.write(csv_bytes)
        meta = {**ds.describe(), "created_at": utcnow()}
        with open(meta_path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2)
        return meta

    def get_dataset(self, dataset_id: str) -> Dataset:
        csv_path = os.path.join(self.datasets_dir, f"{dataset_id}.csv")
        meta_path = os.path.join(self.datasets_dir, f"{dataset_id}.json")
        if not os.path.exists(csv_path):
            raise Rejection("unknown_dataset", f"no dataset {dataset_id}",
                            {"dataset_id": dataset_id})
        with open(meta_path, encoding="utf-8") as fh:
            meta = json.load(fh)
        with open(csv_path, "rb") as fh:
            return load_csv(fh.read(), name=meta["name"], dataset_id=dataset_id,
                            positive_class=meta.get("positive_class"))

    def get_dataset_meta(self, dataset_id: str) -> dict:
        meta_path = os.path.join(self.datasets_dir, f"{dataset_id}.json")
        if not os.path.exists(meta_path):
            raise Rejection("unknown_dataset", f"no dataset {dataset_id}",
                            {"dataset_id": dataset_id})
        with open(meta_path, encoding="utf-8") as fh:
            return json.load(fh)

    def list_datasets(self) -> list[dict]:
        out = []
        for fn in sorted(os.listdir(self.datasets_dir)):
            if fn.endswith(".json"):
                with open(os.path.join(self.datasets_dir, fn),
                          encoding="utf-8") as fh:
                    out.append(json.load(fh))
        return out

    # --- runs -------------------------------------------------------------------

    def next_run_id(self) -> str:
        highest = 0
        for run_id in self.list_run_ids():
            m = RUN_ID_PATTERN.match(run_id)
            if m:
                highest = max(highest, int(m.group(1)))
        return f"run-{highest + 1:04d}"

    def run_log_path(self, run_id: str) -> str:
        return os.path.join(self.runs_dir, f"{run_id}.jsonl")

    def run_exists(self, run_id: str) -> bool:
        return os.path.exists(self.run_log_path(run_id))

    def list_run_ids(self) -> list[str]:
        return sorted(fn[:-len(".jsonl")] for fn in os.listdir(self.runs_dir)
                      if fn.endswith(".jsonl"))
