"""Synthetic dataset generators emitting the ingestion CSV format."""

from __future__ import annotations

import csv
import io

import numpy as np

from .data import Dataset, load_csv


def blobs_csv(n: int = 200, d: int = 5, separation: float = 4.0, seed: int = 0,
              negative: str = "neg", positive: str = "pos") -> bytes:
    """Two spherical Gaussian blobs, unit variance, class centers offset by
    `separation` standard deviations along every feature axis.

    Half the rows belong to each class; rows interleave so any prefix keeps
    both classes present.
    """
    rng = np.random.default_rng(seed)
    half = separation / 2.0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"f{j}" for j in range(d)] + ["label"])
    for i in range(n):
        if i % 2 == 0:
            center, label = -half, negative
        else:
            center, label = half, positive
        row = rng.normal(loc=center, scale=1.0, size=d)
        writer.writerow([f"{v:.6f}" for v in row] + [label])
    return buf.getvalue().encode("utf-8")


def blobs_dataset(n: int = 200, d: int = 5, separation: float = 4.0, seed: int = 0,
                  dataset_id: str = "blobs") -> Dataset:
    return load_csv(blobs_csv(n=n, d=d, separation=separation, seed=seed),
                    name="blobs", dataset_id=dataset_id)


def threshold_split_csv(n: int = 60, seed: int = 0) -> bytes:
    """One informative feature perfectly split by a threshold at 0, plus one
    noise feature; a depth-1 decision tree separates it exactly."""
    rng = np.random.default_rng(seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["signal", "noise", "label"])
    for i in range(n):
        if i % 2 == 0:
            x0, label = rng.uniform(-2.0, -0.5), "a"
        else:
            x0, label = rng.uniform(0.5, 2.0), "b"
        writer.writerow([f"{x0:.6f}", f"{rng.normal():.6f}", label])
    return buf.getvalue().encode("utf-8")
