"""Stratified k-fold cross validation and F1 scoring.

The cross-validated F1 is the single evaluation oracle for every trial:
binary F1 on the dataset's positive class, macro-averaged beyond two classes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .data import Dataset
from .models import TrainingError, train_predict
from .seeding import mix64


@dataclass
class FoldPlan:
    k: int  # effective fold count (may be reduced, see stratified_folds)
    assignment: list[int]  # fold index per row
    seed: int
    requested_k: int


@dataclass
class EvalResult:
    fold_scores: list[float] = field(default_factory=list)
    mean_score: Optional[float] = None
    elapsed: float = 0.0
    status: str = "ok"  # "ok" | "error"
    error: Optional[str] = None


def stratified_folds(ds: Dataset, k: int, seed: int) -> FoldPlan:
    """Per-class round-robin assignment after a seeded shuffle within each class.

    k is reduced to the smallest class size when a class cannot reach every
    fold (never below 2); the reduction is recorded in the plan.
    """
    requested = k
    y = np.asarray(ds.labels)
    class_sizes = [int(np.sum(y == c)) for c in ds.classes]
    k = max(2, min(k, min(class_sizes), ds.n // 2))
    rng = np.random.default_rng(seed)
    assignment = np.zeros(ds.n, dtype=np.int64)
    for c in ds.classes:
        members = np.flatnonzero(y == c)
        members = members[rng.permutation(len(members))]
        for slot, row in enumerate(members):
            assignment[row] = slot % k
    return FoldPlan(k=k, assignment=assignment.tolist(), seed=seed, requested_k=requested)


def f1_score(y_true: Sequence[str], y_pred: Sequence[str], positive: str) -> float:
    """Binary F1 for the positive class; 0.0 when there are no true positives.

    With more than two distinct true classes, returns the macro average of
    per-class F1 (each class treated as positive in turn).
    """
    if len(y_true) != len(y_pred) or len(y_true) == 0:
        raise ValueError("y_true and y_pred must be equal-length and non-empty")
    classes = sorted(set(y_true))
    if len(classes) > 2:
        return float(np.mean([_binary_f1(y_true, y_pred, c) for c in classes]))
    return _binary_f1(y_true, y_pred, positive)


def _binary_f1(y_true: Sequence[str], y_pred: Sequence[str], positive: str) -> float:
    tp = sum(1 for t, p in zip(y_true, y_pred) if t == positive and p == positive)
    fp = sum(1 for t, p in zip(y_true, y_pred) if t != positive and p == positive)
    fn = sum(1 for t, p in zip(y_true, y_pred) if t == positive and p != positive)
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2.0 * precision * recall / (precision + recall)


def cross_val_f1(ds: Dataset, algorithm: str, assignment: dict, config: dict,
                 k: int = 10, seed: int = 0) -> EvalResult:
    """Train on each fold's complement, score F1 on the fold, average.

    An error in any fold marks the whole trial as an error (no partial means).
    """
    started = time.perf_counter()
    plan = stratified_folds(ds, k, seed)
    folds = np.asarray(plan.assignment)
    labels = np.asarray(ds.labels)
    positive = ds.positive_class if ds.positive_class is not None else max(ds.classes)
    scores: list[float] = []
    for fold in range(plan.k):
        test_mask = folds == fold
        train_idx = np.flatnonzero(~test_mask)
        test_idx = np.flatnonzero(test_mask)
        try:
            pred = train_predict(
                algorithm, assignment, config,
                ds.features[train_idx], labels[train_idx].tolist(),
                ds.features[test_idx], tuple(ds.classes),
                seed=mix64(seed, fold),
            )
        except TrainingError as e:
            return EvalResult(status="error", error=f"fold {fold}: {e}",
                              elapsed=time.perf_counter() - started)
        scores.append(f1_score(labels[test_idx].tolist(), pred, positive))
    return EvalResult(fold_scores=scores, mean_score=float(np.mean(scores)),
                      elapsed=time.perf_counter() - started, status="ok")
