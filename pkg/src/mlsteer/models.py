"""Built-in classifiers, implemented from scratch on numpy.

All models work on class indices into the dataset's `classes` tuple, so
argmax tie-breaking is always "smallest class index". Every model is
seed-deterministic: identical inputs produce bit-identical predictions.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import Rejection
from .seeding import mix64


class TrainingError(RuntimeError):
    """Numeric failure during fit/predict; surfaces as an error-status trial."""


def _standardize(train: np.ndarray, test: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # statistics from the training slice only; constant features left unscaled
    mean = train.mean(axis=0)
    std = train.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    return (train - mean) / std, (test - mean) / std


# --- k-nearest neighbors ------------------------------------------------------

class KNN:
    def __init__(self, n_neighbors: int, weights: str, metric: str):
        self.n_neighbors = int(n_neighbors)
        self.weights = weights
        self.metric = metric

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int):
        self._X = X
        self._y = y
        self._n_classes = n_classes
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        k = min(self.n_neighbors, len(self._X))
        if self.metric == "manhattan":
            dists = np.abs(X[:, None, :] - self._X[None, :, :]).sum(axis=2)
        else:
            diff = X[:, None, :] - self._X[None, :, :]
            dists = np.sqrt((diff * diff).sum(axis=2))
        out = np.empty(len(X), dtype=np.int64)
        for i in range(len(X)):
            # stable sort: distance ties resolved by lowest training row index
            order = np.argsort(dists[i], kind="stable")[:k]
            if self.weights == "distance":
                w = 1.0 / np.maximum(dists[i][order], 1e-12)
            else:
                w = np.ones(k)
            votes = np.bincount(self._y[order], weights=w, minlength=self._n_classes)
            out[i] = int(np.argmax(votes))
        return out


# --- decision trees (shared by CART, random forest, extra-trees) --------------

class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "counts")

    def __init__(self, counts):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.counts = counts


def _impurity_rows(counts: np.ndarray, sizes: np.ndarray, criterion: str) -> np.ndarray:
    p = counts / sizes[:, None]
    if criterion == "entropy":
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, p * np.log2(p), 0.0)
        return -terms.sum(axis=1)
    return 1.0 - (p * p).sum(axis=1)


def _impurity(counts: np.ndarray, criterion: str) -> float:
    return float(_impurity_rows(counts[None, :], np.array([counts.sum()]), criterion)[0])


def _best_midpoint_split(v: np.ndarray, y: np.ndarray, n_classes: int,
                         criterion: str) -> Optional[tuple[float, float]]:
    """Exhaustive scan over midpoints between consecutive distinct values.

    Returns (weighted child impurity, threshold) or None when the feature is
    constant on this node. First-best wins, so equal costs resolve to the
    lowest threshold.
    """
    m = len(v)
    order = np.argsort(v, kind="stable")
    vs = v[order]
    ys = y[order]
    boundaries = np.flatnonzero(vs[1:] > vs[:-1]) + 1  # left-block sizes
    if len(boundaries) == 0:
        return None
    onehot = np.zeros((m, n_classes))
    onehot[np.arange(m), ys] = 1.0
    cum = np.cumsum(onehot, axis=0)
    total = cum[-1]
    left = cum[boundaries - 1]
    right = total[None, :] - left
    nl = boundaries.astype(np.float64)
    nr = m - nl
    cost = (nl * _impurity_rows(left, nl, criterion)
            + nr * _impurity_rows(right, nr, criterion)) / m
    j = int(np.argmin(cost))
    i = boundaries[j]
    return float(cost[j]), float((vs[i - 1] + vs[i]) / 2.0)


def _random_threshold_split(v: np.ndarray, y: np.ndarray, n_classes: int,
                            criterion: str, rng: np.random.Generator
                            ) -> Optional[tuple[float, float]]:
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        return None
    thr = float(rng.uniform(lo, hi))
    left_mask = v <= thr
    nl = int(left_mask.sum())
    if nl == 0 or nl == len(v):
        return None
    counts_l = np.bincount(y[left_mask], minlength=n_classes).astype(np.float64)
    counts_r = np.bincount(y[~left_mask], minlength=n_classes).astype(np.float64)
    cost = (nl * _impurity(counts_l, criterion)
            + (len(v) - nl) * _impurity(counts_r, criterion)) / len(v)
    return cost, thr


def _build_tree(X: np.ndarray, y: np.ndarray, n_classes: int, criterion: str,
                max_depth: int, min_samples_split: int,
                n_sub_features: Optional[int] = None,
                random_thresholds: bool = False,
                rng: Optional[np.random.Generator] = None,
                depth: int = 0) -> _Node:
    counts = np.bincount(y, minlength=n_classes).astype(np.float64)
    node = _Node(counts)
    m, d = X.shape
    if (depth >= max_depth or m < min_samples_split
            or _impurity(counts, criterion) == 0.0):
        return node

    if n_sub_features is not None and n_sub_features < d:
        feats = rng.choice(d, size=n_sub_features, replace=False)
    else:
        feats = range(d)

    best = None  # (cost, feature, threshold); strict < keeps the earliest feature
    for f in feats:
        if random_thresholds:
            cand = _random_threshold_split(X[:, f], y, n_classes, criterion, rng)
        else:
            cand = _best_midpoint_split(X[:, f], y, n_classes, criterion)
        if cand is not None and (best is None or cand[0] < best[0]):
            best = (cand[0], int(f), cand[1])
    if best is None:
        return node

    _, node.feature, node.threshold = best
    left_mask = X[:, node.feature] <= node.threshold
    node.left = _build_tree(X[left_mask], y[left_mask], n_classes, criterion,
                            max_depth, min_samples_split, n_sub_features,
                            random_thresholds, rng, depth + 1)
    node.right = _build_tree(X[~left_mask], y[~left_mask], n_classes, criterion,
                             max_depth, min_samples_split, n_sub_features,
                             random_thresholds, rng, depth + 1)
    return node


def _tree_predict(node: _Node, X: np.ndarray) -> np.ndarray:
    out = np.empty(len(X), dtype=np.int64)
    idx = np.arange(len(X))
    stack = [(node, idx)]
    while stack:
        nd, rows = stack.pop()
        if len(rows) == 0:
            continue
        if nd.left is None:
            out[rows] = int(np.argmax(nd.counts))
            continue
        mask = X[rows, nd.feature] <= nd.threshold
        stack.append((nd.left, rows[mask]))
        stack.append((nd.right, rows[~mask]))
    return out


class DecisionTree:
    def __init__(self, criterion: str, max_depth: int, min_samples_split: int = 2):
        self.criterion = criterion
        self.max_depth = int(max_depth)
        self.min_samples_split = int(min_samples_split)

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int):
        self._root = _build_tree(X, y, n_classes, self.criterion,
                                 self.max_depth, self.min_samples_split)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        return _tree_predict(self._root, X)


class TreeEnsemble:
    """Random forest / extra-trees: bagging plus per-split feature subsets."""

    def __init__(self, n_trees: int, max_features: float, max_depth: int,
                 criterion: str, seed: int, bootstrap: bool = True,
                 random_thresholds: bool = False):
        self.n_trees = int(n_trees)
        self.max_features = float(max_features)
        self.max_depth = int(max_depth)
        self.criterion = criterion
        self.seed = seed
        self.bootstrap = bootstrap
        self.random_thresholds = random_thresholds

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int):
        n, d = X.shape
        self._n_classes = n_classes
        n_sub = min(d, max(1, math.ceil(self.max_features * d)))
        self._trees = []
        for t in range(self.n_trees):
            rng = np.random.default_rng(mix64(self.seed, t))
            if self.bootstrap:
                idx = rng.integers(0, n, size=n)
                Xt, yt = X[idx], y[idx]
            else:
                Xt, yt = X, y
            self._trees.append(_build_tree(
                Xt, yt, n_classes, self.criterion, self.max_depth,
                min_samples_split=2, n_sub_features=n_sub,
                random_thresholds=self.random_thresholds, rng=rng))
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros((len(X), self._n_classes), dtype=np.int64)
        for tree in self._trees:
            pred = _tree_predict(tree, X)
            votes[np.arange(len(X)), pred] += 1
        return np.argmax(votes, axis=1)


# --- SGD-trained multinomial logistic regression -------------------------------

class SGDLogistic:
    BATCH = 32

    def __init__(self, penalty: str, learning_rate: float, alpha: float,
                 epochs: int, seed: int):
        self.penalty = penalty
        self.learning_rate = float(learning_rate)
        self.alpha = float(alpha)
        self.epochs = int(epochs)
        self.seed = seed

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int):
        n, d = X.shape
        Xa = np.hstack([X, np.ones((n, 1))])
        Y = np.zeros((n, n_classes))
        Y[np.arange(n), y] = 1.0
        W = np.zeros((d + 1, n_classes))
        rng = np.random.default_rng(self.seed)
        with np.errstate(over="ignore", invalid="ignore"):
            self._run_epochs(Xa, Y, W, rng)
        if not np.all(np.isfinite(W)):
            raise TrainingError("SGD diverged to non-finite weights")
        self._W = W
        return self

    def _run_epochs(self, Xa, Y, W, rng):
        n = len(Xa)
        for _ in range(self.epochs):
            perm = rng.permutation(n)
            for start in range(0, n, self.BATCH):
                rows = perm[start:start + self.BATCH]
                logits = Xa[rows] @ W
                logits -= logits.max(axis=1, keepdims=True)
                expz = np.exp(logits)
                probs = expz / expz.sum(axis=1, keepdims=True)
                grad = Xa[rows].T @ (probs - Y[rows]) / len(rows)
                if self.penalty == "l2":
                    reg = W.copy()
                    reg[-1] = 0.0  # no penalty on the bias row
                    grad += self.alpha * reg
                elif self.penalty == "l1":
                    reg = np.sign(W)
                    reg[-1] = 0.0
                    grad += self.alpha * reg
                W -= self.learning_rate * grad

    def predict(self, X: np.ndarray) -> np.ndarray:
        Xa = np.hstack([X, np.ones((len(X), 1))])
        return np.argmax(Xa @ self._W, axis=1)


# --- Gaussian naive Bayes -------------------------------------------------------

class GaussianNB:
    def __init__(self, var_smoothing: float):
        self.var_smoothing = float(var_smoothing)

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int):
        n, d = X.shape
        eps = self.var_smoothing * float(np.var(X, axis=0).max())
        self._mean = np.zeros((n_classes, d))
        self._var = np.zeros((n_classes, d))
        self._log_prior = np.full(n_classes, -np.inf)
        for c in range(n_classes):
            members = X[y == c]
            if len(members) == 0:
                continue
            self._mean[c] = members.mean(axis=0)
            self._var[c] = members.var(axis=0) + eps
            self._log_prior[c] = math.log(len(members) / n)
            if np.any(self._var[c] <= 0):
                raise TrainingError("degenerate (zero) feature variance")
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        n_classes = len(self._log_prior)
        jll = np.full((len(X), n_classes), -np.inf)
        for c in range(n_classes):
            if not np.isfinite(self._log_prior[c]):
                continue
            diff = X - self._mean[c]
            jll[:, c] = (self._log_prior[c]
                         - 0.5 * np.sum(np.log(2.0 * np.pi * self._var[c]))
                         - 0.5 * np.sum(diff * diff / self._var[c], axis=1))
        return np.argmax(jll, axis=1)


# --- registry -------------------------------------------------------------------

# models whose features are standardized with training-slice statistics
STANDARDIZED = {"KNN", "SGDLogistic", "GaussianNB"}


def _build(algorithm: str, assignment: dict, config: dict, seed: int):
    if algorithm == "KNN":
        return KNN(config["n_neighbors"], assignment["weights"], assignment["metric"])
    if algorithm == "DecisionTree":
        return DecisionTree(assignment["criterion"], config["max_depth"],
                            config["min_samples_split"])
    if algorithm == "RandomForest":
        return TreeEnsemble(config["n_trees"], config["max_features"],
                            config["max_depth"], assignment["criterion"], seed,
                            bootstrap=True, random_thresholds=False)
    if algorithm == "ExtraTrees":
        return TreeEnsemble(config["n_trees"], config["max_features"],
                            config["max_depth"], assignment["criterion"], seed,
                            bootstrap=False, random_thresholds=True)
    if algorithm == "SGDLogistic":
        return SGDLogistic(assignment["penalty"], config["learning_rate"],
                           config["alpha"], config["epochs"], seed)
    if algorithm == "GaussianNB":
        return GaussianNB(config["var_smoothing"])
    raise Rejection("unknown_algorithm", f"no classifier named {algorithm}",
                    {"algorithm": algorithm})


REGISTRY = ("KNN", "DecisionTree", "RandomForest", "ExtraTrees",
            "SGDLogistic", "GaussianNB")


def train_predict(algorithm: str, assignment: dict, config: dict,
                  X_train: np.ndarray, y_train: list[str], X_test: np.ndarray,
                  classes: tuple[str, ...], seed: int) -> list[str]:
    """Fit one configuration and predict labels for the test slice.

    Numeric failures raise TrainingError (callers turn that into an
    error-status result); anything else is a bug and propagates.
    """
    model = _build(algorithm, assignment, config, seed)
    lookup = {c: i for i, c in enumerate(classes)}
    y_idx = np.array([lookup[y] for y in y_train], dtype=np.int64)
    if algorithm in STANDARDIZED:
        X_train, X_test = _standardize(X_train, X_test)
    try:
        with np.errstate(over="raise", invalid="raise"):
            model.fit(X_train, y_idx, n_classes=len(classes))
            pred = model.predict(X_test)
    except (FloatingPointError, np.linalg.LinAlgError) as e:
        raise TrainingError(str(e)) from e
    return [classes[int(i)] for i in pred]
