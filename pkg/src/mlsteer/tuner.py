"""Per-hyperpartition hyperparameter proposer.

Cold start: uniform sampling until r_min observations lie inside the current
active ranges. After that: exact GP regression (squared-exponential kernel,
fixed hyperparameters) over ALL history normalized against the declared
ranges, with expected-improvement acquisition evaluated on seeded uniform
candidates drawn from the active ranges only. This keeps history useful
after an in-situ range restriction while guaranteeing every proposal lands
inside the restricted space.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .space import Hyperpartition, HyperparameterSpec, SearchSpace, sample_uniform

logger = logging.getLogger(__name__)

R_MIN_DEFAULT = 3
N_CANDIDATES_DEFAULT = 1000
XI_DEFAULT = 0.01


@dataclass
class TunerState:
    hyperpartition_id: str
    observations: list[tuple[tuple[float, ...], float]] = field(default_factory=list)
    r_min: int = R_MIN_DEFAULT
    n_candidates: int = N_CANDIDATES_DEFAULT
    xi: float = XI_DEFAULT


@dataclass
class GPModel:
    X: np.ndarray  # (n, d) in [0,1]^d
    y_mean: float
    alpha: np.ndarray  # (K + sn2 I)^-1 (y - y_mean)
    chol: np.ndarray  # lower Cholesky factor of K + sn2 I
    length_scale: float
    signal_var: float
    noise_var: float


def _norm_one(value: float, spec: HyperparameterSpec, lo: float, hi: float) -> float:
    if spec.scale == "log":
        return (math.log10(value) - math.log10(lo)) / (math.log10(hi) - math.log10(lo))
    return (value - lo) / (hi - lo)


def _denorm_one(u: float, spec: HyperparameterSpec, lo: float, hi: float) -> float | int:
    if spec.scale == "log":
        v = 10.0 ** (math.log10(lo) + u * (math.log10(hi) - math.log10(lo)))
    else:
        v = lo + u * (hi - lo)
    if spec.kind == "integer":
        return int(min(max(int(np.rint(v)), math.ceil(lo)), math.floor(hi)))
    return float(v)


def normalize(config: dict, tunables: tuple[HyperparameterSpec, ...],
              ranges: list[tuple[float, float]]) -> tuple[float, ...]:
    """Map a configuration into [0,1]^d against the given ranges (affine for
    linear scale, log10-affine for log scale)."""
    return tuple(_norm_one(config[t.name], t, lo, hi)
                 for t, (lo, hi) in zip(tunables, ranges))


def denormalize(vec, tunables: tuple[HyperparameterSpec, ...],
                ranges: list[tuple[float, float]]) -> dict:
    return {t.name: _denorm_one(u, t, lo, hi)
            for u, t, (lo, hi) in zip(vec, tunables, ranges)}


def _kernel(A: np.ndarray, B: np.ndarray, length_scale: float,
            signal_var: float) -> np.ndarray:
    sq = np.sum(A * A, axis=1)[:, None] + np.sum(B * B, axis=1)[None, :] - 2.0 * A @ B.T
    np.maximum(sq, 0.0, out=sq)
    return signal_var * np.exp(-sq / (2.0 * length_scale ** 2))


def gp_fit(X: np.ndarray, y: np.ndarray) -> GPModel:
    """Exact GP with fixed hyperparameters: l = 0.1*sqrt(d),
    sf2 = var(y) floored at 1e-4, sn2 = 1e-4."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64)
    n, d = X.shape
    length_scale = 0.1 * math.sqrt(d)
    signal_var = max(float(np.var(y)), 1e-4)
    noise_var = 1e-4
    K = _kernel(X, X, length_scale, signal_var)
    K[np.diag_indices(n)] += noise_var
    chol = np.linalg.cholesky(K)
    y_mean = float(np.mean(y))
    alpha = np.linalg.solve(chol.T, np.linalg.solve(chol, y - y_mean))
    return GPModel(X=X, y_mean=y_mean, alpha=alpha, chol=chol,
                   length_scale=length_scale, signal_var=signal_var,
                   noise_var=noise_var)


def gp_posterior(model: GPModel, x) -> tuple[float, float]:
    mean, var = gp_posterior_batch(model, np.atleast_2d(np.asarray(x, dtype=np.float64)))
    return float(mean[0]), float(var[0])


def gp_posterior_batch(model: GPModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ks = _kernel(model.X, X, model.length_scale, model.signal_var)  # (n, m)
    mean = model.y_mean + ks.T @ model.alpha
    v = np.linalg.solve(model.chol, ks)  # (n, m)
    var = model.signal_var - np.sum(v * v, axis=0)
    np.maximum(var, 0.0, out=var)  # round-off guard
    return mean, var


def expected_improvement(mean, variance, best_so_far: float, xi: float = XI_DEFAULT):
    """EI under the maximization convention; sigma = 0 collapses to
    max(mean - best - xi, 0)."""
    mean = np.asarray(mean, dtype=np.float64)
    sigma = np.sqrt(np.asarray(variance, dtype=np.float64))
    delta = mean - best_so_far - xi
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sigma > 0, delta / np.where(sigma > 0, sigma, 1.0), 0.0)
        ei = np.where(sigma > 0,
                      delta * norm.cdf(z) + sigma * norm.pdf(z),
                      np.maximum(delta, 0.0))
    if ei.ndim == 0:
        return float(ei)
    return ei


def observations_in_active(state: TunerState, hp: Hyperpartition,
                           space: SearchSpace) -> int:
    """Count history points whose config still lies inside the active ranges.

    Observations are stored normalized against declared ranges, so the check
    compares against the active bounds normalized the same way.
    """
    if not hp.tunables:
        return len(state.observations)
    declared = [(t.lower, t.upper) for t in hp.tunables]
    bounds = []
    for t, (dlo, dhi) in zip(hp.tunables, declared):
        alo, ahi = space.range_of(hp.id, t)
        bounds.append((_norm_one(alo, t, dlo, dhi) - 1e-12,
                       _norm_one(ahi, t, dlo, dhi) + 1e-12))
    count = 0
    for vec, _ in state.observations:
        if all(lo <= u <= hi for u, (lo, hi) in zip(vec, bounds)):
            count += 1
    return count


def record_observation(state: TunerState, hp: Hyperpartition, config: dict,
                       score: float) -> None:
    declared = [(t.lower, t.upper) for t in hp.tunables]
    state.observations.append((normalize(config, hp.tunables, declared), score))


def _draw_candidates(rng: np.random.Generator, hp: Hyperpartition,
                     space: SearchSpace, n: int) -> list[dict]:
    columns = {}
    for spec in hp.tunables:
        lo, hi = space.range_of(hp.id, spec)
        if spec.scale == "log":
            vals = 10.0 ** rng.uniform(math.log10(lo), math.log10(hi), size=n)
        else:
            vals = rng.uniform(lo, hi, size=n)
        if spec.kind == "integer":
            vals = np.clip(np.rint(vals), math.ceil(lo), math.floor(hi)).astype(int)
        columns[spec.name] = vals
    return [{name: (int(col[i]) if col.dtype.kind == "i" else float(col[i]))
             for name, col in columns.items()} for i in range(n)]


def propose(state: TunerState, hp: Hyperpartition, space: SearchSpace,
            seed: int) -> dict:
    """Next configuration to evaluate for this hyperpartition."""
    if not hp.tunables:
        return {}
    if observations_in_active(state, hp, space) < state.r_min:
        return sample_uniform(hp, space, seed)

    X = np.array([vec for vec, _ in state.observations], dtype=np.float64)
    y = np.array([s for _, s in state.observations], dtype=np.float64)
    try:
        model = gp_fit(X, y)
    except np.linalg.LinAlgError:
        logger.warning("GP factorization failed for %s; falling back to uniform",
                       hp.id)
        return sample_uniform(hp, space, seed)

    rng = np.random.default_rng(seed)
    candidates = _draw_candidates(rng, hp, space, state.n_candidates)
    declared = [(t.lower, t.upper) for t in hp.tunables]
    C = np.array([normalize(c, hp.tunables, declared) for c in candidates])
    mean, var = gp_posterior_batch(model, C)
    ei = expected_improvement(mean, var, best_so_far=float(np.max(y)), xi=state.xi)
    return candidates[int(np.argmax(ei))]
