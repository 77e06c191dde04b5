"""Multi-armed bandit over hyperpartitions: best-k reward plus UCB1 exploration.

Untried active arms carry a +inf index so they are always drained first
(fewest-trials then lexicographic tie-break makes that a round-robin), which
is what makes the overview's coverage gauges fill up early in a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import Rejection

BEST_K_DEFAULT = 5
EXPLORATION_DEFAULT = 1.0
MAX_CONSECUTIVE_FAILURES = 3


@dataclass
class Arm:
    hyperpartition_id: str
    scores: list[float] = field(default_factory=list)
    active: bool = True
    failures: int = 0  # consecutive error trials; resets on success


@dataclass
class BanditState:
    arms: dict[str, Arm] = field(default_factory=dict)
    k: int = BEST_K_DEFAULT
    c: float = EXPLORATION_DEFAULT
    total: int = 0  # completed ok trials across all arms

    def arm(self, hp_id: str) -> Arm:
        if hp_id not in self.arms:
            raise Rejection("unknown_target", f"no arm for {hp_id}", {"target": hp_id})
        return self.arms[hp_id]

    def ensure_arm(self, hp_id: str) -> Arm:
        if hp_id not in self.arms:
            self.arms[hp_id] = Arm(hyperpartition_id=hp_id)
        return self.arms[hp_id]


def reward(arm: Arm, k: int = BEST_K_DEFAULT) -> float:
    """Mean of the arm's top min(k, n) scores. Undefined on an empty arm."""
    if not arm.scores:
        raise ValueError("reward undefined for an arm with no scores")
    top = sorted(arm.scores, reverse=True)[:k]
    return math.fsum(top) / len(top)


def ucb_score(arm: Arm, total: int, k: int = BEST_K_DEFAULT,
              c: float = EXPLORATION_DEFAULT) -> float:
    """reward + c*sqrt(2*ln(total)/n); +inf sentinel for an untried arm."""
    n = len(arm.scores)
    if n == 0:
        return math.inf
    return reward(arm, k) + c * math.sqrt(2.0 * math.log(total) / n)


def select(state: BanditState, seed: int = 0) -> str:
    """Active arm with the maximal UCB index.

    Ties break by fewest trials, then lexicographic id, so selection is fully
    deterministic (the seed is accepted for interface symmetry but unused).
    """
    active = [a for a in state.arms.values() if a.active]
    if not active:
        raise Rejection("no_active_arm", "every arm is inactive")
    total = max(state.total, 1)
    best = max(active, key=lambda a: (ucb_score(a, total, state.k, state.c),
                                      -len(a.scores)))
    # max() keeps the first among full ties; make the id order explicit
    contenders = [a for a in active
                  if ucb_score(a, total, state.k, state.c)
                  == ucb_score(best, total, state.k, state.c)
                  and len(a.scores) == len(best.scores)]
    return min(contenders, key=lambda a: a.hyperpartition_id).hyperpartition_id


def record(state: BanditState, hp_id: str, score: float) -> BanditState:
    arm = state.arm(hp_id)
    arm.scores.append(score)
    arm.failures = 0
    state.total += 1
    return state


def record_failure(state: BanditState, hp_id: str) -> bool:
    """Count an error trial; after 3 consecutive failures the arm deactivates.
    Returns True when this call deactivated the arm."""
    arm = state.arm(hp_id)
    arm.failures += 1
    if arm.failures >= MAX_CONSECUTIVE_FAILURES and arm.active:
        arm.active = False
        return True
    return False


def set_active(state: BanditState, hp_id: str, flag: bool) -> BanditState:
    arm = state.arm(hp_id)
    arm.active = flag
    if flag:
        arm.failures = 0  # a reactivated arm gets a fresh failure budget
    return state
