"""Run lifecycle: budget accounting, the select-propose-evaluate-record loop,
control commands, and log replay.

A RunEngine is single-threaded; the service layer serializes commands at
trial boundaries and may split a step into begin/evaluate/commit so the
evaluation runs outside any lock. Replaying a log reconstructs bandit
scores, tuner observations, budget consumption, and the current space
exactly — no re-evaluation happens on load.
"""

from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Optional

from . import bandit as mab
from .data import Dataset
from .errors import Rejection
from .evaluation import EvalResult, cross_val_f1
from .runlog import LogWriter, read_records, validate_kinds
from .seeding import mix64
from .space import (
    Hyperpartition,
    SearchSpace,
    SpaceDelta,
    apply_deltas,
    delta_from_json,
    delta_to_json,
    space_from_json,
    space_to_json,
    validate_space,
)
from .tuner import TunerState, propose, record_observation

logger = logging.getLogger(__name__)

METRIC_PATTERN = re.compile(r"^f1_cv(\d+)$")
DEFAULT_METRIC = "f1_cv10"

LEGAL_TRANSITIONS = {
    ("created", "running"),
    ("running", "paused"),
    ("paused", "running"),
    ("running", "finished"),
    ("paused", "finished"),  # explicit stop of a paused run is terminal
}


def utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class Budget:
    max_trials: Optional[int] = None
    max_wall_clock_s: Optional[float] = None
    consumed_trials: int = 0
    consumed_wall_clock_s: float = 0.0

    def validate(self) -> None:
        if self.max_trials is None and self.max_wall_clock_s is None:
            raise Rejection("invalid_budget", "budget needs max_trials and/or "
                                              "max_wall_clock_s")
        if self.max_trials is not None and self.max_trials < 1:
            raise Rejection("invalid_budget", "max_trials must be >= 1")
        if self.max_wall_clock_s is not None and self.max_wall_clock_s <= 0:
            raise Rejection("invalid_budget", "max_wall_clock_s must be > 0")

    def exhausted(self) -> bool:
        if self.max_trials is not None and self.consumed_trials >= self.max_trials:
            return True
        if (self.max_wall_clock_s is not None
                and self.consumed_wall_clock_s >= self.max_wall_clock_s):
            return True
        return False

    def extend(self, add_trials: Optional[int], add_wall_clock_s: Optional[float]):
        if add_trials:
            self.max_trials = (self.max_trials or 0) + int(add_trials)
        if add_wall_clock_s:
            self.max_wall_clock_s = (self.max_wall_clock_s or 0.0) + float(add_wall_clock_s)

    def to_json(self) -> dict:
        return {"max_trials": self.max_trials,
                "max_wall_clock_s": self.max_wall_clock_s,
                "consumed_trials": self.consumed_trials,
                "consumed_wall_clock_s": self.consumed_wall_clock_s}


@dataclass
class Trial:
    trial_id: int
    run_id: str
    algorithm: str
    hyperpartition_id: str
    config: dict
    status: str  # "ok" | "error"
    score: Optional[float]
    fold_scores: list[float]
    error: Optional[str]
    elapsed_s: float
    created_at: str

    def to_json(self) -> dict:
        return {"trial_id": self.trial_id, "run_id": self.run_id,
                "algorithm": self.algorithm,
                "hyperpartition_id": self.hyperpartition_id,
                "config": self.config, "status": self.status,
                "score": self.score, "fold_scores": self.fold_scores,
                "error": self.error, "elapsed_s": self.elapsed_s,
                "created_at": self.created_at}

    @staticmethod
    def from_json(obj: dict) -> "Trial":
        return Trial(trial_id=obj["trial_id"], run_id=obj["run_id"],
                     algorithm=obj["algorithm"],
                     hyperpartition_id=obj["hyperpartition_id"],
                     config=obj["config"], status=obj["status"],
                     score=obj["score"], fold_scores=obj["fold_scores"],
                     error=obj["error"], elapsed_s=obj["elapsed_s"],
                     created_at=obj["created_at"])


@dataclass
class ControlCommand:
    kind: str  # start | pause | resume | stop | reconfigure
    deltas: list[SpaceDelta] = field(default_factory=list)
    add_trials: Optional[int] = None
    add_wall_clock_s: Optional[float] = None

    KINDS = ("start", "pause", "resume", "stop", "reconfigure")

    def __post_init__(self):
        if self.kind not in ControlCommand.KINDS:
            raise Rejection("invalid_command", f"unknown command kind {self.kind!r}")
        if self.kind == "reconfigure" and not self.deltas:
            raise Rejection("invalid_command", "reconfigure needs at least one delta")

    @property
    def extends_budget(self) -> bool:
        return bool(self.add_trials or self.add_wall_clock_s)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.deltas:
            out["deltas"] = [delta_to_json(d) for d in self.deltas]
        if self.add_trials is not None:
            out["add_trials"] = self.add_trials
        if self.add_wall_clock_s is not None:
            out["add_wall_clock_s"] = self.add_wall_clock_s
        return out

    @staticmethod
    def from_json(obj: dict) -> "ControlCommand":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise Rejection("invalid_command", "command must be an object with a kind")
        deltas = [delta_from_json(d) for d in obj.get("deltas", [])]
        return ControlCommand(kind=obj["kind"], deltas=deltas,
                              add_trials=obj.get("add_trials"),
                              add_wall_clock_s=obj.get("add_wall_clock_s"))


@dataclass
class Run:
    id: str
    dataset_id: str
    space: SearchSpace
    budget: Budget
    status: str  # created | running | paused | finished | failed
    seed: int
    metric: str
    created_at: str
    updated_at: str


@dataclass
class TrialPlan:
    """Everything decided at the trial boundary; evaluation is pure."""
    trial_id: int
    hyperpartition: Hyperpartition
    config: dict
    cv_folds: int
    eval_seed: int


def parse_metric(metric: str) -> int:
    m = METRIC_PATTERN.match(metric)
    if not m or int(m.group(1)) < 2:
        raise Rejection("invalid_metric",
                        f"metric must look like f1_cv10, got {metric!r}")
    return int(m.group(1))


class RunEngine:
    """Owns one run's full state. Not thread-safe by itself."""

    def __init__(self, run: Run, dataset: Dataset, writer: Optional[LogWriter],
                 bandit_k: int = mab.BEST_K_DEFAULT,
                 bandit_c: float = mab.EXPLORATION_DEFAULT,
                 r_min: int = 3, n_candidates: int = 1000, xi: float = 0.01):
        self.run = run
        self.dataset = dataset
        self.writer = writer
        self.bandit = mab.BanditState(k=bandit_k, c=bandit_c)
        self.tuners: dict[str, TunerState] = {}
        self.trials: list[Trial] = []
        self.auto_deactivated: list[str] = []
        self.r_min = r_min
        self.n_candidates = n_candidates
        self.xi = xi
        self.cv_folds = parse_metric(run.metric)
        for hp in run.space.enabled_hyperpartitions():
            self.bandit.ensure_arm(hp.id)

    # --- creation / loading ---------------------------------------------------

    @staticmethod
    def create(run_id: str, dataset: Dataset, space: SearchSpace, budget: Budget,
               seed: int, metric: str = DEFAULT_METRIC,
               writer: Optional[LogWriter] = None, **knobs) -> "RunEngine":
        budget.validate()
        violations = validate_space(space)
        if violations:
            raise Rejection("invalid_space", "space fails validation",
                            {"violations": violations})
        now = utcnow()
        run = Run(id=run_id, dataset_id=dataset.id, space=space, budget=budget,
                  status="created", seed=seed, metric=metric,
                  created_at=now, updated_at=now)
        engine = RunEngine(run, dataset, writer, **knobs)
        engine._log({"kind": "run_created", "run_id": run_id,
                     "dataset_id": dataset.id, "seed": seed, "metric": metric,
                     "budget": {"max_trials": budget.max_trials,
                                "max_wall_clock_s": budget.max_wall_clock_s},
                     "bandit": {"k": engine.bandit.k, "c": engine.bandit.c},
                     "tuner": {"r_min": engine.r_min,
                               "n_candidates": engine.n_candidates,
                               "xi": engine.xi},
                     "space": space_to_json(space), "created_at": now})
        return engine

    def _log(self, record: dict) -> None:
        if self.writer is not None:
            self.writer.append(record)

    # --- lifecycle --------------------------------------------------------------

    def _transition(self, to: str, reason: Optional[str] = None) -> None:
        frm = self.run.status
        if to != "failed" and (frm, to) not in LEGAL_TRANSITIONS:
            raise Rejection("invalid_transition", f"cannot go {frm} -> {to}",
                            {"from": frm, "to": to})
        self.run.status = to
        self.run.updated_at = utcnow()
        self._log({"kind": "status_change", "from": frm, "to": to,
                   "reason": reason, "at": self.run.updated_at})

    def start(self) -> None:
        violations = validate_space(self.run.space)
        if violations:
            raise Rejection("invalid_space", "space fails validation",
                            {"violations": violations})
        self._transition("running")

    def pause(self) -> None:
        self._transition("paused")

    def resume(self) -> None:
        self._transition("running")

    def stop(self) -> None:
        self._transition("finished", reason="stopped")

    def finish(self, reason: str = "budget_exhausted") -> None:
        self._transition("finished", reason=reason)

    def fail(self, reason: str) -> None:
        self._transition("failed", reason=reason)

    # --- commands ---------------------------------------------------------------

    def handle_command(self, cmd: ControlCommand) -> Run:
        """Apply one command atomically; on rejection the run is unchanged."""
        if cmd.deltas or cmd.extends_budget:
            self._apply_reconfiguration(cmd)
        if cmd.kind == "start":
            self.start()
        elif cmd.kind == "pause":
            self.pause()
        elif cmd.kind == "resume":
            self.resume()
        elif cmd.kind == "stop":
            self.stop()
        # "reconfigure" has no status effect
        return self.run

    def _apply_reconfiguration(self, cmd: ControlCommand) -> None:
        if cmd.deltas:
            new_space = apply_deltas(self.run.space, cmd.deltas)  # all-or-none
            self.run.space = new_space
            self._sync_arms()
        if cmd.extends_budget:
            self.run.budget.extend(cmd.add_trials, cmd.add_wall_clock_s)
        self.run.updated_at = utcnow()
        self._log({"kind": "command", "command": cmd.to_json(),
                   "at": self.run.updated_at})

    def _sync_arms(self) -> None:
        """Align bandit arms with the space: newly enabled hyperpartitions get
        fresh arms, disabled ones deactivate with history retained."""
        for hp in self.run.space.hyperpartitions:
            enabled = self.run.space.effectively_enabled(hp.id)
            if enabled:
                arm = self.bandit.ensure_arm(hp.id)
                if not arm.active:
                    mab.set_active(self.bandit, hp.id, True)
            elif hp.id in self.bandit.arms and self.bandit.arms[hp.id].active:
                mab.set_active(self.bandit, hp.id, False)

    # --- the search loop ---------------------------------------------------------

    def begin_trial(self) -> TrialPlan:
        if self.run.status != "running":
            raise Rejection("invalid_transition",
                            f"cannot step a {self.run.status} run")
        if self.run.budget.exhausted():
            raise Rejection("invalid_transition", "budget exhausted")
        hp_id = mab.select(self.bandit)  # no_active_arm propagates
        hp = self.run.space.hyperpartition(hp_id)
        trial_id = len(self.trials) + 1
        trial_seed = mix64(self.run.seed, trial_id)
        state = self.tuners.setdefault(
            hp_id, TunerState(hp_id, r_min=self.r_min,
                              n_candidates=self.n_candidates, xi=self.xi))
        config = propose(state, hp, self.run.space, seed=mix64(trial_seed, 1))
        return TrialPlan(trial_id=trial_id, hyperpartition=hp, config=config,
                         cv_folds=self.cv_folds, eval_seed=mix64(trial_seed, 2))

    def evaluate(self, plan: TrialPlan) -> EvalResult:
        return cross_val_f1(self.dataset, plan.hyperpartition.algorithm,
                            plan.hyperpartition.assignment, plan.config,
                            k=plan.cv_folds, seed=plan.eval_seed)

    def commit_trial(self, plan: TrialPlan, result: EvalResult) -> Trial:
        hp = plan.hyperpartition
        trial = Trial(trial_id=plan.trial_id, run_id=self.run.id,
                      algorithm=hp.algorithm, hyperpartition_id=hp.id,
                      config=plan.config, status=result.status,
                      score=result.mean_score, fold_scores=result.fold_scores,
                      error=result.error, elapsed_s=result.elapsed,
                      created_at=utcnow())
        self._absorb_trial(trial)
        self._log({"kind": "trial", **trial.to_json()})
        if self.run.budget.exhausted():
            self.finish()
        return trial

    def _absorb_trial(self, trial: Trial) -> None:
        """Shared by live commits and log replay: bookkeeping only."""
        hp = self.run.space.hyperpartition(trial.hyperpartition_id)
        self.bandit.ensure_arm(hp.id)
        if trial.status == "ok":
            mab.record(self.bandit, hp.id, trial.score)
            state = self.tuners.setdefault(
                hp.id, TunerState(hp.id, r_min=self.r_min,
                                  n_candidates=self.n_candidates, xi=self.xi))
            record_observation(state, hp, trial.config, trial.score)
        else:
            if mab.record_failure(self.bandit, hp.id):
                self.auto_deactivated.append(hp.id)
                logger.warning("arm %s auto-deactivated after %d consecutive "
                               "failures", hp.id, mab.MAX_CONSECUTIVE_FAILURES)
        self.trials.append(trial)
        self.run.budget.consumed_trials += 1
        self.run.budget.consumed_wall_clock_s += trial.elapsed_s

    def step(self) -> Trial:
        """One full select-propose-evaluate-record iteration."""
        plan = self.begin_trial()
        result = self.evaluate(plan)
        return self.commit_trial(plan, result)

    def run_to_completion(self, max_steps: Optional[int] = None) -> None:
        """Drive a running engine until its budget finishes it (library use)."""
        steps = 0
        while self.run.status == "running":
            if self.run.budget.exhausted():
                self.finish()
                break
            try:
                self.step()
            except Rejection as e:
                if e.code == "no_active_arm":
                    self.fail("no_active_arm")
                    break
                raise
            steps += 1
            if max_steps is not None and steps >= max_steps:
                break

    def descriptor(self) -> dict:
        ok = [t for t in self.trials if t.status == "ok"]
        return {
            "id": self.run.id,
            "dataset_id": self.run.dataset_id,
            "status": self.run.status,
            "seed": self.run.seed,
            "metric": self.run.metric,
            "budget": self.run.budget.to_json(),
            "n_trials": len(self.trials),
            "best_score": max((t.score for t in ok), default=None),
            "auto_deactivated": list(self.auto_deactivated),
            "created_at": self.run.created_at,
            "updated_at": self.run.updated_at,
        }


def load_run(path: str, dataset_resolver: Callable[[str], Dataset],
             writer: Optional[LogWriter] = None) -> tuple[RunEngine, list[str]]:
    """Reconstruct an engine by replaying a log; never re-evaluates models.

    A log whose final status is `running` loads as `paused` (the process that
    wrote it is gone). Pass a writer to continue appending to the same file.
    """
    records, warnings = read_records(path)
    validate_kinds(records)
    if not records or records[0]["kind"] != "run_created":
        raise Rejection("corrupt_log", "log must begin with a run_created record",
                        {"line": 1})
    head = records[0]
    space = space_from_json(head["space"])
    budget = Budget(max_trials=head["budget"]["max_trials"],
                    max_wall_clock_s=head["budget"]["max_wall_clock_s"])
    run = Run(id=head["run_id"], dataset_id=head["dataset_id"], space=space,
              budget=budget, status="created", seed=head["seed"],
              metric=head["metric"], created_at=head["created_at"],
              updated_at=head["created_at"])
    engine = RunEngine(run, dataset_resolver(head["dataset_id"]), writer=None,
                       bandit_k=head["bandit"]["k"], bandit_c=head["bandit"]["c"],
                       r_min=head["tuner"]["r_min"],
                       n_candidates=head["tuner"]["n_candidates"],
                       xi=head["tuner"]["xi"])
    for rec in records[1:]:
        if rec["kind"] == "trial":
            trial = Trial.from_json(rec)
            if trial.trial_id != len(engine.trials) + 1:
                raise Rejection("corrupt_log",
                                f"trial ids must be gap-free; expected "
                                f"{len(engine.trials) + 1}, got {trial.trial_id}",
                                {"seq": rec["seq"]})
            engine._absorb_trial(trial)
        elif rec["kind"] == "command":
            cmd = ControlCommand.from_json(rec["command"])
            if cmd.deltas:
                engine.run.space = apply_deltas(engine.run.space, cmd.deltas)
                engine._sync_arms()
            if cmd.extends_budget:
                engine.run.budget.extend(cmd.add_trials, cmd.add_wall_clock_s)
            engine.run.updated_at = rec["at"]
        elif rec["kind"] == "status_change":
            engine.run.status = rec["to"]
            engine.run.updated_at = rec["at"]
    if engine.run.status == "running":
        engine.run.status = "paused"
        warnings.append("log ended while running; loaded as paused")
    engine.writer = writer
    return engine, warnings
