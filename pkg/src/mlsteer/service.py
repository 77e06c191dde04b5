"""Threaded run management for the API server.

One background thread per running run. Commands land in a per-run queue and
are applied at trial boundaries (the in-flight trial always completes); pause
and stop return immediately with a transient status, while reconfigure blocks
until the boundary so the client gets a synchronous accept/reject. Reads take
the lock only long enough to snapshot references.
"""

from __future__ import annotations

import logging
import threading
from collections import deque
from typing import Optional

from .errors import Rejection
from .orchestrator import (
    Budget,
    ControlCommand,
    RunEngine,
    load_run,
)
from .runlog import LogWriter
from .space import SearchSpace, SpaceDelta, apply_deltas, default_space
from .store import DataStore

logger = logging.getLogger(__name__)

COMMAND_TIMEOUT_S = 300.0


class _Waiter:
    def __init__(self):
        self.event = threading.Event()
        self.error: Optional[Exception] = None


class RunHandle:
    def __init__(self, engine: RunEngine):
        self.engine = engine
        self._lock = threading.Lock()
        self._queue: deque = deque()
        self._loop_alive = False
        self._thread: Optional[threading.Thread] = None

    # --- reads --------------------------------------------------------------

    def snapshot(self):
        """(trials copy, space, descriptor) consistent at one boundary."""
        with self._lock:
            return (list(self.engine.trials), self.engine.run.space,
                    self._describe_locked())

    def describe(self) -> dict:
        with self._lock:
            return self._describe_locked()

    def _describe_locked(self) -> dict:
        desc = self.engine.descriptor()
        if self._loop_alive:
            pending = [cmd.kind for cmd, _ in self._queue]
            if "stop" in pending:
                desc["status"] = "stopping"
            elif "pause" in pending:
                desc["status"] = "pausing"
        return desc

    # --- commands -------------------------------------------------------------

    def submit(self, cmd: ControlCommand) -> dict:
        with self._lock:
            if not self._loop_alive:
                self.engine.handle_command(cmd)
                if self.engine.run.status == "running":
                    self._spawn_locked()
                return self._describe_locked()
            if cmd.kind in ("pause", "stop"):
                self._queue.append((cmd, None))
                return self._describe_locked()
            waiter = _Waiter()
            self._queue.append((cmd, waiter))
        if not waiter.event.wait(timeout=COMMAND_TIMEOUT_S):
            raise Rejection("invalid_transition",
                            "command timed out waiting for a trial boundary")
        if waiter.error is not None:
            raise waiter.error
        return self.describe()

    def _spawn_locked(self) -> None:
        self._loop_alive = True
        self._thread = threading.Thread(target=self._loop, daemon=True,
                                        name=f"run-loop-{self.engine.run.id}")
        self._thread.start()

    def _drain_locked(self) -> None:
        while self._queue:
            cmd, waiter = self._queue.popleft()
            try:
                self.engine.handle_command(cmd)
            except Rejection as e:
                if waiter is None:
                    logger.warning("queued %s rejected: %s", cmd.kind, e.message)
                else:
                    waiter.error = e
            finally:
                if waiter is not None:
                    waiter.event.set()

    def _loop(self) -> None:
        try:
            while True:
                with self._lock:
                    self._drain_locked()
                    if self.engine.run.status != "running":
                        self._loop_alive = False
                        return
                    if self.engine.run.budget.exhausted():
                        self.engine.finish()
                        self._loop_alive = False
                        return
                    try:
                        plan = self.engine.begin_trial()
                    except Rejection as e:
                        self.engine.fail(e.code)
                        self._loop_alive = False
                        return
                result = self.engine.evaluate(plan)
                with self._lock:
                    self.engine.commit_trial(plan, result)
        except Exception:
            logger.exception("run loop crashed")
            with self._lock:
                if self.engine.run.status == "running":
                    self.engine.fail("internal_error")
                self._loop_alive = False

    def wait(self, timeout: Optional[float] = None) -> None:
        thread = self._thread
        if thread is not None:
            thread.join(timeout)

    def pause_for_shutdown(self) -> None:
        """Best-effort pause used by SIGINT handling; blocks to the boundary."""
        with self._lock:
            alive = self._loop_alive
            if alive:
                self._queue.append((ControlCommand("pause"), None))
        if alive:
            self.wait(timeout=COMMAND_TIMEOUT_S)
        with self._lock:
            self.engine.writer and self.engine.writer.close()


class RunManager:
    """Registry of live run handles over a DataStore; loads cold runs lazily."""

    def __init__(self, store: DataStore):
        self.store = store
        self._handles: dict[str, RunHandle] = {}
        self._lock = threading.Lock()

    def create_run(self, dataset_id: str, budget: Budget, seed: int,
                   metric: str, algorithms: Optional[list[str]] = None,
                   deltas: Optional[list[SpaceDelta]] = None,
                   space: Optional[SearchSpace] = None, **knobs) -> RunHandle:
        dataset = self.store.get_dataset(dataset_id)
        space = space or default_space()
        if algorithms:
            known = {a.name for a in space.algorithms}
            unknown = [a for a in algorithms if a not in known]
            if unknown:
                raise Rejection("unknown_target",
                                f"unknown algorithms: {', '.join(unknown)}",
                                {"target": unknown})
            space = apply_deltas(space, [
                SpaceDelta("disable_algorithm", a.name)
                for a in space.algorithms if a.name not in algorithms])
        if deltas:
            space = apply_deltas(space, deltas)
        run_id = self.store.next_run_id()
        writer = LogWriter(self.store.run_log_path(run_id))
        engine = RunEngine.create(run_id, dataset, space, budget, seed=seed,
                                  metric=metric, writer=writer, **knobs)
        handle = RunHandle(engine)
        with self._lock:
            self._handles[run_id] = handle
        return handle

    def get(self, run_id: str) -> RunHandle:
        with self._lock:
            if run_id in self._handles:
                return self._handles[run_id]
        if not self.store.run_exists(run_id):
            raise Rejection("unknown_run", f"no run {run_id}", {"run_id": run_id})
        path = self.store.run_log_path(run_id)
        engine, warnings = load_run(path, self.store.get_dataset,
                                    writer=LogWriter(path))
        for w in warnings:
            logger.warning("%s: %s", run_id, w)
        handle = RunHandle(engine)
        with self._lock:
            return self._handles.setdefault(run_id, handle)

    def list_descriptors(self) -> list[dict]:
        return [self.get(run_id).describe() for run_id in self.store.list_run_ids()]

    def shutdown(self) -> None:
        with self._lock:
            handles = list(self._handles.values())
        for handle in handles:
            try:
                handle.pause_for_shutdown()
            except Exception:
                logger.exception("shutdown pause failed for %s",
                                 handle.engine.run.id)
