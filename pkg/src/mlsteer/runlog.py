"""Append-only trial log: newline-delimited JSON, one record per line.

Record kinds: run_created, trial, command, status_change. Every record
carries a monotonically increasing "seq" starting at 1. A torn final line
(no trailing newline / truncated JSON) is dropped with a warning on load;
corruption anywhere else fails the load with its line number.
"""

from __future__ import annotations

import json
import os
from typing import IO, Iterable, Optional

from .errors import Rejection


class LogWriter:
    """Appends records, assigning sequence numbers; flushes per record so a
    crash can only tear the final line."""

    def __init__(self, path: str):
        self.path = path
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        self._fh: Optional[IO[str]] = open(path, "a", encoding="utf-8")
        self.seq = _last_seq(path)

    def append(self, record: dict) -> dict:
        if self._fh is None:
            raise RuntimeError("log writer is closed")
        self.seq += 1
        record = {"seq": self.seq, **record}
        self._fh.write(json.dumps(record, sort_keys=True) + "\n")
        self._fh.flush()
        return record

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


def _last_seq(path: str) -> int:
    last = 0
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    last = json.loads(line).get("seq", last)
                except json.JSONDecodeError:
                    break  # torn tail; writer continues after the last good seq
    except FileNotFoundError:
        pass
    return last


def read_records(path: str) -> tuple[list[dict], list[str]]:
    """Parse a log file. Returns (records, warnings).

    Raises corrupt_log (with the 1-based line number) for a bad line that is
    not the final one; the final line, if torn, is dropped with a warning.
    """
    with open(path, encoding="utf-8") as fh:
        raw = fh.read()
    lines = raw.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    records: list[dict] = []
    warnings: list[str] = []
    for i, line in enumerate(lines, start=1):
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict) or "seq" not in rec or "kind" not in rec:
                raise ValueError("record missing seq/kind")
        except (json.JSONDecodeError, ValueError) as e:
            if i == len(lines):
                warnings.append(f"dropped torn final line {i}: {e}")
                break
            raise Rejection("corrupt_log", f"bad record at line {i}: {e}",
                            {"line": i}) from None
        expected = records[-1]["seq"] + 1 if records else 1
        if rec["seq"] != expected:
            raise Rejection("corrupt_log",
                            f"sequence gap at line {i}: expected {expected}, "
                            f"got {rec['seq']}", {"line": i})
        records.append(rec)
    return records, warnings


def validate_kinds(records: Iterable[dict]) -> None:
    allowed = {"run_created", "trial", "command", "status_change"}
    for rec in records:
        if rec["kind"] not in allowed:
            raise Rejection("corrupt_log", f"unknown record kind {rec['kind']!r}",
                            {"seq": rec["seq"]})
