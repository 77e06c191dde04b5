"""Regenerate the golden fixture log and its frozen summary.

The golden pair pins the wire formats: tests replay the committed log (no
model re-evaluation happens on replay, so the comparison is independent of
BLAS builds) and compare the canonical summary JSON byte-for-byte.

Usage: python3 scripts/make_golden.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from mlsteer.data import load_csv  # noqa: E402
from mlsteer.fixtures import blobs_csv  # noqa: E402
from mlsteer.orchestrator import Budget, RunEngine  # noqa: E402
from mlsteer.runlog import LogWriter  # noqa: E402
from mlsteer.space import canonical_json, default_space  # noqa: E402
from mlsteer.summarizer import (  # noqa: E402
    algorithm_summaries,
    overview,
)

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "golden")
N_TRIALS = 250


def main() -> None:
    os.makedirs(GOLDEN_DIR, exist_ok=True)
    log_path = os.path.join(GOLDEN_DIR, "run-250.jsonl")
    if os.path.exists(log_path):
        os.remove(log_path)
    dataset = load_csv(blobs_csv(n=60, d=3, separation=2.0, seed=17),
                       name="golden-blobs", dataset_id="ds-golden")
    engine = RunEngine.create("run-golden", dataset, default_space(),
                              Budget(max_trials=N_TRIALS), seed=20260809,
                              metric="f1_cv2", writer=LogWriter(log_path))
    engine.start()
    engine.run_to_completion()
    engine.writer.close()

    summary = {
        "overview": overview(engine.trials, engine.run.space).to_json(),
        "algorithms": [s.to_json()
                       for s in algorithm_summaries(engine.trials,
                                                    engine.run.space)],
    }
    out = os.path.join(GOLDEN_DIR, "summary-250.json")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(summary) + "\n")
    print(f"wrote {log_path} ({engine.run.budget.consumed_trials} trials)")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
