"""Machine-readable rejection codes shared by every module and the API."""

from __future__ import annotations

from typing import Any, Optional


class Rejection(Exception):
    """A validated refusal: carries a stable machine code plus optional detail.

    Raised by module operations instead of ad-hoc ValueErrors so the API
    layer can map every failure to exactly one HTTP status + code.
    """

    def __init__(self, code: str, message: str, detail: Optional[dict[str, Any]] = None):
        if code not in ERROR_CODES:
            raise ValueError(f"unregistered rejection code: {code}")
        super().__init__(message)
        self.code = code
        self.message = message
        self.detail = detail or {}

    def to_payload(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "detail": self.detail}


# code -> HTTP status used by the API server. This table is the single
# source of truth; the docs and the exhaustiveness test read it.
ERROR_CODES: dict[str, int] = {
    # search space
    "unknown_target": 422,
    "empty_range": 422,
    "no_enabled_hyperpartition": 422,
    "invalid_space": 422,
    "invalid_delta": 422,
    "config_mismatch": 422,
    # dataset ingestion
    "ingestion_error": 422,
    "unknown_dataset": 404,
    # evaluation / registry
    "unknown_algorithm": 422,
    # run lifecycle
    "unknown_run": 404,
    "invalid_transition": 409,
    "invalid_budget": 422,
    "invalid_metric": 422,
    "invalid_command": 422,
    "no_active_arm": 409,
    "corrupt_log": 422,
    # summaries
    "unknown_name": 422,
}
