"""Enumeration size limits shared by the exhaustive-search operations."""

import os

DEFAULT_ENUMERATION_CAP = 2**24

ENV_VAR = "CALAB_CAP"


class EnumerationCapError(ValueError):
    """Raised when an exhaustive enumeration would exceed the configured cap.

    Carries the exact candidate count so callers can reason about feasibility.
    """

    def __init__(self, message: str, count: int, cap: int):
        super().__init__(f"{message}: {count} candidates exceed cap {cap}")
        self.count = count
        self.cap = cap


def current_cap() -> int:
    """Active enumeration cap; the CALAB_CAP environment variable overrides."""
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_ENUMERATION_CAP
    return int(raw)
