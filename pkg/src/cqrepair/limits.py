"""Cooperative deadlines for the exponential searches."""
from __future__ import annotations

import os
import time
from contextlib import contextmanager
from contextvars import ContextVar

from .errors import SearchTimeout

_deadline: ContextVar[float | None] = ContextVar("cqrepair_deadline", default=None)


@contextmanager
def time_limit(seconds: float | None):
    """Run the enclosed block under a wall-clock budget (None = unlimited)."""
    if seconds is None:
        yield
        return
    new = time.monotonic() + seconds
    old = _deadline.get()
    token = _deadline.set(new if old is None else min(old, new))
    try:
        yield
    finally:
        _deadline.reset(token)


def check_deadline():
    d = _deadline.get()
    if d is not None and time.monotonic() > d:
        raise SearchTimeout("search exceeded its time budget")


def thread_cap() -> int:
    """Parallelism cap from CQREPAIR_THREADS (default 1)."""
    raw = os.environ.get("CQREPAIR_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CQREPAIR_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"CQREPAIR_THREADS must be a positive integer, got {raw!r}")
    return n
