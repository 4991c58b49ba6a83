"""Enumeration budget shared by every exhaustive computation in the package.

Everything here is computed by brute-force enumeration, so each loop over
inputs, tapes or distribution supports first asks :func:`ensure_within`
whether its size fits.  The limit is a context variable, so it can be
narrowed for one block of code without threading a parameter everywhere::

    with enumeration_budget(1000):
        transcript_distribution(proto, x)
"""

from __future__ import annotations

import contextlib
import contextvars

DEFAULT_BUDGET = 10**7

_budget: contextvars.ContextVar[int] = contextvars.ContextVar(
    "coordinfo_budget", default=DEFAULT_BUDGET
)


class BudgetExceeded(RuntimeError):
    """An enumeration would visit more items than the active budget allows."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: enumeration size {size} exceeds budget {limit}")
        self.what = what
        self.size = size
        self.limit = limit


def current_budget() -> int:
    return _budget.get()


def ensure_within(size: int, what: str) -> None:
    limit = _budget.get()
    if size > limit:
        raise BudgetExceeded(what, size, limit)


@contextlib.contextmanager
def enumeration_budget(limit: int):
    if limit < 1:
        raise ValueError("budget must be a positive integer")
    token = _budget.set(limit)
    try:
        yield limit
    finally:
        _budget.reset(token)
