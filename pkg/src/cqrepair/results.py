"""Result containers for construction operations."""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import CQ


@dataclass(frozen=True)
class ResultItem:
    query: CQ
    distance: object = None
    status: str = "yes"


@dataclass
class RepairResult:
    """Output of a construction: queries plus how far they can be trusted.

    bound_limited: the set was computed by a search cut at ``bound`` and
    may be incomplete or contain candidates that a larger search refutes.
    """
    items: list = field(default_factory=list)
    bound_limited: bool = False
    bound: int | None = None
    warnings: list = field(default_factory=list)
    infinite_family: bool = False

    @property
    def queries(self) -> list:
        return [it.query for it in self.items]

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)
