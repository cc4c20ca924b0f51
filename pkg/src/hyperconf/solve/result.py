from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping


class Verdict(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SolveResult:
    verdict: Verdict
    witness: Any = None
    stats: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if (self.witness is not None) != (self.verdict is Verdict.SAT):
            raise ValueError("a witness is present exactly for SAT results")

    @property
    def sat(self) -> bool:
        return self.verdict is Verdict.SAT

    def stats_block(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.stats.items())


@dataclass(frozen=True)
class OracleConfig:
    enum_bound: int | None = None

    def __post_init__(self):
        if self.enum_bound is not None and self.enum_bound < 1:
            raise ValueError("enum_bound must be a positive integer")
