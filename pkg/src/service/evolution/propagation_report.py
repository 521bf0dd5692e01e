"""
전파 리포트 (스텝별 부분공간 차원, 절단 오차 추정, 노름 드리프트)
"""

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass(frozen=True)
class StepRecord:
    subspace_dim: int
    step_ns: float
    error_estimate: float
    norm_drift: float
    accepted: bool = True
    sector: Optional[int] = None


@dataclass
class PropagationReport:
    method: str
    duration_ns: float = 0.0
    steps: List[StepRecord] = field(default_factory=list)
    vacuum_weight: Optional[float] = None

    @property
    def accepted_steps(self) -> List[StepRecord]:
        return [s for s in self.steps if s.accepted]

    @property
    def rejected_steps(self) -> int:
        return sum(1 for s in self.steps if not s.accepted)

    @property
    def max_subspace_dim(self) -> int:
        return max((s.subspace_dim for s in self.accepted_steps), default=0)

    @property
    def error_estimate(self) -> float:
        return sum(s.error_estimate for s in self.accepted_steps)

    @property
    def max_norm_drift(self) -> float:
        return max((s.norm_drift for s in self.accepted_steps), default=0.0)

    def merge(self, other: "PropagationReport") -> "PropagationReport":
        self.steps.extend(other.steps)
        if other.method not in self.method.split("+"):
            self.method = f"{self.method}+{other.method}"
        return self

    def summary(self) -> dict:
        return {
            "method": self.method,
            "duration_ns": self.duration_ns,
            "steps": len(self.accepted_steps),
            "rejected_steps": self.rejected_steps,
            "max_subspace_dim": self.max_subspace_dim,
            "error_estimate": self.error_estimate,
            "max_norm_drift": self.max_norm_drift,
            "vacuum_weight": self.vacuum_weight,
        }
