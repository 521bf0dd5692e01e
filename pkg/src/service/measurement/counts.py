"""
CountTable: N-비트 결과 문자열 -> 샷 수, 순서 있는 샷 로그와 텍스트 입출력
"""

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from src.core.exceptions import DomainValueException
from src.dto.common.enums import ProbabilityTag
from src.service.spin.spin_state_service import bitstring_to_index, index_to_bitstring
from .readout import ProbVector


@dataclass(frozen=True, eq=False)
class CountTable:
    """Outcome counts; shot_log keeps the ordered outcome indices when known"""

    n: int
    counts: Dict[str, int]
    seed: Optional[int] = None
    shot_log: Optional[np.ndarray] = None

    def __post_init__(self):
        for key, value in self.counts.items():
            if len(key) != self.n or any(ch not in "01" for ch in key):
                raise DomainValueException(f"outcome '{key}' is not a {self.n}-bit string")
            if value < 0:
                raise DomainValueException(f"negative count for {key}")
        if self.shot_log is not None:
            log = np.asarray(self.shot_log, dtype=np.int64)
            log.setflags(write=False)
            object.__setattr__(self, "shot_log", log)
            if log.size != self.total:
                raise DomainValueException("shot log length differs from total counts")

    @property
    def total(self) -> int:
        return int(sum(self.counts.values()))

    @classmethod
    def from_indices(
        cls, n: int, indices: np.ndarray, seed: Optional[int] = None
    ) -> "CountTable":
        indices = np.asarray(indices, dtype=np.int64)
        values, tallies = np.unique(indices, return_counts=True)
        counts = {
            index_to_bitstring(int(v), n): int(c) for v, c in zip(values, tallies)
        }
        return cls(n=n, counts=counts, seed=seed, shot_log=indices)

    def histogram(self) -> np.ndarray:
        hist = np.zeros(1 << self.n)
        for key, value in self.counts.items():
            hist[bitstring_to_index(key)] += value
        return hist

    def probabilities(self) -> ProbVector:
        total = self.total
        if total == 0:
            raise DomainValueException("empty count table")
        return ProbVector(self.histogram() / total, ProbabilityTag.RAW)

    def subgroups(self, group_size: int) -> List["CountTable"]:
        """Consecutive groups of the shot log; the trailing remainder is dropped"""
        if self.shot_log is None:
            raise DomainValueException("subgrouping needs the ordered shot log")
        if group_size < 1:
            raise DomainValueException("group size must be positive")
        groups = self.shot_log.size // group_size
        return [
            CountTable.from_indices(
                self.n, self.shot_log[g * group_size : (g + 1) * group_size], self.seed
            )
            for g in range(groups)
        ]

    # ===== text io =====

    def to_text(self) -> str:
        """'# n=<N> shots=<total> seed=<seed>' then 'bitstring count' lines"""
        header = f"# n={self.n} shots={self.total} seed={self.seed}"
        body = [
            f"{key} {self.counts[key]}"
            for key in sorted(self.counts, key=bitstring_to_index)
            if self.counts[key] > 0
        ]
        return "\n".join([header] + body) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CountTable":
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines or not lines[0].startswith("#"):
            raise DomainValueException("count table header missing")
        fields = dict(
            item.split("=", 1) for item in lines[0].lstrip("#").split() if "=" in item
        )
        try:
            n = int(fields["n"])
            shots = int(fields["shots"])
        except (KeyError, ValueError) as e:
            raise DomainValueException(f"bad count table header: {lines[0]}") from e
        seed = None if fields.get("seed") in (None, "None") else int(fields["seed"])

        counts: Dict[str, int] = {}
        for line in lines[1:]:
            key, value = line.split()
            counts[key] = counts.get(key, 0) + int(value)
        table = cls(n=n, counts=counts, seed=seed)
        if table.total != shots:
            raise DomainValueException(
                f"count table total {table.total} differs from header shots={shots}"
            )
        return table
