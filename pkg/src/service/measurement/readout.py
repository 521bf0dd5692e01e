"""
판독 오차 모델과 확률 벡터
- ConfusionModel: 큐비트별 2×2 열-확률 행렬, 큐비트 단위 적용/역적용 O(N·2^N)
- ProbVector: raw / quasi / simplex 태그가 붙은 2^N 확률
- SimplexProjector: 정렬-임계값 방식의 유클리드 심플렉스 사영 (MLE 전략)
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from src.core.constants import NumericConstants
from src.core.exceptions import DomainValueException
from src.dto.common.enums import ProbabilityTag, ReadoutProfile
from src.dto.device.device_dtos import DeviceConfig
from src.interface.service.service_interfaces import IProbabilityProjector
from src.service.device.device_model_service import device_model_service


@dataclass(frozen=True, eq=False)
class ProbVector:
    """2^N outcome probabilities; index bit j = qubit j"""

    values: np.ndarray
    tag: ProbabilityTag = ProbabilityTag.RAW

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(-1)
        n = values.size.bit_length() - 1
        if values.size == 0 or (1 << n) != values.size:
            raise DomainValueException(f"probability vector length {values.size} != 2^N")
        tag = ProbabilityTag(self.tag)
        if tag == ProbabilityTag.SIMPLEX:
            if values.min() < -NumericConstants.SIMPLEX_TOL or abs(
                values.sum() - 1.0
            ) > NumericConstants.SIMPLEX_TOL:
                raise DomainValueException("simplex-tagged vector is not a distribution")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "tag", tag)

    @property
    def n(self) -> int:
        return self.values.size.bit_length() - 1


def _apply_per_qubit(values: np.ndarray, matrices: Sequence[np.ndarray]) -> np.ndarray:
    """(⊗_j M_j) · p without materializing the 2^N × 2^N matrix"""
    n = len(matrices)
    tensor = values.reshape((2,) * n)
    for qubit, matrix in enumerate(matrices):
        axis = n - 1 - qubit
        tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [axis])), 0, axis)
    return tensor.reshape(-1)


@dataclass(frozen=True)
class ConfusionModel:
    """M_j = [[F0, 1−F1], [1−F0, F1]] (column = true state, row = reported)"""

    fidelities: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        fids = tuple((float(f0), float(f1)) for f0, f1 in self.fidelities)
        if not fids:
            raise DomainValueException("confusion model needs at least one qubit")
        for j, (f0, f1) in enumerate(fids):
            if not (0.0 <= f0 <= 1.0 and 0.0 <= f1 <= 1.0):
                raise DomainValueException(f"qubit {j}: fidelities outside [0, 1]")
            if abs(f0 + f1 - 1.0) < 1e-12:
                raise DomainValueException(
                    f"qubit {j}: singular confusion matrix (F0 + F1 = 1)"
                )
        object.__setattr__(self, "fidelities", fids)

    @classmethod
    def identity(cls, n: int) -> "ConfusionModel":
        return cls(tuple((1.0, 1.0) for _ in range(n)))

    @classmethod
    def from_device(
        cls,
        cfg: DeviceConfig,
        subset: Iterable[int],
        profile: ReadoutProfile = ReadoutProfile.GHZ,
    ) -> "ConfusionModel":
        return cls(
            tuple(device_model_service.readout_fidelities(cfg, list(subset), profile))
        )

    @property
    def n(self) -> int:
        return len(self.fidelities)

    def matrices(self) -> Tuple[np.ndarray, ...]:
        return tuple(
            np.array([[f0, 1.0 - f1], [1.0 - f0, f1]]) for f0, f1 in self.fidelities
        )

    def inverse_matrices(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.linalg.inv(m) for m in self.matrices())

    def _check(self, p: ProbVector):
        if p.n != self.n:
            raise DomainValueException(
                f"confusion model for {self.n} qubits applied to N={p.n} probabilities"
            )

    def apply(self, p: ProbVector) -> ProbVector:
        """Forward readout model; column-stochastic so the sum is preserved"""
        self._check(p)
        return ProbVector(_apply_per_qubit(p.values, self.matrices()), p.tag)

    def correct(self, p: ProbVector) -> ProbVector:
        """(⊗_j M_j⁻¹) · p; the result may leave the simplex"""
        self._check(p)
        return ProbVector(
            _apply_per_qubit(p.values, self.inverse_matrices()), ProbabilityTag.QUASI
        )


class SimplexProjector(IProbabilityProjector):
    """Euclidean projection onto {p ≥ 0, Σp = 1} by sort and threshold"""

    name = "simplex"

    def project(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        total = values.sum()
        if total > 0:
            values = values / total

        ordered = np.sort(values)[::-1]
        shifted = np.cumsum(ordered) - 1.0
        ranks = np.arange(1, values.size + 1)
        support = ordered - shifted / ranks > 0
        rho = int(ranks[support][-1])
        threshold = shifted[rho - 1] / rho
        return np.maximum(values - threshold, 0.0)
