"""
PureState 값 객체와 비트/이항계수 헬퍼
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from src.core.constants import DeviceConstants, NumericConstants
from src.core.exceptions import BasisMismatchException, DomainValueException
from src.dto.common.enums import BasisKind


@lru_cache(maxsize=32)
def bit_weights(n: int) -> np.ndarray:
    """Hamming weight of every index 0 … 2^n − 1 (bit j = qubit j)"""
    index = np.arange(1 << n, dtype=np.int64)
    weights = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        weights += (index >> j) & 1
    weights.setflags(write=False)
    return weights


@lru_cache(maxsize=64)
def log_binomials(n: int) -> np.ndarray:
    """log C(n, k) for k = 0 … n via log-Γ"""
    k = np.arange(n + 1, dtype=float)
    values = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    values.setflags(write=False)
    return values


def sqrt_binomials(n: int) -> np.ndarray:
    return np.exp(0.5 * log_binomials(n))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over the full product basis or the Dicke ladder"""

    basis: BasisKind
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        basis = BasisKind(self.basis)
        object.__setattr__(self, "basis", basis)

        if self.n < DeviceConstants.MIN_QUBITS:
            raise DomainValueException(f"qubit count must be >= 1, got {self.n}")

        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        expected = (1 << self.n) if basis == BasisKind.FULL else self.n + 1
        if amps.size != expected:
            raise BasisMismatchException(
                f"{basis.value}({self.n}) needs {expected} amplitudes, got {amps.size}"
            )

        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-6:
            raise DomainValueException(f"state is not normalized: ‖ψ‖² = {norm}")
        if abs(norm - 1.0) > NumericConstants.NORM_TOL:
            amps = amps / np.sqrt(norm)

        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def is_full(self) -> bool:
        return self.basis == BasisKind.FULL

    def with_amplitudes(self, amplitudes: np.ndarray) -> "PureState":
        return PureState(self.basis, self.n, amplitudes)

    def require(self, basis: BasisKind, operation: str = ""):
        if self.basis != basis:
            raise BasisMismatchException(
                f"{operation or 'operation'} requires {basis.value} basis, "
                f"got {self.basis.value}"
            )

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __repr__(self) -> str:
        return f"PureState({self.basis.value}, n={self.n})"
