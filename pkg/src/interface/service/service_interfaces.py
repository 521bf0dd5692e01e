"""
Service interface definitions
- 전파기(propagator)와 확률 투영(MLE) 전략을 추상 인터페이스로 분리
- 구현체 교체(예: dense vs Krylov, simplex projection vs 다른 MLE)를 쉽게 하기 위함
"""

from abc import ABC, abstractmethod
from typing import Tuple, TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from src.service.hamiltonian.operators import OperatorHandle
    from src.service.evolution.propagation_report import PropagationReport


# ===== Propagation Interfaces =====


class IPropagator(ABC):
    """ψ(t) = e^{−iHt} ψ(0) on raw amplitude vectors of one operator form"""

    name: str = "abstract"

    @abstractmethod
    def supports(self, op: "OperatorHandle") -> bool:
        """Whether this propagator can act with the given operator"""
        pass

    @abstractmethod
    def propagate(
        self, vector: np.ndarray, op: "OperatorHandle", t_ns: float, tol: float
    ) -> Tuple[np.ndarray, "PropagationReport"]:
        """Propagate an amplitude vector (length op.dim) by t_ns nanoseconds"""
        pass


# ===== Measurement Interfaces =====


class IProbabilityProjector(ABC):
    """Strategy turning corrected quasi-probabilities into a valid distribution"""

    name: str = "abstract"

    @abstractmethod
    def project(self, values: np.ndarray) -> np.ndarray:
        """Return a nonnegative vector summing to 1"""
        pass
