"""
측정 후처리 서비스 모듈
- 판독 오차 적용/보정, MLE(심플렉스 사영), 패리티 계산
- 서브그룹 분할 기반 오차 막대
"""

import math
from typing import List, Optional, Tuple

import numpy as np

from src.core.exceptions import DomainValueException
from src.core.logger import get_logger
from src.dto.common.enums import ProbabilityTag
from src.interface.service.service_interfaces import IProbabilityProjector
from src.service.spin.pure_state import bit_weights
from .counts import CountTable
from .readout import ConfusionModel, ProbVector, SimplexProjector

logger = get_logger("services.measurement")


class MeasurementService:
    """Readout correction and parity statistics"""

    def __init__(self, projector: Optional[IProbabilityProjector] = None):
        self.projector = projector or SimplexProjector()

    @staticmethod
    def apply_confusion(p: ProbVector, model: ConfusionModel) -> ProbVector:
        if p.tag != ProbabilityTag.SIMPLEX:
            p = ProbVector(p.values, ProbabilityTag.SIMPLEX)
        return model.apply(p)

    @staticmethod
    def correct_readout(p: ProbVector, model: ConfusionModel) -> ProbVector:
        return model.correct(p)

    def mle_project(self, q: ProbVector) -> ProbVector:
        """Nearest distribution to the corrected quasi-probabilities"""
        return ProbVector(self.projector.project(q.values), ProbabilityTag.SIMPLEX)

    @staticmethod
    def parity_from_probs(p: ProbVector) -> float:
        """Σ (−1)^{popcount(x)} p[x] = P_even − P_odd"""
        signs = 1 - 2 * (bit_weights(p.n) & 1)
        return float(np.dot(signs, p.values))

    def process(
        self, p: ProbVector, model: Optional[ConfusionModel], correct: bool = True
    ) -> ProbVector:
        """Correction (when a model is given) followed by MLE projection"""
        if model is not None and correct:
            p = self.correct_readout(p, model)
        return self.mle_project(p)

    def subgroup_errorbars(
        self,
        table: CountTable,
        group_size: int,
        model: Optional[ConfusionModel] = None,
        correct: bool = True,
    ) -> Tuple[float, float, List[float]]:
        """
        Mean and population std of the parity over consecutive subgroups;
        every group runs correction -> MLE -> parity on its own.
        """
        if table.shot_log is None or table.shot_log.size < 2 * group_size:
            size = 0 if table.shot_log is None else table.shot_log.size
            raise DomainValueException(
                f"need at least 2 groups of {group_size} shots, have {size}"
            )
        values = [
            self.parity_from_probs(self.process(g.probabilities(), model, correct))
            for g in table.subgroups(group_size)
        ]
        return float(np.mean(values)), float(np.std(values)), values

    @staticmethod
    def binomial_parity_std(parity: float, shots: int) -> float:
        """Std of a ±1 estimator with mean `parity` over `shots` draws"""
        return math.sqrt(max(0.0, 1.0 - parity * parity) / shots)


measurement_service = MeasurementService()
