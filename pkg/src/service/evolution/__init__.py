"""
Time evolution service
"""

from .evolution_service import EvolutionService, Schedule, evolution_service
from .propagation_report import PropagationReport, StepRecord
from .propagators import DenseEigenPropagator, DickePhasePropagator, LanczosPropagator

__all__ = [
    "DenseEigenPropagator",
    "DickePhasePropagator",
    "EvolutionService",
    "LanczosPropagator",
    "PropagationReport",
    "Schedule",
    "StepRecord",
    "evolution_service",
]
