"""
Measurement pipeline service
"""

from .counts import CountTable
from .ghz_experiment_service import (
    GhzExperimentResult,
    GhzExperimentService,
    GhzRunParameters,
    canonical_ghz_target,
    expected_raw_fringe_phase,
    ghz_experiment_service,
    zone_three_rotation,
)
from .measurement_service import MeasurementService, measurement_service
from .readout import ConfusionModel, ProbVector, SimplexProjector
from .sampling import flip_shots, sample, sample_outcomes

__all__ = [
    "ConfusionModel",
    "CountTable",
    "GhzExperimentResult",
    "GhzExperimentService",
    "GhzRunParameters",
    "MeasurementService",
    "ProbVector",
    "SimplexProjector",
    "canonical_ghz_target",
    "expected_raw_fringe_phase",
    "flip_shots",
    "ghz_experiment_service",
    "measurement_service",
    "sample",
    "sample_outcomes",
    "zone_three_rotation",
]
