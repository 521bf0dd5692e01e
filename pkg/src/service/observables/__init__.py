"""
Observables service
"""

from .export_service import (
    parity_curve_to_csv,
    parity_report,
    qgrid_from_csv,
    qgrid_to_csv,
    qgrid_to_json,
)
from .observables_service import (
    CollectiveMoments,
    ObservablesService,
    ParityCurve,
    QGrid,
    grid_axes,
    observables_service,
)

__all__ = [
    "CollectiveMoments",
    "ObservablesService",
    "ParityCurve",
    "QGrid",
    "grid_axes",
    "observables_service",
    "parity_curve_to_csv",
    "parity_report",
    "qgrid_from_csv",
    "qgrid_to_csv",
    "qgrid_to_json",
]
