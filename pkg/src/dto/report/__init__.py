"""
Report DTOs Package
"""

from .report_dtos import (
    DurationScanRowDTO,
    FringeFitDTO,
    GhzReportDTO,
    LobeSummaryDTO,
    OraclePlanEntryDTO,
    OracleResultDTO,
    OutputFileDTO,
    ParityReportDTO,
    RunManifestDTO,
)

__all__ = [
    "DurationScanRowDTO",
    "FringeFitDTO",
    "GhzReportDTO",
    "LobeSummaryDTO",
    "OraclePlanEntryDTO",
    "OracleResultDTO",
    "OutputFileDTO",
    "ParityReportDTO",
    "RunManifestDTO",
]
