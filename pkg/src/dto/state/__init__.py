"""
State DTOs Package
"""

from .state_dtos import BlochDirection, LocalRotation, StateExportDTO

__all__ = ["BlochDirection", "LocalRotation", "StateExportDTO"]
