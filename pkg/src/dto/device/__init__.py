"""
Device DTOs Package
"""

from .device_dtos import DeviceConfig, DispersiveParams, QubitRecordDTO

__all__ = ["DeviceConfig", "DispersiveParams", "QubitRecordDTO"]
