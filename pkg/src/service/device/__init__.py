"""
Device model service
"""

from .device_model_service import DeviceModelService, device_model_service

__all__ = ["DeviceModelService", "device_model_service"]
