"""
Core module providing fundamental system components.

This module contains the essential infrastructure components:
- Configuration management
- Logging system
- Exception hierarchy and exit codes
- Prometheus metrics
"""

from .config import Settings, get_settings, reload_settings
from .logger import initialize_logging_system, get_logger, logger_manager
from .metrics import get_metrics_collector

__all__ = [
    # Configuration
    "Settings",
    "get_settings",
    "reload_settings",
    # Logging
    "initialize_logging_system",
    "get_logger",
    "logger_manager",
    # Metrics
    "get_metrics_collector",
]
