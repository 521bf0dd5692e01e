"""
Cross-path validation (oracle suite)
"""

from .oracle_suite_service import OracleSuiteService, oracle_suite_service

__all__ = ["OracleSuiteService", "oracle_suite_service"]
