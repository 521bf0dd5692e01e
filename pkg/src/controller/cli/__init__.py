"""
Command-line controller
"""

from .oatsim_cli import OatsimCLI

__all__ = ["OatsimCLI"]
