"""
Controllers module: the oatsim command-line surface.
"""

from . import cli

__all__ = ["cli"]
