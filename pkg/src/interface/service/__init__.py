"""
Service interfaces defining contracts for swappable numerical strategies.
"""

from .service_interfaces import IPropagator, IProbabilityProjector

__all__ = ["IPropagator", "IProbabilityProjector"]
