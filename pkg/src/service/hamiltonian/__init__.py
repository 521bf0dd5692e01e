"""
Hamiltonian builders and operator handles
"""

from .hamiltonian_service import HamiltonianService, crosstalk_ring, hamiltonian_service
from .operators import OperatorHandle, ResonatorSpec

__all__ = [
    "HamiltonianService",
    "OperatorHandle",
    "ResonatorSpec",
    "crosstalk_ring",
    "hamiltonian_service",
]
