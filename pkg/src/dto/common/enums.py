"""
Enumeration classes for DTOs
"""

from enum import Enum


class BasisKind(str, Enum):
    """Pure-state basis tag"""

    FULL = "full"  # 2^N bitstrings, bit j = qubit j
    DICKE = "dicke"  # N+1 excitation levels


class OperatorForm(str, Enum):
    """Hamiltonian storage form"""

    FULL_SPARSE = "full_sparse"
    SECTOR_BLOCKED = "sector_blocked"
    DICKE_DIAGONAL = "dicke_diagonal"


class ModelKind(str, Enum):
    """CLI --model choices"""

    H1 = "h1"  # qubits + bus resonator
    H2 = "h2"  # effective dispersive
    OAT = "oat"  # uniform twisting with the Stark term
    OAT_IDEAL = "oat_ideal"  # −λ(J_z² − J_z), no linear term


class ProbabilityTag(str, Enum):
    RAW = "raw"
    QUASI = "quasi"
    SIMPLEX = "simplex"


class ReadoutProfile(str, Enum):
    """Which readout fidelity column of the device table to use"""

    CAT = "cat"
    GHZ = "ghz"


class ValidationLevel(str, Enum):
    FAST = "fast"
    FULL = "full"
