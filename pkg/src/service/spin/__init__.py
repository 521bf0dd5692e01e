"""
Spin state service
"""

from .pure_state import PureState, bit_weights, log_binomials, sqrt_binomials
from .spin_state_service import (
    SpinStateService,
    bitstring_to_index,
    index_to_bitstring,
    rotation_matrix,
    spin_state_service,
)

__all__ = [
    "PureState",
    "SpinStateService",
    "bit_weights",
    "bitstring_to_index",
    "index_to_bitstring",
    "log_binomials",
    "rotation_matrix",
    "spin_state_service",
    "sqrt_binomials",
]
