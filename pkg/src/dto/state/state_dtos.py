"""
상태/회전 관련 DTO classes
"""

import math
from typing import List

from pydantic import Field, field_validator

from ..common.base_dto import BaseDTO
from ..common.enums import BasisKind


class BlochDirection(BaseDTO):
    """(θ, φ) on the Bloch sphere; θ is clamped to [0, π], φ kept as given"""

    theta: float = Field(..., description="Polar angle (rad)")
    phi: float = Field(0.0, description="Azimuth (rad), compared modulo 2π")

    @field_validator("theta")
    @classmethod
    def clamp_theta(cls, value: float) -> float:
        return min(max(float(value), 0.0), math.pi)

    @property
    def phi_wrapped(self) -> float:
        """φ in [−π, π)"""
        return (self.phi + math.pi) % (2.0 * math.pi) - math.pi


class LocalRotation(BaseDTO):
    """
    Single-qubit pulse: exp(−i β/2 (cos α X + sin α Y)) followed by a z-phase.

    z_phase multiplies |1⟩ by e^{i z_phase} (frame phase).
    """

    alpha: float = Field(0.0, description="Equatorial axis angle α (rad)")
    beta: float = Field(0.0, description="Rotation angle β (rad)")
    z_phase: float = Field(0.0, description="Frame phase applied after the pulse")

    @classmethod
    def x90(cls) -> "LocalRotation":
        return cls(alpha=0.0, beta=math.pi / 2)

    @classmethod
    def y90(cls) -> "LocalRotation":
        return cls(alpha=math.pi / 2, beta=math.pi / 2)

    @classmethod
    def axis_to_pole(cls, theta: float, phi: float) -> "LocalRotation":
        """Rotation taking direction (θ, φ) to +z"""
        return cls(alpha=phi - math.pi / 2, beta=theta)

    @classmethod
    def axis_to_south_pole(cls, theta: float, phi: float) -> "LocalRotation":
        """Rotation taking direction (θ, φ) to −z"""
        return cls(alpha=phi + math.pi / 2, beta=math.pi - theta)


class StateExportDTO(BaseDTO):
    """JSON state export: {"basis", "n", "re", "im"}"""

    basis: BasisKind = Field(..., description="full | dicke")
    n: int = Field(..., ge=1, description="Qubit count N")
    re: List[float] = Field(..., description="Real parts of the amplitudes")
    im: List[float] = Field(..., description="Imaginary parts of the amplitudes")
