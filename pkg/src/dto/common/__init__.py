"""
Common DTOs Package
공통으로 사용되는 데이터 전송 객체들
"""

from .base_dto import BaseDTO
from .enums import (
    BasisKind,
    ModelKind,
    OperatorForm,
    ProbabilityTag,
    ReadoutProfile,
    ValidationLevel,
)

__all__ = [
    # Base
    "BaseDTO",
    # Enums
    "BasisKind",
    "ModelKind",
    "OperatorForm",
    "ProbabilityTag",
    "ReadoutProfile",
    "ValidationLevel",
]
