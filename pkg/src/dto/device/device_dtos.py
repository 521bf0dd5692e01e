"""
디바이스 파라미터 DTO classes (큐비트별 결합, 주파수, 판독 충실도)
"""

from typing import List, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from src.core.constants import DeviceConstants
from ..common.base_dto import BaseDTO


class QubitRecordDTO(BaseDTO):
    """One row of the device table"""

    id: str = Field(..., description="Qubit label, e.g. Q1")
    g_mhz: float = Field(..., gt=0, description="Bus coupling g_j/2π (MHz)")
    omega_ghz: float = Field(..., description="Idle frequency ω_j/2π (GHz)")
    crosstalk_next_mhz: float = Field(
        ..., description="Crosstalk λ^c_{j,j+1}/2π to the next qubit (MHz, cyclic)"
    )
    f0: float = Field(..., ge=0.0, le=1.0, description="P(read 0 | prepared 0)")
    f1: float = Field(..., ge=0.0, le=1.0, description="P(read 1 | prepared 1)")
    t1_us: float = Field(..., gt=0, description="Energy relaxation time (µs)")
    t2s_us: float = Field(..., gt=0, description="Ramsey dephasing time (µs)")

    # 동역학에는 쓰이지 않는 저장용 필드
    omega_max_ghz: Optional[float] = Field(
        default=None, description="Sweet-point maximum frequency (GHz)"
    )
    omega_max_approx: bool = Field(
        default=False, description="Table marks the maximum frequency with '~'"
    )
    omega_r_ghz: Optional[float] = Field(
        default=None, description="Readout resonator frequency (GHz)"
    )
    omega_m_ghz: Optional[float] = Field(
        default=None, description="Frequency at the start of readout (GHz)"
    )
    omega_m_ghz_ghz_run: Optional[float] = Field(
        default=None, description="Readout frequency used in the GHZ runs (GHz)"
    )
    f0_ghz_run: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    f1_ghz_run: Optional[float] = Field(default=None, ge=0.0, le=1.0)


class DeviceConfig(BaseDTO):
    """Immutable device table; safe for shared read-only access"""

    resonator_ghz: float = Field(..., gt=0, description="Bus resonator ω_B/2π (GHz)")
    qubits: Tuple[QubitRecordDTO, ...] = Field(..., description="One record per qubit")

    @field_validator("qubits")
    @classmethod
    def check_qubit_count(cls, value):
        if not (DeviceConstants.MIN_QUBITS <= len(value) <= DeviceConstants.MAX_QUBITS):
            raise ValueError(
                f"qubit count {len(value)} outside "
                f"[{DeviceConstants.MIN_QUBITS}, {DeviceConstants.MAX_QUBITS}]"
            )
        return value

    @model_validator(mode="after")
    def check_unique_ids(self):
        ids = [q.id for q in self.qubits]
        if len(set(ids)) != len(ids):
            raise ValueError("qubit ids must be unique")
        return self

    @property
    def qubit_count(self) -> int:
        return len(self.qubits)

    @property
    def ids(self) -> List[str]:
        return [q.id for q in self.qubits]

    def couplings_mhz(self, subset: Optional[List[int]] = None) -> np.ndarray:
        rows = self._rows(subset)
        return np.array([q.g_mhz for q in rows], dtype=float)

    def crosstalk_mhz(self, subset: Optional[List[int]] = None) -> np.ndarray:
        """λ^c_{j,j+1} for each selected qubit (entry j couples j and j+1 cyclically)"""
        rows = self._rows(subset)
        return np.array([q.crosstalk_next_mhz for q in rows], dtype=float)

    def _rows(self, subset: Optional[List[int]]) -> List[QubitRecordDTO]:
        if subset is None:
            return list(self.qubits)
        return [self.qubits[i] for i in subset]


class DispersiveParams(BaseDTO):
    """Effective-coupling quantities for one qubit subset and detuning"""

    detuning_mhz: float = Field(..., description="Δ/2π = ω_q − ω_B (MHz), negative below")
    subset: Tuple[int, ...] = Field(..., description="Ordered 0-based qubit indices")
    mean_coupling_mhz: float = Field(..., description="λ̄/2π = mean g_j g_k / Δ")
    validity_ratio: float = Field(..., description="|Δ| / max g_j")
    dispersive_ok: bool = Field(..., description="validity_ratio >= 5")
