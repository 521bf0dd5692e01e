"""
리포트/매니페스트 DTO classes (JSON 출력 형식)
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import Field

from ..common.base_dto import BaseDTO


class FringeFitDTO(BaseDTO):
    """Parity fringe fit a·cos Nγ + b·sin Nγ + c"""

    amplitude: float = Field(..., ge=0, description="A = sqrt(a² + b²) = 2|ρ_{0…0,1…1}|")
    phase: float = Field(..., description="φ_fit = atan2(−b, a)")
    frequency: int = Field(..., description="Fixed fringe frequency N")
    offset: float = Field(..., description="Constant term c")
    residual_rms: float = Field(..., ge=0, description="Root-mean-square residual")


class ParityReportDTO(BaseDTO):
    """{gamma[], parity[], err[], A, phi, residual}"""

    gamma: List[float]
    parity: List[float]
    err: Optional[List[float]] = None
    A: float
    phi: float
    residual: float


class GhzReportDTO(BaseDTO):
    """End-to-end GHZ experiment result"""

    n: int
    model: str
    subset: List[int]
    detuning_mhz: Optional[float] = None
    coupling_mhz: float = Field(..., description="λ̄/2π used for the run (MHz)")
    duration_ns: float
    shots: Optional[int] = Field(None, description="Shots per setting; None = exact")
    seed: Optional[int] = None
    confusion: bool
    corrected: bool
    frame_phase: float = Field(..., description="Uniform frame phase applied (rad)")
    frame_overlap: float = Field(..., description="|⟨target|state⟩|² after framing")
    rho_00: float
    rho_11: float
    off_diagonal: float = Field(..., description="|ρ_{0…0,1…1}| = A/2")
    fidelity: float
    genuine: bool = Field(..., description="F > 0.5")
    fringe: FringeFitDTO
    raw_fringe_phase: Optional[float] = Field(
        None, description="Fringe phase before frame calibration"
    )
    rho_00_err: Optional[float] = None
    rho_11_err: Optional[float] = None
    fidelity_err: Optional[float] = None
    amplitude_err: Optional[float] = None
    subgroups: Optional[int] = None


class DurationScanRowDTO(BaseDTO):
    duration_ns: float
    ghz_overlap: float


class LobeSummaryDTO(BaseDTO):
    time_ns: float
    lobes: int
    q_max: float
    squeezing_xi2: Optional[float] = None
    file: str


class OracleResultDTO(BaseDTO):
    """One row of the validation pass/fail table"""

    name: str
    level: str
    passed: bool
    measured: float
    threshold: float
    comparison: str = Field(..., description="'<=' or '>='")
    seconds: float
    detail: str = ""


class OutputFileDTO(BaseDTO):
    path: str
    sha256: str
    bytes: int


class RunManifestDTO(BaseDTO):
    """Reproducibility manifest written before and after every run"""

    subcommand: str
    parameters: Dict[str, Any]
    input_config_path: Optional[str] = None
    input_config_sha256: Optional[str] = None
    seed: Optional[int] = None
    tool_version: str
    complete: bool = False
    outputs: List[OutputFileDTO] = Field(default_factory=list)


class OraclePlanEntryDTO(BaseDTO):
    """One oracle of a validation level as read from config/validation.yaml"""

    name: str
    threshold: float
    comparison: Literal["<=", ">="] = "<="
    params: Dict[str, Any] = Field(default_factory=dict)

    def passes(self, measured: float) -> bool:
        if self.comparison == "<=":
            return measured <= self.threshold
        return measured >= self.threshold
