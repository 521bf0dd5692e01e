"""Configuration settings for OATSim."""

from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.dto.common.enums import ModelKind, ValidationLevel

# .env 파일 로드
load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parents[2]


class Settings(BaseSettings):
    """Application settings. Every field can be overridden with OATSIM_<FIELD>."""

    model_config = SettingsConfigDict(
        env_prefix="OATSIM_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging settings
    log_level: str = "INFO"
    log_to_file: bool = False
    log_dir: str = "logs"

    # Device settings
    device_path: str = str(PROJECT_ROOT / "device" / "table_s1.json")
    subset: str = "all"
    detuning_mhz: float = -330.0  # GHZ runs
    cat_detuning_mhz: float = -470.0  # Q-function runs

    # Propagation settings
    default_tol: float = Field(1e-10, ge=1e-14, le=1e-6)
    krylov_min_dim: int = 10
    krylov_max_dim: int = 40
    krylov_max_steps: int = 100_000
    dense_fallback_dim: int = 4096
    h1_max_qubits: int = 14
    photon_cutoff: int = Field(2, ge=1)

    # Q-function grid
    grid_theta: int = 61
    grid_phi: int = 121

    # Measurement settings
    shots_per_basis: int = 30  # shots = shots_per_basis * 2^N
    group_shots_per_basis: int = 5  # subgroup = group_shots_per_basis * 2^N
    gamma_points: int = 41
    seed: int = 20190425

    # Run settings
    threads: int = Field(1, ge=1)
    output_dir: str = "out"
    validation_config: str = str(PROJECT_ROOT / "config" / "validation.yaml")
    metrics_textfile: bool = True

    # CLI flag defaults (OATSIM_N, OATSIM_MODEL, OATSIM_TIMES, ...); a flag wins
    n: Optional[int] = Field(None, ge=1)
    model: ModelKind = ModelKind.OAT
    coupling_mhz: Optional[float] = None
    crosstalk: bool = False
    times: Optional[str] = None
    shots: Optional[str] = None  # integer or "exact"; unset means shots_for(N)
    confusion: bool = False
    correct: bool = True
    frame_phase: str = "auto"
    validation_level: ValidationLevel = ValidationLevel.FAST

    def shots_for(self, qubit_count: int) -> int:
        """Sampling size per measurement setting, about 30 x 2^N."""
        return self.shots_per_basis * 2**qubit_count

    def group_size_for(self, qubit_count: int) -> int:
        return self.group_shots_per_basis * 2**qubit_count


_current_settings: Settings | None = None


def get_settings() -> Settings:
    """현재 설정 인스턴스 (서비스는 호출 시점에 읽는다)"""
    global _current_settings
    if _current_settings is None:
        _current_settings = Settings()
    return _current_settings


def reload_settings(**overrides: Any) -> Settings:
    """설정을 다시 읽고 덮어쓰기 값을 적용 (CLI, 테스트용)"""
    global _current_settings, settings
    _current_settings = Settings(**overrides)
    settings = _current_settings
    return _current_settings


# Global settings instance
settings = get_settings()
