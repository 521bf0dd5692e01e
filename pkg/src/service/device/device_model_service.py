"""
디바이스 모델 서비스 모듈
- 디바이스 파라미터 문서(JSON/YAML) 로드 및 검증
- 유효 결합(g_j g_k / Δ), cat 시간, 분산 영역 검사
- 큐비트 부분집합 선택과 판독 충실도 프로파일
"""

import json
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml
from pydantic import ValidationError

from src.core.constants import DeviceConstants
from src.core.exceptions import DeviceConfigException, DomainValueException
from src.core.logger import get_logger
from src.dto.common.enums import ReadoutProfile
from src.dto.device.device_dtos import DeviceConfig, DispersiveParams

logger = get_logger("services.device")


class DeviceModelService:
    """Device table ingestion and derived coupling quantities"""

    # ===== 로드 / 저장 =====

    def load_device_config(self, text: str, fmt: str = "json") -> DeviceConfig:
        """Parse and validate a device document (json or yaml text)"""
        try:
            if fmt == "json":
                document = json.loads(text)
            elif fmt in ("yaml", "yml"):
                document = yaml.safe_load(text)
            else:
                raise DeviceConfigException(f"Unsupported device format: {fmt}")
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise DeviceConfigException(
                f"Device document is not valid {fmt}: {e}", original_exception=e
            ) from e

        if not isinstance(document, dict):
            raise DeviceConfigException("Device document must be a mapping")

        try:
            cfg = DeviceConfig.model_validate(document)
        except ValidationError as e:
            problems = [
                f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
                for err in e.errors()
            ]
            raise DeviceConfigException(
                "Device document failed validation: " + "; ".join(problems),
                details={"errors": problems},
                original_exception=e,
            ) from e

        logger.debug(f"📟 디바이스 로드: N={cfg.qubit_count}, ω_B={cfg.resonator_ghz} GHz")
        return cfg

    def load_device_file(self, path: Union[str, Path]) -> DeviceConfig:
        path = Path(path)
        if not path.exists():
            raise DeviceConfigException(f"Device file not found: {path}")
        fmt = "yaml" if path.suffix.lower() in (".yaml", ".yml") else "json"
        return self.load_device_config(path.read_text(encoding="utf-8"), fmt=fmt)

    def save_device_config(self, cfg: DeviceConfig) -> str:
        """JSON text that loads back to an identical DeviceConfig"""
        return json.dumps(cfg.model_dump(mode="json", exclude_none=True), indent=2)

    # ===== 부분집합 / 판독 =====

    def select_subset(self, cfg: DeviceConfig, spec: str = "all") -> List[int]:
        """
        Resolve a subset spec to ordered 0-based indices.

        Accepted: "all", "first:N", "ghz18", or a comma list of 1-based
        positions or qubit ids ("1,2,5" / "Q1,Q2,Q5").
        """
        spec = (spec or "all").strip()
        n = cfg.qubit_count

        if spec == "all":
            return list(range(n))

        if spec == "ghz18":
            return [
                i for i, q in enumerate(cfg.qubits)
                if q.id not in DeviceConstants.GHZ_PARKED_QUBITS
            ]

        if spec.startswith("first:"):
            try:
                count = int(spec.split(":", 1)[1])
            except ValueError as e:
                raise DomainValueException(f"Bad subset spec: {spec}") from e
            if not 1 <= count <= n:
                raise DomainValueException(
                    f"first:{count} outside [1, {n}] for this device"
                )
            return list(range(count))

        indices: List[int] = []
        id_lookup = {q.id.upper(): i for i, q in enumerate(cfg.qubits)}
        for token in (t.strip() for t in spec.split(",")):
            if not token:
                continue
            if token.upper() in id_lookup:
                indices.append(id_lookup[token.upper()])
            elif token.isdigit() and 1 <= int(token) <= n:
                indices.append(int(token) - 1)
            else:
                raise DomainValueException(f"Unknown qubit '{token}' in subset {spec}")

        if not indices:
            raise DomainValueException("Subset is empty")
        if len(set(indices)) != len(indices):
            raise DomainValueException(f"Subset repeats a qubit: {spec}")
        return indices

    def readout_fidelities(
        self,
        cfg: DeviceConfig,
        subset: Optional[Sequence[int]] = None,
        profile: ReadoutProfile = ReadoutProfile.CAT,
    ) -> List[Tuple[float, float]]:
        """(F0, F1) per selected qubit; the ghz profile prefers the GHZ-run values"""
        profile = ReadoutProfile(profile)
        rows = cfg._rows(list(subset) if subset is not None else None)
        result = []
        for q in rows:
            f0, f1 = q.f0, q.f1
            if profile == ReadoutProfile.GHZ:
                f0 = q.f0_ghz_run if q.f0_ghz_run is not None else f0
                f1 = q.f1_ghz_run if q.f1_ghz_run is not None else f1
            result.append((f0, f1))
        return result

    # ===== 유효 결합 =====

    def effective_coupling_matrix(
        self, cfg: DeviceConfig, subset: Sequence[int], detuning_mhz: float
    ) -> np.ndarray:
        """λ_jk = g_j g_k / Δ (MHz); diagonal holds the Stark shift g_j² / Δ"""
        self._check_detuning(detuning_mhz)
        g = self._couplings(cfg, subset)
        return np.outer(g, g) / detuning_mhz

    def dispersive_params(
        self, cfg: DeviceConfig, subset: Sequence[int], detuning_mhz: float
    ) -> DispersiveParams:
        self._check_detuning(detuning_mhz)
        g = self._couplings(cfg, subset)
        ratio = abs(detuning_mhz) / float(g.max())

        if ratio < DeviceConstants.DISPERSIVE_RATIO_WARN:
            logger.warning(
                f"⚠️ 분산 영역 조건 약함: |Δ|/max g = {ratio:.2f} "
                f"(< {DeviceConstants.DISPERSIVE_RATIO_WARN})"
            )

        return DispersiveParams(
            detuning_mhz=detuning_mhz,
            subset=tuple(int(i) for i in subset),
            mean_coupling_mhz=self._mean_pair_product(g) / detuning_mhz,
            validity_ratio=ratio,
            dispersive_ok=ratio >= DeviceConstants.DISPERSIVE_RATIO_WARN,
        )

    def detuning_for_coupling(
        self, cfg: DeviceConfig, subset: Sequence[int], coupling_mhz: float
    ) -> float:
        """Δ such that mean(g_j g_k)/Δ equals the requested λ̄"""
        if coupling_mhz == 0:
            raise DomainValueException("Target coupling must be nonzero")
        g = self._couplings(cfg, subset)
        return self._mean_pair_product(g) / coupling_mhz

    @staticmethod
    def cat_time(m: int, coupling_mhz: float) -> float:
        """t_m = π / (m |2πλ|) in ns"""
        if m < 2:
            raise DomainValueException(f"cat component count must be >= 2, got {m}")
        if coupling_mhz == 0:
            raise DomainValueException("cat time undefined for zero coupling")
        return math.pi / (m * 2.0 * math.pi * abs(coupling_mhz) * 1e-3)

    @staticmethod
    def revival_time(coupling_mhz: float) -> float:
        """Ideal twisting returns to the initial state after |λ|t = 2π"""
        if coupling_mhz == 0:
            raise DomainValueException("revival time undefined for zero coupling")
        return 1e3 / abs(coupling_mhz)

    # ===== helpers =====

    @staticmethod
    def _check_detuning(detuning_mhz: float):
        if detuning_mhz == 0:
            raise DomainValueException("Detuning Δ must be nonzero")

    @staticmethod
    def _couplings(cfg: DeviceConfig, subset: Sequence[int]) -> np.ndarray:
        if subset is None or len(subset) == 0:
            raise DomainValueException("Qubit subset must be nonempty")
        if any(i < 0 or i >= cfg.qubit_count for i in subset):
            raise DomainValueException(f"Subset index out of range: {list(subset)}")
        return cfg.couplings_mhz(list(subset))

    @staticmethod
    def _mean_pair_product(g: np.ndarray) -> float:
        """mean over j<k of g_j g_k; a single qubit falls back to g²"""
        n = len(g)
        if n == 1:
            return float(g[0] ** 2)
        total = float(g.sum())
        return (total * total - float(np.dot(g, g))) / (n * (n - 1))


device_model_service = DeviceModelService()
