"""
실행 산출물 관리 서비스
- manifest.json 을 데이터 파일보다 먼저 기록하고 `incomplete` 마커를 남긴다
- 완료 시 모든 출력 파일의 sha256 을 매니페스트에 기록하고 마커를 삭제
- metrics.prom (prometheus 텍스트 형식) 은 진단용이라 해시 목록에서 제외
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from src.core.config import get_settings
from src.core.exceptions import CustomException, ErrorCategory
from src.core.logger import get_logger
from src.core.metrics import get_metrics_collector
from src.dto.common.base_dto import BaseDTO
from src.dto.report.report_dtos import OutputFileDTO, RunManifestDTO

logger = get_logger("services.artifacts")

MANIFEST_NAME = "manifest.json"
INCOMPLETE_MARKER = "incomplete"
METRICS_NAME = "metrics.prom"
TOOL_VERSION = "0.1.0"


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class RunArtifacts:
    """
    One run's output directory.

    Usage:
        with run_artifact_service.open_run(out, "qfunc", params) as run:
            run.write_text("grid_t0.csv", csv)
    """

    def __init__(self, out_dir: Path, manifest: RunManifestDTO):
        self.out_dir = out_dir
        self.manifest = manifest
        self.outputs: List[Path] = []
        self.finalized = False

    @property
    def marker_path(self) -> Path:
        return self.out_dir / INCOMPLETE_MARKER

    @property
    def manifest_path(self) -> Path:
        return self.out_dir / MANIFEST_NAME

    def start(self) -> "RunArtifacts":
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.marker_path.write_text(f"{self.manifest.subcommand}\n", encoding="utf-8")
        self.manifest_path.write_text(self.manifest.to_json() + "\n", encoding="utf-8")
        logger.debug(f"📝 매니페스트 선기록: {self.manifest_path}")
        return self

    # ===== 출력 =====

    def write_text(self, name: str, text: str) -> Path:
        path = self.out_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        # newline="" keeps "\n" on every platform
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        self.outputs.append(path)
        return path

    def write_json(
        self, name: str, payload: Union[BaseDTO, Dict[str, Any], list]
    ) -> Path:
        if isinstance(payload, BaseDTO):
            text = payload.to_json()
        else:
            text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)
        return self.write_text(name, text + "\n")

    # ===== 완료 =====

    def finalize(self) -> RunManifestDTO:
        if self.finalized:
            return self.manifest

        names = sorted({p.relative_to(self.out_dir).as_posix() for p in self.outputs})
        entries = [
            OutputFileDTO(
                path=name,
                sha256=sha256_file(self.out_dir / name),
                bytes=(self.out_dir / name).stat().st_size,
            )
            for name in names
        ]
        self.manifest = self.manifest.model_copy(
            update={"complete": True, "outputs": entries}
        )
        self.manifest_path.write_text(self.manifest.to_json() + "\n", encoding="utf-8")

        if get_settings().metrics_textfile:
            get_metrics_collector().write_textfile(self.out_dir / METRICS_NAME)

        self.marker_path.unlink(missing_ok=True)
        self.finalized = True
        logger.info(f"📦 실행 산출물 {len(entries)}개 기록 완료: {self.out_dir}")
        return self.manifest

    def __enter__(self) -> "RunArtifacts":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is None:
            self.finalize()
        else:
            logger.warning(
                f"⚠️ 실행 중단: {self.out_dir} 에 '{INCOMPLETE_MARKER}' 마커가 남습니다"
            )
        return False


class RunArtifactService:
    """Manifest-first output directories"""

    def open_run(
        self,
        out_dir: Union[str, Path],
        subcommand: str,
        parameters: Dict[str, Any],
        seed: Optional[int] = None,
        input_config_path: Optional[Union[str, Path]] = None,
    ) -> RunArtifacts:
        config_path = Path(input_config_path) if input_config_path else None
        try:
            config_hash = sha256_file(config_path) if config_path else None
        except OSError as e:
            raise CustomException(
                f"cannot hash input config {config_path}: {e}",
                category=ErrorCategory.CONFIGURATION_ERROR,
                original_exception=e,
            ) from e

        manifest = RunManifestDTO(
            subcommand=subcommand,
            parameters=parameters,
            input_config_path=str(config_path) if config_path else None,
            input_config_sha256=config_hash,
            seed=seed,
            tool_version=TOOL_VERSION,
        )
        return RunArtifacts(Path(out_dir), manifest).start()

    @staticmethod
    def verify(out_dir: Union[str, Path]) -> bool:
        """True when the run completed and every listed output still matches its hash"""
        out_dir = Path(out_dir)
        if (out_dir / INCOMPLETE_MARKER).exists():
            return False
        manifest = RunManifestDTO.model_validate_json(
            (out_dir / MANIFEST_NAME).read_text(encoding="utf-8")
        )
        if not manifest.complete:
            return False
        return all(
            (out_dir / entry.path).exists()
            and sha256_file(out_dir / entry.path) == entry.sha256
            for entry in manifest.outputs
        )


run_artifact_service = RunArtifactService()
