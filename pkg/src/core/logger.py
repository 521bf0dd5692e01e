"""중앙집중식 로깅 시스템 - 모든 시뮬레이션 로그를 하나의 형식으로 관리"""

import logging
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Optional

from .config import get_settings


class ConsoleLogFormatter(logging.Formatter):
    """
    터미널용 로그 포매터
    - 시간, 레벨, 모듈명, 메시지를 정렬
    - 레벨별 색상 (TTY 에서만)
    """

    color_codes = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
        "RESET": "\033[0m",
    }

    def __init__(self, use_color: bool = True):
        super().__init__()
        self.use_color = use_color

    def format(self, record):
        time_string = datetime.fromtimestamp(record.created).strftime(
            "%Y-%m-%d %H:%M:%S"
        )

        # oatsim.service.evolution -> service.evolution
        module_name = record.name
        if module_name.startswith("oatsim."):
            module_name = module_name[len("oatsim.") :]

        if self.use_color:
            level_color = self.color_codes.get(record.levelname, "")
            reset_color = self.color_codes["RESET"]
        else:
            level_color = reset_color = ""

        formatted_message = (
            f"{time_string} | {level_color}{record.levelname:8}{reset_color} "
            f"| {module_name:24} | {record.getMessage()}"
        )

        if record.exc_info:
            formatted_message += f"\n{self.formatException(record.exc_info)}"

        return formatted_message


class CentralLoggerManager:
    """
    애플리케이션 전체의 로깅을 중앙에서 관리
    - 콘솔(stderr)과 선택적 파일 출력
    - 데이터 파일은 stdout/출력 디렉토리로 가므로 로그는 stderr 로 보낸다
    """

    def __init__(self):
        self.logger_instance: Optional[logging.Logger] = None
        self.log_file_path: Optional[Path] = None
        self.initialized = False

    def initialize_logger_system(
        self, log_level: Optional[str] = None, log_to_file: Optional[bool] = None
    ) -> logging.Logger:
        """
        로깅 시스템을 초기화하고 전역 설정 적용

        Args:
            log_level: 최소 로그 레벨 (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_to_file: 파일에 로그 저장 여부
        """
        settings = get_settings()
        log_level = (log_level or settings.log_level).upper()
        if log_to_file is None:
            log_to_file = settings.log_to_file

        root_logger = logging.getLogger("oatsim")
        root_logger.setLevel(getattr(logging, log_level, logging.INFO))
        root_logger.propagate = False
        root_logger.handlers.clear()

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(
            ConsoleLogFormatter(use_color=sys.stderr.isatty())
        )
        console_handler.setLevel(getattr(logging, log_level, logging.INFO))
        root_logger.addHandler(console_handler)

        if log_to_file:
            self._setup_file_handler(root_logger, settings.log_dir)

        self.logger_instance = root_logger
        self.initialized = True

        root_logger.debug(f"🚀 로거 초기화 완료 (레벨: {log_level})")
        if log_to_file:
            root_logger.debug(f"📁 로그 파일: {self.log_file_path}")

        return root_logger

    def _setup_file_handler(self, root_logger: logging.Logger, log_dir: str):
        log_directory = Path(log_dir)
        log_directory.mkdir(parents=True, exist_ok=True)

        today_date = datetime.now().strftime("%Y%m%d")
        self.log_file_path = log_directory / f"oatsim_{today_date}.log"

        file_handler = logging.FileHandler(self.log_file_path, encoding="utf-8")
        file_handler.setFormatter(ConsoleLogFormatter(use_color=False))
        file_handler.setLevel(logging.DEBUG)
        root_logger.addHandler(file_handler)

    def create_module_logger(self, module_name: str) -> logging.Logger:
        """
        특정 모듈을 위한 로거 생성

        Args:
            module_name: 모듈명 (예: 'service.evolution')
        """
        if not self.initialized:
            self.initialize_logger_system()

        return logging.getLogger(f"oatsim.{module_name}")

    def performance_logger(self, task_name: str) -> "PerformanceMeasurementContext":
        """
        성능 측정용 컨텍스트 매니저

        Usage:
            with logger_manager.performance_logger("qgrid_n20"):
                grid = observables.husimi_q(state, spec)
        """
        return PerformanceMeasurementContext(
            task_name, self.create_module_logger("performance")
        )


class PerformanceMeasurementContext:
    """실행 시간 측정 컨텍스트 매니저"""

    def __init__(self, task_name: str, logger: logging.Logger):
        self.task_name = task_name
        self.logger = logger
        self.start_time: Optional[float] = None
        self.elapsed: float = 0.0

    def __enter__(self):
        self.start_time = time.perf_counter()
        self.logger.debug(f"⏱️  {self.task_name} 시작")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time is None:
            return
        self.elapsed = time.perf_counter() - self.start_time

        if exc_type:
            self.logger.error(f"❌ {self.task_name} 실패 ({self.elapsed:.3f}s)")
        else:
            self.logger.info(f"✅ {self.task_name} 완료 ({self.elapsed:.3f}s)")


# Global logger manager instance
logger_manager = CentralLoggerManager()


def get_logger(module_name: str) -> logging.Logger:
    """
    간편한 로거 생성 함수

    Usage:
        from src.core.logger import get_logger
        logger = get_logger("service.evolution")
    """
    return logger_manager.create_module_logger(module_name)


def initialize_logging_system(
    log_level: Optional[str] = None, log_to_file: Optional[bool] = None
) -> logging.Logger:
    """CLI 시작 시 호출할 로깅 초기화 함수"""
    logger_manager.initialized = False
    return logger_manager.initialize_logger_system(log_level, log_to_file)
