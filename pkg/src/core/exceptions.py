"""글로벌 예외 처리 시스템 - 모든 예외를 중앙에서 일관성 있게 처리"""

import functools
import traceback
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Dict, Optional

from .logger import get_logger


class ErrorCategory(Enum):
    """Categorize errors to determine the CLI exit code and log handling"""

    USER_INPUT_ERROR = "user_input_error"  # invalid flags or arguments
    CONFIGURATION_ERROR = "configuration_error"  # device document problems
    DOMAIN_ERROR = "domain_error"  # out-of-range physics parameters
    BASIS_MISMATCH_ERROR = "basis_mismatch_error"  # state/operator form clash
    DIMENSION_BUDGET_ERROR = "dimension_budget_error"  # Hilbert space too large
    NUMERIC_CONVERGENCE_ERROR = "numeric_convergence_error"
    VALIDATION_ERROR = "validation_error"  # cross-path oracle failed
    SYSTEM_ERROR = "system_error"
    UNKNOWN_ERROR = "unknown_error"


class ErrorSeverity(Enum):
    """오류 심각도 레벨"""

    LOW = "LOW"
    MEDIUM = "MEDIUM"
    HIGH = "HIGH"
    CRITICAL = "CRITICAL"


# CLI exit codes per category
EXIT_CODES: Dict[ErrorCategory, int] = {
    ErrorCategory.USER_INPUT_ERROR: 2,
    ErrorCategory.CONFIGURATION_ERROR: 2,
    ErrorCategory.DOMAIN_ERROR: 2,
    ErrorCategory.BASIS_MISMATCH_ERROR: 2,
    ErrorCategory.DIMENSION_BUDGET_ERROR: 2,
    ErrorCategory.VALIDATION_ERROR: 3,
    ErrorCategory.NUMERIC_CONVERGENCE_ERROR: 4,
    ErrorCategory.SYSTEM_ERROR: 1,
    ErrorCategory.UNKNOWN_ERROR: 1,
}


class CustomException(Exception):
    """
    애플리케이션 전용 기본 예외 클래스
    - 에러 category와 상세 정보를 포함
    - 사용자에게 보여줄 message와 내부 로그용 message 분리
    """

    def __init__(
        self,
        message: str,
        category: ErrorCategory = ErrorCategory.UNKNOWN_ERROR,
        user_message: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        original_exception: Optional[Exception] = None,
    ):
        """
        Args:
            message: 내부 로깅용 상세 message
            category: 에러 분류 category
            user_message: 사용자에게 표시할 message
            details: 추가 디버깅 정보
            original_exception: 원본 예외 객체 (체이닝용)
        """
        super().__init__(message)
        self.message = message
        self.category = category
        self.user_message = user_message or self._generate_default_user_message()
        self.details = details or {}
        self.original_exception = original_exception
        self.occurrence_time = datetime.now()

    def _generate_default_user_message(self) -> str:
        message_map = {
            ErrorCategory.USER_INPUT_ERROR: "Invalid command-line arguments.",
            ErrorCategory.CONFIGURATION_ERROR: "Device configuration is invalid.",
            ErrorCategory.DOMAIN_ERROR: "Parameter outside its valid range.",
            ErrorCategory.BASIS_MISMATCH_ERROR: "State and operator bases differ.",
            ErrorCategory.DIMENSION_BUDGET_ERROR: "Problem size exceeds the budget.",
            ErrorCategory.NUMERIC_CONVERGENCE_ERROR: "Numerical method did not converge.",
            ErrorCategory.VALIDATION_ERROR: "Validation oracle failed.",
            ErrorCategory.SYSTEM_ERROR: "Internal error.",
            ErrorCategory.UNKNOWN_ERROR: "Unknown error.",
        }
        return message_map.get(self.category, "Error.")

    @property
    def exit_code(self) -> int:
        return EXIT_CODES.get(self.category, 1)

    def to_dict(self) -> Dict[str, Any]:
        """예외 정보를 딕셔너리로 변환 (로깅/리포트용)"""
        return {
            "category": self.category.value,
            "message": self.message,
            "user_message": self.user_message,
            "details": self.details,
            "occurrence_time": self.occurrence_time.isoformat(),
            "original_exception": (
                str(self.original_exception) if self.original_exception else None
            ),
        }


class UserInputException(CustomException):
    """명령줄 인자 검증 예외"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, category=ErrorCategory.USER_INPUT_ERROR, **kwargs)


class DeviceConfigException(CustomException):
    """디바이스 설정 문서 예외 (누락 필드, 범위 오류, 큐비트 수)"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, category=ErrorCategory.CONFIGURATION_ERROR, **kwargs)


class DomainValueException(CustomException):
    """물리 파라미터 범위 예외 (Δ = 0, m < 2 등)"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, category=ErrorCategory.DOMAIN_ERROR, **kwargs)


class BasisMismatchException(CustomException):
    """상태 기저와 연산자 형태 불일치"""

    def __init__(self, message: str, **kwargs):
        super().__init__(
            message, category=ErrorCategory.BASIS_MISMATCH_ERROR, **kwargs
        )


class DimensionBudgetException(CustomException):
    """힐베르트 공간 차원 예산 초과"""

    def __init__(self, message: str, **kwargs):
        super().__init__(
            message, category=ErrorCategory.DIMENSION_BUDGET_ERROR, **kwargs
        )


class ConvergenceException(CustomException):
    """반복 전파기 수렴 실패"""

    def __init__(self, message: str, **kwargs):
        super().__init__(
            message, category=ErrorCategory.NUMERIC_CONVERGENCE_ERROR, **kwargs
        )


class OracleValidationException(CustomException):
    """교차 검증 오라클 실패"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, category=ErrorCategory.VALIDATION_ERROR, **kwargs)


class GlobalExceptionHandler:
    """
    전역 예외 처리기
    - CLI 서브커맨드 예외를 종료 코드로 변환
    - category 별 통계 수집
    """

    def __init__(self):
        self.logger = get_logger("exceptions")
        self.exception_stats: Dict[str, int] = {}

    def handle_cli_exception(self, exception: Exception, command: str = "") -> int:
        """
        CLI 서브커맨드에서 발생한 예외 처리

        Returns:
            int: process exit code
        """
        error_info = self._analyze_exception(exception)
        severity = self._determine_severity(error_info["category"])

        if severity is ErrorSeverity.CRITICAL:
            log = self.logger.critical
        else:
            log = self.logger.error
        log(
            f"💥 [{severity.value}] {command or 'oatsim'} 실패 "
            f"| category={error_info['category']} | {error_info['message']}"
        )
        if error_info["category"] == ErrorCategory.SYSTEM_ERROR.value:
            self.logger.debug(traceback.format_exc())

        self._update_exception_stats(error_info["category"])

        # metrics 모듈은 로거를 쓰므로 지연 import
        from .metrics import get_metrics_collector

        get_metrics_collector().record_error(error_info["category"])
        return error_info["exit_code"]

    def _analyze_exception(self, exception: Exception) -> Dict[str, Any]:
        if isinstance(exception, CustomException):
            return {
                "category": exception.category.value,
                "message": exception.message,
                "user_message": exception.user_message,
                "exit_code": exception.exit_code,
            }
        if isinstance(exception, (ValueError, TypeError)):
            return {
                "category": ErrorCategory.USER_INPUT_ERROR.value,
                "message": str(exception),
                "user_message": "Invalid input.",
                "exit_code": EXIT_CODES[ErrorCategory.USER_INPUT_ERROR],
            }
        return {
            "category": ErrorCategory.SYSTEM_ERROR.value,
            "message": f"{type(exception).__name__}: {exception}",
            "user_message": "Internal error.",
            "exit_code": EXIT_CODES[ErrorCategory.SYSTEM_ERROR],
        }

    @staticmethod
    def _determine_severity(category: str) -> ErrorSeverity:
        if category == ErrorCategory.SYSTEM_ERROR.value:
            return ErrorSeverity.CRITICAL
        if category in (
            ErrorCategory.NUMERIC_CONVERGENCE_ERROR.value,
            ErrorCategory.VALIDATION_ERROR.value,
        ):
            return ErrorSeverity.HIGH
        return ErrorSeverity.MEDIUM

    def _update_exception_stats(self, category: str):
        self.exception_stats[category] = self.exception_stats.get(category, 0) + 1

    def get_exception_stats(self) -> Dict[str, int]:
        return dict(self.exception_stats)


global_exception_handler = GlobalExceptionHandler()


def safe_execution(function_name: str = ""):
    """
    데코레이터: 함수 실행을 감싸고 예상 밖 예외를 CustomException 으로 변환

    Usage:
        @safe_execution("qgrid_export")
        def write_grid(...):
            ...
    """

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except CustomException:
                raise
            except Exception as e:
                name = function_name or func.__name__
                get_logger("safe_execution").error(f"🛡️  실행 실패 - {name}: {e}")
                raise CustomException(
                    f"Unexpected failure in {name}: {e}",
                    category=ErrorCategory.SYSTEM_ERROR,
                    original_exception=e,
                ) from e

        return wrapper

    return decorator
