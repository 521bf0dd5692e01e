"""
코어 모듈 테스트
- 설정 덮어쓰기, 예외 -> 종료 코드, 메트릭 수집기, 추적 데코레이터
"""

from pathlib import Path

import pytest
from pydantic import ValidationError

from src.core.config import get_settings, reload_settings
from src.core.decorators import track_operation
from src.core.exceptions import (
    BasisMismatchException,
    ConvergenceException,
    CustomException,
    DeviceConfigException,
    DimensionBudgetException,
    DomainValueException,
    ErrorCategory,
    GlobalExceptionHandler,
    OracleValidationException,
    UserInputException,
    safe_execution,
)
from src.core.metrics import get_metrics_collector
from src.dto.common.enums import ModelKind, ValidationLevel


# ===== 설정 =====


def test_settings_defaults():
    settings = get_settings()
    assert settings.detuning_mhz == -330.0
    assert settings.cat_detuning_mhz == -470.0
    assert settings.seed == 20190425
    assert settings.gamma_points == 41
    assert settings.threads == 1
    assert Path(settings.device_path).as_posix().endswith("device/table_s1.json")
    assert Path(settings.device_path).is_file()
    assert settings.n is None and settings.times is None and settings.shots is None
    assert settings.model == ModelKind.OAT
    assert settings.validation_level == ValidationLevel.FAST
    assert settings.frame_phase == "auto" and not settings.confusion and settings.correct


def test_shot_budget_scales_with_the_basis():
    settings = get_settings()
    assert settings.shots_for(3) == 240
    assert settings.group_size_for(3) == 40
    assert settings.shots_for(3) // settings.group_size_for(3) == 6


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("OATSIM_SEED", "7")
    monkeypatch.setenv("OATSIM_THREADS", "3")
    settings = reload_settings()
    assert settings.seed == 7 and settings.threads == 3
    assert get_settings() is settings


def test_explicit_overrides_win(monkeypatch):
    monkeypatch.setenv("OATSIM_SEED", "7")
    assert reload_settings(seed=11).seed == 11


@pytest.mark.parametrize("overrides", [{"threads": 0}, {"default_tol": 1e-3}])
def test_invalid_settings(overrides):
    with pytest.raises(ValidationError):
        reload_settings(**overrides)


# ===== 예외 =====


@pytest.mark.parametrize(
    "exception, code",
    [
        (UserInputException("bad flag"), 2),
        (DeviceConfigException("bad table"), 2),
        (DomainValueException("bad value"), 2),
        (BasisMismatchException("dicke vs full"), 2),
        (DimensionBudgetException("too big"), 2),
        (OracleValidationException("oracle failed"), 3),
        (ConvergenceException("no convergence"), 4),
        (CustomException("boom", category=ErrorCategory.SYSTEM_ERROR), 1),
    ],
)
def test_exit_codes(exception, code):
    assert exception.exit_code == code
    assert GlobalExceptionHandler().handle_cli_exception(exception, "test") == code


def test_plain_exceptions_map_to_codes():
    handler = GlobalExceptionHandler()
    assert handler.handle_cli_exception(ValueError("x")) == 2
    assert handler.handle_cli_exception(RuntimeError("x")) == 1
    assert handler.get_exception_stats() == {"user_input_error": 1, "system_error": 1}


def test_handled_errors_are_counted():
    GlobalExceptionHandler().handle_cli_exception(DomainValueException("x"), "ghz")
    registry = get_metrics_collector().registry
    assert registry.get_sample_value(
        "oatsim_errors_total", {"category": "domain_error"}
    ) == 1.0


def test_exception_to_dict():
    error = DomainValueException("N must be positive", details={"n": 0})
    payload = error.to_dict()
    assert payload["category"] == "domain_error"
    assert payload["details"] == {"n": 0}
    assert payload["message"] == "N must be positive"


def test_safe_execution_wraps_unexpected_errors():
    @safe_execution("divide")
    def divide(a, b):
        return a / b

    assert divide(4, 2) == 2
    with pytest.raises(CustomException) as info:
        divide(1, 0)
    assert info.value.category == ErrorCategory.SYSTEM_ERROR
    assert isinstance(info.value.original_exception, ZeroDivisionError)


def test_safe_execution_passes_custom_exceptions():
    @safe_execution()
    def fail():
        raise DomainValueException("out of range")

    with pytest.raises(DomainValueException):
        fail()


# ===== 메트릭 =====


def test_track_operation_records_status():
    @track_operation("square")
    def square(x):
        if x < 0:
            raise DomainValueException("negative")
        return x * x

    assert square(3) == 9
    with pytest.raises(DomainValueException):
        square(-1)

    registry = get_metrics_collector().registry
    labels = {"operation": "square"}
    assert registry.get_sample_value(
        "oatsim_operations_total", {**labels, "status": "success"}
    ) == 1.0
    assert registry.get_sample_value(
        "oatsim_operations_total", {**labels, "status": "error"}
    ) == 1.0
    assert registry.get_sample_value("oatsim_operation_duration_seconds_count", labels) == 2.0


def test_krylov_and_shot_counters():
    collector = get_metrics_collector()
    collector.record_krylov_step("full", 12)
    collector.record_krylov_step("full", 30, accepted=False)
    collector.record_shots(500)
    registry = collector.registry
    assert registry.get_sample_value("oatsim_krylov_steps_total", {"form": "full"}) == 1.0
    assert registry.get_sample_value(
        "oatsim_krylov_rejected_steps_total", {"form": "full"}
    ) == 1.0
    assert registry.get_sample_value("oatsim_shots_sampled_total") == 500.0


def test_metrics_textfile(tmp_path):
    collector = get_metrics_collector()
    collector.record_shots(10)
    path = collector.write_textfile(tmp_path / "metrics.prom")
    text = path.read_text(encoding="utf-8")
    assert "oatsim_shots_sampled_total 10.0" in text
    assert collector.export_text().decode() == text
