"""
검증 오라클 스위트 테스트
- 계획 파일 파싱, 빠른 오라클 실행, 실패 시 종료 코드 3
"""

import math

import pytest

from src.core.constants import ExitCodes
from src.core.exceptions import CustomException, ErrorCategory, OracleValidationException
from src.dto.common.enums import ValidationLevel
from src.dto.report.report_dtos import OraclePlanEntryDTO, OracleResultDTO
from src.service.validation import oracle_suite_service


def write_plan(tmp_path, text: str):
    path = tmp_path / "plan.yaml"
    path.write_text(text, encoding="utf-8")
    return path


def test_default_plan_covers_every_oracle():
    for level in ValidationLevel:
        plan = oracle_suite_service.load_plan(level)
        assert [entry.name for entry in plan] == list(oracle_suite_service.oracles)


def test_plan_entry_comparisons():
    below = OraclePlanEntryDTO(name="x", threshold=1e-9)
    above = OraclePlanEntryDTO(name="x", threshold=0.98, comparison=">=")
    assert below.passes(0.0) and not below.passes(1e-8)
    assert above.passes(0.99) and not above.passes(0.5)


@pytest.mark.parametrize(
    "text",
    [
        "fast:\n  no_such_oracle:\n    threshold: 1\n",
        "fast:\n  witness_interface:\n    comparison: '<='\n",
        "fast:\n  witness_interface:\n    threshold: 1\n    comparison: '=='\n",
        "full:\n  witness_interface:\n    threshold: 0\n",
        "fast: [\n",
    ],
)
def test_malformed_plans(tmp_path, text):
    with pytest.raises(CustomException) as info:
        oracle_suite_service.load_plan(ValidationLevel.FAST, write_plan(tmp_path, text))
    assert info.value.category == ErrorCategory.CONFIGURATION_ERROR
    assert info.value.exit_code == ExitCodes.FLAG_ERROR


def test_missing_plan_file(tmp_path):
    with pytest.raises(CustomException):
        oracle_suite_service.load_plan(ValidationLevel.FAST, tmp_path / "missing.yaml")


def test_quick_oracles_pass():
    only = ["readout_roundtrip", "mle_projection", "witness_interface", "component_overlap"]
    results = oracle_suite_service.run(ValidationLevel.FAST, only=only)
    assert [r.name for r in results] == [
        "component_overlap",
        "readout_roundtrip",
        "mle_projection",
        "witness_interface",
    ]
    assert all(r.passed for r in results), oracle_suite_service.format_table(results)
    assert all(r.level == "fast" for r in results)
    oracle_suite_service.require_pass(results)


def test_cross_model_oracles_pass():
    results = oracle_suite_service.run(
        ValidationLevel.FAST, only=["ghz_emergence", "dicke_vs_sector", "protocol_equivalence"]
    )
    assert len(results) == 3
    assert all(r.passed for r in results), oracle_suite_service.format_table(results)


def test_fringe_phase_rule_oracle_passes():
    (result,) = oracle_suite_service.run(ValidationLevel.FAST, only=["fringe_phase_rule"])
    assert result.passed, oracle_suite_service.format_table([result])
    assert result.measured < 1e-6
    # N = 3..6, two variants, two signs: half of the cases need the π frame
    assert "8 cases need a π frame" in result.detail


def test_failure_raises_with_exit_code_three(tmp_path):
    path = write_plan(
        tmp_path,
        "fast:\n  witness_interface:\n    threshold: -1\n    comparison: '<='\n",
    )
    results = oracle_suite_service.run(ValidationLevel.FAST, path)
    assert not results[0].passed
    with pytest.raises(OracleValidationException) as info:
        oracle_suite_service.require_pass(results)
    assert info.value.exit_code == ExitCodes.VALIDATION_FAILURE
    assert info.value.details["failed"] == ["witness_interface"]


def test_nan_measurement_fails(monkeypatch):
    monkeypatch.setitem(
        oracle_suite_service.oracles, "witness_interface", lambda params: (math.nan, "nan")
    )
    entry = OraclePlanEntryDTO(name="witness_interface", threshold=0.0)
    result = oracle_suite_service.run_entry(entry, ValidationLevel.FAST)
    assert not result.passed
    assert result.detail == "nan"


def test_format_table():
    rows = [
        OracleResultDTO(
            name="parity_law",
            level="fast",
            passed=True,
            measured=1e-12,
            threshold=1e-6,
            comparison="<=",
            seconds=0.5,
        ),
        OracleResultDTO(
            name="h1_vs_h2",
            level="fast",
            passed=False,
            measured=0.9,
            threshold=0.98,
            comparison=">=",
            seconds=1.25,
        ),
    ]
    table = oracle_suite_service.format_table(rows).splitlines()
    assert table[0].startswith("oracle")
    assert "PASS" in table[2] and "parity_law" in table[2]
    assert "FAIL" in table[3] and ">=" in table[3]
