"""
인수 테스트 (느림)
- 빠른 검증 레벨과 전체 검증 레벨, N=20 고양이 상태 스냅샷, 10 큐비트 샘플링 GHZ
실행: pytest -m slow
"""

import json

import pytest

from main import main
from src.dto.common.enums import ModelKind, ValidationLevel
from src.service.measurement import GhzRunParameters, ghz_experiment_service
from src.service.validation import oracle_suite_service

pytestmark = pytest.mark.slow


def test_fast_validation_level_passes():
    results = oracle_suite_service.run(ValidationLevel.FAST)
    assert len(results) == len(oracle_suite_service.oracles)
    assert all(r.passed for r in results), oracle_suite_service.format_table(results)


def test_full_validation_level_passes():
    """N=10 Dicke 대 섹터, N=3..8 패리티 법칙, N=10 판독 왕복 100 벡터"""
    plan = {entry.name: entry.params for entry in oracle_suite_service.load_plan(ValidationLevel.FULL)}
    assert plan["dicke_vs_sector"]["n"] == 10
    assert plan["parity_law"]["n_values"] == [3, 4, 5, 6, 7, 8]
    assert plan["readout_roundtrip"]["n"] == 10 and plan["readout_roundtrip"]["vectors"] == 100

    results = oracle_suite_service.run(ValidationLevel.FULL)
    assert [r.name for r in results] == list(oracle_suite_service.oracles)
    assert all(r.level == "full" for r in results)
    assert all(r.passed for r in results), oracle_suite_service.format_table(results)
    oracle_suite_service.require_pass(results)


def test_twenty_qubit_cat_snapshots(tmp_path):
    out = tmp_path / "cats"
    argv = ["qfunc", "--n", "20", "--times", "cat:5,4,3,2", "--out", str(out)]
    assert main(argv) == 0
    lobes = json.loads((out / "lobes.json").read_text(encoding="utf-8"))
    assert [row["lobes"] for row in lobes] == [5, 4, 3, 2]
    times = [row["time_ns"] for row in lobes]
    assert times == sorted(times)


def test_ten_qubit_sampled_ghz(device):
    n = 10
    result = ghz_experiment_service.run_ghz_experiment(
        device,
        GhzRunParameters(
            subset=tuple(range(n)),
            model=ModelKind.OAT,
            detuning_mhz=-330.0,
            shots=30 * 2**n,
            seed=20190425,
            confusion=True,
        ),
    )
    report = result.report
    assert report.subgroups == 6
    assert report.fidelity_err is not None
    # corrected ideal twisting stays well above the witness bound
    assert report.fidelity - 3 * report.fidelity_err > 0.5
    assert report.genuine
