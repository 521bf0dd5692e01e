"""
GHZ 실험 파이프라인 테스트
- 영역 I–IV 시퀀스, 프레임 위상 보정, 판독 오차 보정, 샘플링 오차 막대
"""

import math

import numpy as np
import pytest

from src.core.exceptions import DomainValueException
from src.dto.common.enums import ModelKind
from src.dto.state.state_dtos import LocalRotation
from src.service.device.device_model_service import device_model_service
from src.service.measurement import (
    GhzRunParameters,
    canonical_ghz_target,
    expected_raw_fringe_phase,
    ghz_experiment_service,
    zone_three_rotation,
)
from src.service.observables.observables_service import observables_service
from src.service.spin.spin_state_service import spin_state_service


def test_zone_three_axis_alternates():
    assert zone_three_rotation(3) == LocalRotation.x90()
    assert zone_three_rotation(4) == LocalRotation.y90()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_canonical_target_gives_a_quarter_turn_fringe(n):
    """영역 III 이후 프린지 cos(Nγ + π/2)"""
    ghz = spin_state_service.apply_uniform_rotation(
        canonical_ghz_target(n), zone_three_rotation(n)
    )
    assert observables_service.corner_populations(ghz) == pytest.approx((0.5, 0.5))
    curve = observables_service.parity_curve(ghz, observables_service.gamma_grid(41))
    fit = observables_service.fit_fringe(curve, n)
    assert fit.amplitude == pytest.approx(1.0, abs=1e-10)
    assert fit.phase == pytest.approx(math.pi / 2, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_exact_oat_run_reaches_an_ideal_ghz(device, n):
    subset = tuple(range(n))
    result = ghz_experiment_service.run_ghz_experiment(
        device, GhzRunParameters(subset=subset, model=ModelKind.OAT, detuning_mhz=-330.0)
    )
    report = result.report
    assert report.shots is None and report.seed is None
    assert report.frame_overlap == pytest.approx(1.0, abs=1e-9)
    assert report.rho_00 == pytest.approx(0.5, abs=1e-9)
    assert report.rho_11 == pytest.approx(0.5, abs=1e-9)
    assert report.fringe.amplitude == pytest.approx(1.0, abs=1e-9)
    assert report.fringe.phase == pytest.approx(math.pi / 2, abs=1e-6)
    assert report.fidelity == pytest.approx(1.0, abs=1e-9)
    assert report.genuine
    assert result.tables == []
    # default duration is the two-component cat time
    assert report.duration_ns == pytest.approx(
        device_model_service.cat_time(2, report.coupling_mhz)
    )


def test_uncalibrated_frame_loses_overlap(device):
    params = dict(subset=(0, 1, 2), model=ModelKind.OAT, detuning_mhz=-330.0)
    auto = ghz_experiment_service.run_ghz_experiment(device, GhzRunParameters(**params))
    fixed = ghz_experiment_service.run_ghz_experiment(
        device, GhzRunParameters(**params, frame_phase=auto.report.frame_phase + 0.5)
    )
    assert fixed.report.frame_overlap < auto.report.frame_overlap
    assert fixed.report.frame_phase == pytest.approx(auto.report.frame_phase + 0.5)
    # the uncorrected fringe phase does not depend on the chosen frame
    assert fixed.report.raw_fringe_phase == pytest.approx(auto.report.raw_fringe_phase)


def angle_error(measured, expected):
    return abs((measured - expected + math.pi) % (2 * math.pi) - math.pi)


def test_raw_fringe_phase_table():
    """λ > 0, N = 3..6: Stark 항 포함 / 제외"""
    half = math.pi / 2
    stark = [expected_raw_fringe_phase(n, 1, include_stark=True) for n in (3, 4, 5, 6)]
    ideal = [expected_raw_fringe_phase(n, 1, include_stark=False) for n in (3, 4, 5, 6)]
    assert stark == [-half, -half, half, -half]
    assert ideal == [half, half, -half, half]
    assert expected_raw_fringe_phase(5, -1, include_stark=False) == half
    with pytest.raises(DomainValueException):
        expected_raw_fringe_phase(3, 0, include_stark=True)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
@pytest.mark.parametrize("model", [ModelKind.OAT, ModelKind.OAT_IDEAL])
@pytest.mark.parametrize("sign", [1, -1])
def test_raw_fringe_phase_follows_the_closed_form(uniform_device, n, model, sign):
    """보정 전 위상은 ±π/2, 보정 프레임은 0 또는 π, 보정 후 π/2"""
    report = ghz_experiment_service.run_ghz_experiment(
        uniform_device(n),
        GhzRunParameters(
            subset=tuple(range(n)), model=model, coupling_mhz=sign * 1.0, gamma_points=21
        ),
    ).report
    expected = expected_raw_fringe_phase(n, sign, include_stark=model == ModelKind.OAT)
    assert angle_error(report.raw_fringe_phase, expected) < 1e-9
    assert angle_error(report.frame_phase, 0.0 if expected > 0 else math.pi) < 1e-6
    assert angle_error(report.fringe.phase, math.pi / 2) < 1e-6
    assert report.frame_overlap == pytest.approx(1.0, abs=1e-9)
    assert report.model == model.value


def test_stark_term_is_a_pi_frame_shift(uniform_device):
    """두 변형은 매 N 에서 보정 전 위상이 π 만큼 다르다"""
    for n in (3, 4, 5, 6):
        reports = [
            ghz_experiment_service.run_ghz_experiment(
                uniform_device(n),
                GhzRunParameters(
                    subset=tuple(range(n)), model=model, coupling_mhz=1.0, gamma_points=21
                ),
            ).report
            for model in (ModelKind.OAT, ModelKind.OAT_IDEAL)
        ]
        stark, ideal = reports
        assert angle_error(stark.raw_fringe_phase, ideal.raw_fringe_phase + math.pi) < 1e-9
        assert angle_error(stark.frame_phase, ideal.frame_phase + math.pi) < 1e-6


def test_h2_on_the_device_is_genuinely_entangled(device):
    """디바이스 Q1–Q3, Δ = −330 MHz"""
    result = ghz_experiment_service.run_ghz_experiment(
        device, GhzRunParameters(subset=(0, 1, 2), model=ModelKind.H2, detuning_mhz=-330.0)
    )
    assert result.report.fidelity > 0.9
    assert result.report.genuine
    assert result.report.model == "h2"


def test_exact_confusion_with_and_without_correction(device):
    params = dict(subset=(0, 1, 2), model=ModelKind.OAT, detuning_mhz=-330.0, confusion=True)
    corrected = ghz_experiment_service.run_ghz_experiment(
        device, GhzRunParameters(**params, correct=True)
    ).report
    raw = ghz_experiment_service.run_ghz_experiment(
        device, GhzRunParameters(**params, correct=False)
    ).report
    assert corrected.corrected and not raw.corrected
    assert corrected.fidelity == pytest.approx(1.0, abs=1e-9)
    assert raw.fringe.amplitude < corrected.fringe.amplitude
    assert raw.fidelity < corrected.fidelity


def test_sampled_run_has_subgroup_error_bars(device):
    n = 3
    shots = 30 * 2**n
    params = GhzRunParameters(
        subset=(0, 1, 2),
        detuning_mhz=-330.0,
        shots=shots,
        seed=7,
        gamma_points=21,
        confusion=True,
    )
    result = ghz_experiment_service.run_ghz_experiment(device, params)
    report = result.report

    assert report.seed == 7 and report.shots == shots
    assert report.subgroups == 6
    for value in (report.rho_00_err, report.rho_11_err, report.fidelity_err, report.amplitude_err):
        assert value is not None and value >= 0.0
    assert result.curve.err is not None and len(result.curve.err) == 21
    # corner setting + one table per γ
    assert len(result.tables) == 22
    assert all(t.total == shots for t in result.tables)
    assert 0.0 <= report.rho_00 <= 1.0 and 0.0 <= report.rho_11 <= 1.0

    again = ghz_experiment_service.run_ghz_experiment(device, params)
    assert again.report == report


def test_too_few_shots_skip_error_bars(device):
    result = ghz_experiment_service.run_ghz_experiment(
        device,
        GhzRunParameters(subset=(0, 1), detuning_mhz=-330.0, shots=30, seed=1, gamma_points=11),
    )
    assert result.report.fidelity_err is None
    assert result.curve.err is None


def test_explicit_gamma_list(device):
    gammas = tuple(np.linspace(-1.0, 1.0, 7))
    result = ghz_experiment_service.run_ghz_experiment(
        device, GhzRunParameters(subset=(0, 1), detuning_mhz=-330.0, gammas=gammas)
    )
    np.testing.assert_allclose(result.curve.gamma, gammas)


def test_single_qubit_is_rejected(device):
    with pytest.raises(DomainValueException):
        ghz_experiment_service.run_ghz_experiment(device, GhzRunParameters(subset=(0,)))


def test_coupling_or_detuning(device):
    subset = [0, 1, 2, 3]
    by_coupling = GhzRunParameters(subset=tuple(subset), coupling_mhz=-1.2)
    detuning, coupling = ghz_experiment_service.resolve_coupling(device, subset, by_coupling)
    assert coupling == -1.2
    assert device_model_service.dispersive_params(
        device, subset, detuning
    ).mean_coupling_mhz == pytest.approx(-1.2)

    by_default = GhzRunParameters(subset=tuple(subset))
    detuning, _ = ghz_experiment_service.resolve_coupling(device, subset, by_default)
    assert detuning == -330.0


def test_duration_scan_peaks_near_the_cat_time(device):
    params = GhzRunParameters(subset=(0, 1, 2, 3), model=ModelKind.OAT, detuning_mhz=-330.0)
    _, coupling = ghz_experiment_service.resolve_coupling(device, [0, 1, 2, 3], params)
    t2 = device_model_service.cat_time(2, coupling)
    rows = ghz_experiment_service.duration_scan(device, params, [0.5 * t2, t2, 1.5 * t2])
    assert [t for t, _ in rows] == pytest.approx([0.5 * t2, t2, 1.5 * t2])
    assert rows[1][1] == pytest.approx(1.0, abs=1e-9)
    assert rows[0][1] < rows[1][1] and rows[2][1] < rows[1][1]


def test_duration_scan_full_basis_model(device):
    params = GhzRunParameters(subset=(0, 1, 2), model=ModelKind.H2, detuning_mhz=-330.0)
    rows = ghz_experiment_service.duration_scan(device, params, [0.0, 100.0])
    assert all(0.0 <= value <= 1.0 + 1e-12 for _, value in rows)
