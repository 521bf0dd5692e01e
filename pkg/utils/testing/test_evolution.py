"""
시간 전개 서비스 테스트
- 스케줄 파싱, 전파기 선택과 상호 일치, 프레임 위상 보정
"""

import math

import numpy as np
import pytest

from src.core.constants import UnitConstants
from src.core.config import reload_settings
from src.core.exceptions import (
    BasisMismatchException,
    DomainValueException,
    UserInputException,
)
from src.dto.common.enums import BasisKind
from src.dto.state.state_dtos import BlochDirection
from src.service.device.device_model_service import device_model_service
from src.service.evolution.evolution_service import EvolutionService, Schedule, evolution_service
from src.service.evolution.propagators import LanczosPropagator
from src.service.hamiltonian.hamiltonian_service import hamiltonian_service
from src.service.hamiltonian.operators import ResonatorSpec
from src.service.observables.observables_service import observables_service
from src.service.spin.pure_state import PureState
from src.service.spin.spin_state_service import spin_state_service
from utils.testing.conftest import random_state_vector

EQUATOR = BlochDirection(theta=math.pi / 2, phi=-math.pi / 2)


# ===== 스케줄 =====


def test_schedule_with_origin():
    schedule = Schedule.parse("0,15,80")
    assert schedule.times == (0.0, 15.0, 80.0)
    assert not schedule.implicit_origin
    assert schedule.reported == (0.0, 15.0, 80.0)


def test_schedule_adds_an_implicit_origin():
    schedule = Schedule.parse("80, 15")
    assert schedule.times == (0.0, 15.0, 80.0)
    assert schedule.reported == (15.0, 80.0)


def test_cat_schedule_is_sorted():
    schedule = Schedule.parse("cat:5,4,3,2", coupling_mhz=-1.6)
    expected = sorted(device_model_service.cat_time(m, -1.6) for m in (5, 4, 3, 2))
    assert schedule.reported == pytest.approx(tuple(expected))


@pytest.mark.parametrize("text", ["", "abc", "-1,5", "cat:5"])
def test_bad_schedules(text):
    with pytest.raises(UserInputException):
        Schedule.parse(text)


def test_repeated_times_are_rejected():
    with pytest.raises(DomainValueException):
        Schedule.parse("0,10,10")


# ===== 전개 =====


def test_zero_time_is_identity(device, rng):
    op = hamiltonian_service.build_h2(device, [0, 1, 2], -330.0)
    state = PureState(BasisKind.FULL, 3, random_state_vector(rng, 8))
    evolved, _ = evolution_service.evolve(state, op, 0.0)
    np.testing.assert_allclose(evolved.amplitudes, state.amplitudes, atol=1e-14)


def test_dense_and_lanczos_agree(device):
    """같은 H2 에 대해 고유분해와 Lanczos 가 tol 수준에서 일치"""
    op = hamiltonian_service.build_h2(device, list(range(6)), -330.0, include_crosstalk=True)
    initial = spin_state_service.atomic_coherent_state(6, EQUATOR)
    dense, dense_report = evolution_service.evolve(initial, op, 120.0, method="dense_eigh")
    krylov, report = evolution_service.evolve(initial, op, 120.0, tol=1e-10, method="lanczos")

    assert dense_report.method == "dense_eigh"
    assert "lanczos" in report.method
    assert report.accepted_steps
    assert 2 <= report.max_subspace_dim <= 40
    assert np.linalg.norm(dense.amplitudes - krylov.amplitudes) < 1e-8


def test_lanczos_respects_a_small_subspace_cap(device):
    op = hamiltonian_service.build_h2(device, list(range(5)), -330.0)
    initial = spin_state_service.atomic_coherent_state(5, EQUATOR)
    propagator = LanczosPropagator(max_dim=10)
    service = EvolutionService([propagator])
    evolved, report = service.evolve(initial, op, 200.0, tol=1e-10)
    reference, _ = evolution_service.evolve(initial, op, 200.0, method="dense_eigh")
    assert report.max_subspace_dim <= 10
    assert np.linalg.norm(evolved.amplitudes - reference.amplitudes) < 1e-8


def test_threads_do_not_change_the_result(device):
    op = hamiltonian_service.build_h2(device, list(range(6)), -330.0)
    initial = spin_state_service.atomic_coherent_state(6, EQUATOR)
    single, _ = evolution_service.evolve(initial, op, 90.0, method="lanczos")
    reload_settings(threads=4)
    assert evolution_service.select_propagator(op, "lanczos").threads == 4
    threaded, _ = evolution_service.evolve(initial, op, 90.0, method="lanczos")
    np.testing.assert_array_equal(single.amplitudes, threaded.amplitudes)


def test_uniform_h2_matches_dicke_oat(uniform_device):
    """균일 결합이면 섹터 블록 H2 와 Dicke OAT 가 같은 상태를 만든다"""
    n, detuning = 6, -330.0
    cfg = uniform_device(n)
    h2 = hamiltonian_service.build_h2(cfg, list(range(n)), detuning)
    oat = hamiltonian_service.build_oat_uniform(n, 27.45**2 / detuning)

    full = spin_state_service.atomic_coherent_state(n, EQUATOR)
    dicke = spin_state_service.atomic_coherent_state(n, EQUATOR, BasisKind.DICKE)
    t = device_model_service.cat_time(2, 27.45**2 / detuning)
    by_sector, _ = evolution_service.evolve(full, h2, t)
    by_dicke, _ = evolution_service.evolve(dicke, oat, t)
    embedded = spin_state_service.dicke_embed(by_dicke)
    assert spin_state_service.fidelity(by_sector, embedded) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("include_stark", [True, False])
def test_revival(include_stark):
    """|λ| t = 2π 에서 초기 상태 복귀"""
    n, coupling = 9, -2.0
    op = hamiltonian_service.build_oat_uniform(n, coupling, include_stark=include_stark)
    initial = spin_state_service.atomic_coherent_state(n, EQUATOR, BasisKind.DICKE)
    back, _ = evolution_service.evolve(
        initial, op, evolution_service.revival_time(coupling)
    )
    assert spin_state_service.fidelity(back, initial) == pytest.approx(1.0, abs=1e-12)


def test_h1_tracks_h2_deep_in_the_dispersive_regime(uniform_device):
    n, g = 2, 27.45
    cfg = uniform_device(n, g_mhz=g)
    detuning = -40 * g
    h1 = hamiltonian_service.build_h1(cfg, [0, 1], detuning)
    h2 = hamiltonian_service.build_h2(cfg, [0, 1], detuning)
    initial = spin_state_service.atomic_coherent_state(n, EQUATOR)
    via_h1, report = evolution_service.evolve(initial, h1, 150.0)
    via_h2, _ = evolution_service.evolve(initial, h2, 150.0)
    assert report.vacuum_weight == pytest.approx(1.0, abs=0.01)
    assert spin_state_service.fidelity(via_h1, via_h2) >= 0.98


def test_form_mismatch_is_rejected(device):
    op = hamiltonian_service.build_oat_uniform(3, 1.0)
    full = spin_state_service.atomic_coherent_state(3, EQUATOR)
    with pytest.raises(BasisMismatchException):
        evolution_service.evolve(full, op, 10.0)
    h2 = hamiltonian_service.build_h2(device, [0, 1], -330.0)
    with pytest.raises(BasisMismatchException):
        evolution_service.evolve(full, h2, 10.0)


def test_time_and_tolerance_domain():
    op = hamiltonian_service.build_oat_uniform(3, 1.0)
    state = spin_state_service.atomic_coherent_state(3, EQUATOR, BasisKind.DICKE)
    with pytest.raises(DomainValueException):
        evolution_service.evolve(state, op, -1.0)
    with pytest.raises(DomainValueException):
        evolution_service.evolve(state, op, 1.0, tol=1e-3)


def test_snapshot_series_chains_steps(device):
    op = hamiltonian_service.build_h2(device, list(range(4)), -470.0)
    initial = spin_state_service.atomic_coherent_state(4, EQUATOR)
    schedule = Schedule.parse("0,40,95,130")
    snapshots = evolution_service.snapshot_series(initial, op, schedule)
    assert len(snapshots) == 4
    assert snapshots[0] is initial
    direct, _ = evolution_service.evolve(initial, op, 95.0)
    assert np.linalg.norm(snapshots[2].amplitudes - direct.amplitudes) < 1e-9


def test_snapshot_series_under_h1_restarts_from_the_initial_state(uniform_device):
    cfg = uniform_device(2)
    op = hamiltonian_service.build_h1(cfg, [0, 1], -600.0)
    initial = spin_state_service.atomic_coherent_state(2, EQUATOR)
    snapshots = evolution_service.snapshot_series(initial, op, Schedule.parse("0,50,100"))
    direct, _ = evolution_service.evolve(initial, op, 100.0)
    np.testing.assert_allclose(snapshots[2].amplitudes, direct.amplitudes, atol=1e-12)


# ===== 프레임 위상 =====


def test_frame_phase_on_the_excited_corner():
    state = spin_state_service.product_basis_state(3, "111")
    framed = evolution_service.frame_phases(state, [0.1, 0.2, 0.3])
    assert framed.amplitudes[-1] == pytest.approx(np.exp(0.6j))


def test_dicke_frame_phase_must_be_uniform():
    state = spin_state_service.atomic_coherent_state(3, EQUATOR, BasisKind.DICKE)
    framed = evolution_service.frame_phases(state, 0.5)
    np.testing.assert_allclose(
        framed.amplitudes, state.amplitudes * np.exp(0.5j * np.arange(4))
    )
    with pytest.raises(BasisMismatchException):
        evolution_service.frame_phases(state, [0.1, 0.2, 0.3])
    with pytest.raises(DomainValueException):
        evolution_service.frame_phases(state, [0.1, 0.2])


@pytest.mark.parametrize("basis", [BasisKind.FULL, BasisKind.DICKE])
def test_calibration_recovers_a_known_frame(basis):
    target = spin_state_service.atomic_coherent_state(5, BlochDirection(theta=1.2, phi=0.4), basis)
    shifted = evolution_service.frame_phases(target, -0.7)
    zeta, overlap = evolution_service.calibrate_frame_phase(shifted, target)
    assert zeta == pytest.approx(0.7, abs=1e-6)
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_fidelity_vs_duration_peaks_at_the_cat_time():
    n, coupling = 4, 1.0
    op = hamiltonian_service.build_oat_uniform(n, coupling, include_stark=False)
    initial = spin_state_service.atomic_coherent_state(n, EQUATOR, BasisKind.DICKE)
    target = spin_state_service.ghz_reference_state(n, EQUATOR, basis=BasisKind.DICKE)
    t2 = device_model_service.cat_time(2, coupling)
    rows = evolution_service.fidelity_vs_duration(initial, op, [0.0, t2 / 2, t2], target)
    assert rows[-1] == (t2, pytest.approx(1.0, abs=1e-12))
    assert rows[1][1] < rows[-1][1]


# ===== 보존량 / 수렴 =====


@pytest.mark.parametrize("crosstalk", [False, True])
def test_energy_is_constant_along_snapshots(device, crosstalk):
    op = hamiltonian_service.build_h2(device, list(range(4)), -470.0, include_crosstalk=crosstalk)
    initial = spin_state_service.atomic_coherent_state(4, EQUATOR)
    snapshots = evolution_service.snapshot_series(initial, op, Schedule.parse("0,40,95,130"))
    energies = [op.expectation(s.amplitudes) for s in snapshots]
    assert energies == pytest.approx([energies[0]] * len(energies), abs=1e-10)


def test_energy_is_constant_for_dicke_twisting():
    op = hamiltonian_service.build_oat_uniform(8, -1.6)
    initial = spin_state_service.atomic_coherent_state(8, EQUATOR, BasisKind.DICKE)
    snapshots = evolution_service.snapshot_series(initial, op, Schedule.parse("0,25,60,140"))
    energies = [op.expectation(s.amplitudes) for s in snapshots]
    assert energies == pytest.approx([energies[0]] * len(energies), abs=1e-12)


def test_photon_cutoff_two_is_converged(uniform_device):
    """N=3, |Δ|/g = 12, t_2: n_max = 2 와 n_max = 3 이 같은 큐비트 상태를 준다"""
    n, g = 3, 27.45
    cfg = uniform_device(n, g_mhz=g)
    subset = list(range(n))
    detuning = -12 * g
    coupling = device_model_service.dispersive_params(cfg, subset, detuning).mean_coupling_mhz
    t = device_model_service.cat_time(2, coupling)
    initial = spin_state_service.atomic_coherent_state(n, EQUATOR)

    results = [
        evolution_service.evolve(
            initial,
            hamiltonian_service.build_h1(
                cfg,
                subset,
                detuning,
                ResonatorSpec(photon_cutoff=cutoff, resonator_ghz=cfg.resonator_ghz),
            ),
            t,
        )
        for cutoff in (2, 3)
    ]
    (two, two_report), (three, three_report) = results
    assert 1.0 - spin_state_service.fidelity(two, three) < 1e-3
    assert two_report.vacuum_weight == pytest.approx(three_report.vacuum_weight, abs=1e-3)


def test_stark_twisting_is_ideal_twisting_shifted_in_azimuth():
    """Stark 항 2λk 는 방위각 이동 2λt 뿐이다"""
    n, coupling, t = 10, 1.3, 70.0
    initial = spin_state_service.atomic_coherent_state(n, EQUATOR, BasisKind.DICKE)
    stark, _ = evolution_service.evolve(
        initial, hamiltonian_service.build_oat_uniform(n, coupling), t
    )
    ideal, _ = evolution_service.evolve(
        initial, hamiltonian_service.build_oat_uniform(n, coupling, include_stark=False), t
    )
    shift = 2 * UnitConstants.angular(coupling) * t

    shifted = evolution_service.frame_phases(ideal, -shift)
    assert spin_state_service.fidelity(stark, shifted) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(
        observables_service.husimi_q(stark, 21, 40).values,
        observables_service.husimi_q(shifted, 21, 40).values,
        atol=1e-12,
    )
    for theta, phi in [(0.4, 0.1), (math.pi / 2, -2.0), (2.5, 1.7)]:
        assert observables_service.q_point(
            stark, BlochDirection(theta=theta, phi=phi)
        ) == pytest.approx(
            observables_service.q_point(ideal, BlochDirection(theta=theta, phi=phi + shift)),
            abs=1e-12,
        )
