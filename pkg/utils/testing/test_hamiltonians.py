"""
해밀토니안 빌더 테스트
- H1 (큐비트 + 공진기), H2 (분산 유효), OAT (Dicke 대각)
"""

import math

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.special import comb

from src.core.constants import UnitConstants
from src.core.exceptions import DimensionBudgetException, DomainValueException
from src.dto.common.enums import BasisKind, OperatorForm
from src.service.hamiltonian.hamiltonian_service import crosstalk_ring, hamiltonian_service
from src.service.hamiltonian.operators import OperatorHandle
from src.service.spin.pure_state import PureState


def test_crosstalk_ring_shapes():
    """N=1 없음, N=2 한 쌍, N>=3 순환"""
    assert crosstalk_ring(1) == []
    assert crosstalk_ring(2) == [(0, 1)]
    assert crosstalk_ring(3) == [(0, 1), (1, 2), (2, 0)]


def test_h2_blocks_follow_excitation_sectors(device):
    op = hamiltonian_service.build_h2(device, [0, 1, 2, 3], -330.0)
    assert op.form == OperatorForm.SECTOR_BLOCKED
    assert [b.shape[0] for b in op.blocks] == [int(comb(4, k)) for k in range(5)]
    assert op.hermitian
    assert hamiltonian_service.conserved_excitation_check(op)


def test_h2_matrix_elements(device):
    """flip-flop g_j g_k/Δ, Stark g_j²/Δ (rad/ns)"""
    detuning = -330.0
    op = hamiltonian_service.build_h2(device, [0, 1], detuning)
    dense = op.to_sparse().toarray()
    # |10⟩ = index 1, |01⟩ = index 2
    assert dense[2, 1] == pytest.approx(UnitConstants.angular(27.6 * 27.4 / detuning))
    assert dense[1, 1] == pytest.approx(UnitConstants.angular(27.6**2 / detuning))
    assert dense[3, 3] == pytest.approx(
        UnitConstants.angular((27.6**2 + 27.4**2) / detuning)
    )
    assert dense[0, 0] == 0.0


def test_h2_without_stark_has_empty_diagonal(device):
    op = hamiltonian_service.build_h2(device, [0, 1, 2], -330.0, include_stark=False)
    assert np.allclose(op.to_sparse().diagonal(), 0.0)


def test_h2_crosstalk_ring_elements(device):
    """N=3: (0,1), (1,2), (2,0) 에 λ^c 추가"""
    subset = [0, 1, 2]
    plain = hamiltonian_service.build_h2(device, subset, -330.0).to_sparse().toarray()
    ring = hamiltonian_service.build_h2(
        device, subset, -330.0, include_crosstalk=True
    ).to_sparse().toarray()
    diff = ring - plain
    assert diff[2, 1] == pytest.approx(UnitConstants.angular(0.75))
    assert diff[4, 2] == pytest.approx(UnitConstants.angular(0.83))
    # pair (2, 0) uses the third qubit's entry
    assert diff[1, 4] == pytest.approx(UnitConstants.angular(1.01))
    assert np.allclose(diff, diff.conj().T)


def test_uniform_h2_on_symmetric_sector_equals_oat(uniform_device):
    """균일 결합 H2 의 Dicke 대각 원소 = λ k (N − k + 1)"""
    n, detuning = 5, -330.0
    cfg = uniform_device(n)
    h2 = hamiltonian_service.build_h2(cfg, list(range(n)), detuning).to_sparse()
    oat = hamiltonian_service.build_oat_uniform(n, 27.45**2 / detuning)

    weights = np.array([bin(i).count("1") for i in range(1 << n)])
    for k in range(n + 1):
        dicke = np.where(weights == k, 1.0, 0.0) / math.sqrt(comb(n, k))
        value = np.vdot(dicke, h2 @ dicke).real
        assert value == pytest.approx(oat.phase_rates[k], rel=1e-12, abs=1e-14)


def test_oat_rates_with_and_without_stark():
    n, lam = 6, 1.3
    k = np.arange(n + 1)
    with_stark = hamiltonian_service.build_oat_uniform(n, lam)
    ideal = hamiltonian_service.build_oat_uniform(n, lam, include_stark=False)
    np.testing.assert_allclose(
        with_stark.phase_rates, UnitConstants.angular(lam) * k * (n - k + 1)
    )
    np.testing.assert_allclose(
        with_stark.phase_rates - ideal.phase_rates, 2 * UnitConstants.angular(lam) * k
    )
    assert with_stark.label == "oat" and ideal.label == "oat_ideal"


def test_h1_layout_and_couplings(device):
    """index = photons · 2^N + bits, 공진기 항 −Δ a†a"""
    detuning = -400.0
    op = hamiltonian_service.build_h1(device, [0, 1], detuning)
    assert op.dim == 3 * 4
    assert op.hermitian
    assert hamiltonian_service.conserved_excitation_check(op)

    dense = op.to_sparse().toarray()
    # one photon, qubits down (4) <-> no photon, qubit 0 up (1)
    assert dense[1, 4] == pytest.approx(UnitConstants.angular(27.6))
    # two photons -> one photon + qubit 1 up: √2 g
    assert dense[4 + 2, 8] == pytest.approx(UnitConstants.angular(27.4) * math.sqrt(2))
    assert dense[4, 4] == pytest.approx(-UnitConstants.angular(detuning))
    assert dense[8, 8] == pytest.approx(-2 * UnitConstants.angular(detuning))


def test_h1_qubit_frequency_offsets(device):
    frame_ghz = device.resonator_ghz - 0.4
    op = hamiltonian_service.build_h1(
        device, [0, 1], -400.0, qubit_frequencies_ghz=[frame_ghz + 0.001, frame_ghz]
    )
    dense = op.to_sparse().toarray()
    assert dense[1, 1] == pytest.approx(UnitConstants.angular(1.0))
    assert dense[2, 2] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainValueException):
        hamiltonian_service.build_h1(device, [0, 1], -400.0, qubit_frequencies_ghz=[5.0])


def test_h1_budget(device):
    with pytest.raises(DimensionBudgetException):
        hamiltonian_service.build_h1(device, [0, 1, 2], -400.0, max_qubits=2)


def test_operator_matvec_matches_sparse(device, rng):
    op = hamiltonian_service.build_h2(device, [0, 1, 2, 3], -330.0, include_crosstalk=True)
    vector = rng.normal(size=16) + 1j * rng.normal(size=16)
    np.testing.assert_allclose(op.matvec(vector), op.to_sparse() @ vector, atol=1e-14)


def test_expectation_of_dicke_diagonal():
    op = hamiltonian_service.build_oat_uniform(3, 1.0)
    state = PureState(BasisKind.DICKE, 3, np.array([0, 1, 0, 0], dtype=complex))
    assert op.expectation(state.amplitudes) == pytest.approx(op.phase_rates[1])


def test_dump_operator(device, tmp_path):
    op = hamiltonian_service.build_h2(device, [0, 1], -330.0)
    path = hamiltonian_service.dump_operator(op, tmp_path / "h2.txt")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# form=sector_blocked n=2")
    assert sum(1 for line in lines if line.startswith("# sector")) == 3


# ===== 들뜸 수 보존 =====


def test_injected_sigma_x_breaks_excitation_conservation(device):
    """H2 에 σ_x(큐비트 0) 을 더하면 보존 검사가 실패한다"""
    h2 = hamiltonian_service.build_h2(device, [0, 1], -330.0)
    index = np.arange(4)
    sigma_x = sp.csr_matrix((np.ones(4, dtype=complex), (index ^ 1, index)), shape=(4, 4))
    broken = OperatorHandle(form=OperatorForm.FULL_SPARSE, n=2, matrix=h2.to_sparse() + sigma_x)
    assert broken.hermitian
    assert not hamiltonian_service.conserved_excitation_check(broken)

    intact = OperatorHandle(form=OperatorForm.FULL_SPARSE, n=2, matrix=h2.to_sparse())
    assert hamiltonian_service.conserved_excitation_check(intact)


def square(d: int) -> sp.csr_matrix:
    return sp.csr_matrix((d, d), dtype=complex)


def test_sector_blocks_must_match_their_sector():
    good = OperatorHandle(
        form=OperatorForm.SECTOR_BLOCKED, n=2, blocks=(square(1), square(2), square(1))
    )
    assert hamiltonian_service.conserved_excitation_check(good)
    wrong = OperatorHandle(
        form=OperatorForm.SECTOR_BLOCKED, n=2, blocks=(square(1), square(1), square(1))
    )
    assert not hamiltonian_service.conserved_excitation_check(wrong)


def test_single_qubit_vacuum_rabi_splitting(uniform_device):
    """공명(Δ = 0) N=1: 한 들뜸 ±g, 두 들뜸 ±√2 g"""
    g = 27.45
    op = hamiltonian_service.build_h1(uniform_device(1, g_mhz=g), [0], 0.0)
    dense = op.to_sparse().toarray()
    omega = UnitConstants.angular(g)

    # |e,0⟩ = 1, |g,1⟩ = 2
    one = np.linalg.eigvalsh(dense[np.ix_([1, 2], [1, 2])])
    np.testing.assert_allclose(one, [-omega, omega], atol=1e-12)
    assert one[1] - one[0] == pytest.approx(2 * omega)

    # |e,1⟩ = 3, |g,2⟩ = 4
    two = np.linalg.eigvalsh(dense[np.ix_([3, 4], [3, 4])])
    np.testing.assert_allclose(two, [-math.sqrt(2) * omega, math.sqrt(2) * omega], atol=1e-12)

    spectrum = np.linalg.eigvalsh(dense)
    assert np.sum(np.isclose(spectrum, omega)) == 1
    assert np.sum(np.isclose(spectrum, -omega)) == 1
