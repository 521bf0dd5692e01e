"""
스핀 상태 서비스 모듈
- 원자 결맞음 상태(ACS)와 GHZ 기준 상태 생성
- 전체 곱 기저 <-> Dicke 기저 변환
- 큐비트별 회전 펄스 적용, 상태 JSON 입출력
"""

import math
from typing import Sequence, Tuple, Union

import numpy as np

from src.core.constants import DeviceConstants, NumericConstants
from src.core.exceptions import (
    BasisMismatchException,
    DomainValueException,
)
from src.core.logger import get_logger
from src.dto.common.enums import BasisKind
from src.dto.state.state_dtos import BlochDirection, LocalRotation, StateExportDTO
from .pure_state import PureState, bit_weights, log_binomials, sqrt_binomials

logger = get_logger("services.spin")


def rotation_matrix(rot: LocalRotation) -> np.ndarray:
    """2×2 unitary diag(1, e^{i z}) · exp(−i β/2 (cos α X + sin α Y))"""
    c = math.cos(rot.beta / 2.0)
    s = math.sin(rot.beta / 2.0)
    pulse = np.array(
        [
            [c, -1j * np.exp(-1j * rot.alpha) * s],
            [-1j * np.exp(1j * rot.alpha) * s, c],
        ],
        dtype=complex,
    )
    if rot.z_phase:
        pulse = np.diag([1.0, np.exp(1j * rot.z_phase)]) @ pulse
    return pulse


class SpinStateService:
    """Pure-state construction and single-qubit transformations"""

    # ===== 기준 상태 =====

    def atomic_coherent_state(
        self,
        n: int,
        direction: BlochDirection,
        basis: BasisKind = BasisKind.FULL,
    ) -> PureState:
        """[cos θ/2 |0⟩ + sin θ/2 e^{iφ} |1⟩]^{⊗N}"""
        basis = BasisKind(basis)
        self._check_qubit_count(n, basis)

        half = direction.theta / 2.0
        cos_half, sin_half = math.cos(half), math.sin(half)

        if basis == BasisKind.FULL:
            w = bit_weights(n)
            amps = (cos_half ** (n - w)) * (
                (sin_half * np.exp(1j * direction.phi)) ** w
            )
            return PureState(basis, n, amps)

        k = np.arange(n + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_c = np.where(n - k == 0, 0.0, (n - k) * np.log(cos_half))
            log_s = np.where(k == 0, 0.0, k * np.log(sin_half))
            magnitude = np.exp(0.5 * log_binomials(n) + log_c + log_s)
        amps = np.nan_to_num(magnitude) * np.exp(1j * k * direction.phi)
        return PureState(basis, n, amps)

    def ghz_reference_state(
        self,
        n: int,
        direction: BlochDirection,
        twist_sign: int = 1,
        basis: BasisKind = BasisKind.FULL,
    ) -> PureState:
        """
        Two-component cat reached by ideal twisting at t = π/2|λ|.

        twist_sign = +1 gives
            e^{−i(N−½)π/2}/√2 [ |θ, φ−(N−1)π/2⟩ + e^{−iπ/2} |θ, φ−(N−3)π/2⟩ ]
        and −1 its time reverse (what λ < 0 produces). The sum is renormalized.
        """
        if n < 2:
            raise DomainValueException(f"GHZ reference needs N >= 2, got {n}")
        if twist_sign not in (1, -1):
            raise DomainValueException(f"twist_sign must be ±1, got {twist_sign}")

        s = twist_sign
        first = self.atomic_coherent_state(
            n,
            BlochDirection(
                theta=direction.theta, phi=direction.phi - s * (n - 1) * math.pi / 2
            ),
            basis,
        )
        second = self.atomic_coherent_state(
            n,
            BlochDirection(
                theta=direction.theta, phi=direction.phi - s * (n - 3) * math.pi / 2
            ),
            basis,
        )
        prefactor = np.exp(-1j * s * (n - 0.5) * math.pi / 2) / math.sqrt(2.0)
        amps = prefactor * (
            first.amplitudes + np.exp(-1j * s * math.pi / 2) * second.amplitudes
        )
        amps = amps / np.linalg.norm(amps)
        return PureState(basis, n, amps)

    def product_basis_state(self, n: int, bits: Union[str, int]) -> PureState:
        """|x⟩ for a bitstring (character j = qubit j) or an integer index"""
        index = bitstring_to_index(bits) if isinstance(bits, str) else int(bits)
        if not 0 <= index < (1 << n):
            raise DomainValueException(f"basis index {index} outside 2^{n}")
        amps = np.zeros(1 << n, dtype=complex)
        amps[index] = 1.0
        return PureState(BasisKind.FULL, n, amps)

    # ===== 비교 =====

    @staticmethod
    def overlap(a: PureState, b: PureState) -> complex:
        """⟨a|b⟩"""
        if a.basis != b.basis or a.n != b.n:
            raise BasisMismatchException(
                f"overlap of {a.basis.value}({a.n}) with {b.basis.value}({b.n})"
            )
        return complex(np.vdot(a.amplitudes, b.amplitudes))

    def fidelity(self, a: PureState, b: PureState) -> float:
        return abs(self.overlap(a, b)) ** 2

    # ===== 기저 변환 =====

    def dicke_embed(self, state: PureState) -> PureState:
        """Dicke(N) -> Full(N): weight-k bitstrings get ψ_k / √C(N,k)"""
        state.require(BasisKind.DICKE, "dicke_embed")
        self._check_qubit_count(state.n, BasisKind.FULL)
        w = bit_weights(state.n)
        amps = state.amplitudes[w] / sqrt_binomials(state.n)[w]
        return PureState(BasisKind.FULL, state.n, amps)

    def symmetric_components(self, state: PureState) -> Tuple[np.ndarray, float]:
        """Dicke amplitudes of the symmetric part and the norm² left outside it"""
        state.require(BasisKind.FULL, "dicke_project")
        weight_sums = np.bincount(
            bit_weights(state.n), weights=state.amplitudes.real, minlength=state.n + 1
        ) + 1j * np.bincount(
            bit_weights(state.n), weights=state.amplitudes.imag, minlength=state.n + 1
        )
        dicke = weight_sums / sqrt_binomials(state.n)
        residual = max(0.0, 1.0 - float(np.vdot(dicke, dicke).real))
        return dicke, residual

    def dicke_project(self, state: PureState) -> Tuple[PureState, float]:
        """Full(N) -> Dicke(N); fails when the state leaves the symmetric sector"""
        dicke, residual = self.symmetric_components(state)
        if residual > NumericConstants.DICKE_RESIDUAL_TOL:
            raise DomainValueException(
                f"state is not permutation symmetric: residual {residual:.3e} > "
                f"{NumericConstants.DICKE_RESIDUAL_TOL:.0e}",
                details={"residual": residual},
            )
        dicke = dicke / np.linalg.norm(dicke)
        return PureState(BasisKind.DICKE, state.n, dicke), residual

    # ===== 회전 =====

    def apply_local_rotations(
        self, state: PureState, rotations: Sequence[LocalRotation]
    ) -> PureState:
        """Apply rotation j to qubit j, then its z-phase"""
        state.require(BasisKind.FULL, "apply_local_rotations")
        if len(rotations) != state.n:
            raise DomainValueException(
                f"expected {state.n} rotations, got {len(rotations)}"
            )

        n = state.n
        tensor = state.amplitudes.reshape((2,) * n)
        for qubit, rot in enumerate(rotations):
            if rot.beta == 0.0 and rot.z_phase == 0.0:
                continue
            # C-order reshape: qubit j lives on axis n−1−j
            axis = n - 1 - qubit
            tensor = np.moveaxis(
                np.tensordot(rotation_matrix(rot), tensor, axes=([1], [axis])), 0, axis
            )
        return PureState(BasisKind.FULL, n, tensor.reshape(-1))

    def apply_uniform_rotation(self, state: PureState, rot: LocalRotation) -> PureState:
        return self.apply_local_rotations(state, [rot] * state.n)

    # ===== 진단 =====

    @staticmethod
    def excitation_weights(state: PureState) -> np.ndarray:
        """Probability mass per excitation number k = 0 … N"""
        if state.basis == BasisKind.DICKE:
            return state.probabilities()
        return np.bincount(
            bit_weights(state.n), weights=state.probabilities(), minlength=state.n + 1
        )

    # ===== JSON =====

    @staticmethod
    def state_to_json(state: PureState) -> str:
        dto = StateExportDTO(
            basis=state.basis,
            n=state.n,
            re=state.amplitudes.real.tolist(),
            im=state.amplitudes.imag.tolist(),
        )
        return dto.to_json()

    @staticmethod
    def state_from_json(text: str) -> PureState:
        dto = StateExportDTO.model_validate_json(text)
        if len(dto.re) != len(dto.im):
            raise BasisMismatchException("re/im length mismatch in state export")
        amps = np.asarray(dto.re, dtype=float) + 1j * np.asarray(dto.im, dtype=float)
        return PureState(BasisKind(dto.basis), dto.n, amps)

    # ===== helpers =====

    @staticmethod
    def _check_qubit_count(n: int, basis: BasisKind):
        limit = (
            DeviceConstants.MAX_QUBITS
            if basis == BasisKind.FULL
            else DeviceConstants.MAX_DICKE_QUBITS
        )
        if not DeviceConstants.MIN_QUBITS <= n <= limit:
            raise DomainValueException(
                f"N={n} outside [1, {limit}] for the {BasisKind(basis).value} basis"
            )


def bitstring_to_index(bits: str) -> int:
    """'01…' with character j = qubit j -> little-endian index"""
    if not bits or any(ch not in "01" for ch in bits):
        raise DomainValueException(f"not a bitstring: {bits!r}")
    return sum(1 << j for j, ch in enumerate(bits) if ch == "1")


def index_to_bitstring(index: int, n: int) -> str:
    return "".join("1" if (index >> j) & 1 else "0" for j in range(n))


spin_state_service = SpinStateService()
