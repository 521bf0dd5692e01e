"""
관측량 서비스 모듈
- Husimi Q-함수 격자와 실험 프로토콜(회전 후 사영) 버전
- 패리티 기대값, 프린지 피팅, GHZ 충실도와 얽힘 판정
- 집단 스핀 모멘트와 스퀴징 지표
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.core.config import get_settings
from src.core.constants import GridConstants, NumericConstants
from src.core.decorators import track_operation
from src.core.exceptions import DomainValueException
from src.core.logger import get_logger
from src.dto.common.enums import BasisKind
from src.dto.report.report_dtos import FringeFitDTO
from src.dto.state.state_dtos import BlochDirection, LocalRotation
from src.service.spin.pure_state import PureState, bit_weights, log_binomials
from src.service.spin.spin_state_service import spin_state_service

logger = get_logger("services.observables")


@dataclass(frozen=True, eq=False)
class QGrid:
    """Q(θ, φ) on θ ∈ [0, π] (rows) × φ ∈ [−π, π) (columns)"""

    theta: np.ndarray
    phi: np.ndarray
    values: np.ndarray

    def equator_row(self) -> int:
        row = int(np.argmin(np.abs(self.theta - math.pi / 2)))
        if abs(self.theta[row] - math.pi / 2) > 1e-9:
            raise DomainValueException("Q grid has no θ = π/2 row")
        return row

    def argmax(self) -> Tuple[float, float]:
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.theta[i]), float(self.phi[j])


@dataclass(frozen=True, eq=False)
class ParityCurve:
    gamma: np.ndarray
    parity: np.ndarray
    err: Optional[np.ndarray] = None


@dataclass(frozen=True, eq=False)
class CollectiveMoments:
    """Pauli-sum moments: S_a = Σ_j σ_a,j"""

    mean: np.ndarray
    covariance: np.ndarray
    squeezing_ratio: Optional[float]
    xi2: Optional[float]


def grid_axes(n_theta: int, n_phi: int) -> Tuple[np.ndarray, np.ndarray]:
    if n_theta < 1 or n_phi < 1:
        raise DomainValueException(f"empty Q grid {n_theta}x{n_phi}")
    theta = np.linspace(0.0, math.pi, n_theta) if n_theta > 1 else np.array([math.pi / 2])
    phi = -math.pi + 2.0 * math.pi * np.arange(n_phi) / n_phi
    return theta, phi


class ObservablesService:
    """Everything derived from a pure state for plots and tables"""

    # ===== Q-함수 =====

    @track_operation("husimi_q")
    def husimi_q(
        self,
        state: PureState,
        n_theta: Optional[int] = None,
        n_phi: Optional[int] = None,
    ) -> QGrid:
        """|⟨θ,φ|ψ⟩|² through the symmetric weight sums; O(grid · N)"""
        settings = get_settings()
        theta, phi = grid_axes(n_theta or settings.grid_theta, n_phi or settings.grid_phi)
        n = state.n

        if state.basis == BasisKind.DICKE:
            dicke = state.amplitudes
        else:
            dicke, _ = spin_state_service.symmetric_components(state)

        k = np.arange(n + 1)
        half = theta[:, None] / 2.0
        with np.errstate(divide="ignore", invalid="ignore"):
            log_c = np.where(n - k == 0, 0.0, (n - k) * np.log(np.cos(half)))
            log_s = np.where(k == 0, 0.0, k * np.log(np.sin(half)))
            envelope = np.nan_to_num(np.exp(0.5 * log_binomials(n) + log_c + log_s))

        phases = np.exp(-1j * np.outer(k, phi))
        amplitudes = envelope @ (dicke[:, None] * phases)
        values = np.clip(np.abs(amplitudes) ** 2, 0.0, 1.0)
        return QGrid(theta=theta, phi=phi, values=values)

    def q_point(self, state: PureState, direction: BlochDirection) -> float:
        acs = spin_state_service.atomic_coherent_state(state.n, direction, state.basis)
        return abs(np.vdot(acs.amplitudes, state.amplitudes)) ** 2

    def q_protocol(self, state: PureState, direction: BlochDirection) -> float:
        """
        Rotate (θ, φ) to a pole and read one corner probability:
        θ < π/2 -> +z and P_{0…0}; otherwise -> −z and P_{1…1}.
        """
        state.require(BasisKind.FULL, "q_protocol")
        theta, phi = direction.theta, direction.phi
        if theta < math.pi / 2:
            rot = LocalRotation.axis_to_pole(theta, phi)
            corner = 0
        else:
            rot = LocalRotation.axis_to_south_pole(theta, phi)
            corner = -1
        rotated = spin_state_service.apply_uniform_rotation(state, rot)
        return float(abs(rotated.amplitudes[corner]) ** 2)

    @staticmethod
    def equatorial_lobe_count(qgrid: QGrid) -> int:
        """Strict cyclic local maxima of Q(π/2, φ) above 0.1·max; plateaus count once"""
        values = qgrid.values[qgrid.equator_row()]
        peak = float(values.max())
        if peak <= 0.0:
            raise DomainValueException("equatorial Q slice is all zero")

        floor = GridConstants.LOBE_FLOOR_FRACTION * peak
        eps = 1e-12 * peak
        size = values.size

        # start at a run boundary so cyclic runs are contiguous
        starts = [i for i in range(size) if abs(values[i] - values[i - 1]) > eps]
        if not starts:
            return 1
        start = starts[0]
        ordered = np.roll(values, -start)

        runs = [float(ordered[0])]
        for value in ordered[1:]:
            if abs(value - runs[-1]) > eps:
                runs.append(float(value))

        count = 0
        for i, value in enumerate(runs):
            left, right = runs[i - 1], runs[(i + 1) % len(runs)]
            if value > left and value > right and value >= floor:
                count += 1
        return count

    # ===== 패리티 =====

    @staticmethod
    def parity_rotation(gamma: float) -> LocalRotation:
        """Takes axis (π/2, π/2 − γ) to +z"""
        return LocalRotation.axis_to_pole(math.pi / 2, math.pi / 2 - gamma)

    def parity_expectation(self, state: PureState, gamma: float) -> float:
        """⟨⊗_j (cos γ Y_j + sin γ X_j)⟩ = P_even − P_odd after the rotation"""
        state.require(BasisKind.FULL, "parity_expectation")
        rotated = spin_state_service.apply_uniform_rotation(
            state, self.parity_rotation(gamma)
        )
        signs = 1 - 2 * (bit_weights(state.n) & 1)
        return float(np.dot(signs, rotated.probabilities()))

    def parity_curve(self, state: PureState, gammas: Sequence[float]) -> ParityCurve:
        gammas = np.asarray(gammas, dtype=float)
        values = np.array([self.parity_expectation(state, g) for g in gammas])
        return ParityCurve(gamma=gammas, parity=values)

    @staticmethod
    def gamma_grid(points: int) -> np.ndarray:
        if points < 3:
            raise DomainValueException(f"need at least 3 γ points, got {points}")
        return np.linspace(-math.pi / 2, math.pi / 2, points)

    @staticmethod
    def fit_fringe(
        curve: ParityCurve, n: int, frequency: Optional[int] = None
    ) -> FringeFitDTO:
        """Least squares a·cos fγ + b·sin fγ + c (f = N unless given)"""
        f = n if frequency is None else frequency
        gamma = np.asarray(curve.gamma, dtype=float)
        y = np.asarray(curve.parity, dtype=float)
        if gamma.size < 3:
            raise DomainValueException("fringe fit needs at least 3 points")

        design = np.column_stack(
            [np.cos(f * gamma), np.sin(f * gamma), np.ones_like(gamma)]
        )
        weights = np.ones_like(gamma)
        if curve.err is not None:
            err = np.asarray(curve.err, dtype=float)
            # a zero error bar would dominate the fit; fall back to equal weights
            if np.all(err > 0):
                weights = 1.0 / err

        weighted = design * weights[:, None]
        if np.linalg.matrix_rank(weighted, tol=1e-10) < 3:
            raise DomainValueException(
                f"fringe fit is rank deficient (γ points congruent modulo π/{f})"
            )
        (a, b, c), *_ = scipy.linalg.lstsq(weighted, y * weights)
        residual = y - design @ np.array([a, b, c])
        return FringeFitDTO(
            amplitude=float(math.hypot(a, b)),
            phase=float(math.atan2(-b, a)),
            frequency=int(f),
            offset=float(c),
            residual_rms=float(math.sqrt(np.mean(residual**2))),
        )

    def frequency_scan(
        self, curve: ParityCurve, n: int, frequencies: Optional[Sequence[int]] = None
    ) -> Dict[int, float]:
        """Residual RMS per trial fringe frequency (default N−1, N, N+1)"""
        frequencies = frequencies or [f for f in (n - 1, n, n + 1) if f >= 1]
        return {
            int(f): self.fit_fringe(curve, n, frequency=f).residual_rms
            for f in frequencies
        }

    # ===== GHZ 지표 =====

    @staticmethod
    def corner_populations(state: PureState) -> Tuple[float, float]:
        state.require(BasisKind.FULL, "corner_populations")
        amps = state.amplitudes
        return float(abs(amps[0]) ** 2), float(abs(amps[-1]) ** 2)

    @staticmethod
    def ghz_fidelity(rho_00: float, rho_11: float, off_diagonal: float) -> Tuple[float, bool]:
        """F = (ρ00 + ρ11)/2 + |ρ01|; genuine multipartite entanglement iff F > 0.5"""
        for name, value in (("ρ00", rho_00), ("ρ11", rho_11), ("|ρ01|", off_diagonal)):
            if not 0.0 <= value <= 1.0:
                raise DomainValueException(f"{name} = {value} outside [0, 1]")
        fidelity = (rho_00 + rho_11) / 2.0 + off_diagonal
        return fidelity, fidelity > 0.5

    # ===== 집단 스핀 =====

    def collective_moments(self, state: PureState) -> CollectiveMoments:
        """⟨S⟩ and the symmetrized covariance, S_a = Σ σ_a (σ_z = |0⟩⟨0| − |1⟩⟨1|)"""
        if state.basis == BasisKind.DICKE:
            actions = self._dicke_actions(state)
        else:
            actions = self._full_actions(state)

        psi = state.amplitudes
        mean = np.array([np.vdot(psi, a).real for a in actions])
        second = np.array(
            [[np.vdot(a, b).real for b in actions] for a in actions]
        )
        covariance = second - np.outer(mean, mean)

        ratio, xi2 = self._squeezing(state.n, mean, covariance)
        return CollectiveMoments(
            mean=mean, covariance=covariance, squeezing_ratio=ratio, xi2=xi2
        )

    def squeezing_parameter(self, state: PureState) -> float:
        """ξ² = 4 min Var⊥(S/2) / N; raises when the mean spin vanishes"""
        moments = self.collective_moments(state)
        if moments.xi2 is None:
            raise DomainValueException("mean spin vanishes; squeezing undefined")
        return moments.xi2

    @staticmethod
    def _squeezing(
        n: int, mean: np.ndarray, covariance: np.ndarray
    ) -> Tuple[Optional[float], Optional[float]]:
        length = float(np.linalg.norm(mean))
        if length < NumericConstants.MOMENT_FLOOR:
            return None, None
        axis = mean / length
        # orthonormal pair spanning the plane normal to the mean spin
        helper = np.eye(3)[int(np.argmin(np.abs(axis)))]
        e1 = np.cross(axis, helper)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(axis, e1)
        plane = np.column_stack([e1, e2])
        transverse = plane.T @ covariance @ plane
        var_min = float(np.linalg.eigvalsh(transverse)[0])
        return n * var_min / length**2, var_min / n

    @staticmethod
    def _full_actions(state: PureState):
        n = state.n
        psi = state.amplitudes
        index = np.arange(state.dim)
        sx = np.zeros_like(psi)
        sy = np.zeros_like(psi)
        for j in range(n):
            flipped = psi[index ^ (1 << j)]
            excited = (index >> j) & 1
            sx += flipped
            sy += np.where(excited == 1, 1j, -1j) * flipped
        sz = (n - 2 * bit_weights(n)) * psi
        return sx, sy, sz

    @staticmethod
    def _dicke_actions(state: PureState):
        n = state.n
        psi = state.amplitudes
        k = np.arange(n + 1)
        raise_coeff = np.sqrt((k[:-1] + 1.0) * (n - k[:-1]))
        up = np.zeros_like(psi)
        down = np.zeros_like(psi)
        up[1:] = raise_coeff * psi[:-1]
        down[:-1] = raise_coeff * psi[1:]
        sx = up + down
        sy = 1j * (up - down)
        sz = (n - 2 * k) * psi
        return sx, sy, sz


observables_service = ObservablesService()
