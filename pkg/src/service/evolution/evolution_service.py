"""
시간 전개 서비스 모듈
- evolve / snapshot_series: 연산자 형태에 맞는 전파기 선택
- frame_phases / calibrate_frame_phase: 큐비트별 z-위상(프레임 위상)
- fidelity_vs_duration: 얽힘 생성 시간 스캔
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from src.core.config import get_settings
from src.core.constants import NumericConstants
from src.core.decorators import track_operation
from src.core.exceptions import (
    BasisMismatchException,
    ConvergenceException,
    DomainValueException,
    UserInputException,
)
from src.core.logger import get_logger
from src.dto.common.enums import BasisKind, OperatorForm
from src.interface.service.service_interfaces import IPropagator
from src.service.device.device_model_service import device_model_service
from src.service.hamiltonian.operators import OperatorHandle
from src.service.spin.pure_state import PureState, bit_weights
from .propagation_report import PropagationReport
from .propagators import DenseEigenPropagator, DickePhasePropagator, LanczosPropagator

logger = get_logger("services.evolution")


@dataclass(frozen=True)
class Schedule:
    """Strictly increasing snapshot times (ns) starting at 0"""

    times: Tuple[float, ...]
    implicit_origin: bool = False

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        if not times or times[0] != 0.0:
            raise DomainValueException("schedule must start at t = 0")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DomainValueException(f"schedule must be strictly increasing: {times}")
        object.__setattr__(self, "times", times)

    @property
    def reported(self) -> Tuple[float, ...]:
        """Times the caller asked for (drops an origin added during parsing)"""
        return self.times[1:] if self.implicit_origin else self.times

    @classmethod
    def parse(cls, text: str, coupling_mhz: Optional[float] = None) -> "Schedule":
        """'0,15,80' in ns, or 'cat:5,4,3,2' expanded with cat_time"""
        text = (text or "").strip()
        try:
            if text.startswith("cat:"):
                if coupling_mhz is None:
                    raise UserInputException("cat: schedules need a coupling")
                ms = [int(tok) for tok in text[4:].split(",") if tok.strip()]
                times = [device_model_service.cat_time(m, coupling_mhz) for m in ms]
            else:
                times = [float(tok) for tok in text.split(",") if tok.strip()]
        except ValueError as e:
            raise UserInputException(f"cannot parse schedule '{text}': {e}") from e

        if not times:
            raise UserInputException("schedule is empty")
        times = sorted(times)
        if times[0] < 0:
            raise UserInputException("schedule times must be >= 0")
        if times[0] == 0.0:
            return cls(tuple(times))
        return cls(tuple([0.0] + times), implicit_origin=True)


class EvolutionService:
    """Pure-state propagation under any operator form"""

    def __init__(self, propagators: Optional[Sequence[IPropagator]] = None):
        self.propagators: List[IPropagator] = list(
            propagators
            or [DickePhasePropagator(), DenseEigenPropagator(), LanczosPropagator()]
        )

    def select_propagator(self, op: OperatorHandle, method: str = "auto") -> IPropagator:
        for propagator in self.propagators:
            if method != "auto" and propagator.name != method:
                continue
            if propagator.supports(op):
                return propagator
        raise BasisMismatchException(
            f"no propagator '{method}' supports {op.form.value} (dim {op.dim})"
        )

    @track_operation("evolve")
    def evolve(
        self,
        state: PureState,
        op: OperatorHandle,
        t_ns: float,
        tol: Optional[float] = None,
        method: str = "auto",
    ) -> Tuple[PureState, PropagationReport]:
        """ψ(t) = e^{−iHt} ψ(0)"""
        tol = self._check_tol(tol)
        if t_ns < 0:
            raise DomainValueException(f"t must be >= 0, got {t_ns}")
        self._check_compatible(state, op)

        vector = self._embed(state, op)
        propagator = self.select_propagator(op, method)
        out, report = propagator.propagate(vector, op, t_ns, tol)

        norm = float(np.linalg.norm(out))
        if abs(norm - 1.0) > NumericConstants.NORM_DRIFT_TOL * max(
            1, len(report.accepted_steps)
        ):
            raise ConvergenceException(
                f"norm drift {abs(norm - 1.0):.2e} after {propagator.name}",
                details=report.summary(),
            )

        result = self._project(out, state, op, report)
        logger.debug(f"⏱️ evolve t={t_ns:.4g} ns via {report.method}")
        return result, report

    @track_operation("snapshot_series")
    def snapshot_series(
        self,
        state: PureState,
        op: OperatorHandle,
        schedule: Schedule,
        tol: Optional[float] = None,
        method: str = "auto",
    ) -> List[PureState]:
        """States at each schedule point, chained from the previous snapshot"""
        tol = self._check_tol(tol)
        self._check_compatible(state, op)

        snapshots = [state]
        if op.photon_cutoff:
            # chaining through the vacuum projection would discard photons
            for t in schedule.times[1:]:
                snapshots.append(self.evolve(state, op, t, tol, method)[0])
            return snapshots

        current = state
        for previous, t in zip(schedule.times, schedule.times[1:]):
            current, _ = self.evolve(current, op, t - previous, tol, method)
            snapshots.append(current)

        if len(schedule.times) > 2:
            direct, _ = self.evolve(state, op, schedule.times[-1], tol, method)
            gap = float(np.linalg.norm(direct.amplitudes - current.amplitudes))
            if gap > 10 * tol:
                raise ConvergenceException(
                    f"chained and direct evolution differ by {gap:.2e} (> 10·tol)",
                    details={"gap": gap, "tol": tol},
                )
        return snapshots

    # ===== 프레임 위상 =====

    @staticmethod
    def frame_phases(
        state: PureState, phases: Union[float, Sequence[float]]
    ) -> PureState:
        """z-rotation per qubit: |1_j⟩ picks up e^{iφ_j}"""
        if np.isscalar(phases):
            phases = [float(phases)] * state.n
        phases = np.asarray(phases, dtype=float)
        if phases.size != state.n:
            raise DomainValueException(
                f"expected {state.n} frame phases, got {phases.size}"
            )

        if state.basis == BasisKind.DICKE:
            if not np.allclose(phases, phases[0], atol=0.0, rtol=0.0):
                raise BasisMismatchException(
                    "Dicke basis only admits a uniform frame phase"
                )
            k = np.arange(state.n + 1)
            return state.with_amplitudes(state.amplitudes * np.exp(1j * k * phases[0]))

        index = np.arange(state.dim)
        total = np.zeros(state.dim)
        for j, phi in enumerate(phases):
            if phi:
                total += phi * ((index >> j) & 1)
        return state.with_amplitudes(state.amplitudes * np.exp(1j * total))

    @staticmethod
    def calibrate_frame_phase(
        state: PureState, target: PureState, scan_points: Optional[int] = None
    ) -> Tuple[float, float]:
        """
        Uniform frame phase ζ maximizing |⟨target|Z(ζ)ψ⟩|².

        The overlap is |Σ_k c_k e^{iζk}|² with c_k summed over weight-k entries,
        so a dense scan followed by bounded refinement finds the global maximum.
        """
        if state.basis != target.basis or state.n != target.n:
            raise BasisMismatchException("frame calibration needs matching bases")

        products = target.amplitudes.conj() * state.amplitudes
        if state.basis == BasisKind.DICKE:
            coeffs = products
        else:
            w = bit_weights(state.n)
            coeffs = np.bincount(
                w, weights=products.real, minlength=state.n + 1
            ) + 1j * np.bincount(w, weights=products.imag, minlength=state.n + 1)
        k = np.arange(state.n + 1)

        def overlap(zeta: float) -> float:
            return float(abs(np.sum(coeffs * np.exp(1j * zeta * k))) ** 2)

        points = scan_points or max(256, 16 * (state.n + 1))
        grid = np.linspace(-math.pi, math.pi, points, endpoint=False)
        values = np.abs(np.exp(1j * np.outer(grid, k)) @ coeffs) ** 2
        best = float(grid[int(np.argmax(values))])
        spacing = 2 * math.pi / points

        refined = minimize_scalar(
            lambda z: -overlap(z),
            bounds=(best - spacing, best + spacing),
            method="bounded",
            options={"xatol": 1e-12},
        )
        zeta = float(refined.x) if -refined.fun >= values.max() else best
        zeta = (zeta + math.pi) % (2 * math.pi) - math.pi
        return zeta, overlap(zeta)

    # ===== 스캔 =====

    def fidelity_vs_duration(
        self,
        state: PureState,
        op: OperatorHandle,
        durations: Sequence[float],
        target: PureState,
        calibrate: bool = False,
        tol: Optional[float] = None,
    ) -> List[Tuple[float, float]]:
        """(t, |⟨target|ψ(t)⟩|²) per duration; calibrate maximizes over a frame phase"""
        rows = []
        for t in durations:
            evolved, _ = self.evolve(state, op, float(t), tol)
            if calibrate:
                _, value = self.calibrate_frame_phase(evolved, target)
            else:
                value = abs(np.vdot(target.amplitudes, evolved.amplitudes)) ** 2
            rows.append((float(t), float(value)))
        return rows

    @staticmethod
    def revival_time(coupling_mhz: float) -> float:
        return device_model_service.revival_time(coupling_mhz)

    # ===== helpers =====

    @staticmethod
    def _check_tol(tol: Optional[float]) -> float:
        tol = get_settings().default_tol if tol is None else float(tol)
        if not NumericConstants.TOL_MIN <= tol <= NumericConstants.TOL_MAX:
            raise DomainValueException(
                f"tol {tol} outside [{NumericConstants.TOL_MIN}, "
                f"{NumericConstants.TOL_MAX}]"
            )
        return tol

    @staticmethod
    def _check_compatible(state: PureState, op: OperatorHandle):
        if op.form == OperatorForm.DICKE_DIAGONAL:
            expected = BasisKind.DICKE
        else:
            expected = BasisKind.FULL
        if state.basis != expected or state.n != op.n:
            raise BasisMismatchException(
                f"{op.form.value}(N={op.n}) needs a {expected.value}({op.n}) state, "
                f"got {state.basis.value}({state.n})"
            )

    @staticmethod
    def _embed(state: PureState, op: OperatorHandle) -> np.ndarray:
        """Qubit state -> op space; resonator models start in the vacuum block"""
        if op.dim == state.dim:
            return state.amplitudes.astype(complex)
        vector = np.zeros(op.dim, dtype=complex)
        vector[: state.dim] = state.amplitudes
        return vector

    @staticmethod
    def _project(
        vector: np.ndarray, state: PureState, op: OperatorHandle, report: PropagationReport
    ) -> PureState:
        if op.dim == state.dim:
            return state.with_amplitudes(vector)
        block = vector[: state.dim]
        weight = float(np.vdot(block, block).real)
        report.vacuum_weight = weight
        if weight < 1e-6:
            raise ConvergenceException(
                f"zero-photon weight {weight:.2e} too small to project"
            )
        return state.with_amplitudes(block / math.sqrt(weight))


evolution_service = EvolutionService()
