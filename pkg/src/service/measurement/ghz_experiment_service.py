"""
GHZ 실험 파이프라인 서비스
Zone I   : 모든 큐비트를 (|0⟩ − i|1⟩)/√2 로 준비
Zone II  : 결합 해밀토니안으로 전개 (+ 균일 프레임 위상 보정)
Zone III : N 홀수 X_{π/2}, N 짝수 Y_{π/2}
Zone IV  : 모서리 모집단과 패리티 스캔 (샘플링, 판독 오차, 보정, MLE, 피팅)
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.config import get_settings
from src.core.decorators import track_operation
from src.core.exceptions import DomainValueException
from src.core.logger import get_logger, logger_manager
from src.dto.common.enums import BasisKind, ModelKind, ProbabilityTag, ReadoutProfile
from src.dto.device.device_dtos import DeviceConfig
from src.dto.report.report_dtos import GhzReportDTO
from src.dto.state.state_dtos import BlochDirection, LocalRotation
from src.service.device.device_model_service import device_model_service
from src.service.evolution.evolution_service import evolution_service
from src.service.hamiltonian.hamiltonian_service import hamiltonian_service
from src.service.hamiltonian.operators import OperatorHandle
from src.service.observables.observables_service import ParityCurve, observables_service
from src.service.spin.pure_state import PureState
from src.service.spin.spin_state_service import spin_state_service
from .counts import CountTable
from .measurement_service import measurement_service
from .readout import ConfusionModel, ProbVector
from .sampling import flip_shots, sample

logger = get_logger("services.ghz_experiment")

INITIAL_DIRECTION = BlochDirection(theta=math.pi / 2, phi=-math.pi / 2)


@dataclass
class GhzExperimentResult:
    report: GhzReportDTO
    curve: ParityCurve
    # corner setting first, then one table per γ (sampled runs only)
    tables: List[CountTable] = field(default_factory=list)


@dataclass(frozen=True)
class GhzRunParameters:
    subset: Tuple[int, ...]
    model: ModelKind = ModelKind.OAT
    detuning_mhz: Optional[float] = None
    coupling_mhz: Optional[float] = None
    duration_ns: Optional[float] = None
    shots: Optional[int] = None
    seed: int = 0
    gamma_points: int = 41
    gammas: Optional[Tuple[float, ...]] = None
    confusion: bool = False
    correct: bool = True
    frame_phase: Optional[float] = None
    include_crosstalk: bool = False
    readout_profile: ReadoutProfile = ReadoutProfile.GHZ
    tol: Optional[float] = None


def zone_three_rotation(n: int) -> LocalRotation:
    """π/2 about x for odd N, about y for even N"""
    return LocalRotation.x90() if n % 2 else LocalRotation.y90()


def expected_raw_fringe_phase(n: int, twist_sign: int, include_stark: bool) -> float:
    """
    Fringe phase of the uniform-twisting cat at t = π/2|λ| before any frame
    correction (zone-I state and zone-III pulse as above).

    Without the linear term: +π/2 for even N, −sπ/2 for N ≡ 1 (mod 4) and
    +sπ/2 for N ≡ 3 (mod 4), s = sign λ. The Stark term adds 2λk, an azimuth
    shift of sπ at that time, which negates the phase for every N.
    """
    if twist_sign not in (1, -1):
        raise DomainValueException(f"twist_sign must be ±1, got {twist_sign}")
    if n % 2 == 0:
        phase = math.pi / 2
    elif n % 4 == 1:
        phase = -twist_sign * math.pi / 2
    else:
        phase = twist_sign * math.pi / 2
    return -phase if include_stark else phase


def canonical_ghz_target(n: int) -> PureState:
    """
    Pre-zone-III image of (|0…0⟩ + e^{i(π/2 + Nπ/2)}|1…1⟩)/√2, the GHZ whose
    parity fringe is cos(Nγ + π/2).
    """
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0 / math.sqrt(2.0)
    amps[-1] = np.exp(1j * (math.pi / 2 + n * math.pi / 2)) / math.sqrt(2.0)
    ghz = PureState(BasisKind.FULL, n, amps)
    forward = zone_three_rotation(n)
    inverse = LocalRotation(alpha=forward.alpha, beta=-forward.beta)
    return spin_state_service.apply_uniform_rotation(ghz, inverse)


class GhzExperimentService:
    """End-to-end simulation of the GHZ preparation and characterization sequence"""

    @track_operation("run_ghz_experiment")
    def run_ghz_experiment(
        self, cfg: DeviceConfig, params: GhzRunParameters
    ) -> GhzExperimentResult:
        subset = list(params.subset)
        n = len(subset)
        if n < 2:
            raise DomainValueException("GHZ experiment needs at least 2 qubits")

        detuning, coupling = self.resolve_coupling(cfg, subset, params)
        duration = (
            params.duration_ns
            if params.duration_ns is not None
            else device_model_service.cat_time(2, coupling)
        )
        gammas = (
            np.asarray(params.gammas, dtype=float)
            if params.gammas is not None
            else observables_service.gamma_grid(params.gamma_points)
        )

        with logger_manager.performance_logger(f"ghz N={n} {ModelKind(params.model).value}"):
            evolved = self.prepare_state(
                cfg, subset, ModelKind(params.model), detuning, coupling, duration,
                params.include_crosstalk, params.tol,
            )

            target = canonical_ghz_target(n)
            if params.frame_phase is None:
                frame, overlap = evolution_service.calibrate_frame_phase(evolved, target)
            else:
                frame = float(params.frame_phase)
                framed = evolution_service.frame_phases(evolved, frame)
                overlap = abs(np.vdot(target.amplitudes, framed.amplitudes)) ** 2

            rotation = zone_three_rotation(n)
            raw_ghz = spin_state_service.apply_uniform_rotation(evolved, rotation)
            raw_fit = observables_service.fit_fringe(
                observables_service.parity_curve(raw_ghz, gammas), n
            )
            ghz = spin_state_service.apply_uniform_rotation(
                evolution_service.frame_phases(evolved, frame), rotation
            )

            model = (
                ConfusionModel.from_device(cfg, subset, params.readout_profile)
                if params.confusion
                else None
            )
            report, curve, tables = self._characterize(ghz, gammas, model, params)

        payload = report | {
            "n": n,
            "model": ModelKind(params.model).value,
            "subset": subset,
            "detuning_mhz": detuning,
            "coupling_mhz": coupling,
            "duration_ns": duration,
            "shots": params.shots,
            "seed": params.seed if params.shots else None,
            "confusion": params.confusion,
            "corrected": bool(params.confusion and params.correct),
            "frame_phase": frame,
            "frame_overlap": float(overlap),
            "raw_fringe_phase": raw_fit.phase,
        }
        dto = GhzReportDTO(**payload)
        logger.info(
            f"🧪 GHZ N={n}: F={dto.fidelity:.6f} "
            f"({'genuine' if dto.genuine else 'not genuine'}), "
            f"A={dto.fringe.amplitude:.6f}, φ={dto.fringe.phase:.6f}"
        )
        return GhzExperimentResult(report=dto, curve=curve, tables=tables)

    # ===== zones I–II =====

    def prepare_state(
        self,
        cfg: DeviceConfig,
        subset: Sequence[int],
        model: ModelKind,
        detuning_mhz: float,
        coupling_mhz: float,
        duration_ns: float,
        include_crosstalk: bool = False,
        tol: Optional[float] = None,
    ) -> PureState:
        """Full-basis state after zone II (no frame correction)"""
        initial, op = self.evolution_setup(
            cfg, subset, model, detuning_mhz, coupling_mhz, include_crosstalk
        )
        evolved, report = evolution_service.evolve(initial, op, duration_ns, tol)
        if report.vacuum_weight is not None:
            logger.debug(f"zero-photon weight after H1: {report.vacuum_weight:.6f}")
        if evolved.basis == BasisKind.DICKE:
            return spin_state_service.dicke_embed(evolved)
        return evolved

    @staticmethod
    def evolution_setup(
        cfg: DeviceConfig,
        subset: Sequence[int],
        model: ModelKind,
        detuning_mhz: float,
        coupling_mhz: float,
        include_crosstalk: bool = False,
    ) -> Tuple[PureState, OperatorHandle]:
        """Zone-I state and the zone-II operator; OAT runs on the Dicke ladder"""
        n = len(subset)
        model = ModelKind(model)
        if model in (ModelKind.OAT, ModelKind.OAT_IDEAL):
            return (
                spin_state_service.atomic_coherent_state(
                    n, INITIAL_DIRECTION, BasisKind.DICKE
                ),
                hamiltonian_service.build_oat_uniform(
                    n, coupling_mhz, include_stark=model == ModelKind.OAT
                ),
            )

        initial = spin_state_service.atomic_coherent_state(n, INITIAL_DIRECTION)
        if model == ModelKind.H1:
            op = hamiltonian_service.build_h1(
                cfg, subset, detuning_mhz, include_crosstalk=include_crosstalk
            )
        else:
            op = hamiltonian_service.build_h2(
                cfg, subset, detuning_mhz, include_crosstalk=include_crosstalk
            )
        return initial, op

    def duration_scan(
        self,
        cfg: DeviceConfig,
        params: GhzRunParameters,
        durations: Sequence[float],
    ) -> List[Tuple[float, float]]:
        """GHZ overlap (frame phase optimized) against the evolution time"""
        subset = list(params.subset)
        detuning, coupling = self.resolve_coupling(cfg, subset, params)
        initial, op = self.evolution_setup(
            cfg, subset, ModelKind(params.model), detuning, coupling,
            params.include_crosstalk,
        )
        target = canonical_ghz_target(len(subset))
        if initial.basis == BasisKind.DICKE:
            target, _ = spin_state_service.dicke_project(target)
        return evolution_service.fidelity_vs_duration(
            initial, op, durations, target, calibrate=True, tol=params.tol
        )

    # ===== zone IV =====

    def _characterize(
        self,
        ghz: PureState,
        gammas: np.ndarray,
        model: Optional[ConfusionModel],
        params: GhzRunParameters,
    ) -> Tuple[dict, ParityCurve, List[CountTable]]:
        n = ghz.n
        correct = params.correct
        settings_probs = [ghz.probabilities()] + [
            spin_state_service.apply_uniform_rotation(
                ghz, observables_service.parity_rotation(g)
            ).probabilities()
            for g in gammas
        ]

        if params.shots is None:
            processed = [self._exact(p, model, correct) for p in settings_probs]
            corner = processed[0]
            curve = ParityCurve(
                gamma=gammas,
                parity=np.array([measurement_service.parity_from_probs(p) for p in processed[1:]]),
            )
            fit = observables_service.fit_fringe(curve, n)
            return self._summary(corner, fit), curve, []

        tables = [
            self._sampled(p, params.shots, params.seed, stream, model)
            for stream, p in enumerate(settings_probs)
        ]
        processed = [
            measurement_service.process(t.probabilities(), model, correct) for t in tables
        ]
        corner = processed[0]

        group_size = get_settings().group_size_for(n)
        errors = None
        group_stats = {}
        if params.shots >= 2 * group_size:
            errors = np.array(
                [
                    measurement_service.subgroup_errorbars(t, group_size, model, correct)[1]
                    for t in tables[1:]
                ]
            )
            group_stats = self._group_statistics(tables, gammas, group_size, model, correct)
        else:
            logger.warning(
                f"⚠️ {params.shots} shots < 2 groups of {group_size}; no error bars"
            )

        curve = ParityCurve(
            gamma=gammas,
            parity=np.array([measurement_service.parity_from_probs(p) for p in processed[1:]]),
            err=errors,
        )
        fit = observables_service.fit_fringe(curve, n)
        return self._summary(corner, fit) | group_stats, curve, tables

    @staticmethod
    def _exact(
        p: np.ndarray, model: Optional[ConfusionModel], correct: bool
    ) -> ProbVector:
        vector = ProbVector(p / p.sum(), ProbabilityTag.SIMPLEX)
        if model is None:
            return vector
        reported = measurement_service.apply_confusion(vector, model)
        if not correct:
            return reported
        return measurement_service.process(reported, model, correct=True)

    @staticmethod
    def _sampled(
        p: np.ndarray,
        shots: int,
        seed: int,
        stream: int,
        model: Optional[ConfusionModel],
    ):
        table = sample(ProbVector(p / p.sum(), ProbabilityTag.SIMPLEX), shots, seed, stream)
        if model is not None:
            table = flip_shots(table, model, seed, stream)
        return table

    def _group_statistics(
        self,
        tables,
        gammas: np.ndarray,
        group_size: int,
        model: Optional[ConfusionModel],
        correct: bool,
    ) -> dict:
        """Per-subgroup ρ00, ρ11 and fidelity; population std across groups"""
        grouped = [t.subgroups(group_size) for t in tables]
        count = min(len(g) for g in grouped)
        n = tables[0].n
        rho_00, rho_11, fidelity, amplitude = [], [], [], []
        for g in range(count):
            corner = measurement_service.process(grouped[0][g].probabilities(), model, correct)
            parity = [
                measurement_service.parity_from_probs(
                    measurement_service.process(groups[g].probabilities(), model, correct)
                )
                for groups in grouped[1:]
            ]
            fit = observables_service.fit_fringe(
                ParityCurve(gamma=gammas, parity=np.array(parity)), n
            )
            summary = self._summary(corner, fit)
            rho_00.append(summary["rho_00"])
            rho_11.append(summary["rho_11"])
            fidelity.append(summary["fidelity"])
            amplitude.append(fit.amplitude)
        return {
            "rho_00_err": float(np.std(rho_00)),
            "rho_11_err": float(np.std(rho_11)),
            "fidelity_err": float(np.std(fidelity)),
            "amplitude_err": float(np.std(amplitude)),
            "subgroups": count,
        }

    @staticmethod
    def _summary(corner: ProbVector, fit) -> dict:
        rho_00 = float(np.clip(corner.values[0], 0.0, 1.0))
        rho_11 = float(np.clip(corner.values[-1], 0.0, 1.0))
        off = float(min(max(fit.amplitude / 2.0, 0.0), 1.0))
        fidelity, genuine = observables_service.ghz_fidelity(rho_00, rho_11, off)
        return {
            "rho_00": rho_00,
            "rho_11": rho_11,
            "off_diagonal": off,
            "fidelity": fidelity,
            "genuine": genuine,
            "fringe": fit,
        }

    # ===== helpers =====

    @staticmethod
    def resolve_coupling(
        cfg: DeviceConfig, subset: Sequence[int], params: GhzRunParameters
    ) -> Tuple[float, float]:
        """(Δ, λ̄) in MHz from whichever of the two was given"""
        if params.coupling_mhz is not None:
            detuning = device_model_service.detuning_for_coupling(
                cfg, subset, params.coupling_mhz
            )
            return detuning, float(params.coupling_mhz)
        detuning = (
            params.detuning_mhz
            if params.detuning_mhz is not None
            else get_settings().detuning_mhz
        )
        dispersive = device_model_service.dispersive_params(cfg, subset, detuning)
        return float(detuning), dispersive.mean_coupling_mhz


ghz_experiment_service = GhzExperimentService()
