"""
교차 경로 검증 오라클 스위트
- config/validation.yaml 의 레벨(fast/full)별 계획을 읽어 오라클을 순서대로 실행
- 오라클마다 측정 오차와 허용치를 담은 pass/fail 행을 만든다
- 하나라도 실패하면 CLI 는 종료 코드 3 으로 끝난다
"""

import math
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import yaml
from pydantic import ValidationError

from src.core.config import get_settings
from src.core.exceptions import (
    CustomException,
    ErrorCategory,
    OracleValidationException,
)
from src.core.logger import get_logger, logger_manager
from src.dto.common.enums import BasisKind, ModelKind, ProbabilityTag, ValidationLevel
from src.dto.report.report_dtos import OraclePlanEntryDTO, OracleResultDTO
from src.dto.state.state_dtos import BlochDirection
from src.service.device.device_model_service import device_model_service
from src.service.evolution.evolution_service import Schedule, evolution_service
from src.service.hamiltonian.hamiltonian_service import hamiltonian_service
from src.service.hamiltonian.operators import ResonatorSpec
from src.service.measurement.ghz_experiment_service import (
    INITIAL_DIRECTION,
    GhzRunParameters,
    expected_raw_fringe_phase,
    ghz_experiment_service,
)
from src.service.measurement.readout import ConfusionModel, ProbVector, SimplexProjector
from src.service.measurement.sampling import flip_shots, sample, sample_outcomes
from src.service.observables.observables_service import observables_service
from src.service.spin.pure_state import PureState
from src.service.spin.spin_state_service import spin_state_service

logger = get_logger("services.validation")

OracleOutcome = Tuple[float, str]


def _angle_error(measured: float, expected: float) -> float:
    """|measured − expected| modulo 2π"""
    return abs((measured - expected + math.pi) % (2 * math.pi) - math.pi)


class OracleSuiteService:
    """Runs named oracles against the thresholds of one validation level"""

    def __init__(self):
        self.oracles: Dict[str, Callable[[Dict[str, Any]], OracleOutcome]] = {
            "ghz_emergence": self.ghz_emergence,
            "parity_law": self.parity_law,
            "fringe_phase_rule": self.fringe_phase_rule,
            "cat_structure": self.cat_structure,
            "component_overlap": self.component_overlap,
            "dicke_vs_sector": self.dicke_vs_sector,
            "h1_vs_h2": self.h1_vs_h2,
            "readout_roundtrip": self.readout_roundtrip,
            "sampled_parity": self.sampled_parity,
            "mle_projection": self.mle_projection,
            "protocol_equivalence": self.protocol_equivalence,
            "witness_interface": self.witness_interface,
            "determinism": self.determinism,
        }

    # ===== 계획 / 실행 =====

    def load_plan(
        self, level: ValidationLevel, path: Optional[Union[str, Path]] = None
    ) -> List[OraclePlanEntryDTO]:
        path = Path(path or get_settings().validation_config)
        try:
            document = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as e:
            raise CustomException(
                f"cannot read validation plan {path}: {e}",
                category=ErrorCategory.CONFIGURATION_ERROR,
                original_exception=e,
            ) from e

        level = ValidationLevel(level)
        section = document.get(level.value)
        if not isinstance(section, dict) or not section:
            raise CustomException(
                f"validation plan {path} has no '{level.value}' level",
                category=ErrorCategory.CONFIGURATION_ERROR,
            )

        plan = []
        for name, body in section.items():
            if name not in self.oracles:
                raise CustomException(
                    f"unknown oracle '{name}' in {path}",
                    category=ErrorCategory.CONFIGURATION_ERROR,
                )
            body = dict(body or {})
            try:
                plan.append(
                    OraclePlanEntryDTO(
                        name=name,
                        threshold=body.pop("threshold"),
                        comparison=body.pop("comparison", "<="),
                        params=body,
                    )
                )
            except (KeyError, ValidationError) as e:
                raise CustomException(
                    f"oracle '{name}' in {path} is malformed: {e}",
                    category=ErrorCategory.CONFIGURATION_ERROR,
                    original_exception=e,
                ) from e
        return plan

    def run(
        self,
        level: ValidationLevel = ValidationLevel.FAST,
        path: Optional[Union[str, Path]] = None,
        only: Optional[List[str]] = None,
    ) -> List[OracleResultDTO]:
        level = ValidationLevel(level)
        plan = self.load_plan(level, path)
        if only:
            plan = [entry for entry in plan if entry.name in only]

        results = []
        with logger_manager.performance_logger(f"validate {level.value}"):
            for entry in plan:
                results.append(self.run_entry(entry, level))
        passed = sum(r.passed for r in results)
        logger.info(f"🔍 검증 {level.value}: {passed}/{len(results)} 통과")
        return results

    def run_entry(
        self, entry: OraclePlanEntryDTO, level: ValidationLevel
    ) -> OracleResultDTO:
        start = time.perf_counter()
        measured, detail = self.oracles[entry.name](entry.params)
        seconds = time.perf_counter() - start
        passed = bool(np.isfinite(measured)) and entry.passes(measured)

        log = logger.info if passed else logger.warning
        log(
            f"{'✅' if passed else '❌'} {entry.name}: measured={measured:.3e} "
            f"{entry.comparison} {entry.threshold:.3e} ({seconds:.2f}s)"
        )
        return OracleResultDTO(
            name=entry.name,
            level=ValidationLevel(level).value,
            passed=passed,
            measured=float(measured),
            threshold=entry.threshold,
            comparison=entry.comparison,
            seconds=seconds,
            detail=detail,
        )

    @staticmethod
    def require_pass(results: List[OracleResultDTO]):
        failed = [r.name for r in results if not r.passed]
        if failed:
            raise OracleValidationException(
                f"{len(failed)} oracle(s) failed: {', '.join(failed)}",
                details={"failed": failed},
            )

    @staticmethod
    def format_table(results: List[OracleResultDTO]) -> str:
        header = f"{'oracle':24} {'result':6} {'measured':>12}    {'threshold':>10} {'sec':>7}"
        rows = [header, "-" * len(header)]
        for r in results:
            rows.append(
                f"{r.name:24} {'PASS' if r.passed else 'FAIL':6} {r.measured:12.3e} "
                f"{r.comparison:>2} {r.threshold:10.3e} {r.seconds:7.2f}"
            )
        return "\n".join(rows)

    # ===== 이론 오라클 =====

    def ghz_emergence(self, params: Dict[str, Any]) -> OracleOutcome:
        """Ideal twisting at t = π/2|λ| against the closed-form cat, both signs of λ"""
        coupling = float(params.get("coupling_mhz", 1.0))
        worst = 0.0
        for n in params["n_values"]:
            initial = spin_state_service.atomic_coherent_state(
                n, INITIAL_DIRECTION, BasisKind.DICKE
            )
            for sign in (1, -1):
                op = hamiltonian_service.build_oat_uniform(
                    n, sign * coupling, include_stark=False
                )
                t = device_model_service.cat_time(2, coupling)
                evolved, _ = evolution_service.evolve(initial, op, t)
                reference = spin_state_service.ghz_reference_state(
                    n, INITIAL_DIRECTION, twist_sign=sign, basis=BasisKind.DICKE
                )
                worst = max(worst, 1.0 - spin_state_service.fidelity(reference, evolved))
        return worst, f"max infidelity over N={list(params['n_values'])}, λ=±{coupling}"

    def parity_law(self, params: Dict[str, Any]) -> OracleOutcome:
        """Ideal exact pipeline: amplitude 1 and phase π/2 at fringe frequency N"""
        worst, detail = 0.0, []
        for n in params["n_values"]:
            cfg = hamiltonian_service.uniform_device(n)
            result = ghz_experiment_service.run_ghz_experiment(
                cfg,
                GhzRunParameters(
                    subset=tuple(range(n)),
                    model=ModelKind.OAT,
                    gamma_points=int(params.get("gamma_points", 41)),
                ),
            )
            fringe = result.report.fringe
            error = max(abs(fringe.amplitude - 1.0), abs(fringe.phase - math.pi / 2))
            worst = max(worst, error)
            detail.append(f"N={n}:A={fringe.amplitude:.9f}")
        return worst, " ".join(detail)

    def fringe_phase_rule(self, params: Dict[str, Any]) -> OracleOutcome:
        """
        Uncalibrated fringe phase against the closed-form ±π/2 rule for both
        twisting variants and both signs of λ; the calibrated frame must be 0 or π
        accordingly and the final phase π/2.
        """
        coupling = float(params.get("coupling_mhz", 1.0))
        worst, flips = 0.0, 0
        for n in params["n_values"]:
            cfg = hamiltonian_service.uniform_device(n)
            for model in (ModelKind.OAT, ModelKind.OAT_IDEAL):
                for sign in (1, -1):
                    report = ghz_experiment_service.run_ghz_experiment(
                        cfg,
                        GhzRunParameters(
                            subset=tuple(range(n)),
                            model=model,
                            coupling_mhz=sign * coupling,
                            gamma_points=int(params.get("gamma_points", 41)),
                        ),
                    ).report
                    expected = expected_raw_fringe_phase(
                        n, sign, include_stark=model == ModelKind.OAT
                    )
                    frame = 0.0 if expected > 0 else math.pi
                    flips += int(expected < 0)
                    worst = max(
                        worst,
                        _angle_error(report.raw_fringe_phase, expected),
                        _angle_error(report.frame_phase, frame),
                        _angle_error(report.fringe.phase, math.pi / 2),
                    )
        return worst, f"N={list(params['n_values'])}, {flips} cases need a π frame"

    def cat_structure(self, params: Dict[str, Any]) -> OracleOutcome:
        """Lobe count m at t_m on the device couplings; t_m·m constant"""
        n = int(params.get("n", 20))
        components = [int(m) for m in params.get("components", [5, 4, 3, 2])]
        cfg = self._device()
        subset = list(range(n))
        coupling = device_model_service.dispersive_params(
            cfg, subset, float(params.get("detuning_mhz", -470.0))
        ).mean_coupling_mhz

        op = hamiltonian_service.build_oat_uniform(n, coupling)
        initial = spin_state_service.atomic_coherent_state(
            n, INITIAL_DIRECTION, BasisKind.DICKE
        )
        text = "cat:" + ",".join(str(m) for m in components)
        schedule = Schedule.parse(text, coupling)
        snapshots = evolution_service.snapshot_series(initial, op, schedule)

        # times ascend, so components descend
        expected = sorted(components, reverse=True)
        counts = [
            observables_service.equatorial_lobe_count(observables_service.husimi_q(s))
            for s in snapshots[1:]
        ]
        products = [t * m for t, m in zip(schedule.reported, expected)]
        spread = (max(products) - min(products)) / max(products)

        mismatches = sum(c != m for c, m in zip(counts, expected))
        mismatches += int(spread > 1e-9)
        return float(mismatches), f"lobes={counts} expected={expected} t·m spread={spread:.1e}"

    def component_overlap(self, params: Dict[str, Any]) -> OracleOutcome:
        """|⟨π/2,φ|π/2,φ+2π/m⟩| = cos^N(π/m)"""
        worst = 0.0
        for n in params["n_values"]:
            for m in params["components"]:
                a = spin_state_service.atomic_coherent_state(
                    n, BlochDirection(theta=math.pi / 2, phi=0.3), BasisKind.DICKE
                )
                b = spin_state_service.atomic_coherent_state(
                    n,
                    BlochDirection(theta=math.pi / 2, phi=0.3 + 2 * math.pi / m),
                    BasisKind.DICKE,
                )
                measured = abs(spin_state_service.overlap(a, b))
                expected = abs(math.cos(math.pi / m)) ** n
                worst = max(worst, abs(measured - expected))
        return worst, "max |overlap − cos^N(π/m)|"

    # ===== 교차 모델 오라클 =====

    def dicke_vs_sector(self, params: Dict[str, Any]) -> OracleOutcome:
        """Uniform-g sector-blocked H2 against Dicke twisting at t_2"""
        n = int(params["n"])
        cfg = hamiltonian_service.uniform_device(n)
        subset = list(range(n))
        detuning = float(params.get("detuning_mhz", -330.0))
        coupling = device_model_service.dispersive_params(
            cfg, subset, detuning
        ).mean_coupling_mhz
        t = device_model_service.cat_time(2, coupling)

        full, _ = evolution_service.evolve(
            spin_state_service.atomic_coherent_state(n, INITIAL_DIRECTION),
            hamiltonian_service.build_h2(cfg, subset, detuning),
            t,
        )
        dicke, _ = evolution_service.evolve(
            spin_state_service.atomic_coherent_state(n, INITIAL_DIRECTION, BasisKind.DICKE),
            hamiltonian_service.build_oat_uniform(n, coupling),
            t,
        )
        infidelity = 1.0 - spin_state_service.fidelity(
            full, spin_state_service.dicke_embed(dicke)
        )
        return infidelity, f"N={n}, t={t:.3f} ns"

    def h1_vs_h2(self, params: Dict[str, Any]) -> OracleOutcome:
        """
        Qubit-resonator model against the dispersive one at t_2; the overlap must
        grow as |Δ|/g doubles. Reported value is the overlap at the first ratio.
        """
        n = int(params.get("n", 3))
        ratios = [float(r) for r in params.get("ratios", [12, 24])]
        cfg = hamiltonian_service.uniform_device(n)
        subset = list(range(n))
        g = float(cfg.couplings_mhz(subset)[0])
        initial = spin_state_service.atomic_coherent_state(n, INITIAL_DIRECTION)
        resonator = ResonatorSpec(
            photon_cutoff=get_settings().photon_cutoff, resonator_ghz=cfg.resonator_ghz
        )

        overlaps = []
        for ratio in ratios:
            detuning = -ratio * g
            coupling = device_model_service.dispersive_params(
                cfg, subset, detuning
            ).mean_coupling_mhz
            t = device_model_service.cat_time(2, coupling)
            h1_state, _ = evolution_service.evolve(
                initial, hamiltonian_service.build_h1(cfg, subset, detuning, resonator), t
            )
            h2_state, _ = evolution_service.evolve(
                initial, hamiltonian_service.build_h2(cfg, subset, detuning), t
            )
            overlaps.append(spin_state_service.fidelity(h1_state, h2_state))

        monotone = all(b >= a for a, b in zip(overlaps, overlaps[1:]))
        detail = ", ".join(f"{r:g}:{o:.6f}" for r, o in zip(ratios, overlaps))
        if not monotone:
            return float("nan"), f"not monotone in |Δ|/g ({detail})"
        return overlaps[0], f"|Δ|/g -> overlap {detail}"

    # ===== 측정 파이프라인 오라클 =====

    def readout_roundtrip(self, params: Dict[str, Any]) -> OracleOutcome:
        n = int(params["n"])
        cfg = self._device()
        model = ConfusionModel.from_device(cfg, list(range(n)))
        rng = np.random.default_rng(int(params.get("seed", 11)))

        worst = 0.0
        for _ in range(int(params.get("vectors", 100))):
            p = ProbVector(rng.dirichlet(np.ones(1 << n)), ProbabilityTag.SIMPLEX)
            back = model.correct(model.apply(p))
            worst = max(worst, float(np.max(np.abs(back.values - p.values))))
        return worst, f"N={n} device fidelities"

    def sampled_parity(self, params: Dict[str, Any]) -> OracleOutcome:
        """
        Sampled ideal GHZ with device confusion, corrected: |A − 1| in units of the
        subgroup standard deviation of A.
        """
        n = int(params.get("n", 4))
        cfg = self._device()
        settings = get_settings()
        result = ghz_experiment_service.run_ghz_experiment(
            cfg,
            GhzRunParameters(
                subset=tuple(device_model_service.select_subset(cfg, f"first:{n}")),
                model=ModelKind.OAT,
                detuning_mhz=settings.detuning_mhz,
                shots=settings.shots_for(n),
                seed=int(params.get("seed", settings.seed)),
                gamma_points=settings.gamma_points,
                confusion=True,
                correct=True,
            ),
        )
        report = result.report
        deviation = abs(report.fringe.amplitude - 1.0)
        sigma = report.amplitude_err or 0.0
        if sigma <= 0.0:
            measured = 0.0 if deviation < 1e-12 else float("inf")
        else:
            measured = deviation / sigma
        return measured, (
            f"A={report.fringe.amplitude:.4f} σ={sigma:.4f} "
            f"({report.subgroups} groups of {settings.group_size_for(n)})"
        )

    def mle_projection(self, params: Dict[str, Any]) -> OracleOutcome:
        """Idempotence and a brute-force nearest point on the 3-outcome simplex"""
        projector = SimplexProjector()
        rng = np.random.default_rng(int(params.get("seed", 5)))
        step = float(params.get("resolution", 1e-3))

        ticks = np.arange(0.0, 1.0 + step / 2, step)
        a, b = np.meshgrid(ticks, ticks, indexing="ij")
        keep = a + b <= 1.0 + 1e-12
        grid = np.column_stack([a[keep], b[keep], np.clip(1.0 - a[keep] - b[keep], 0, 1)])

        worst = 0.0
        for _ in range(int(params.get("vectors", 5))):
            q = rng.dirichlet(np.ones(3)) + rng.normal(0.0, 0.2, size=3)
            q += (1.0 - q.sum()) / 3.0
            projected = projector.project(q)
            if np.max(np.abs(projector.project(projected) - projected)) > 1e-12:
                return float("inf"), "projection is not idempotent"
            nearest = grid[int(np.argmin(np.sum((grid - q) ** 2, axis=1)))]
            worst = max(worst, float(np.max(np.abs(projected - nearest))))
        return worst, f"max |projection − grid nearest| at step {step:g}"

    def protocol_equivalence(self, params: Dict[str, Any]) -> OracleOutcome:
        """Rotate-and-read corner probability against the direct Q value"""
        rng = np.random.default_rng(int(params.get("seed", 3)))
        max_n = int(params.get("max_n", 8))
        worst = 0.0
        for _ in range(int(params.get("pairs", 50))):
            n = int(rng.integers(1, max_n + 1))
            raw = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            state = PureState(BasisKind.FULL, n, raw / np.linalg.norm(raw))
            direction = BlochDirection(
                theta=float(rng.uniform(0, math.pi)),
                phi=float(rng.uniform(-math.pi, math.pi)),
            )
            worst = max(
                worst,
                abs(
                    observables_service.q_protocol(state, direction)
                    - observables_service.q_point(state, direction)
                ),
            )
        return worst, f"random states N <= {max_n}"

    def witness_interface(self, params: Dict[str, Any]) -> OracleOutcome:
        cases = [
            ((0.5, 0.5, 0.5), (1.0, True)),
            ((0.5, 0.5, 0.0), (0.5, False)),
            ((0.5, 0.5, 0.025), (0.525, True)),
        ]
        mismatches = 0
        for args, (fidelity, genuine) in cases:
            value, verdict = observables_service.ghz_fidelity(*args)
            mismatches += int(abs(value - fidelity) > 1e-15 or verdict != genuine)
        return float(mismatches), f"{len(cases)} witness cases"

    def determinism(self, params: Dict[str, Any]) -> OracleOutcome:
        """Same seed -> same shots, independent of the worker count"""
        shots = int(params.get("shots", 150_000))
        threads = int(params.get("threads", 4))
        seed = int(params.get("seed", get_settings().seed))
        rng = np.random.default_rng(1)
        p = rng.dirichlet(np.ones(8))

        serial = sample_outcomes(p, shots, seed, stream=2, threads=1)
        parallel = sample_outcomes(p, shots, seed, stream=2, threads=threads)
        mismatches = int(np.count_nonzero(serial != parallel))

        model = ConfusionModel(((0.95, 0.9), (0.97, 0.92), (0.9, 0.85)))
        table = sample(ProbVector(p, ProbabilityTag.SIMPLEX), shots, seed, stream=3)
        flipped_serial = flip_shots(table, model, seed, stream=3, threads=1)
        flipped_parallel = flip_shots(table, model, seed, stream=3, threads=threads)
        mismatches += int(
            np.count_nonzero(flipped_serial.shot_log != flipped_parallel.shot_log)
        )
        return float(mismatches), f"{shots} shots, 1 vs {threads} threads"

    # ===== helpers =====

    @staticmethod
    def _device():
        return device_model_service.load_device_file(get_settings().device_path)


oracle_suite_service = OracleSuiteService()
