"""
OATSim 명령줄 도구
- qfunc    : 시간별 Q-함수 격자 + 로브 수 + 스퀴징
- ghz      : GHZ 준비/특성화 파이프라인 리포트
- validate : 교차 경로 오라클 스위트
- device   : 디바이스 표 요약
플래그 기본값은 모두 OATSIM_ 환경 변수(설정)에서 온다.
"""

import argparse
import sys
from typing import Any, Dict, List, Optional

from src.core.config import get_settings, reload_settings
from src.core.constants import DeviceConstants, ExitCodes
from src.core.exceptions import UserInputException, global_exception_handler
from src.core.logger import get_logger, initialize_logging_system
from src.core.metrics import reset_metrics_collector
from src.dto.common.enums import ModelKind, ValidationLevel
from src.dto.device.device_dtos import DeviceConfig
from src.dto.report.report_dtos import DurationScanRowDTO, LobeSummaryDTO
from src.service.artifacts.run_artifact_service import run_artifact_service
from src.service.device.device_model_service import device_model_service
from src.service.evolution.evolution_service import Schedule, evolution_service
from src.service.measurement.ghz_experiment_service import (
    GhzRunParameters,
    ghz_experiment_service,
)
from src.service.observables.export_service import (
    parity_curve_to_csv,
    parity_report,
    qgrid_to_csv,
)
from src.service.observables.observables_service import observables_service
from src.service.validation.oracle_suite_service import oracle_suite_service

logger = get_logger("controller.cli")

DEVICE_HELP = "Device file (JSON/YAML), default device/table_s1.json"


def _int_at_least(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value

    return parse


def _on_off(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered not in ("on", "off"):
        raise argparse.ArgumentTypeError(f"expected on|off, got '{text}'")
    return lowered == "on"


def _float_list(text: str) -> List[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers: '{text}'")


def parse_grid(text: str) -> tuple:
    """'61x121' -> (61, 121)"""
    try:
        theta, phi = (int(tok) for tok in text.lower().split("x"))
    except ValueError as e:
        raise UserInputException(f"grid must look like 61x121, got '{text}'") from e
    if theta < 2 or phi < 2:
        raise UserInputException(f"grid {text} is too small")
    return theta, phi


class OatsimCLI:
    """oatsim 명령줄 인터페이스 클래스"""

    def __init__(self):
        self.parser = argparse.ArgumentParser(
            prog="oatsim",
            description="One-axis-twisting simulator for qubits on a bus resonator",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
사용 예시:
  oatsim qfunc --n 20 --model oat --times cat:5,4,3,2 --out out/cats
  oatsim ghz --n 4 --exact --confusion off --out out/ghz4
  oatsim ghz --subset ghz18 --shots 3000 --seed 7 --confusion on
  oatsim validate --level fast
  oatsim device --detuning-mhz -470
            """,
        )
        self.parser.add_argument("--threads", type=_int_at_least(1), help="Worker cap")
        self.parser.add_argument("--log-level", help="DEBUG, INFO, WARNING, ERROR")

        subparsers = self.parser.add_subparsers(dest="command", help="Subcommands")

        # Q-함수 스냅샷
        qfunc = subparsers.add_parser("qfunc", help="Q-function grids over time")
        self._add_device_flags(qfunc)
        qfunc.add_argument("--times", help="ns list '0,80,195' or 'cat:5,4,3,2'")
        qfunc.add_argument("--grid", help="θ×φ points, e.g. 61x121")
        qfunc.add_argument("--frame-phase", type=float, help="Uniform frame phase (rad)")
        qfunc.add_argument("--out", help="Output directory")

        # GHZ 파이프라인
        ghz = subparsers.add_parser("ghz", help="GHZ preparation and parity scan")
        self._add_device_flags(ghz)
        ghz.add_argument("--duration-ns", type=float, help="Default π/2|λ̄|")
        ghz.add_argument(
            "--scan-durations", type=_float_list, help="Write GHZ overlap per duration"
        )
        ghz.add_argument("--frame-phase", help="RAD or 'auto'")
        ghz.add_argument("--shots", help="Shots per setting, or 'exact'")
        ghz.add_argument("--exact", action="store_true", help="Same as --shots exact")
        ghz.add_argument("--seed", type=int)
        ghz.add_argument("--gamma-points", type=_int_at_least(3))
        ghz.add_argument("--confusion", type=_on_off, help="on|off")
        ghz.add_argument("--correct", type=_on_off, help="on|off")
        ghz.add_argument("--out", help="Output directory")

        # 검증
        validate = subparsers.add_parser("validate", help="Run the oracle suite")
        validate.add_argument(
            "--level", choices=[level.value for level in ValidationLevel]
        )
        validate.add_argument("--config", help="Validation plan (YAML)")
        validate.add_argument("--only", action="append", help="Run one oracle by name")
        validate.add_argument("--out", help="Also write validation.json here")

        # 디바이스 요약
        device = subparsers.add_parser("device", help="Summarize the device table")
        device.add_argument("--device", help=DEVICE_HELP)
        device.add_argument("--subset", help="all | ghz18 | first:N | id list")
        device.add_argument("--detuning-mhz", type=float)
        device.add_argument("--save", help="Write the validated table as JSON")

    @staticmethod
    def _add_device_flags(parser: argparse.ArgumentParser):
        parser.add_argument("--device", help=DEVICE_HELP)
        parser.add_argument("--n", type=_int_at_least(1), help="First N qubits")
        parser.add_argument("--subset", help="all | ghz18 | first:N | id list")
        parser.add_argument("--model", choices=[m.value for m in ModelKind])
        coupling = parser.add_mutually_exclusive_group()
        coupling.add_argument("--detuning-mhz", type=float)
        coupling.add_argument("--coupling-mhz", type=float, help="Target λ̄ (MHz)")
        parser.add_argument("--tol", type=float, help="Propagation tolerance")
        parser.add_argument(
            "--crosstalk", action="store_true", default=None, help="Add λ^c ring"
        )

    # ===== 실행 =====

    def run(self, args: Optional[List[str]] = None) -> int:
        """CLI 실행; 종료 코드 반환"""
        if args is None:
            args = sys.argv[1:]

        try:
            parsed = self.parser.parse_args(args)
        except SystemExit as e:
            return int(e.code or 0)

        if not parsed.command:
            self.parser.print_help()
            return ExitCodes.FLAG_ERROR

        overrides: Dict[str, Any] = {}
        if parsed.threads:
            overrides["threads"] = parsed.threads
        if parsed.log_level:
            overrides["log_level"] = parsed.log_level
        if overrides:
            reload_settings(**overrides)
        initialize_logging_system(parsed.log_level)
        reset_metrics_collector()

        handlers = {
            "qfunc": self.cmd_qfunc,
            "ghz": self.cmd_ghz,
            "validate": self.cmd_validate,
            "device": self.cmd_device,
        }
        try:
            self._apply_setting_defaults(parsed)
            return handlers[parsed.command](parsed)
        except Exception as e:
            code = global_exception_handler.handle_cli_exception(e, parsed.command)
            print(f"❌ {e}", file=sys.stderr)
            return code

    # ===== qfunc =====

    def cmd_qfunc(self, args) -> int:
        settings = get_settings()
        if not args.times:
            raise UserInputException("qfunc needs --times (or OATSIM_TIMES)")
        cfg, subset = self._load_device(args)
        n = len(subset)
        model = ModelKind(args.model)
        detuning, coupling = self._coupling(cfg, subset, args, settings.cat_detuning_mhz)

        schedule = Schedule.parse(args.times, coupling)
        n_theta, n_phi = parse_grid(args.grid) if args.grid else (
            settings.grid_theta,
            settings.grid_phi,
        )
        initial, op = ghz_experiment_service.evolution_setup(
            cfg, subset, model, detuning, coupling, args.crosstalk
        )
        out_dir = args.out or settings.output_dir
        parameters = {
            "n": n,
            "subset": subset,
            "model": model.value,
            "detuning_mhz": detuning,
            "coupling_mhz": coupling,
            "times": list(schedule.reported),
            "grid": [n_theta, n_phi],
            "frame_phase": args.frame_phase,
            "tol": args.tol or settings.default_tol,
            "crosstalk": args.crosstalk,
        }

        with run_artifact_service.open_run(
            out_dir, "qfunc", parameters, input_config_path=self._device_path(args)
        ) as run:
            snapshots = evolution_service.snapshot_series(initial, op, schedule, args.tol)
            offset = 1 if schedule.implicit_origin else 0
            lobes, squeezing = [], []
            for index, (t, state) in enumerate(
                zip(schedule.times[offset:], snapshots[offset:])
            ):
                if args.frame_phase is not None:
                    state = evolution_service.frame_phases(state, args.frame_phase)
                grid = observables_service.husimi_q(state, n_theta, n_phi)
                name = f"qgrid_{index:02d}.csv"
                run.write_text(name, qgrid_to_csv(grid))

                moments = observables_service.collective_moments(state)
                lobes.append(
                    LobeSummaryDTO(
                        time_ns=t,
                        lobes=observables_service.equatorial_lobe_count(grid),
                        q_max=float(grid.values.max()),
                        squeezing_xi2=moments.xi2,
                        file=name,
                    )
                )
                squeezing.append(
                    {
                        "time_ns": t,
                        "xi2": moments.xi2,
                        "squeezing_ratio": moments.squeezing_ratio,
                        "mean_spin": [float(v) for v in moments.mean],
                    }
                )

            run.write_json("lobes.json", [row.model_dump(mode="json") for row in lobes])
            run.write_json("squeezing.json", squeezing)

        for row in lobes:
            print(f"t={row.time_ns:10.4f} ns  lobes={row.lobes}  Qmax={row.q_max:.4f}")
        return ExitCodes.SUCCESS

    # ===== ghz =====

    def cmd_ghz(self, args) -> int:
        settings = get_settings()
        cfg, subset = self._load_device(args)
        n = len(subset)
        if n < 2:
            raise UserInputException("ghz needs at least 2 qubits")

        shots = self._shots(args, n)
        frame = self._frame_phase(args.frame_phase)
        params = GhzRunParameters(
            subset=tuple(subset),
            model=ModelKind(args.model),
            detuning_mhz=args.detuning_mhz,
            coupling_mhz=args.coupling_mhz,
            duration_ns=args.duration_ns,
            shots=shots,
            seed=args.seed if args.seed is not None else settings.seed,
            gamma_points=args.gamma_points or settings.gamma_points,
            confusion=args.confusion,
            correct=args.correct,
            frame_phase=frame,
            include_crosstalk=args.crosstalk,
            tol=args.tol,
        )
        parameters = {
            "n": n,
            "subset": subset,
            "model": params.model.value,
            "detuning_mhz": params.detuning_mhz,
            "coupling_mhz": params.coupling_mhz,
            "duration_ns": params.duration_ns,
            "shots": shots,
            "gamma_points": params.gamma_points,
            "confusion": params.confusion,
            "correct": params.correct,
            "frame_phase": "auto" if frame is None else frame,
            "crosstalk": params.include_crosstalk,
            "scan_durations": args.scan_durations,
            "tol": args.tol or settings.default_tol,
        }

        with run_artifact_service.open_run(
            args.out or settings.output_dir,
            "ghz",
            parameters,
            seed=params.seed if shots else None,
            input_config_path=self._device_path(args),
        ) as run:
            result = ghz_experiment_service.run_ghz_experiment(cfg, params)
            report = result.report
            run.write_json("ghz_report.json", report)
            run.write_text("parity.csv", parity_curve_to_csv(result.curve))
            run.write_json("parity.json", parity_report(result.curve, report.fringe))
            for index, table in enumerate(result.tables):
                label = "corner" if index == 0 else f"gamma_{index - 1:03d}"
                run.write_text(f"counts/{label}.txt", table.to_text())

            if args.scan_durations:
                rows = ghz_experiment_service.duration_scan(
                    cfg, params, args.scan_durations
                )
                lines = ["duration_ns,ghz_overlap"] + [
                    f"{t:.17g},{v:.17g}" for t, v in rows
                ]
                run.write_text("duration_scan.csv", "\n".join(lines) + "\n")
                run.write_json(
                    "duration_scan.json",
                    [
                        DurationScanRowDTO(duration_ns=t, ghz_overlap=v).model_dump()
                        for t, v in rows
                    ],
                )

        verdict = "genuine" if report.genuine else "NOT genuine"
        error = f" ± {report.fidelity_err:.4f}" if report.fidelity_err is not None else ""
        print(
            f"N={n}  ρ00={report.rho_00:.4f}  ρ11={report.rho_11:.4f}  "
            f"A={report.fringe.amplitude:.4f}  φ={report.fringe.phase:.4f}  "
            f"F={report.fidelity:.4f}{error}  ({verdict} multipartite entanglement)"
        )
        return ExitCodes.SUCCESS

    # ===== validate =====

    def cmd_validate(self, args) -> int:
        results = oracle_suite_service.run(
            ValidationLevel(args.level), args.config, args.only
        )
        print(oracle_suite_service.format_table(results))
        if args.out:
            with run_artifact_service.open_run(
                args.out, "validate", {"level": args.level, "only": args.only}
            ) as run:
                run.write_json(
                    "validation.json", [r.model_dump(mode="json") for r in results]
                )
        oracle_suite_service.require_pass(results)
        return ExitCodes.SUCCESS

    # ===== device =====

    def cmd_device(self, args) -> int:
        settings = get_settings()
        cfg, subset = self._load_device(args)
        detuning = (
            args.detuning_mhz
            if args.detuning_mhz is not None
            else settings.cat_detuning_mhz
        )
        dispersive = device_model_service.dispersive_params(cfg, subset, detuning)
        g = cfg.couplings_mhz(subset)

        print(f"qubits      : {len(subset)} ({', '.join(cfg.ids[i] for i in subset)})")
        print(f"resonator   : {cfg.resonator_ghz:.3f} GHz")
        print(f"g (MHz)     : mean {g.mean():.3f}, min {g.min():.3f}, max {g.max():.3f}")
        print(f"Δ (MHz)     : {detuning:.1f}  |Δ|/max g = {dispersive.validity_ratio:.2f}")
        print(f"λ̄ (MHz)     : {dispersive.mean_coupling_mhz:.4f}")
        for m in (5, 4, 3, 2):
            t = device_model_service.cat_time(m, dispersive.mean_coupling_mhz)
            observed = DeviceConstants.EXPERIMENT_CAT_TIMES_NS[m]
            print(f"t_{m} (ns)    : {t:.2f}  (observed ~{observed:.0f})")
        print(
            "revival (ns): "
            f"{device_model_service.revival_time(dispersive.mean_coupling_mhz):.2f}"
        )

        if args.save:
            with open(args.save, "w", encoding="utf-8") as f:
                f.write(device_model_service.save_device_config(cfg) + "\n")
            logger.info(f"💾 디바이스 표 저장: {args.save}")
        return ExitCodes.SUCCESS

    # ===== helpers =====

    # flag dest -> Settings field, per subcommand
    SETTING_DEFAULTS = {
        "qfunc": {"model": "model", "crosstalk": "crosstalk", "times": "times"},
        "ghz": {
            "model": "model",
            "crosstalk": "crosstalk",
            "shots": "shots",
            "confusion": "confusion",
            "correct": "correct",
            "frame_phase": "frame_phase",
        },
        "validate": {"level": "validation_level"},
    }

    def _apply_setting_defaults(self, args):
        """Fill flags left unset from OATSIM_* settings"""
        settings = get_settings()
        for dest, field_name in self.SETTING_DEFAULTS.get(args.command, {}).items():
            if getattr(args, dest, None) is None:
                setattr(args, dest, getattr(settings, field_name))

        if args.command in ("qfunc", "ghz"):
            args.model = ModelKind(args.model).value
            if args.n is None and args.subset is None:
                args.n = settings.n
            if args.detuning_mhz is None and args.coupling_mhz is None:
                args.coupling_mhz = settings.coupling_mhz
        if args.command == "validate":
            args.level = ValidationLevel(args.level).value

    @staticmethod
    def _device_path(args) -> str:
        return args.device or get_settings().device_path

    def _load_device(self, args) -> tuple:
        cfg: DeviceConfig = device_model_service.load_device_file(self._device_path(args))
        if getattr(args, "n", None) and args.subset:
            raise UserInputException("--n and --subset are mutually exclusive")
        if getattr(args, "n", None):
            spec = f"first:{args.n}"
        else:
            spec = args.subset or get_settings().subset
        return cfg, device_model_service.select_subset(cfg, spec)

    @staticmethod
    def _coupling(cfg, subset, args, default_detuning: float) -> tuple:
        """(Δ, λ̄) in MHz from --coupling-mhz or --detuning-mhz"""
        if args.coupling_mhz is not None:
            detuning = device_model_service.detuning_for_coupling(
                cfg, subset, args.coupling_mhz
            )
            return detuning, float(args.coupling_mhz)
        detuning = args.detuning_mhz if args.detuning_mhz is not None else default_detuning
        params = device_model_service.dispersive_params(cfg, subset, detuning)
        return float(detuning), params.mean_coupling_mhz

    @staticmethod
    def _shots(args, n: int) -> Optional[int]:
        if args.exact or (args.shots or "").strip().lower() == "exact":
            return None
        if args.shots is None:
            return get_settings().shots_for(n)
        try:
            shots = int(args.shots)
        except ValueError as e:
            raise UserInputException("--shots expects an integer or 'exact'") from e
        if shots < 1:
            raise UserInputException(f"--shots must be >= 1, got {shots}")
        return shots

    @staticmethod
    def _frame_phase(text: str) -> Optional[float]:
        if text is None or text.strip().lower() == "auto":
            return None
        try:
            return float(text)
        except ValueError as e:
            raise UserInputException("--frame-phase expects RAD or 'auto'") from e