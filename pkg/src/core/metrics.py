"""
Prometheus 메트릭 수집 모듈
- 연산 호출 수와 실행 시간
- 크릴로프 전파기 통계
- 샘플링/오류 카운트
"""

from pathlib import Path
from typing import Optional

from prometheus_client import (
    CollectorRegistry,
    Counter,
    Histogram,
    generate_latest,
    write_to_textfile,
)

from .logger import get_logger

logger = get_logger("core.metrics")


class MetricsCollector:
    """메트릭 수집기 클래스 (프로세스 전용 레지스트리)"""

    def __init__(self):
        self.registry = CollectorRegistry()
        self._init_metrics()

    def _init_metrics(self):
        self.operations = Counter(
            "oatsim_operations_total",
            "Total library operations executed",
            ["operation", "status"],
            registry=self.registry,
        )

        self.operation_duration = Histogram(
            "oatsim_operation_duration_seconds",
            "Operation wall time",
            ["operation"],
            registry=self.registry,
        )

        # 크릴로프 전파기
        self.krylov_steps = Counter(
            "oatsim_krylov_steps_total",
            "Accepted Lanczos propagation steps",
            ["form"],
            registry=self.registry,
        )

        self.krylov_rejections = Counter(
            "oatsim_krylov_rejected_steps_total",
            "Rejected Lanczos steps (error or norm drift)",
            ["form"],
            registry=self.registry,
        )

        self.krylov_subspace_dim = Histogram(
            "oatsim_krylov_subspace_dim",
            "Krylov subspace dimension used per accepted step",
            buckets=(2, 5, 10, 15, 20, 25, 30, 35, 40, 60),
            registry=self.registry,
        )

        self.shots_sampled = Counter(
            "oatsim_shots_sampled_total",
            "Total simulated measurement shots",
            registry=self.registry,
        )

        self.errors_total = Counter(
            "oatsim_errors_total",
            "Total handled errors",
            ["category"],
            registry=self.registry,
        )

    def record_operation(self, operation: str, status: str, duration: float):
        """연산 실행 기록"""
        self.operations.labels(operation=operation, status=status).inc()
        self.operation_duration.labels(operation=operation).observe(duration)

    def record_krylov_step(self, form: str, subspace_dim: int, accepted: bool = True):
        if accepted:
            self.krylov_steps.labels(form=form).inc()
            self.krylov_subspace_dim.observe(subspace_dim)
        else:
            self.krylov_rejections.labels(form=form).inc()

    def record_shots(self, shots: int):
        self.shots_sampled.inc(shots)

    def record_error(self, category: str):
        self.errors_total.labels(category=category).inc()

    def export_text(self) -> bytes:
        """텍스트 exposition 형식으로 직렬화"""
        return generate_latest(self.registry)

    def write_textfile(self, path: Path) -> Path:
        """실행 결과 디렉토리에 metrics.prom 기록"""
        write_to_textfile(str(path), self.registry)
        logger.debug(f"📊 메트릭 파일 기록: {path}")
        return path


_metrics_collector: Optional[MetricsCollector] = None


def get_metrics_collector() -> MetricsCollector:
    """메트릭 수집기 싱글톤"""
    global _metrics_collector
    if _metrics_collector is None:
        _metrics_collector = MetricsCollector()
    return _metrics_collector


def reset_metrics_collector() -> MetricsCollector:
    """새 레지스트리로 교체 (실행 단위 격리)"""
    global _metrics_collector
    _metrics_collector = MetricsCollector()
    return _metrics_collector
