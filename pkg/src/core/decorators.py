"""
메트릭 수집을 위한 데코레이터들
"""

import functools
import time
from typing import Callable

from .logger import get_logger
from .metrics import get_metrics_collector

logger = get_logger("core.decorators")


def track_operation(operation_name: str):
    """라이브러리 연산 실행 추적 데코레이터 (호출 수, 실행 시간, 성공/실패)"""

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            status = "success"

            try:
                return func(*args, **kwargs)
            except Exception as e:
                status = "error"
                logger.debug(f"연산 실패: {operation_name} - {e}")
                raise
            finally:
                duration = time.perf_counter() - start_time
                get_metrics_collector().record_operation(
                    operation_name, status, duration
                )

        return wrapper

    return decorator
