"""
공용 테스트 픽스처
- 20 큐비트 디바이스, 균일 결합 디바이스 팩토리, 고정 시드 난수 생성기
- 테스트마다 설정 싱글톤 초기화
"""

import numpy as np
import pytest

from src.core.config import get_settings, reload_settings
from src.core.metrics import reset_metrics_collector
from src.service.device.device_model_service import device_model_service
from src.service.hamiltonian.hamiltonian_service import hamiltonian_service


@pytest.fixture(autouse=True)
def fresh_settings():
    """설정과 메트릭 레지스트리를 테스트마다 새로 만든다"""
    reload_settings()
    reset_metrics_collector()
    yield
    reload_settings()


@pytest.fixture(scope="session")
def device():
    return device_model_service.load_device_file(get_settings().device_path)


@pytest.fixture
def uniform_device():
    def factory(n: int, g_mhz: float = 27.45):
        return hamiltonian_service.uniform_device(n, g_mhz=g_mhz)

    return factory


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vector / np.linalg.norm(vector)
