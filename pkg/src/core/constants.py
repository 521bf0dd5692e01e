"""
OATSim 상수 중앙 관리
하드코딩된 물리 상수와 수치 허용오차를 한 곳에서 관리
"""

import math


class UnitConstants:
    """단위 변환 (MHz·ns -> rad)"""

    # phase = 2π · f[MHz] · t[ns] · 1e-3
    MHZ_NS_TO_RAD = 2.0 * math.pi * 1e-3

    @staticmethod
    def angular(freq_mhz: float) -> float:
        """MHz -> rad/ns"""
        return UnitConstants.MHZ_NS_TO_RAD * freq_mhz


class DeviceConstants:
    """디바이스 관련 상수"""

    MIN_QUBITS = 1
    MAX_QUBITS = 20
    MAX_DICKE_QUBITS = 10_000
    DISPERSIVE_RATIO_WARN = 5.0
    RESONATOR_GHZ = 5.51

    # 큐비트들이 GHZ 실험 동안 ~4 GHz 로 빠져 있던 큐비트 (1-based id)
    GHZ_PARKED_QUBITS = ("Q15", "Q16")

    # m-성분 cat 상태가 관측된 시간 (ns)
    EXPERIMENT_CAT_TIMES_NS = {5: 80.0, 4: 95.0, 3: 130.0, 2: 195.0}
    GHZ_DETUNING_MHZ = -330.0
    CAT_DETUNING_MHZ = -470.0


class NumericConstants:
    """수치 허용오차"""

    NORM_TOL = 1e-12
    HERMITIAN_TOL = 1e-12
    DICKE_RESIDUAL_TOL = 1e-8
    NORM_DRIFT_TOL = 1e-10
    SIMPLEX_TOL = 1e-12
    TOL_MIN = 1e-14
    TOL_MAX = 1e-6
    LANCZOS_BREAKDOWN = 1e-14
    MOMENT_FLOOR = 1e-9


class GridConstants:
    """Q-함수 격자 기본값"""

    DEFAULT_THETA_POINTS = 61
    DEFAULT_PHI_POINTS = 121
    LOBE_FLOOR_FRACTION = 0.1


class ExitCodes:
    SUCCESS = 0
    FLAG_ERROR = 2
    VALIDATION_FAILURE = 3
    NONCONVERGENCE = 4
