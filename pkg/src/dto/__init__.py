"""
DTO Package
데이터 전송 객체들의 중앙 집중 접근점
"""

from .common import *  # noqa: F401,F403
from .device import *  # noqa: F401,F403
from .report import *  # noqa: F401,F403
from .state import *  # noqa: F401,F403
