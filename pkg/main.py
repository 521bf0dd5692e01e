"""
OATSim 메인 진입점
- `oatsim` 콘솔 스크립트 (poetry: main:main)
- 서브커맨드: qfunc, ghz, validate, device
"""

import sys
from typing import List, Optional

from src.controller.cli.oatsim_cli import OatsimCLI


def main(argv: Optional[List[str]] = None) -> int:
    return OatsimCLI().run(argv)


if __name__ == "__main__":
    sys.exit(main())
