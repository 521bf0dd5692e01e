"""
관측량 내보내기 (CSV / JSON)
"""

import json
from typing import Optional

import numpy as np

from src.dto.report.report_dtos import FringeFitDTO, ParityReportDTO
from .observables_service import ParityCurve, QGrid


def qgrid_to_csv(qgrid: QGrid) -> str:
    """Header row holds φ values, first column θ values"""
    lines = ["theta\\phi," + ",".join(f"{p:.17g}" for p in qgrid.phi)]
    for theta, row in zip(qgrid.theta, qgrid.values):
        lines.append(f"{theta:.17g}," + ",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def qgrid_from_csv(text: str) -> QGrid:
    rows = [line.split(",") for line in text.strip().splitlines()]
    phi = np.array([float(v) for v in rows[0][1:]])
    theta = np.array([float(r[0]) for r in rows[1:]])
    values = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return QGrid(theta=theta, phi=phi, values=values)


def qgrid_to_json(qgrid: QGrid) -> str:
    return json.dumps(
        {
            "theta": qgrid.theta.tolist(),
            "phi": qgrid.phi.tolist(),
            "values": qgrid.values.tolist(),
        },
        indent=2,
        sort_keys=True,
    )


def parity_report(curve: ParityCurve, fit: FringeFitDTO) -> ParityReportDTO:
    err: Optional[list] = None if curve.err is None else np.asarray(curve.err).tolist()
    return ParityReportDTO(
        gamma=np.asarray(curve.gamma).tolist(),
        parity=np.asarray(curve.parity).tolist(),
        err=err,
        A=fit.amplitude,
        phi=fit.phase,
        residual=fit.residual_rms,
    )


def parity_curve_to_csv(curve: ParityCurve) -> str:
    has_err = curve.err is not None
    lines = ["gamma,parity" + (",err" if has_err else "")]
    for i, (g, p) in enumerate(zip(curve.gamma, curve.parity)):
        row = f"{g:.17g},{p:.17g}"
        if has_err:
            row += f",{curve.err[i]:.17g}"
        lines.append(row)
    return "\n".join(lines) + "\n"
