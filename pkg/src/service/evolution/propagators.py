"""
전파기 구현체
- DickePhasePropagator: Dicke 대각 연산자의 정확한 위상 곱
- DenseEigenPropagator: 블록별 고유분해 (차원 <= dense_fallback_dim)
- LanczosPropagator: 적응형 Lanczos 부분공간 e^{−iHh}v, 사후 오차 추정과 스텝 재시도
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal

from src.core.config import get_settings
from src.core.constants import NumericConstants
from src.core.exceptions import ConvergenceException
from src.core.logger import get_logger
from src.core.metrics import get_metrics_collector
from src.dto.common.enums import OperatorForm
from src.interface.service.service_interfaces import IPropagator
from src.service.hamiltonian.operators import OperatorHandle
from .propagation_report import PropagationReport, StepRecord

logger = get_logger("services.evolution.propagators")

SectorResult = Tuple[np.ndarray, List[StepRecord]]


def _run_sectors(
    op: OperatorHandle,
    vector: np.ndarray,
    worker: Callable[[int, sp.csr_matrix, np.ndarray], SectorResult],
    threads: int,
) -> Tuple[np.ndarray, List[StepRecord]]:
    """Apply worker to each invariant block; results merged in sector order"""
    jobs = op.sector_jobs()
    pieces = [vector if idx is None else vector[idx] for idx, _ in jobs]

    def run(item):
        sector, (idx, matrix) = item
        return worker(sector if idx is not None else None, matrix, pieces[sector])

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, enumerate(jobs)))
    else:
        results = [run(item) for item in enumerate(jobs)]

    out = np.empty_like(vector, dtype=complex)
    records: List[StepRecord] = []
    for (idx, _), (piece, steps) in zip(jobs, results):
        if idx is None:
            out = piece
        else:
            out[idx] = piece
        records.extend(steps)
    return out, records


class DickePhasePropagator(IPropagator):
    """Exact: level k picks up e^{−i E_k t}"""

    name = "dicke_phase"

    def supports(self, op: OperatorHandle) -> bool:
        return op.form == OperatorForm.DICKE_DIAGONAL

    def propagate(self, vector, op, t_ns, tol):
        out = vector * np.exp(-1j * op.phase_rates * t_ns)
        return out, PropagationReport(method=self.name, duration_ns=t_ns)


class DenseEigenPropagator(IPropagator):
    """Q e^{−iEt} Q† per block using the operator's cached eigensystems"""

    name = "dense_eigh"

    def __init__(self, max_dim: Optional[int] = None, threads: Optional[int] = None):
        self.max_dim = max_dim
        self.threads = threads

    def supports(self, op: OperatorHandle) -> bool:
        limit = self.max_dim or get_settings().dense_fallback_dim
        return op.form != OperatorForm.DICKE_DIAGONAL and op.largest_block() <= limit

    def propagate(self, vector, op, t_ns, tol):
        systems = op.eigensystems

        def worker(sector, matrix, piece):
            values, vectors = systems[sector or 0]
            if piece.size == 0:
                return piece.astype(complex), []
            out = vectors @ (np.exp(-1j * values * t_ns) * (vectors.conj().T @ piece))
            return out, []

        out, _ = _run_sectors(op, vector, worker, self.threads or get_settings().threads)
        return out, PropagationReport(method=self.name, duration_ns=t_ns)


class LanczosPropagator(IPropagator):
    """
    Adaptive short-iterative Lanczos.

    Each step builds one Hermitian Krylov basis from the current vector and
    reuses it while searching for the smallest subspace dimension in
    [min_dim, max_dim] whose error estimate β_m |[e^{−ihT_m} e_1]_m| fits the
    step's share of tol. Failing steps are halved and retried; so are steps
    whose norm drifts by more than the drift tolerance.
    """

    name = "lanczos"

    def __init__(
        self,
        min_dim: Optional[int] = None,
        max_dim: Optional[int] = None,
        max_steps: Optional[int] = None,
        threads: Optional[int] = None,
    ):
        self._min_dim = min_dim
        self._max_dim = max_dim
        self._max_steps = max_steps
        self._threads = threads

    # unset limits follow the settings current at call time

    @property
    def min_dim(self) -> int:
        return self._min_dim or get_settings().krylov_min_dim

    @property
    def max_dim(self) -> int:
        return self._max_dim or get_settings().krylov_max_dim

    @property
    def max_steps(self) -> int:
        return self._max_steps or get_settings().krylov_max_steps

    @property
    def threads(self) -> int:
        return self._threads or get_settings().threads

    def supports(self, op: OperatorHandle) -> bool:
        return op.form != OperatorForm.DICKE_DIAGONAL

    def propagate(self, vector, op, t_ns, tol):
        form = op.form.value

        def worker(sector, matrix, piece):
            return self._propagate_block(matrix, piece, t_ns, tol, form, sector)

        out, records = _run_sectors(op, vector, worker, self.threads)
        report = PropagationReport(method=self.name, duration_ns=t_ns, steps=records)
        logger.debug(
            f"🧮 Lanczos 완료: steps={len(report.accepted_steps)}, "
            f"rejected={report.rejected_steps}, max m={report.max_subspace_dim}"
        )
        return out, report

    # ===== core =====

    def _propagate_block(
        self,
        matrix: sp.csr_matrix,
        vector: np.ndarray,
        t_ns: float,
        tol: float,
        form: str,
        sector: Optional[int],
    ) -> SectorResult:
        records: List[StepRecord] = []
        beta0 = float(np.linalg.norm(vector))
        if vector.size == 0 or beta0 == 0.0 or t_ns == 0.0:
            return vector.astype(complex), records

        metrics = get_metrics_collector()
        v = vector.astype(complex)
        elapsed = 0.0
        step = t_ns
        attempts = 0

        while elapsed < t_ns * (1.0 - 1e-15):
            basis, alpha, beta, beta_next, breakdown = self._lanczos(matrix, v)
            m_avail = alpha.size

            while True:
                attempts += 1
                if attempts > self.max_steps:
                    raise ConvergenceException(
                        f"Lanczos propagation exceeded {self.max_steps} steps",
                        details={"elapsed_ns": elapsed, "t_ns": t_ns},
                    )

                step = min(step, t_ns - elapsed)
                share = tol * step / t_ns
                found = None
                for m in range(min(self.min_dim, m_avail), m_avail + 1):
                    coeffs = self._exp_tridiagonal(alpha[:m], beta[: m - 1], step)
                    if m == m_avail and breakdown:
                        error = 0.0
                    else:
                        coupling = beta[m - 1] if m < m_avail else beta_next
                        error = coupling * abs(coeffs[-1])
                    if error <= share:
                        found = (m, coeffs, error)
                        break

                if found is None:
                    records.append(
                        StepRecord(m_avail, step, float("inf"), 0.0, False, sector)
                    )
                    metrics.record_krylov_step(form, m_avail, accepted=False)
                    step = self._shrink(step, t_ns)
                    continue

                m, coeffs, error = found
                candidate = basis[:, :m] @ coeffs
                drift = abs(float(np.linalg.norm(candidate)) - 1.0)
                if drift > NumericConstants.NORM_DRIFT_TOL:
                    records.append(StepRecord(m, step, error, drift, False, sector))
                    metrics.record_krylov_step(form, m, accepted=False)
                    step = self._shrink(step, t_ns)
                    continue

                v = beta0 * candidate
                elapsed += step
                records.append(StepRecord(m, step, error, drift, True, sector))
                metrics.record_krylov_step(form, m, accepted=True)
                if error < 0.1 * share:
                    step *= 2.0
                break

        return v, records

    def _lanczos(self, matrix: sp.csr_matrix, v: np.ndarray):
        """Orthonormal basis, diagonal α, off-diagonal β, next β, breakdown flag"""
        dim = v.size
        m_max = min(self.max_dim, dim)
        basis = np.zeros((dim, m_max), dtype=complex)
        alpha = np.zeros(m_max)
        beta = np.zeros(m_max)

        basis[:, 0] = v / np.linalg.norm(v)
        used = m_max
        breakdown = dim <= m_max
        beta_next = 0.0

        for j in range(m_max):
            w = matrix @ basis[:, j]
            alpha[j] = float(np.vdot(basis[:, j], w).real)
            # full reorthogonalization, two passes
            for _ in range(2):
                w = w - basis[:, : j + 1] @ (basis[:, : j + 1].conj().T @ w)
            b = float(np.linalg.norm(w))
            if b < NumericConstants.LANCZOS_BREAKDOWN:
                used = j + 1
                breakdown = True
                break
            if j + 1 < m_max:
                beta[j] = b
                basis[:, j + 1] = w / b
            else:
                beta_next = b

        return basis[:, :used], alpha[:used], beta[: max(used - 1, 0)], beta_next, breakdown

    @staticmethod
    def _exp_tridiagonal(alpha: np.ndarray, beta: np.ndarray, step: float) -> np.ndarray:
        """e^{−i h T} e_1 for the symmetric tridiagonal T"""
        if alpha.size == 1:
            return np.array([np.exp(-1j * alpha[0] * step)])
        values, vectors = eigh_tridiagonal(alpha, beta)
        return vectors @ (np.exp(-1j * values * step) * vectors[0, :])

    @staticmethod
    def _shrink(step: float, t_ns: float) -> float:
        step *= 0.5
        if step < t_ns * 1e-12:
            raise ConvergenceException(
                "Lanczos step size underflow", details={"step_ns": step, "t_ns": t_ns}
            )
        return step
