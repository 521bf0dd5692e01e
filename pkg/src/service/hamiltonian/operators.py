"""
연산자 핸들 (FullSparse / SectorBlocked / DickeDiagonal)

모든 행렬 원소는 각진동수 단위 rad/ns 로 저장된다.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from src.core.constants import NumericConstants
from src.core.exceptions import DomainValueException
from src.dto.common.enums import OperatorForm
from src.service.spin.pure_state import bit_weights


@dataclass(frozen=True)
class ResonatorSpec:
    """Bus resonator truncation for the qubit + resonator model"""

    photon_cutoff: int = 2
    resonator_ghz: float = 5.51

    def __post_init__(self):
        if self.photon_cutoff < 1:
            raise DomainValueException(
                f"photon cutoff must be >= 1, got {self.photon_cutoff}"
            )


@dataclass(frozen=True, eq=False)
class OperatorHandle:
    """Hermitian operator in one of three storage forms"""

    form: OperatorForm
    n: int
    matrix: Optional[sp.csr_matrix] = None
    blocks: Optional[Tuple[sp.csr_matrix, ...]] = None
    phase_rates: Optional[np.ndarray] = None
    photon_cutoff: int = 0
    label: str = ""
    hermitian: bool = field(default=False)

    def __post_init__(self):
        form = OperatorForm(self.form)
        object.__setattr__(self, "form", form)

        if form == OperatorForm.FULL_SPARSE and self.matrix is None:
            raise DomainValueException("full_sparse operator needs a matrix")
        if form == OperatorForm.SECTOR_BLOCKED:
            if self.blocks is None or len(self.blocks) != self.n + 1:
                raise DomainValueException("sector_blocked operator needs N+1 blocks")
        if form == OperatorForm.DICKE_DIAGONAL:
            if self.phase_rates is None or len(self.phase_rates) != self.n + 1:
                raise DomainValueException("dicke_diagonal operator needs N+1 rates")

        object.__setattr__(self, "hermitian", self._check_hermitian())

    # ===== shape =====

    @property
    def qubit_dim(self) -> int:
        return 1 << self.n

    @property
    def dim(self) -> int:
        if self.form == OperatorForm.DICKE_DIAGONAL:
            return self.n + 1
        if self.form == OperatorForm.SECTOR_BLOCKED:
            return self.qubit_dim
        return self.matrix.shape[0]

    @cached_property
    def sector_indices(self) -> Tuple[np.ndarray, ...]:
        """Full-space indices of each excitation sector, ascending"""
        w = bit_weights(self.n)
        return tuple(np.flatnonzero(w == k) for k in range(self.n + 1))

    def excitation_numbers(self) -> np.ndarray:
        """Total excitation (qubit + photon) of every basis index"""
        if self.form == OperatorForm.DICKE_DIAGONAL:
            return np.arange(self.n + 1)
        dim = self.dim
        index = np.arange(dim)
        qubits = bit_weights(self.n)[index % self.qubit_dim]
        return qubits + index // self.qubit_dim

    # ===== algebra =====

    def matvec(self, vector: np.ndarray) -> np.ndarray:
        if self.form == OperatorForm.DICKE_DIAGONAL:
            return self.phase_rates * vector
        if self.form == OperatorForm.FULL_SPARSE:
            return self.matrix @ vector
        out = np.zeros_like(vector, dtype=complex)
        for indices, block in zip(self.sector_indices, self.blocks):
            out[indices] = block @ vector[indices]
        return out

    def to_sparse(self) -> sp.csr_matrix:
        """Assembled operator on the whole space"""
        if self.form == OperatorForm.FULL_SPARSE:
            return self.matrix
        if self.form == OperatorForm.DICKE_DIAGONAL:
            return sp.diags(self.phase_rates.astype(complex)).tocsr()
        rows, cols, vals = [], [], []
        for indices, block in zip(self.sector_indices, self.blocks):
            coo = block.tocoo()
            rows.append(indices[coo.row])
            cols.append(indices[coo.col])
            vals.append(coo.data)
        return sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.dim, self.dim),
        )

    def sector_jobs(self) -> List[Tuple[Optional[np.ndarray], sp.csr_matrix]]:
        """(indices, matrix) per invariant block; indices None means the whole space"""
        if self.form == OperatorForm.SECTOR_BLOCKED:
            return list(zip(self.sector_indices, self.blocks))
        return [(None, self.to_sparse())]

    @cached_property
    def eigensystems(self) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
        """Dense (eigenvalues, eigenvectors) per block, computed once"""
        systems = []
        for _, matrix in self.sector_jobs():
            if matrix.shape[0] == 0:
                systems.append((np.zeros(0), np.zeros((0, 0), dtype=complex)))
                continue
            values, vectors = np.linalg.eigh(matrix.toarray())
            systems.append((values, vectors))
        return tuple(systems)

    def largest_block(self) -> int:
        if self.form == OperatorForm.DICKE_DIAGONAL:
            return 1
        return max(m.shape[0] for _, m in self.sector_jobs())

    def expectation(self, vector: np.ndarray) -> float:
        return float(np.vdot(vector, self.matvec(vector)).real)

    def nnz(self) -> int:
        if self.form == OperatorForm.DICKE_DIAGONAL:
            return self.n + 1
        if self.form == OperatorForm.FULL_SPARSE:
            return self.matrix.nnz
        return sum(block.nnz for block in self.blocks)

    # ===== checks =====

    def _check_hermitian(self) -> bool:
        if self.form == OperatorForm.DICKE_DIAGONAL:
            return bool(np.all(np.isreal(self.phase_rates)))
        matrices = [self.matrix] if self.form == OperatorForm.FULL_SPARSE else self.blocks
        for m in matrices:
            if m.nnz == 0:
                continue
            diff = (m - m.conj().T).tocoo()
            if diff.nnz and np.max(np.abs(diff.data)) > NumericConstants.HERMITIAN_TOL:
                return False
        return True
