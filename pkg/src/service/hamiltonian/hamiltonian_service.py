"""
해밀토니안 빌더 서비스 모듈
- H1: 큐비트 + 버스 공진기 (광자 수 절단, 공통 큐비트 주파수 회전틀)
- H2: 분산 유효 해밀토니안 (들뜸 수 섹터별 블록)
- OAT: 균일 결합 one-axis twisting (Dicke 대각)
"""

from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from src.core.config import get_settings
from src.core.constants import DeviceConstants, UnitConstants
from src.core.decorators import track_operation
from src.core.exceptions import DimensionBudgetException, DomainValueException
from src.core.logger import get_logger
from src.dto.common.enums import OperatorForm
from src.dto.device.device_dtos import DeviceConfig
from src.service.device.device_model_service import device_model_service
from src.service.spin.pure_state import bit_weights
from .operators import OperatorHandle, ResonatorSpec

logger = get_logger("services.hamiltonian")

Triplets = Tuple[List[np.ndarray], List[np.ndarray], List[np.ndarray]]


def crosstalk_ring(n: int) -> List[Tuple[int, int]]:
    """Neighbour pairs (j, j+1) with the last member wrapping to the first"""
    if n < 2:
        return []
    if n == 2:
        return [(0, 1)]
    return [(j, (j + 1) % n) for j in range(n)]


def _flip_flop(n: int, j: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """(x, y) pairs with y = σ_k^+ σ_j^- x, i.e. bit j set and bit k clear in x"""
    index = np.arange(1 << n, dtype=np.int64)
    x = index[((index >> j) & 1 == 1) & ((index >> k) & 1 == 0)]
    return x, x ^ ((1 << j) | (1 << k))


class HamiltonianService:
    """Operator construction for the three model levels"""

    @track_operation("build_h1")
    def build_h1(
        self,
        cfg: DeviceConfig,
        subset: Sequence[int],
        detuning_mhz: float,
        resonator: Optional[ResonatorSpec] = None,
        qubit_frequencies_ghz: Optional[Sequence[float]] = None,
        include_crosstalk: bool = False,
        max_qubits: Optional[int] = None,
    ) -> OperatorHandle:
        """
        Qubits + bus resonator in the frame rotating at the detuned qubit
        frequency ω_B + Δ. Basis index = photons · 2^N + bitstring.

        qubit_frequencies_ghz, when given, sets per-qubit offsets from that frame.
        """
        settings = get_settings()
        resonator = resonator or ResonatorSpec(
            photon_cutoff=settings.photon_cutoff, resonator_ghz=cfg.resonator_ghz
        )
        n = len(subset)
        limit = max_qubits if max_qubits is not None else settings.h1_max_qubits
        if n > limit:
            raise DimensionBudgetException(
                f"H1 with N={n} exceeds the qubit budget {limit} "
                f"(dimension {(resonator.photon_cutoff + 1) << n})",
                details={"n": n, "limit": limit},
            )

        qdim = 1 << n
        levels = resonator.photon_cutoff + 1
        dim = qdim * levels
        g = UnitConstants.angular(cfg.couplings_mhz(list(subset)))

        if qubit_frequencies_ghz is not None:
            if len(qubit_frequencies_ghz) != n:
                raise DomainValueException("one frequency per selected qubit required")
            frame_ghz = resonator.resonator_ghz + detuning_mhz * 1e-3
            offsets = UnitConstants.angular(
                (np.asarray(qubit_frequencies_ghz, dtype=float) - frame_ghz) * 1e3
            )
        else:
            offsets = np.zeros(n)

        index = np.arange(dim, dtype=np.int64)
        photons = index // qdim
        bits = index % qdim

        diagonal = -UnitConstants.angular(detuning_mhz) * photons.astype(float)
        for j in range(n):
            diagonal = diagonal + offsets[j] * ((bits >> j) & 1)

        rows, cols, vals = [index], [index], [diagonal.astype(complex)]

        # g_j (σ_j^+ a + σ_j^- a†)
        for j in range(n):
            source = index[(photons >= 1) & ((bits >> j) & 1 == 0)]
            target = source - qdim + (1 << j)
            amp = g[j] * np.sqrt(photons[source].astype(float))
            rows += [target, source]
            cols += [source, target]
            vals += [amp.astype(complex), amp.astype(complex)]

        if include_crosstalk:
            self._add_crosstalk(cfg, subset, n, levels, (rows, cols, vals))

        matrix = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim),
        )
        matrix.sum_duplicates()
        op = OperatorHandle(
            form=OperatorForm.FULL_SPARSE,
            n=n,
            matrix=matrix,
            photon_cutoff=resonator.photon_cutoff,
            label="h1",
        )
        logger.debug(f"🔧 H1 생성: N={n}, dim={dim}, nnz={op.nnz()}")
        return op

    @track_operation("build_h2")
    def build_h2(
        self,
        cfg: DeviceConfig,
        subset: Sequence[int],
        detuning_mhz: float,
        include_crosstalk: bool = False,
        include_stark: bool = True,
    ) -> OperatorHandle:
        """Σ g_j g_k/Δ flip-flops + Σ g_j²/Δ |1⟩⟨1| (+ crosstalk ring), per sector"""
        couplings = device_model_service.effective_coupling_matrix(
            cfg, subset, detuning_mhz
        )
        lam = UnitConstants.angular(couplings)
        n = len(subset)
        if n > DeviceConstants.MAX_QUBITS:
            raise DimensionBudgetException(f"H2 limited to N <= 20, got {n}")

        index = np.arange(1 << n, dtype=np.int64)
        rows: List[np.ndarray] = []
        cols: List[np.ndarray] = []
        vals: List[np.ndarray] = []

        if include_stark:
            diagonal = np.zeros(1 << n)
            for j in range(n):
                diagonal += lam[j, j] * ((index >> j) & 1)
            rows.append(index)
            cols.append(index)
            vals.append(diagonal)

        for j in range(n):
            for k in range(j + 1, n):
                x, y = _flip_flop(n, j, k)
                amp = np.full(x.size, lam[j, k])
                rows += [y, x]
                cols += [x, y]
                vals += [amp, amp]

        if include_crosstalk:
            self._add_crosstalk(cfg, subset, n, 1, (rows, cols, vals))

        blocks = self._split_sectors(n, rows, cols, vals)
        op = OperatorHandle(
            form=OperatorForm.SECTOR_BLOCKED, n=n, blocks=blocks, label="h2"
        )
        logger.debug(
            f"🔧 H2 생성: N={n}, Δ={detuning_mhz} MHz, "
            f"blocks={[b.shape[0] for b in blocks]}, nnz={op.nnz()}"
        )
        return op

    @track_operation("build_oat_uniform")
    def build_oat_uniform(
        self, n: int, coupling_mhz: float, include_stark: bool = True
    ) -> OperatorHandle:
        """
        Dicke-diagonal twisting with angular λ:
            include_stark: E_k = λ k (N − k + 1)   (uniform H2 on the symmetric sector)
            otherwise:     E_k = λ k (N − k − 1)   (−λ(J_z² − J_z), J_z = N/2 − k)
        The two differ by the linear term 2λk only.
        """
        if n < 1:
            raise DomainValueException(f"N must be >= 1, got {n}")
        k = np.arange(n + 1, dtype=float)
        shape = k * (n - k + 1) if include_stark else k * (n - k - 1)
        rates = UnitConstants.angular(coupling_mhz) * shape
        return OperatorHandle(
            form=OperatorForm.DICKE_DIAGONAL,
            n=n,
            phase_rates=rates,
            label="oat" if include_stark else "oat_ideal",
        )

    def uniform_device(
        self, n: int, g_mhz: float = 27.45, resonator_ghz: float = 5.51
    ) -> DeviceConfig:
        """Device with identical couplings and no crosstalk (model comparisons)"""
        return DeviceConfig.model_validate(
            {
                "resonator_ghz": resonator_ghz,
                "qubits": [
                    {
                        "id": f"U{j + 1}",
                        "g_mhz": g_mhz,
                        "omega_ghz": resonator_ghz,
                        "crosstalk_next_mhz": 0.0,
                        "f0": 1.0,
                        "f1": 1.0,
                        "t1_us": 1.0,
                        "t2s_us": 1.0,
                    }
                    for j in range(n)
                ],
            }
        )

    # ===== checks / dumps =====

    @staticmethod
    def conserved_excitation_check(op: OperatorHandle) -> bool:
        """
        True iff every stored entry connects equal excitation numbers.

        Dicke-diagonal operators conserve it trivially. A sector-blocked operator
        has no storage for cross-sector entries, so it conserves excitation by
        construction once block k is square with one row per weight-k bitstring.
        """
        if op.form == OperatorForm.DICKE_DIAGONAL:
            return True
        if op.form == OperatorForm.SECTOR_BLOCKED:
            return all(
                block.shape == (idx.size, idx.size)
                for idx, block in zip(op.sector_indices, op.blocks)
            )
        coo = op.matrix.tocoo()
        nonzero = coo.data != 0
        excitation = op.excitation_numbers()
        return bool(
            np.all(excitation[coo.row[nonzero]] == excitation[coo.col[nonzero]])
        )

    @staticmethod
    def dump_operator(op: OperatorHandle, path: Union[str, Path]) -> Path:
        """Coordinate text dump (row col re im), one section per sector, rad/ns"""
        path = Path(path)
        lines = [f"# form={op.form.value} n={op.n} dim={op.dim} units=rad/ns"]
        if op.form == OperatorForm.SECTOR_BLOCKED:
            sections = list(enumerate(op.blocks))
        else:
            sections = [(None, op.to_sparse())]
        for sector, matrix in sections:
            coo = matrix.tocoo()
            order = np.lexsort((coo.col, coo.row))
            header = "# full" if sector is None else f"# sector k={sector}"
            lines.append(f"{header} dim={matrix.shape[0]} nnz={coo.nnz}")
            for i in order:
                value = complex(coo.data[i])
                lines.append(
                    f"{coo.row[i]} {coo.col[i]} {value.real:.17g} {value.imag:.17g}"
                )
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    # ===== helpers =====

    @staticmethod
    def _add_crosstalk(
        cfg: DeviceConfig,
        subset: Sequence[int],
        n: int,
        levels: int,
        triplets: Triplets,
    ):
        rows, cols, vals = triplets
        crosstalk = UnitConstants.angular(cfg.crosstalk_mhz(list(subset)))
        qdim = 1 << n
        for j, k in crosstalk_ring(n):
            if crosstalk[j] == 0:
                continue
            x, y = _flip_flop(n, j, k)
            for photon in range(levels):
                amp = np.full(x.size, crosstalk[j], dtype=complex)
                rows += [y + photon * qdim, x + photon * qdim]
                cols += [x + photon * qdim, y + photon * qdim]
                vals += [amp, amp]

    @staticmethod
    def _split_sectors(
        n: int,
        rows: List[np.ndarray],
        cols: List[np.ndarray],
        vals: List[np.ndarray],
    ) -> Tuple[sp.csr_matrix, ...]:
        w = bit_weights(n)
        position = np.empty(1 << n, dtype=np.int64)
        sizes = []
        for k in range(n + 1):
            members = np.flatnonzero(w == k)
            position[members] = np.arange(members.size)
            sizes.append(members.size)

        if rows:
            all_rows = np.concatenate(rows)
            all_cols = np.concatenate(cols)
            all_vals = np.concatenate(vals).astype(complex)
        else:
            all_rows = all_cols = np.zeros(0, dtype=np.int64)
            all_vals = np.zeros(0, dtype=complex)

        sector = w[all_rows]
        blocks = []
        for k in range(n + 1):
            mask = sector == k
            block = sp.csr_matrix(
                (all_vals[mask], (position[all_rows[mask]], position[all_cols[mask]])),
                shape=(sizes[k], sizes[k]),
            )
            block.sum_duplicates()
            blocks.append(block)
        return tuple(blocks)


hamiltonian_service = HamiltonianService()
