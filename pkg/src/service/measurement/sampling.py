"""
결정적 카운터 기반 샘플링 (numpy Philox)

샷 인덱스 범위를 고정 크기 chunk 로 나누고, chunk 마다
Philox(key=seed, counter=[0, stream, chunk, purpose]) 를 새로 만든다.
따라서 결과는 스레드 수와 무관하게 (seed, stream, shots) 로만 결정된다.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

import numpy as np

from src.core.config import get_settings
from src.core.exceptions import DomainValueException
from src.core.metrics import get_metrics_collector
from .counts import CountTable
from .readout import ConfusionModel, ProbVector

SAMPLING_CHUNK = 1 << 16
PURPOSE_OUTCOMES = 0
PURPOSE_READOUT_FLIPS = 1


def chunk_generator(seed: int, stream: int, chunk: int, purpose: int) -> np.random.Generator:
    bit_generator = np.random.Philox(
        key=seed & 0xFFFFFFFFFFFFFFFF,
        counter=np.array([0, stream, chunk, purpose], dtype=np.uint64),
    )
    return np.random.Generator(bit_generator)


def _chunked(
    shots: int,
    job: Callable[[int, int, int], np.ndarray],
    threads: Optional[int],
) -> np.ndarray:
    """job(chunk, start, stop) per chunk; merged in chunk order"""
    bounds = [
        (c, start, min(start + SAMPLING_CHUNK, shots))
        for c, start in enumerate(range(0, shots, SAMPLING_CHUNK))
    ]
    workers = threads or get_settings().threads
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts: List[np.ndarray] = list(pool.map(lambda b: job(*b), bounds))
    else:
        parts = [job(*b) for b in bounds]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def sample_outcomes(
    probabilities: np.ndarray,
    shots: int,
    seed: int,
    stream: int = 0,
    threads: Optional[int] = None,
) -> np.ndarray:
    """Ordered outcome indices drawn by inverse CDF"""
    if shots < 1:
        raise DomainValueException(f"shots must be >= 1, got {shots}")
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    cdf = np.cumsum(p)
    if cdf[-1] <= 0:
        raise DomainValueException("cannot sample from an all-zero distribution")
    cdf /= cdf[-1]

    def job(chunk: int, start: int, stop: int) -> np.ndarray:
        u = chunk_generator(seed, stream, chunk, PURPOSE_OUTCOMES).random(stop - start)
        return np.minimum(np.searchsorted(cdf, u, side="right"), p.size - 1)

    outcomes = _chunked(shots, job, threads)
    get_metrics_collector().record_shots(shots)
    return outcomes.astype(np.int64)


def sample(
    probabilities: ProbVector,
    shots: int,
    seed: int,
    stream: int = 0,
    threads: Optional[int] = None,
) -> CountTable:
    outcomes = sample_outcomes(probabilities.values, shots, seed, stream, threads)
    return CountTable.from_indices(probabilities.n, outcomes, seed)


def flip_shots(
    table: CountTable,
    model: ConfusionModel,
    seed: int,
    stream: int = 0,
    threads: Optional[int] = None,
) -> CountTable:
    """Per-shot readout errors: true 0 reads 1 w.p. 1−F0, true 1 reads 0 w.p. 1−F1"""
    if table.shot_log is None:
        raise DomainValueException("per-shot confusion needs the ordered shot log")
    if model.n != table.n:
        raise DomainValueException("confusion model size differs from the table")

    n = table.n
    log = table.shot_log
    error_0 = np.array([1.0 - f0 for f0, _ in model.fidelities])
    error_1 = np.array([1.0 - f1 for _, f1 in model.fidelities])
    weights = 1 << np.arange(n, dtype=np.int64)

    def job(chunk: int, start: int, stop: int) -> np.ndarray:
        rng = chunk_generator(seed, stream, chunk, PURPOSE_READOUT_FLIPS)
        u = rng.random((stop - start, n))
        bits = (log[start:stop, None] >> np.arange(n)) & 1
        flip = np.where(bits == 1, u < error_1, u < error_0)
        return log[start:stop] ^ (flip.astype(np.int64) @ weights)

    reported = _chunked(log.size, job, threads)
    return CountTable.from_indices(n, reported, table.seed)
