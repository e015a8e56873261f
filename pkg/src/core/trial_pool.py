# src/core/trial_pool.py
"""
Pool de workers para tentativas Monte Carlo independentes

As tentativas são agrupadas em lotes contíguos de sementes e executadas via
joblib. O resultado sai na ordem das sementes, qualquer que seja o número
de workers.
"""

import logging
import time
from typing import Any, Callable, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from .config import Config

logger = logging.getLogger(__name__)

# Tentativas por lote enviado a um worker
DEFAULT_BATCH_SIZE = 256


def _run_batch(seeds: Sequence[int], trial_func: Callable, kwargs: dict) -> List[Any]:
    return [trial_func(int(seed), **kwargs) for seed in seeds]


class TrialPool:
    """
    Executor de tentativas: func(seed, **kwargs) para cada semente

    Uso:
        pool = TrialPool(workers=4)
        results = pool.map(center_statistics, seeds, law=law, L=32)
    """

    def __init__(self, workers: Optional[int] = None, batch_size: int = DEFAULT_BATCH_SIZE):
        if workers is None:
            workers = Config.runner().workers
        self.workers = max(1, int(workers))
        self.batch_size = max(1, int(batch_size))

    def batches(self, seeds: Sequence[int]) -> List[Sequence[int]]:
        seeds = np.asarray(seeds, dtype=np.uint64)
        return [seeds[k:k + self.batch_size] for k in range(0, len(seeds), self.batch_size)]

    def map_batches(self, func: Callable, batches: Sequence[Any], **kwargs) -> List[Any]:
        """func(batch, **kwargs) por lote, na ordem dos lotes"""
        start = time.time()
        if self.workers == 1 or len(batches) <= 1:
            results = [func(batch, **kwargs) for batch in batches]
        else:
            results = Parallel(n_jobs=self.workers)(
                delayed(func)(batch, **kwargs) for batch in batches
            )
        logger.debug(f"{len(batches)} batches done in {time.time() - start:.2f}s "
                     f"(workers={self.workers})")
        return list(results)

    def map(self, func: Callable, seeds: Sequence[int], **kwargs) -> List[Any]:
        """Resultados de func(seed, **kwargs) na ordem das sementes"""
        nested = self.map_batches(_run_batch, self.batches(seeds), trial_func=func, kwargs=kwargs)
        return [item for batch in nested for item in batch]
