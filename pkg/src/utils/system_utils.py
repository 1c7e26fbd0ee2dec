import logging
from typing import Optional

import psutil

logger = logging.getLogger(__name__)

# share of currently available memory one residual evaluation may use
MEMORY_FRACTION = 0.1
MIN_ROWS = 8


class SystemManager:
    @staticmethod
    def worker_count(requested: int = 0) -> int:
        """Number of Jacobian workers; 0 means one per physical core."""
        if requested and requested > 0:
            return int(requested)
        try:
            cores = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
        except Exception as e:
            logger.warning(f"Could not query CPU count: {e}")
            cores = 1
        return max(1, int(cores))

    @staticmethod
    def available_memory_bytes() -> int:
        try:
            return int(psutil.virtual_memory().available)
        except Exception as e:
            logger.warning(f"Could not query available memory: {e}")
            return 512 * 1024**2

    @staticmethod
    def row_chunk(
        n_rows: int, n_cols: int, n_arrays: int = 12, workers: Optional[int] = None
    ) -> int:
        """Rows per block so that n_arrays float64 blocks per worker fit the memory budget."""
        workers = SystemManager.worker_count() if workers is None else workers
        budget = SystemManager.available_memory_bytes() * MEMORY_FRACTION / max(1, workers)
        rows = int(budget // (8 * n_cols * n_arrays))
        return max(MIN_ROWS, min(n_rows, rows))
