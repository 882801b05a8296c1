"""Process-pool helpers with deterministic result ordering."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(
    func: Callable[[T], R], items: Iterable[T], workers: int = 1
) -> List[R]:
    """Apply a function to every item, returning results in input order.

    Args:
        func: A picklable callable (module-level function or functools.partial).
        items: The inputs.
        workers: Number of processes; 1 runs inline in this process.

    Returns:
        List[R]: One result per item, in the order of `items`.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    chunksize = max(1, math.ceil(len(items) / (workers * 4)))
    logger.debug(
        f"Mapping {len(items)} items over {workers} workers (chunksize {chunksize})"
    )
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items, chunksize=chunksize))
