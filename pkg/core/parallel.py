import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import islice
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, TypeVar
from core.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

def resolve_jobs(jobs: Optional[int] = None) -> int:
    return max(1, jobs if jobs is not None else settings.jobs)

def chunked(items: Iterable[T], size: int) -> Iterator[List[T]]:
    iterator = iter(items)
    while True:
        chunk = list(islice(iterator, size))
        if not chunk:
            return
        yield chunk

def parallel_map(fn: Callable[[T], R], items: Sequence[T], jobs: Optional[int] = None) -> List[R]:
    workers = resolve_jobs(jobs)
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))

def first_in_order(
    candidates: Iterable[T],
    predicate: Callable[[T], bool],
    jobs: Optional[int] = None,
    chunk_size: int = 256,
) -> Optional[T]:
    """Earliest candidate (in iteration order) satisfying the predicate.

    Each worker scans its own chunk and reports the local first hit; the reducer keeps
    the hit from the lowest chunk, so the answer is the same for any number of workers.
    """
    workers = resolve_jobs(jobs)

    def scan(chunk: List[T]) -> Optional[T]:
        for candidate in chunk:
            if predicate(candidate):
                return candidate
        return None

    if workers == 1:
        for chunk in chunked(candidates, chunk_size):
            hit = scan(chunk)
            if hit is not None:
                return hit
        return None

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for wave in chunked(chunked(candidates, chunk_size), workers):
            for hit in pool.map(scan, wave):
                if hit is not None:
                    return hit
    return None
