"""Order-preserving thread map; results never depend on the worker count."""

import os
from concurrent.futures import ThreadPoolExecutor


def default_workers():
    return os.cpu_count() or 1


def parallel_map(fn, items, workers=1):
    items = list(items)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
