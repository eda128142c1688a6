"""Chunked work distribution with scheduling-independent results.

Work is split into fixed-size chunks whose boundaries never depend on the
worker count; every chunk's result is a function of its block indices alone,
so any interleaving of workers aggregates to the same totals.
"""

import os
from concurrent.futures import ProcessPoolExecutor

WORKERS_ENV = "TURBOSTOP_WORKERS"


def resolve_workers(workers=None):
    """Explicit argument, else the TURBOSTOP_WORKERS env var, else cpu count."""
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def map_chunks(fn, chunks, workers):
    """Apply ``fn`` to every chunk argument, in order; fork a pool if workers > 1."""
    chunks = list(chunks)
    if workers <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    from . import _kernels
    _kernels.warmup()  # compile before forking so children inherit the JIT code
    with ProcessPoolExecutor(max_workers=min(workers, len(chunks))) as pool:
        return list(pool.map(fn, chunks))
