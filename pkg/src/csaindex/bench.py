"""Throughput and size measurements, one CSV row per (index, pattern set)."""

import csv
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import container

COLUMNS = [
    "scheme", "pattern_regime", "N", "m", "avg_occ", "build_seconds", "index_bytes", "bits_per_symbol",
    "count_queries_per_ms", "locate_queries_per_ms", "occ_per_ms",
]


def _timed(fn, patterns, repetitions, threads):
    """Wall-clock milliseconds for ``repetitions`` passes, and the last pass's results."""
    batches = [patterns] if threads <= 1 else [patterns[k::threads] for k in range(threads)]
    out = None
    t0 = time.perf_counter()
    for _ in range(repetitions):
        if threads <= 1:
            out = [fn(p) for p in patterns]
        else:
            with ThreadPoolExecutor(threads) as pool:
                out = [x for part in pool.map(lambda b: [fn(p) for p in b], batches) for x in part]
    return (time.perf_counter() - t0) * 1000.0, out


def bench_index(ix, patterns, regime="", repetitions=3, threads=1, build_seconds=None, index_bytes=None):
    if not patterns:
        raise ValueError("empty pattern set")
    # warm-up compiles the kernels outside the timed region
    ix.count(patterns[0])
    ix.locate(patterns[0])
    t_count, counts = _timed(ix.count, patterns, repetitions, threads)
    t_locate, located = _timed(ix.locate, patterns, repetitions, threads)
    occ = int(sum(len(x) for x in located))
    if occ != sum(counts):
        raise AssertionError("count and locate disagree")
    queries = len(patterns) * repetitions
    index_bytes = len(container.dumps(ix)) if index_bytes is None else index_bytes
    return {
        "scheme": ix.scheme,
        "pattern_regime": regime,
        "N": len(patterns),
        "m": len(patterns[0]),
        "avg_occ": occ / len(patterns),
        "build_seconds": "" if build_seconds is None else round(build_seconds, 4),
        "index_bytes": index_bytes,
        "bits_per_symbol": 8 * index_bytes / ix.n,
        "count_queries_per_ms": queries / max(t_count, 1e-9),
        "locate_queries_per_ms": queries / max(t_locate, 1e-9),
        "occ_per_ms": occ * repetitions / max(t_locate, 1e-9),
    }


def write_csv(rows, fh):
    w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (f"{v:.6g}" if isinstance(v, (float, np.floating)) else v) for k, v in row.items()})
