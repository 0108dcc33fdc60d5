# Random access into a suffix array compressed with LZ-End over A^d.

import time

import numpy as np

from csaindex.corpus import repetitive_corpus
from csaindex.lzend_sa import LzEndSaStore
from csaindex.suffix import build_bwt_runs, build_suffix_array, densify, terminate

T = terminate(densify(repetitive_corpus(base_len=10_000, copies=50))[0])
A = build_suffix_array(T)
runs = build_bwt_runs(T, A)
n = A.size

# Two anchoring modes: store A at every phrase end, or reuse the suffix array
# samples at BWT run boundaries that the self-index keeps anyway.

for store in (LzEndSaStore.build(A), LzEndSaStore.build(A, runs=runs)):
    mode = "run samples" if store.run_sample_mode else "phrase-end samples"
    print(f"{mode}: z={store.z} (n/z = {n / store.z:.1f}), {store.nbytes / (8 * n):.1%} of a plain 64-bit array")
    rng = np.random.default_rng(0)
    t = time.perf_counter()
    for x in rng.integers(1, n - 100, 10_000).tolist():
        assert np.array_equal(store.extract(x, 99), A[x - 1 : x + 99])
    print(f"  10^4 windows of 100 values in {time.perf_counter() - t:.2f}s")
