"""Synthetic texts for tests, demos and benchmarks."""

import numpy as np

DNA = b"ACGT"


def repetitive_corpus(base_len=50_000, copies=200, edit_rate=0.005, alphabet=DNA, seed=0):
    """``copies`` near-copies of a random base, each with independent point substitutions."""
    rng = np.random.default_rng(seed)
    alpha = np.frombuffer(bytes(alphabet), dtype=np.uint8)
    base = alpha[rng.integers(0, alpha.size, base_len)]
    text = np.tile(base, copies)
    hits = np.flatnonzero(rng.random(text.size) < edit_rate)
    # shift by a nonzero amount so every edit really changes the symbol
    shift = rng.integers(1, alpha.size, hits.size) if alpha.size > 1 else np.zeros(hits.size, dtype=np.int64)
    idx = np.searchsorted(np.sort(alpha), text[hits])
    text[hits] = np.sort(alpha)[(idx + shift) % alpha.size]
    return text.tobytes()


def random_text(n, sigma=4, seed=0, first=ord("a")):
    rng = np.random.default_rng(seed)
    return rng.integers(first, first + sigma, n).astype(np.uint8).tobytes()


def fibonacci_word(n, a=1, b=2):
    prev, cur = [a], [a, b]
    while len(cur) < n:
        prev, cur = cur, cur + prev
    return np.array(cur[:n], dtype=np.int64)
