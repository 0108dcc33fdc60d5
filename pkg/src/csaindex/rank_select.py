"""Rank/select structures.

Positions are 1-based throughout: ``rank(i)`` counts over ``T[1..i]`` and
``select(k)`` returns the 1-based position of the k-th occurrence.

* :class:`BitVectorRS`  -- plain bit vector with superblock/block rank counters
  and sampled select.
* :class:`SparseSet`    -- Elias-Fano encoded increasing set (an "s-array").
* :class:`SmallAlphabetRS` -- block-sampled successor/predecessor tables for
  small alphabets.
* :class:`LargeAlphabetRS` -- ``C``/``O``/``S`` layout for large alphabets with a
  three-way dispatch on the occurrence count of the queried symbol.
"""

import math

import numpy as np
from numba import njit

from ._bits import popcount64, select_in_word

WORD = 64
SUPER_WORDS = 8  # 512-bit superblocks
SELECT_SAMPLE = 512


# ---------------------------------------------------------------------------
# plain bit vector
# ---------------------------------------------------------------------------


@njit(cache=True)
def _bv_build(words, nbits):
    nwords = words.size
    nsuper = (nwords + SUPER_WORDS - 1) // SUPER_WORDS
    sup = np.zeros(nsuper + 1, dtype=np.int64)
    blk = np.zeros(nwords, dtype=np.uint16)
    total = 0
    for w in range(nwords):
        if w % SUPER_WORDS == 0:
            sup[w // SUPER_WORDS] = total
        blk[w] = total - sup[w // SUPER_WORDS]
        total += popcount64(words[w])
    sup[nsuper] = total
    ones = total
    zeros = nbits - ones
    sel1 = np.zeros(ones // SELECT_SAMPLE + 2, dtype=np.int64)
    sel0 = np.zeros(zeros // SELECT_SAMPLE + 2, dtype=np.int64)
    # sel1[j]: superblock holding the (j*SAMPLE + 1)-th one
    j1 = 0
    j0 = 0
    for s in range(nsuper):
        hi1 = sup[s + 1]
        hi0 = min((s + 1) * SUPER_WORDS * WORD, nbits) - sup[s + 1]
        while j1 * SELECT_SAMPLE + 1 <= hi1:
            sel1[j1] = s
            j1 += 1
        while j0 * SELECT_SAMPLE + 1 <= hi0:
            sel0[j0] = s
            j0 += 1
    sel1[j1:] = nsuper - 1 if nsuper > 0 else 0
    sel0[j0:] = nsuper - 1 if nsuper > 0 else 0
    return sup, blk, sel1, sel0


@njit(cache=True, inline="always")
def bv_access(words, i):
    """Bit at 1-based position ``i``."""
    p = i - 1
    return np.int64((words[p >> 6] >> np.uint64(p & 63)) & np.uint64(1))


@njit(cache=True)
def bv_rank1(words, sup, blk, nbits, i):
    """Number of ones among the first ``i`` bits."""
    if i <= 0:
        return 0
    if i >= nbits:
        return sup[sup.size - 1]
    w = i >> 6
    r = sup[w // SUPER_WORDS] + np.int64(blk[w])
    off = i & 63
    if off:
        r += popcount64(words[w] & ((np.uint64(1) << np.uint64(off)) - np.uint64(1)))
    return r


@njit(cache=True)
def bv_select1(words, sup, blk, sel1, nbits, k):
    """1-based position of the k-th one; ``nbits + 1`` if there is none."""
    if k <= 0 or k > sup[sup.size - 1]:
        return nbits + 1
    s = sel1[(k - 1) // SELECT_SAMPLE]
    nsuper = sup.size - 1
    while s + 1 < nsuper and sup[s + 1] < k:
        s += 1
    w = s * SUPER_WORDS
    wend = min(w + SUPER_WORDS, words.size)
    rem = k - sup[s]
    while w + 1 < wend and np.int64(blk[w + 1]) < rem:
        w += 1
    rem -= np.int64(blk[w])
    return w * WORD + select_in_word(words[w], rem) + 1


@njit(cache=True)
def bv_select0(words, sup, blk, sel0, nbits, k):
    """1-based position of the k-th zero; ``nbits + 1`` if there is none."""
    if k <= 0 or k > nbits - sup[sup.size - 1]:
        return nbits + 1
    s = sel0[(k - 1) // SELECT_SAMPLE]
    nsuper = sup.size - 1
    while s + 1 < nsuper and (s + 1) * SUPER_WORDS * WORD - sup[s + 1] < k:
        s += 1
    w = s * SUPER_WORDS
    wend = min(w + SUPER_WORDS, words.size)
    rem = k - (s * SUPER_WORDS * WORD - sup[s])
    while w + 1 < wend and ((w + 1 - s * SUPER_WORDS) * WORD - np.int64(blk[w + 1])) < rem:
        w += 1
    rem -= (w - s * SUPER_WORDS) * WORD - np.int64(blk[w])
    return w * WORD + select_in_word(~words[w], rem) + 1


class BitVectorRS:
    """Static bit vector with rank and select support.

    ``rank1(i) + rank0(i) == i`` and ``select1(rank1(i)) <= i`` whenever
    ``rank1(i) > 0``.
    """

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=bool)
        self.n = int(bits.size)
        nwords = max(1, (self.n + WORD - 1) // WORD)
        padded = np.zeros(nwords * WORD, dtype=bool)
        padded[: self.n] = bits
        self.words = np.packbits(padded, bitorder="little").view(np.uint64).copy()
        self.sup, self.blk, self.sel1, self.sel0 = _bv_build(self.words, self.n)

    @classmethod
    def from_positions(cls, positions, n):
        bits = np.zeros(n, dtype=bool)
        bits[np.asarray(positions, dtype=np.int64) - 1] = True
        return cls(bits)

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return int(bv_access(self.words, i))

    @property
    def ones(self):
        return int(self.sup[-1])

    def rank1(self, i):
        return int(bv_rank1(self.words, self.sup, self.blk, self.n, i))

    def rank0(self, i):
        i = min(max(i, 0), self.n)
        return i - self.rank1(i)

    def select1(self, k):
        if not 1 <= k <= self.ones:
            raise IndexError(f"select1({k}) out of range")
        return int(bv_select1(self.words, self.sup, self.blk, self.sel1, self.n, k))

    def select0(self, k):
        if not 1 <= k <= self.n - self.ones:
            raise IndexError(f"select0({k}) out of range")
        return int(bv_select0(self.words, self.sup, self.blk, self.sel0, self.n, k))

    def to_bools(self):
        bits = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return bits[: self.n].astype(bool)

    def nbytes(self):
        """Raw bits plus rank/select directories."""
        return (self.n + 7) // 8 + self.sup.nbytes + self.blk.nbytes + self.sel1.nbytes + self.sel0.nbytes


# ---------------------------------------------------------------------------
# Elias-Fano sparse set
# ---------------------------------------------------------------------------


@njit(cache=True)
def ef_select(low, l, words, sup, blk, sel1, nbits, k):
    """k-th smallest element (1-based k)."""
    p = bv_select1(words, sup, blk, sel1, nbits, k) - 1
    high = p - (k - 1)
    return ((high << l) | np.int64(low[k - 1])) + 1


@njit(cache=True)
def ef_rank(low, l, m, words, sup, blk, sel0, nbits, x):
    """Number of elements ``<= x``."""
    if x <= 0 or m == 0:
        return 0
    y = x - 1
    h = y >> l
    ylow = y & ((1 << l) - 1)
    if h == 0:
        k = 0
    else:
        z = bv_select0(words, sup, blk, sel0, nbits, h)
        if z > nbits:
            return m
        k = z - h
    while k < m:
        p = h + k  # 0-based bit of element k if its high part equals h
        if (words[p >> 6] >> np.uint64(p & 63)) & np.uint64(1) == 0:
            break
        if np.int64(low[k]) > ylow:
            break
        k += 1
    return k


class SparseSet:
    """Strictly increasing set of positions in ``[1, universe]`` (Elias-Fano)."""

    def __init__(self, positions, universe):
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size and (np.any(np.diff(pos) <= 0) or pos[0] < 1 or pos[-1] > universe):
            raise ValueError("positions must be strictly increasing within [1, universe]")
        self.universe = int(universe)
        self.m = int(pos.size)
        ratio = self.universe // max(self.m, 1)
        self.l = int(math.floor(math.log2(ratio))) if ratio >= 2 else 0
        zero_based = pos - 1
        self.low = (zero_based & ((1 << self.l) - 1)).astype(np.uint64)
        high = zero_based >> self.l
        nbits = self.m + int((self.universe - 1) >> self.l) + 1
        bits = np.zeros(nbits, dtype=bool)
        bits[high + np.arange(self.m)] = True
        self.high = BitVectorRS(bits)

    def __len__(self):
        return self.m

    def select(self, k):
        if not 1 <= k <= self.m:
            raise IndexError(f"select({k}) out of range")
        h = self.high
        return int(ef_select(self.low, self.l, h.words, h.sup, h.blk, h.sel1, h.n, k))

    def rank(self, x):
        h = self.high
        x = min(int(x), self.universe)
        return int(ef_rank(self.low, self.l, self.m, h.words, h.sup, h.blk, h.sel0, h.n, x))

    def to_array(self):
        return np.array([self.select(k) for k in range(1, self.m + 1)], dtype=np.int64)

    def nbytes(self):
        return (self.m * self.l + 7) // 8 + self.high.nbytes()


class SparseSetPool:
    """Several sparse sets flattened into shared arrays so jitted code can reach them."""

    def __init__(self, sets):
        self.count = len(sets)
        self.low_off = np.zeros(self.count + 1, dtype=np.int64)
        self.word_off = np.zeros(self.count + 1, dtype=np.int64)
        self.sup_off = np.zeros(self.count + 1, dtype=np.int64)
        self.sel0_off = np.zeros(self.count + 1, dtype=np.int64)
        self.l = np.zeros(self.count, dtype=np.int64)
        self.m = np.zeros(self.count, dtype=np.int64)
        self.nbits = np.zeros(self.count, dtype=np.int64)
        for k, s in enumerate(sets):
            self.low_off[k + 1] = self.low_off[k] + s.low.size
            self.word_off[k + 1] = self.word_off[k] + s.high.words.size
            self.sup_off[k + 1] = self.sup_off[k] + s.high.sup.size
            self.sel0_off[k + 1] = self.sel0_off[k] + s.high.sel0.size
            self.l[k], self.m[k], self.nbits[k] = s.l, s.m, s.high.n

        def cat(parts, dtype):
            return np.concatenate(parts).astype(dtype) if parts else np.zeros(0, dtype=dtype)

        self.low = cat([s.low for s in sets], np.uint64)
        self.words = cat([s.high.words for s in sets], np.uint64)
        self.blk = cat([s.high.blk for s in sets], np.uint16)
        self.sup = cat([s.high.sup for s in sets], np.int64)
        self.sel0 = cat([s.high.sel0 for s in sets], np.int64)

    def arrays(self):
        return (
            self.low, self.low_off, self.l, self.m, self.words, self.blk, self.word_off,
            self.sup, self.sup_off, self.sel0, self.sel0_off, self.nbits,
        )


@njit(cache=True)
def pool_rank(pool, k, x):
    low, low_off, l, m, words, blk, word_off, sup, sup_off, sel0, sel0_off, nbits = pool
    return ef_rank(
        low[low_off[k] : low_off[k + 1]], l[k], m[k],
        words[word_off[k] : word_off[k + 1]], sup[sup_off[k] : sup_off[k + 1]],
        blk[word_off[k] : word_off[k + 1]], sel0[sel0_off[k] : sel0_off[k + 1]],
        nbits[k], x,
    )


# ---------------------------------------------------------------------------
# small alphabets
# ---------------------------------------------------------------------------


@njit(cache=True)
def _small_tables(seq, sigma, B):
    n = seq.size
    nb = n // B
    X = np.full((nb + 1, sigma), n + 1, dtype=np.int64)
    Y = np.zeros((nb + 1, sigma), dtype=np.int64)
    nxt = np.full(sigma, n + 1, dtype=np.int64)
    b = nb
    for j in range(n, 0, -1):  # j is 1-based
        while b >= 0 and b * B >= j:
            X[b, :] = nxt
            b -= 1
        nxt[seq[j - 1]] = j
    while b >= 0:
        X[b, :] = nxt
        b -= 1
    last = np.zeros(sigma, dtype=np.int64)
    b = 0
    for j in range(1, n + 1):
        while b <= nb and b * B <= j:
            Y[b, :] = last
            b += 1
        last[seq[j - 1]] = j
    while b <= nb:
        Y[b, :] = last
        b += 1
    return X, Y


@njit(cache=True)
def small_succ(seq, X, B, c, i):
    """First occurrence of ``c`` at a position ``>= i``; ``n + 1`` if absent.

    Returns ``(position, scanned)``.
    """
    n = seq.size
    if c < 0 or c >= X.shape[1]:
        return n + 1, 0
    b = (i + B - 1) // B
    if b < X.shape[0]:
        p = X[b, c]
    else:
        p = n + 1
    start = min(b * B, n)
    scanned = 0
    for j in range(start, i - 1, -1):
        scanned += 1
        if seq[j - 1] == c:
            p = j
    return p, scanned


@njit(cache=True)
def small_pred(seq, Y, B, c, i):
    """Last occurrence of ``c`` at a position ``<= i``; ``0`` if absent.

    Returns ``(position, scanned)``.
    """
    if c < 0 or c >= Y.shape[1]:
        return 0, 0
    b = i // B
    p = Y[b, c]
    scanned = 0
    for j in range(max(b * B, 1), i + 1):
        scanned += 1
        if seq[j - 1] == c:
            p = j
    return p, scanned


class SmallAlphabetRS:
    """Successor/predecessor occurrence queries over a small-alphabet sequence.

    ``X[b][c]`` holds the first occurrence of ``c`` after position ``b*B`` and
    ``Y[b][c]`` the last occurrence before it, with ``B = ceil(sigma * s)``.
    A query reads one table entry and scans at most ``B`` positions.
    Absent occurrences are reported as ``n + 1`` (successor) and ``0``
    (predecessor).
    """

    def __init__(self, seq, sigma=None, s=4):
        self.seq = np.ascontiguousarray(seq, dtype=np.int64)
        if self.seq.size and self.seq.min() < 0:
            raise ValueError("symbols must be non-negative")
        self.n = int(self.seq.size)
        self.sigma = int(sigma if sigma is not None else (self.seq.max() + 1 if self.n else 1))
        self.s = s
        self.B = max(1, math.ceil(self.sigma * s))
        self.X, self.Y = _small_tables(self.seq, self.sigma, self.B)

    @property
    def NOT_FOUND_SUCC(self):
        return self.n + 1

    NOT_FOUND_PRED = 0

    def succ_occ(self, c, i):
        return int(small_succ(self.seq, self.X, self.B, c, i)[0])

    def pred_occ(self, c, i):
        return int(small_pred(self.seq, self.Y, self.B, c, i)[0])

    def nbytes(self):
        return self.X.nbytes + self.Y.nbytes


# ---------------------------------------------------------------------------
# large alphabets
# ---------------------------------------------------------------------------

SPARSE_THRESHOLD = 512
BINARY_THRESHOLD = 16

PATH_AUTO, PATH_SPARSE, PATH_BINARY, PATH_LINEAR = 0, 1, 2, 3


@njit(cache=True)
def large_rank(C, O, set_of, pool, c, i, sparse_thr, binary_thr, path):
    """Occurrences of ``c`` in ``T[1..i]``."""
    if c < 0 or c + 1 >= C.size:
        return 0
    lo = C[c]
    hi = C[c + 1]
    o = hi - lo
    if path == 0:
        if o > sparse_thr and set_of[c] >= 0:
            path = 1
        elif o > binary_thr:
            path = 2
        else:
            path = 3
    if path == 1 and set_of[c] >= 0:
        return pool_rank(pool, set_of[c], i)
    if path == 3:
        x = lo
        while x < hi and O[x] <= i:
            x += 1
        return x - lo
    a = lo
    b = hi
    while a < b:
        mid = (a + b) >> 1
        if O[mid] <= i:
            a = mid + 1
        else:
            b = mid
    return a - lo


class LargeAlphabetRS:
    """Rank/select over a sequence drawn from a large integer alphabet ``[0, sigma)``.

    ``select`` is a single array read. ``rank`` dispatches on the occurrence
    count ``o`` of the symbol: an Elias-Fano set when ``o > sparse_threshold``,
    binary search over ``O`` when ``o > binary_threshold``, a linear scan
    otherwise.
    """

    def __init__(self, seq, sigma=None, sparse_threshold=SPARSE_THRESHOLD,
                 binary_threshold=BINARY_THRESHOLD):
        seq = np.ascontiguousarray(seq, dtype=np.int64)
        self.n = int(seq.size)
        self.sigma = int(sigma if sigma is not None else (seq.max() + 1 if self.n else 0))
        self.sparse_threshold = sparse_threshold
        self.binary_threshold = binary_threshold
        counts = np.bincount(seq, minlength=self.sigma)
        self.C = np.zeros(self.sigma + 1, dtype=np.int64)
        np.cumsum(counts, out=self.C[1:])
        self.O = (np.argsort(seq, kind="stable") + 1).astype(np.int64)
        self.set_of = np.full(self.sigma, -1, dtype=np.int64)
        sets = []
        for c in np.flatnonzero(counts > sparse_threshold):
            self.set_of[c] = len(sets)
            sets.append(SparseSet(self.O[self.C[c] : self.C[c + 1]], self.n))
        self.pool = SparseSetPool(sets)
        self._pool_arrays = self.pool.arrays()

    def occurrences(self, c):
        if not 0 <= c < self.sigma:
            return 0
        return int(self.C[c + 1] - self.C[c])

    def rank(self, c, i, path=PATH_AUTO):
        return int(large_rank(self.C, self.O, self.set_of, self._pool_arrays, c, i,
                              self.sparse_threshold, self.binary_threshold, path))

    def select(self, c, k):
        if not 0 <= c < self.sigma or not 1 <= k <= self.occurrences(c):
            raise IndexError(f"select({c}, {k}) out of range")
        return int(self.O[self.C[c] + k - 1])

    def kernel_args(self):
        return self.C, self.O, self.set_of, self._pool_arrays, self.sparse_threshold, self.binary_threshold
