"""LZ-End parsing of integer sequences.

Each phrase is a triple ``(source, copy_len, ext)``: it copies the last
``copy_len`` symbols ending where phrase ``source`` ends and appends ``ext``.
Phrase numbers are 1-based; ``source == 0`` denotes the empty phrase.

:func:`parse` is a single left-to-right pass. After each symbol the last
phrase either merges with its predecessor, is extended, or a new literal
phrase begins. Copy sources are found among the lexicographic neighbours, in
the reverse sequence's suffix order, of the current prefix. Only phrases that
can no longer change are kept in the marker map.
"""

from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ._bits import highest_bit, low_mask, lowest_bit
from .suffix import build_lzend_context, rank_values, rmq_min

NONE = -1

LzEndPhrase = namedtuple("LzEndPhrase", ["source", "copy_len", "ext"])


@dataclass
class LzEndParsing:
    source: np.ndarray
    copy_len: np.ndarray
    ext: np.ndarray
    n: int
    h: int = None  # None means unbounded
    stats: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def z(self):
        return int(self.source.size)

    @property
    def lengths(self):
        return self.copy_len + 1

    @property
    def ends(self):
        """1-based end position of every phrase."""
        return np.cumsum(self.lengths)

    @property
    def phrases(self):
        return [LzEndPhrase(int(s), int(c), int(e)) for s, c, e in zip(self.source, self.copy_len, self.ext)]

    @classmethod
    def from_phrases(cls, phrases, h=None):
        arr = np.array([tuple(p) for p in phrases], dtype=np.int64).reshape(-1, 3)
        return cls(source=arr[:, 0].copy(), copy_len=arr[:, 1].copy(), ext=arr[:, 2].copy(),
                   n=int((arr[:, 1] + 1).sum()), h=h)


# ---------------------------------------------------------------------------
# marker map: 64-ary bit trie over lex positions plus a phrase-number array
# ---------------------------------------------------------------------------


def _trie_layout(n):
    sizes = []
    size = max(1, (n + 63) // 64)
    while True:
        sizes.append(size)
        if size == 1:
            break
        size = (size + 63) // 64
    off = np.zeros(len(sizes) + 1, dtype=np.int64)
    off[1:] = np.cumsum(sizes)
    return off


@njit(cache=True)
def trie_insert(bits, off, key):
    for k in range(off.size - 1):
        w = key >> 6
        bits[off[k] + w] |= np.uint64(1) << np.uint64(key & 63)
        key = w


@njit(cache=True)
def trie_delete(bits, off, key):
    for k in range(off.size - 1):
        w = key >> 6
        bits[off[k] + w] &= ~(np.uint64(1) << np.uint64(key & 63))
        if bits[off[k] + w] != 0:
            return
        key = w


@njit(cache=True)
def trie_pred(bits, off, x):
    """Largest marked key ``<= x``, or -1."""
    if x < 0:
        return -1
    nlev = off.size - 1
    k = 0
    key = x
    while True:
        w = key >> 6
        word = bits[off[k] + w] & low_mask((key & 63) + 1)
        if word != 0:
            key = (w << 6) | highest_bit(word)
            break
        if w == 0 or k + 1 == nlev:
            return -1
        key = w - 1
        k += 1
    while k > 0:
        k -= 1
        key = (key << 6) | highest_bit(bits[off[k] + key])
    return key


@njit(cache=True)
def trie_succ(bits, off, x, n):
    """Smallest marked key ``>= x``, or -1."""
    if x >= n:
        return -1
    if x < 0:
        x = 0
    nlev = off.size - 1
    k = 0
    key = x
    while True:
        w = key >> 6
        word = bits[off[k] + w] & ~low_mask(key & 63)
        if word != 0:
            key = (w << 6) | lowest_bit(word)
            break
        if w + 1 >= off[k + 1] - off[k] or k + 1 == nlev:
            return -1
        key = w + 1
        k += 1
    while k > 0:
        k -= 1
        key = (key << 6) | lowest_bit(bits[off[k] + key])
    return key


class MarkerMap:
    """Ordered map from lex positions in ``[0, n)`` to phrase numbers."""

    def __init__(self, n):
        self.n = n
        self.off = _trie_layout(n)
        self.bits = np.zeros(self.off[-1], dtype=np.uint64)
        self.phrase = np.zeros(max(n, 1), dtype=np.int64)
        self.size = 0

    def __contains__(self, key):
        return 0 <= key < self.n and bool((self.bits[key >> 6] >> np.uint64(key & 63)) & np.uint64(1))

    def __getitem__(self, key):
        if key not in self:
            raise KeyError(key)
        return int(self.phrase[key])

    def __len__(self):
        return self.size

    def mark(self, key, phrase):
        if key in self:
            raise KeyError(f"{key} already marked")
        trie_insert(self.bits, self.off, key)
        self.phrase[key] = phrase
        self.size += 1

    def unmark(self, key):
        if key not in self:
            raise KeyError(key)
        trie_delete(self.bits, self.off, key)
        self.size -= 1

    def predecessor(self, x):
        """Largest marked key ``<= x`` as ``(key, phrase)``, or ``None``."""
        key = trie_pred(self.bits, self.off, x)
        return None if key < 0 else (int(key), int(self.phrase[key]))

    def successor(self, x):
        key = trie_succ(self.bits, self.off, x, self.n)
        return None if key < 0 else (int(key), int(self.phrase[key]))

    def items(self):
        keys = []
        x = self.successor(0)
        while x is not None:
            keys.append(x)
            x = self.successor(x[0] + 1)
        return keys


# ---------------------------------------------------------------------------
# candidate search and parse kernel
# ---------------------------------------------------------------------------


@njit(cache=True)
def _find_sources(bits, off, phrase, n, H, table, block, ilex, z, last_len, prev_len):
    """Extend candidate ``p1`` and merge candidate ``p2`` (``NONE`` if absent).

    ``last_len``/``prev_len`` are the lengths of phrases ``z`` and ``z - 1``
    (``prev_len == 0`` when ``z == 1``). Returns ``(p1, p2, queries)``.
    """
    p1 = NONE
    p2 = NONE
    queries = 0
    # lexicographically smaller side
    j = trie_pred(bits, off, ilex - 1)
    queries += 1
    if j >= 0:
        lce = rmq_min(H, table, block, j + 1, ilex)
        if lce >= last_len:
            p = phrase[j]
            p1 = p
            if prev_len > 0:
                if p == z - 1:
                    j = trie_pred(bits, off, j - 1)
                    queries += 1
                    if j >= 0:
                        p = phrase[j]
                        lce = rmq_min(H, table, block, j + 1, ilex)
                    else:
                        p = NONE
                if p != NONE and lce >= last_len + prev_len:
                    p2 = p
    if p1 == NONE or p2 == NONE:
        j = trie_succ(bits, off, ilex + 1, n)
        queries += 1
        if j >= 0:
            lce = rmq_min(H, table, block, ilex + 1, j)
            if lce >= last_len:
                p = phrase[j]
                p1 = p
                if prev_len > 0 and p2 == NONE:
                    if p == z - 1:
                        j = trie_succ(bits, off, j + 1, n)
                        queries += 1
                        if j >= 0:
                            p = phrase[j]
                            lce = rmq_min(H, table, block, ilex + 1, j)
                        else:
                            p = NONE
                    if p != NONE and lce >= last_len + prev_len:
                        p2 = p
    return p1, p2, queries


@njit(cache=True)
def _parse_kernel(seq, ainv, H, table, block, h, trace):
    n = seq.size
    source = np.zeros(n + 1, dtype=np.int64)
    length = np.zeros(n + 1, dtype=np.int64)
    ext = np.zeros(n + 1, dtype=seq.dtype)
    # trie over lex positions
    sizes = []
    size = max(1, (n + 63) // 64)
    while True:
        sizes.append(size)
        if size == 1:
            break
        size = (size + 63) // 64
    off = np.zeros(len(sizes) + 1, dtype=np.int64)
    for k in range(len(sizes)):
        off[k + 1] = off[k] + sizes[k]
    bits = np.zeros(off[-1], dtype=np.uint64)
    phrase = np.zeros(n, dtype=np.int64)
    # event log: +key+1 for mark, -(key+1) for unmark
    log = np.zeros(2 * n if trace else 1, dtype=np.int64)
    nlog = 0
    queries = 0
    merges = 0
    extends = 0

    z = 1
    length[1] = 1
    ext[1] = seq[0]
    for i in range(1, n):
        ilex = ainv[i - 1]
        last_len = length[z]
        prev_len = length[z - 1] if z >= 2 else 0
        p1, p2, q = _find_sources(bits, off, phrase, n, H, table, block, ilex, z, last_len, prev_len)
        queries += q
        if p2 != NONE and (h <= 0 or last_len + prev_len + 1 <= h):
            key = ainv[i - last_len - 1]
            trie_delete(bits, off, key)
            if trace:
                log[nlog] = -(key + 1)
                nlog += 1
            z -= 1
            source[z] = p2
            length[z] = last_len + prev_len + 1
            ext[z] = seq[i]
            merges += 1
        elif p1 != NONE and (h <= 0 or last_len + 1 <= h):
            source[z] = p1
            length[z] = last_len + 1
            ext[z] = seq[i]
            extends += 1
        else:
            trie_insert(bits, off, ilex)
            phrase[ilex] = z
            if trace:
                log[nlog] = ilex + 1
                nlog += 1
            z += 1
            source[z] = 0
            length[z] = 1
            ext[z] = seq[i]
    return source[1 : z + 1].copy(), length[1 : z + 1] - 1, ext[1 : z + 1].copy(), log[:nlog], queries, merges, extends


def parse(seq, h=None, ctx=None, trace=False):
    """LZ-End parsing of ``seq`` with optional maximum phrase length ``h``."""
    seq = np.ascontiguousarray(seq, dtype=np.int64)
    if seq.size == 0:
        raise ValueError("empty sequence")
    if h is not None and h < 1:
        raise ValueError("h must be >= 1")
    if ctx is None:
        ctx = build_lzend_context(seq, keep_sa=False)
    src, clen, ext, log, queries, merges, extends = _parse_kernel(
        seq, ctx.Ainv_rev, ctx.H, ctx.rmq.table, ctx.rmq.block, 0 if h is None else int(h), trace
    )
    stats = {"queries": int(queries), "merges": int(merges), "extends": int(extends)}
    if trace:
        stats["events"] = log
    return LzEndParsing(source=src, copy_len=clen, ext=ext, n=int(seq.size), h=h, stats=stats)


def candidate_search(ctx, M, ilex, z, last_len, prev_len):
    """Copy-source candidates for the current prefix.

    ``ilex`` is the lex position of the current reversed prefix, ``z`` the
    number of the last phrase and ``last_len``/``prev_len`` the lengths of
    phrases ``z`` and ``z - 1`` (``prev_len = 0`` when there is no ``z - 1``).
    Returns ``(p1, p2)``: a source for extending phrase ``z`` and a source for
    merging phrases ``z - 1`` and ``z``, each ``None`` if unavailable.
    """
    p1, p2, _ = _find_sources(M.bits, M.off, M.phrase, M.n, ctx.H, ctx.rmq.table, ctx.rmq.block,
                              ilex, z, last_len, prev_len)
    return (None if p1 == NONE else int(p1)), (None if p2 == NONE else int(p2))


# ---------------------------------------------------------------------------
# decoding and reference parser
# ---------------------------------------------------------------------------


@njit(cache=True)
def _decode_kernel(source, copy_len, ext, out):
    z = source.size
    ends = np.zeros(z + 1, dtype=np.int64)
    pos = 0
    for i in range(1, z + 1):
        s = source[i - 1]
        c = copy_len[i - 1]
        if s < 0 or s >= i or (s == 0 and c != 0) or c > ends[s] or c < 0:
            return -i
        start = ends[s] - c
        for k in range(c):
            out[pos + k] = out[start + k]
        pos += c
        out[pos] = ext[i - 1]
        pos += 1
        ends[i] = pos
    return pos


def decode(parsing):
    """Decode a parsing (or a list of phrase triples) back to the sequence."""
    if not isinstance(parsing, LzEndParsing):
        parsing = LzEndParsing.from_phrases(parsing)
    out = np.zeros(int(parsing.lengths.sum()), dtype=np.int64)
    res = _decode_kernel(parsing.source.astype(np.int64), parsing.copy_len.astype(np.int64),
                         parsing.ext.astype(np.int64), out)
    if res < 0:
        raise ValueError(f"phrase {-res} references an undefined source")
    return out


def naive_parse_oracle(seq, h=None):
    """Greedy LZ-End parsing by direct search over earlier phrase ends.

    At every phrase start take the longest ``X`` that is a suffix of the
    prefix ending at some earlier phrase end, then append one symbol.
    """
    seq = np.asarray(seq, dtype=np.int64)
    n = seq.size
    if n == 0:
        raise ValueError("empty sequence")
    dense, _ = rank_values(seq)
    s = "".join(chr(0x100 + int(c)) for c in dense)
    ends = [0]  # 0-based exclusive ends; ends[0] is the empty phrase
    phrases = []
    p = 0
    while p < n:
        cap = n - p - 1
        if h is not None:
            cap = min(cap, h - 1)
        longest = 0
        while longest < cap and s[p : p + longest + 1] in s[:p]:
            longest += 1
        chosen = (0, 0)
        for ell in range(longest, 0, -1):
            x = s[p : p + ell]
            hit = next((j for j in range(1, len(ends)) if ends[j] >= ell and s.endswith(x, 0, ends[j])), None)
            if hit is not None:
                chosen = (hit, ell)
                break
        src, ell = chosen
        phrases.append(LzEndPhrase(src, ell, int(seq[p + ell])))
        p += ell + 1
        ends.append(p)
    return LzEndParsing.from_phrases(phrases, h=h)
