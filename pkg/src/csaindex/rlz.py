"""Relative Lempel-Ziv over the differential suffix array.

Reference construction scores random windows of ``A^d`` by how many frequent,
not yet covered values they contribute, then closes short gaps between the
chosen segments. Parsing is greedy longest-match against the reference, found
by backward search over the reversed reference. The search stops as soon as
the match is unique and the match is then finished by direct comparison.
"""

import heapq
import logging
import math
from bisect import bisect_left, bisect_right
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .rank_select import LargeAlphabetRS, large_rank
from .suffix import build_suffix_array, bwt

log = logging.getLogger(__name__)

MAX_COPY = 1 << 16
DEFAULT_S = 3072
DEFAULT_EPS = 0.45
DEFAULT_EPS_STOP = 1 / 20
RETRY_BATCHES = 64

Literal = namedtuple("Literal", ["value"])
Copy = namedtuple("Copy", ["src", "len"])


# ---------------------------------------------------------------------------
# value frequencies
# ---------------------------------------------------------------------------


@dataclass
class FreqMap:
    """Distinct values of ``A^d`` (sorted) with their occurrence counts."""

    keys: np.ndarray
    counts: np.ndarray

    def __len__(self):
        return int(self.keys.size)

    def __getitem__(self, value):
        i = np.searchsorted(self.keys, value)
        if i < self.keys.size and self.keys[i] == value:
            return int(self.counts[i])
        raise KeyError(value)

    def as_dict(self):
        return {int(k): int(c) for k, c in zip(self.keys, self.counts)}

    def ids(self, values):
        """Index of every value in ``keys`` (values must be present)."""
        return np.searchsorted(self.keys, values)


def value_frequencies(phi):
    """Counts of every value of ``A^d`` from the ``Phi`` samples alone.

    For ``u_x <= i < u_{x+1}`` the row holding ``i`` has differential value
    ``u_x - Phi(u_x)``. The one row whose predecessor wraps around (``i = A[1]``)
    is replaced by the first entry ``A^d[1] = A[1]``.
    """
    u = phi.u
    vals = u[:-1] - phi.phi_u
    cnt = np.diff(u)
    x = int(np.searchsorted(u, phi.a1, side="right")) - 1
    cnt[x] -= 1
    vals = np.append(vals, phi.a1)
    cnt = np.append(cnt, 1)
    keys, inv = np.unique(vals, return_inverse=True)
    counts = np.bincount(inv, weights=cnt, minlength=keys.size).astype(np.int64)
    keep = counts > 0
    return FreqMap(keys=keys[keep], counts=counts[keep])


def direct_frequencies(Ad):
    keys, counts = np.unique(np.asarray(Ad, dtype=np.int64), return_counts=True)
    return FreqMap(keys=keys, counts=counts.astype(np.int64))


# ---------------------------------------------------------------------------
# reference construction
# ---------------------------------------------------------------------------


def score_segment(freq, window, remaining=None):
    """Sum of square-rooted remaining frequencies of the distinct values in
    ``window``, divided by its length.

    ``remaining`` overrides the counts in ``freq`` (aligned with ``freq.keys``);
    values already in the reference have remaining frequency 0.
    """
    window = np.asarray(window, dtype=np.int64)
    if window.size == 0:
        raise ValueError("empty window")
    rem = freq.counts if remaining is None else remaining
    ids = np.unique(freq.ids(window))
    return float(np.sqrt(rem[ids]).sum() / window.size)


@dataclass
class Reference:
    R: np.ndarray
    segments: list  # sorted disjoint 1-based inclusive (b, e) pairs over A^d
    t_R: int
    stats: dict = field(default_factory=dict, compare=False, repr=False)

    def __len__(self):
        return int(self.R.size)


def default_params(n, r):
    """``(t_R, s, M)`` defaults for a sequence of length ``n`` with ``r`` runs."""
    t_R = max(1, min(int(5.2 * r), n // 3))
    M = int(math.ceil(5 * (n / max(r, 1)) ** DEFAULT_EPS))
    return t_R, DEFAULT_S, M


class _Segments:
    """Sorted disjoint segments with neighbour lookups by bisection."""

    def __init__(self):
        self.b = []
        self.e = []
        self.total = 0

    def clip(self, lo, hi):
        """Longest connected piece of ``[lo, hi]`` not covered by any segment."""
        k = bisect_right(self.b, hi)  # segments with b <= hi
        j = bisect_left(self.e, lo)  # first segment with e >= lo
        best_lo, best_hi = 1, 0
        cur = lo
        for t in range(j, k):
            if self.b[t] > cur and self.b[t] - cur > best_hi - best_lo + 1:
                best_lo, best_hi = cur, self.b[t] - 1
            cur = max(cur, self.e[t] + 1)
        if cur <= hi and hi - cur + 1 > best_hi - best_lo + 1:
            best_lo, best_hi = cur, hi
        return best_lo, best_hi

    def add(self, lo, hi):
        self.total += hi - lo + 1
        t = bisect_left(self.b, lo)
        if t > 0 and self.e[t - 1] + 1 == lo:
            t -= 1
            lo = self.b[t]
            del self.b[t], self.e[t]
        if t < len(self.b) and self.b[t] == hi + 1:
            hi = self.e[t]
            del self.b[t], self.e[t]
        self.b.insert(t, lo)
        self.e.insert(t, hi)

    def pairs(self):
        return list(zip(self.b, self.e))


def build_reference(Ad, freq=None, t_R=None, s=DEFAULT_S, M=None, eps_stop=DEFAULT_EPS_STOP, seed=0, r=None):
    """Choose disjoint segments of ``A^d`` whose concatenation is the reference.

    Each round draws ``M`` random windows of length ``s``, trims them against
    the chosen segments, and keeps the one with the highest score. Stops once
    ``|R| >= (1 - eps_stop) * t_R``, then closes gaps while the budget allows.
    """
    Ad = np.asarray(Ad, dtype=np.int64)
    n = Ad.size
    if freq is None:
        freq = direct_frequencies(Ad)
    if r is None:
        r = max(1, len(freq) - 1)
    d_t, _, d_M = default_params(n, r)
    t_R = d_t if t_R is None else int(t_R)
    M = d_M if M is None else int(M)
    stats = {"rounds": 0, "empty_batches": 0, "segment_lengths": []}
    if t_R >= n:
        return Reference(R=Ad.copy(), segments=[(1, n)], t_R=t_R, stats=stats)

    ids = freq.ids(Ad)
    remaining = freq.counts.astype(np.float64)
    rng = np.random.default_rng(seed)
    segs = _Segments()
    goal = (1 - eps_stop) * t_R
    failures = 0
    while segs.total < goal and segs.total < t_R:
        starts = rng.integers(1, max(1, n - s + 1) + 1, size=M)
        best = None
        for lo in starts:
            lo = int(lo)
            hi = min(n, lo + s - 1)
            lo, hi = segs.clip(lo, hi)
            if hi < lo:
                continue
            u = np.unique(ids[lo - 1 : hi])
            score = float(np.sqrt(remaining[u]).sum()) / (hi - lo + 1)
            if best is None or score > best[0]:
                best = (score, lo, hi)
        if best is None:
            stats["empty_batches"] += 1
            failures += 1
            if failures >= RETRY_BATCHES:
                log.warning("reference construction stopped after %d empty batches", failures)
                break
            continue
        _, lo, hi = best
        hi = min(hi, lo + (t_R - segs.total) - 1)
        remaining[ids[lo - 1 : hi]] = 0.0
        segs.add(lo, hi)
        stats["rounds"] += 1
        stats["segment_lengths"].append(hi - lo + 1)
    segments = close_gaps(segs.pairs(), t_R)
    R = np.concatenate([Ad[b - 1 : e] for b, e in segments]) if segments else Ad[:0].copy()
    return Reference(R=R, segments=segments, t_R=t_R, stats=stats)


def close_gaps(segments, t_R):
    """Greedily merge neighbouring segments across the gap with the best
    ``(merged length) / (gap length)`` ratio while the total stays within ``t_R``.
    """
    b = [int(x) for x, _ in segments]
    e = [int(y) for _, y in segments]
    k = len(b)
    if k < 2:
        return list(zip(b, e))
    total = sum(y - x + 1 for x, y in zip(b, e))
    nxt = list(range(1, k + 1))
    prv = list(range(-1, k - 1))
    alive = [True] * k
    version = [0] * k

    def push(i):
        j = nxt[i]
        gap = b[j] - e[i] - 1
        heapq.heappush(heap, (-(e[j] - b[i] + 1) / gap, b[i], version[i], i))

    heap = []
    for i in range(k - 1):
        push(i)
    while heap:
        _, _, ver, i = heapq.heappop(heap)
        if not alive[i] or ver != version[i] or nxt[i] >= k:
            continue
        j = nxt[i]
        gap = b[j] - e[i] - 1
        if total + gap > t_R:
            continue
        total += gap
        e[i] = e[j]
        alive[j] = False
        nxt[i] = nxt[j]
        if nxt[j] < k:
            prv[nxt[j]] = i
        version[i] += 1
        if nxt[i] < k:
            push(i)
        p = prv[i]
        if p >= 0:
            version[p] += 1
            push(p)
    return [(b[i], e[i]) for i in range(k) if alive[i]]


def build_aligned_reference(Ad, freq=None, t_R=None, s=DEFAULT_S, r=None):
    """Reference from fixed, aligned segments ``[i*s+1, (i+1)*s]`` picked greedily by score.

    Scores only drop as values get covered, so a lazily re-evaluated heap
    yields the same choice as rescoring every segment each round.
    """
    Ad = np.asarray(Ad, dtype=np.int64)
    n = Ad.size
    if freq is None:
        freq = direct_frequencies(Ad)
    if r is None:
        r = max(1, len(freq) - 1)
    t_R = default_params(n, r)[0] if t_R is None else int(t_R)
    if t_R >= n:
        return Reference(R=Ad.copy(), segments=[(1, n)], t_R=t_R)
    ids = freq.ids(Ad)
    remaining = freq.counts.astype(np.float64)

    def score(i):
        w = ids[i * s : min(n, (i + 1) * s)]
        return float(np.sqrt(remaining[np.unique(w)]).sum()) / w.size

    heap = [(-score(i), i) for i in range((n + s - 1) // s)]
    heapq.heapify(heap)
    chosen = []
    total = 0
    while heap and total < t_R:
        neg, i = heapq.heappop(heap)
        cur = score(i)
        if heap and cur < -heap[0][0]:
            heapq.heappush(heap, (-cur, i))
            continue
        lo = i * s + 1
        hi = min(n, lo + s - 1, lo + t_R - total - 1)
        remaining[ids[lo - 1 : hi]] = 0.0
        chosen.append((lo, hi))
        total += hi - lo + 1
    chosen.sort()
    merged = []
    for lo, hi in chosen:
        if merged and merged[-1][1] + 1 == lo:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    R = np.concatenate([Ad[b - 1 : e] for b, e in merged])
    return Reference(R=R, segments=merged, t_R=t_R)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


@dataclass
class RlzParsing:
    """Phrases as parallel arrays; literals have ``src = 0`` and ``length = 1``."""

    is_literal: np.ndarray
    value: np.ndarray  # literal value (0 for copies)
    src: np.ndarray  # 1-based start in R (0 for literals)
    length: np.ndarray

    @property
    def z(self):
        return int(self.is_literal.size)

    @property
    def n(self):
        return int(self.length.sum())

    @property
    def starts(self):
        """1-based start position of every phrase."""
        return np.cumsum(self.length) - self.length + 1

    def phrases(self):
        return [Literal(int(v)) if lit else Copy(int(s), int(l))
                for lit, v, s, l in zip(self.is_literal, self.value, self.src, self.length)]

    def decode(self, R):
        R = np.asarray(R, dtype=np.int64)
        out = np.empty(self.n, dtype=np.int64)
        _decode_rlz(self.is_literal, self.value, self.src, self.length, R, out)
        return out


@njit(cache=True)
def _decode_rlz(is_literal, value, src, length, R, out):
    p = 0
    for k in range(is_literal.size):
        if is_literal[k]:
            out[p] = value[k]
            p += 1
        else:
            s = src[k] - 1
            for t in range(length[k]):
                out[p + t] = R[s + t]
            p += length[k]


class ReverseReferenceIndex:
    """Backward-search structures over the reversed reference (plus terminator)."""

    def __init__(self, R):
        R = np.asarray(R, dtype=np.int64)
        if R.size == 0:
            raise ValueError("empty reference")
        self.alphabet, rid = np.unique(R, return_inverse=True)
        self.rid = (rid + 1).astype(np.int64)
        text = np.append(self.rid[::-1], 0)
        self.sa = build_suffix_array(text)
        L = bwt(text, self.sa)
        self.rs = LargeAlphabetRS(L, sigma=self.alphabet.size + 1)

    def map(self, values):
        """Reference symbol id of each value, -1 where absent from R."""
        values = np.asarray(values, dtype=np.int64)
        pos = np.searchsorted(self.alphabet, values)
        pos = np.minimum(pos, self.alphabet.size - 1)
        hit = self.alphabet[pos] == values
        return np.where(hit, pos + 1, -1).astype(np.int64)


@njit(cache=True)
def _rlz_kernel(x, rid, sa, C, O, set_of, pool, sthr, bthr, cap, literal_first):
    n = x.size
    nR = rid.size
    N = nR + 1
    is_lit = np.zeros(n, dtype=np.bool_)
    src = np.zeros(n, dtype=np.int64)
    length = np.zeros(n, dtype=np.int64)
    pos = np.zeros(n, dtype=np.int64)
    z = 0
    p = 0
    prev_lit = False
    steps = 0
    while p < n:
        ell = 0
        o = 0
        if not (literal_first and not prev_lit):
            sp = 1
            ep = N
            j = 0
            while p + j < n and j < cap:
                c = x[p + j]
                if c < 0:
                    break
                sp2 = C[c] + large_rank(C, O, set_of, pool, c, sp - 1, sthr, bthr, 0) + 1
                ep2 = C[c] + large_rank(C, O, set_of, pool, c, ep, sthr, bthr, 0)
                steps += 1
                if sp2 > ep2:
                    break
                sp = sp2
                ep = ep2
                j += 1
                if sp == ep:
                    break
            if j > 0:
                o = nR - (sa[sp - 1] - 1) - j
                ell = j
                while p + ell < n and o + ell < nR and ell < cap and x[p + ell] == rid[o + ell]:
                    ell += 1
        pos[z] = p
        if ell >= 2:
            src[z] = o + 1
            length[z] = ell
            p += ell
            prev_lit = False
        else:
            is_lit[z] = True
            length[z] = 1
            p += 1
            prev_lit = True
        z += 1
    return is_lit[:z].copy(), pos[:z].copy(), src[:z].copy(), length[:z].copy(), steps


def rlz_parse(Ad, R, cap=MAX_COPY, literal_first=False, index=None):
    """Greedy parsing of ``A^d`` against reference ``R``.

    Copies shorter than 2 become literals. ``literal_first`` forces a literal
    before every copy (the original layout).
    """
    Ad = np.asarray(Ad, dtype=np.int64)
    if index is None:
        index = ReverseReferenceIndex(R)
    x = index.map(Ad)
    C, O, set_of, pool, sthr, bthr = index.rs.kernel_args()
    is_lit, pos, src, length, steps = _rlz_kernel(x, index.rid, index.sa, C, O, set_of, pool, sthr, bthr,
                                                  cap, literal_first)
    value = np.where(is_lit, Ad[pos], 0)
    return RlzParsing(is_literal=is_lit, value=value, src=src, length=length)


def naive_longest_match(Ad, R, p, cap=MAX_COPY):
    """Length of the longest prefix of ``Ad[p:]`` occurring in ``R`` (0-based ``p``).

    Brute force: keep every start in ``R`` that still matches and extend all
    of them one symbol at a time.
    """
    Ad = np.asarray(Ad, dtype=np.int64)
    R = np.asarray(R, dtype=np.int64)
    cand = np.arange(R.size)
    ell = 0
    while p + ell < Ad.size and ell < cap:
        cand = cand[cand + ell < R.size]
        cand = cand[R[cand + ell] == Ad[p + ell]]
        if cand.size == 0:
            break
        ell += 1
    return ell


def naive_rlz_lengths(Ad, R, cap=MAX_COPY):
    """Phrase lengths of the greedy parsing by direct search (literals count as 1)."""
    lengths = []
    p = 0
    while p < len(Ad):
        ell = naive_longest_match(Ad, R, p, cap)
        ell = ell if ell >= 2 else 1
        lengths.append(ell)
        p += ell
    return np.array(lengths, dtype=np.int64)
