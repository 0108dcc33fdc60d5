"""Suffix array, LCP/RMQ, BWT runs, differential suffix array and Phi samples.

Public functions take and return 1-based positions (suffix array values are
in ``[1, n]``). The LZ-End context is the exception: its arrays are 0-based,
mirroring how the parser indexes them.
"""

import bisect
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._bits import highest_bit

TERMINATOR = 0


# ---------------------------------------------------------------------------
# alphabet handling
# ---------------------------------------------------------------------------


def densify(data):
    """Map the bytes of ``data`` to a dense alphabet ``[1, sigma]``.

    Returns ``(seq, alphabet)`` where ``alphabet[c - 1]`` is the byte value of
    symbol ``c``. Zero bytes are rejected.
    """
    raw = np.frombuffer(bytes(data), dtype=np.uint8)
    if raw.size == 0:
        raise ValueError("empty text")
    if np.any(raw == 0):
        raise ValueError("text contains zero bytes")
    alphabet, seq = np.unique(raw, return_inverse=True)
    return (seq + 1).astype(np.int64), alphabet.astype(np.uint8)


def rank_values(seq):
    """Replace arbitrary integers by their rank among the distinct values."""
    values, dense = np.unique(np.asarray(seq, dtype=np.int64), return_inverse=True)
    return dense.astype(np.int64).reshape(-1), values


def terminate(seq):
    """Append the unique smallest symbol ``0`` (sequence symbols must be >= 1)."""
    seq = np.asarray(seq, dtype=np.int64)
    if seq.size and seq.min() < 1:
        raise ValueError("symbols must be >= 1 to append a terminator")
    return np.append(seq, np.int64(TERMINATOR))


# ---------------------------------------------------------------------------
# suffix array construction (SA-IS)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _sais_classify(s, upper):
    n = s.size
    ls = np.zeros(n, dtype=np.bool_)
    for i in range(n - 2, -1, -1):
        if s[i] == s[i + 1]:
            ls[i] = ls[i + 1]
        else:
            ls[i] = s[i] < s[i + 1]
    sum_l = np.zeros(upper + 1, dtype=np.int64)
    sum_s = np.zeros(upper + 1, dtype=np.int64)
    for i in range(n):
        if not ls[i]:
            sum_s[s[i]] += 1
        else:
            sum_l[s[i] + 1] += 1
    for i in range(upper + 1):
        sum_s[i] += sum_l[i]
        if i < upper:
            sum_l[i + 1] += sum_s[i]
    m = 0
    for i in range(1, n):
        if not ls[i - 1] and ls[i]:
            m += 1
    lms = np.empty(m, dtype=np.int64)
    lms_map = np.full(n + 1, -1, dtype=np.int64)
    m = 0
    for i in range(1, n):
        if not ls[i - 1] and ls[i]:
            lms_map[i] = m
            lms[m] = i
            m += 1
    return ls, sum_l, sum_s, lms, lms_map


@njit(cache=True)
def _sais_induce(s, ls, sum_l, sum_s, lms, sa):
    n = s.size
    sa[:] = -1
    buf = sum_s.copy()
    for d in lms:
        if d == n:
            continue
        sa[buf[s[d]]] = d
        buf[s[d]] += 1
    buf[:] = sum_l
    sa[buf[s[n - 1]]] = n - 1
    buf[s[n - 1]] += 1
    for i in range(n):
        v = sa[i]
        if v >= 1 and not ls[v - 1]:
            sa[buf[s[v - 1]]] = v - 1
            buf[s[v - 1]] += 1
    buf[:] = sum_l
    for i in range(n - 1, -1, -1):
        v = sa[i]
        if v >= 1 and ls[v - 1]:
            buf[s[v - 1] + 1] -= 1
            sa[buf[s[v - 1] + 1]] = v - 1


@njit(cache=True)
def _sais_reduce(s, sa, lms, lms_map):
    n = s.size
    m = lms.size
    sorted_lms = np.empty(m, dtype=np.int64)
    k = 0
    for v in sa:
        if lms_map[v] != -1:
            sorted_lms[k] = v
            k += 1
    rec = np.zeros(m, dtype=np.int64)
    upper = 0
    rec[lms_map[sorted_lms[0]]] = 0
    for i in range(1, m):
        l = sorted_lms[i - 1]
        r = sorted_lms[i]
        end_l = lms[lms_map[l] + 1] if lms_map[l] + 1 < m else n
        end_r = lms[lms_map[r] + 1] if lms_map[r] + 1 < m else n
        same = True
        if end_l - l != end_r - r:
            same = False
        else:
            while l < end_l:
                if s[l] != s[r]:
                    break
                l += 1
                r += 1
            if l == n or s[l] != s[r]:
                same = False
        if not same:
            upper += 1
        rec[lms_map[sorted_lms[i]]] = upper
    return rec, upper


def _sais(s, upper):
    n = s.size
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    if n == 2:
        return np.array([0, 1] if s[0] < s[1] else [1, 0], dtype=np.int64)
    ls, sum_l, sum_s, lms, lms_map = _sais_classify(s, upper)
    sa = np.empty(n, dtype=np.int64)
    _sais_induce(s, ls, sum_l, sum_s, lms, sa)
    m = lms.size
    if m:
        rec, rec_upper = _sais_reduce(s, sa, lms, lms_map)
        del lms_map
        if rec_upper + 1 == m:
            rec_sa = np.empty(m, dtype=np.int64)
            rec_sa[rec] = np.arange(m, dtype=np.int64)
        else:
            rec_sa = _sais(rec, int(rec_upper))
        _sais_induce(s, ls, sum_l, sum_s, lms[rec_sa], sa)
    return sa


def suffix_array0(seq):
    """0-based suffix array of an integer sequence (any integer values)."""
    seq = np.asarray(seq, dtype=np.int64)
    if seq.size == 0:
        raise ValueError("empty sequence")
    lo, hi = int(seq.min()), int(seq.max())
    if lo >= 0 and hi <= 4 * seq.size + 256:
        dense, upper = seq, hi
    else:
        dense, values = rank_values(seq)
        upper = values.size - 1
    return _sais(np.ascontiguousarray(dense), int(upper))


def build_suffix_array(seq):
    """1-based suffix array: ``A[k]`` is the start of the k-th smallest suffix."""
    return suffix_array0(seq) + 1


def naive_suffix_array(seq):
    """Sort all suffixes directly (test oracle)."""
    t = [int(x) for x in seq]
    return np.array(sorted(range(1, len(t) + 1), key=lambda i: t[i - 1 :]), dtype=np.int64)


def inverse_permutation(A):
    """``inv[A[k] - 1] = k`` for a 1-based permutation ``A``."""
    A = np.asarray(A, dtype=np.int64)
    inv = np.empty_like(A)
    inv[A - 1] = np.arange(1, A.size + 1, dtype=np.int64)
    return inv


# ---------------------------------------------------------------------------
# LCP and range minima
# ---------------------------------------------------------------------------


@njit(cache=True)
def _kasai(s, sa0):
    n = s.size
    rank = np.empty(n, dtype=np.int64)
    for i in range(n):
        rank[sa0[i]] = i
    # permuted LCP: plcp[j] = lcp of suffix j with its lexicographic predecessor
    plcp = np.zeros(n, dtype=np.int64)
    h = 0
    for j in range(n):
        r = rank[j]
        if r == 0:
            h = 0
            plcp[j] = 0
            continue
        k = sa0[r - 1]
        while j + h < n and k + h < n and s[j + h] == s[k + h]:
            h += 1
        plcp[j] = h
        if h > 0:
            h -= 1
    lcp = np.empty(n, dtype=np.int64)
    for i in range(n):
        lcp[i] = plcp[sa0[i]]
    return lcp


def lcp_array(seq, A):
    """``H[k]`` = lcp of the suffixes at ``A[k-1]`` and ``A[k]``; ``H[1] = 0``.

    Returned as a 0-based numpy array (``H[0]`` is the first entry).
    """
    return _kasai(np.asarray(seq, dtype=np.int64), np.asarray(A, dtype=np.int64) - 1)


def naive_lcp(seq, A):
    t = [int(x) for x in seq]
    H = [0]
    for k in range(1, len(A)):
        a, b = t[A[k - 1] - 1 :], t[A[k] - 1 :]
        h = 0
        while h < min(len(a), len(b)) and a[h] == b[h]:
            h += 1
        H.append(h)
    return np.array(H, dtype=np.int64)


RMQ_BLOCK = 16


@njit(cache=True)
def _rmq_build(values, block):
    n = values.size
    nb = (n + block - 1) // block
    bmin = np.empty(nb, dtype=np.int64)
    for b in range(nb):
        m = values[b * block]
        for j in range(b * block + 1, min(n, (b + 1) * block)):
            if values[j] < m:
                m = values[j]
        bmin[b] = m
    levels = 1
    while (1 << levels) <= nb:
        levels += 1
    table = np.empty((levels, nb), dtype=np.int64)
    table[0, :] = bmin
    for k in range(1, levels):
        half = 1 << (k - 1)
        for b in range(nb):
            if b + half < nb:
                table[k, b] = min(table[k - 1, b], table[k - 1, b + half])
            else:
                table[k, b] = table[k - 1, b]
    return table


@njit(cache=True)
def rmq_min(values, table, block, i, j):
    """Minimum of ``values[i..j]`` (0-based, inclusive, ``i <= j``)."""
    bi = i // block
    bj = j // block
    if bi == bj:
        m = values[i]
        for k in range(i + 1, j + 1):
            if values[k] < m:
                m = values[k]
        return m
    m = values[i]
    for k in range(i + 1, (bi + 1) * block):
        if values[k] < m:
            m = values[k]
    for k in range(bj * block, j + 1):
        if values[k] < m:
            m = values[k]
    lo = bi + 1
    hi = bj - 1
    if lo <= hi:
        span = hi - lo + 1
        lev = highest_bit(np.uint64(span))
        a = table[lev, lo]
        b = table[lev, hi - (1 << lev) + 1]
        if a < m:
            m = a
        if b < m:
            m = b
    return m


class RangeMin:
    """Range-minimum queries over an integer array.

    Sparse table over block minima plus in-block scans: O(n/b lg n) words and
    O(b) query time for a block size ``b``.
    """

    def __init__(self, values, block=RMQ_BLOCK):
        self.values = np.ascontiguousarray(values, dtype=np.int64)
        self.block = block
        self.table = _rmq_build(self.values, block)

    def min(self, i, j):
        """Minimum of ``values[i..j]`` (0-based, inclusive)."""
        if not 0 <= i <= j < self.values.size:
            raise IndexError((i, j))
        return int(rmq_min(self.values, self.table, self.block, i, j))

    def argmin(self, i, j):
        m = self.min(i, j)
        return i + int(np.flatnonzero(self.values[i : j + 1] == m)[0])


# ---------------------------------------------------------------------------
# context for LZ-End parsing
# ---------------------------------------------------------------------------


@dataclass
class SuffixContext:
    """Index over the reverse of a sequence, as used by the LZ-End parser.

    All arrays are 0-based. ``A`` is the 0-based suffix array of the reverse,
    ``H`` its LCP array and ``Ainv_rev[j]`` the lexicographic rank of the
    reversed prefix ``seq[0..j]``, i.e. ``Ainv_rev[n - A[k] - 1] = k``.
    """

    n: int
    A: np.ndarray
    Ainv_rev: np.ndarray
    H: np.ndarray
    rmq: RangeMin

    def lce(self, a, b):
        """Common-suffix length of the prefixes whose reversals rank ``a`` and ``b``."""
        if a == b:
            return self.n - int(self.A[a])
        lo, hi = min(a, b), max(a, b)
        return self.rmq.min(lo + 1, hi)


def build_lzend_context(seq, keep_sa=True):
    seq = np.asarray(seq, dtype=np.int64)
    if seq.size == 0:
        raise ValueError("empty sequence")
    n = seq.size
    rev = np.ascontiguousarray(seq[::-1])
    sa0 = suffix_array0(rev)
    ainv = np.empty(n, dtype=np.int64)
    ainv[n - sa0 - 1] = np.arange(n, dtype=np.int64)
    H = _kasai(rev, sa0)
    rmq = RangeMin(H)
    return SuffixContext(n=n, A=sa0 if keep_sa else None, Ainv_rev=ainv, H=H, rmq=rmq)


# ---------------------------------------------------------------------------
# BWT runs and Phi samples
# ---------------------------------------------------------------------------


@dataclass
class BwtRuns:
    """Run-length view of the BWT ``L[k] = T[A[k] - 1]`` (``T[n]`` when ``A[k] = 1``)."""

    L: np.ndarray
    run_starts: np.ndarray  # 1-based, strictly increasing, run_starts[0] == 1
    run_heads: np.ndarray
    sa_at_run_start: np.ndarray
    sa_at_run_end: np.ndarray

    @property
    def r(self):
        return int(self.run_starts.size)

    @property
    def n(self):
        return int(self.L.size)

    @property
    def run_lengths(self):
        return np.diff(np.append(self.run_starts, self.n + 1))

    @property
    def run_ends(self):
        return np.append(self.run_starts[1:] - 1, self.n)


def bwt(seq, A):
    seq = np.asarray(seq, dtype=np.int64)
    A = np.asarray(A, dtype=np.int64)
    return seq[A - 2]  # A == 1 wraps to seq[-1] == T[n]


def build_bwt_runs(seq, A):
    L = bwt(seq, A)
    A = np.asarray(A, dtype=np.int64)
    n = L.size
    change = np.ones(n, dtype=bool)
    change[1:] = L[1:] != L[:-1]
    starts0 = np.flatnonzero(change)
    ends0 = np.append(starts0[1:] - 1, n - 1)
    return BwtRuns(
        L=L,
        run_starts=starts0 + 1,
        run_heads=L[starts0],
        sa_at_run_start=A[starts0],
        sa_at_run_end=A[ends0],
    )


def differentiate(A):
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        raise ValueError("empty array")
    d = np.empty_like(A)
    d[0] = A[0]
    d[1:] = A[1:] - A[:-1]
    return d


def accumulate(Ad):
    return np.cumsum(np.asarray(Ad, dtype=np.int64))


@dataclass
class PhiSamples:
    """Samples ``(u_x, Phi(u_x))`` at the SA values of BWT run starts.

    ``u`` carries the sentinel ``n + 1`` as its last entry. ``Phi(A[k]) =
    A[(k - 1) mod n]`` is then piecewise linear between samples; this holds
    when the text ends with a unique smallest symbol.
    """

    u: np.ndarray
    phi_u: np.ndarray
    a1: int
    n: int

    @property
    def r(self):
        return int(self.u.size - 1)

    def phi(self, i):
        x = bisect.bisect_right(self.u, i) - 1
        if x < 0 or x >= self.r:
            raise ValueError(f"no sample covers {i}")
        return int(self.phi_u[x] + (i - self.u[x]))


def phi_samples(runs):
    """Phi samples from the run boundaries: the row before a run start is a run end."""
    n = runs.n
    prev_end = np.roll(runs.sa_at_run_end, 1)  # row l_x - 1, cyclically
    order = np.argsort(runs.sa_at_run_start, kind="stable")
    u = np.append(runs.sa_at_run_start[order], n + 1).astype(np.int64)
    return PhiSamples(u=u, phi_u=prev_end[order].astype(np.int64), a1=int(runs.sa_at_run_start[0]), n=n)


def phi_inverse_samples(runs):
    """Samples of ``Phi^-1(A[k]) = A[(k + 1) mod n]`` at the SA values of run ends."""
    n = runs.n
    next_start = np.roll(runs.sa_at_run_start, -1)
    order = np.argsort(runs.sa_at_run_end, kind="stable")
    u = np.append(runs.sa_at_run_end[order], n + 1).astype(np.int64)
    return PhiSamples(u=u, phi_u=next_start[order].astype(np.int64), a1=int(runs.sa_at_run_start[0]), n=n)


def phi_table(A):
    """Direct ``Phi`` table: ``phi[v - 1] = A[(k - 1) mod n]`` where ``A[k] = v``."""
    A = np.asarray(A, dtype=np.int64)
    phi = np.empty_like(A)
    phi[A - 1] = np.roll(A, 1)
    return phi
