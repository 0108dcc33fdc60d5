"""RLZ-compressed suffix array.

Phrases of ``A^d`` are split by type: the bit vector ``PT`` marks literals,
``LP`` holds literal values, ``SR``/``CPL`` hold copy sources and lengths.
Every ``a``-th copy phrase start is kept in an Elias-Fano set ``SCP`` so the
phrase containing a position is found after at most ``a`` copy phrases,
skipping literal blocks with ``select0``. ``V`` holds the absolute value of
``A`` at each sampled copy start, which makes extraction possible without a
toehold.

:class:`LegacyRlzsaStore` is the older layout: one array ``S`` of sources
or literals, phrase lengths ``PL`` and phrase-start samples ``PS``, with a
literal in front of every copy that stores the absolute value of ``A``.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from ._bits import bit_width, packed_nbytes
from .rank_select import BitVectorRS, SparseSet, bv_access, bv_select0, ef_rank, ef_select
from .rlz import MAX_COPY, RlzParsing

DEFAULT_A = 4
LEGACY_A = 64


@njit(cache=True)
def _locate(pt, scp, cpl, a, target):
    """Phrase containing 1-based ``target``: ``(x, x_cp, x_lp, p_x, steps)``.

    ``x_cp``/``x_lp`` count copy/literal phrases among phrases ``1..x``.
    """
    words, sup, blk, sel0, z = pt
    low, l, m, hw, hsup, hblk, hsel1, hsel0, hn = scp
    k = ef_rank(low, l, m, hw, hsup, hblk, hsel0, hn, target) if m > 0 else 0
    steps = 0
    if k == 0:
        xi = 0
        cp = 0
        nxt = 1
    else:
        cp = a * k
        xi = bv_select0(words, sup, blk, sel0, z, cp)
        p = ef_select(low, l, hw, hsup, hblk, hsel1, hn, k)
        if target < p + cpl[cp - 1]:
            return xi, cp, xi - cp, p, steps
        nxt = p + cpl[cp - 1]
    while True:
        steps += 1
        nx = bv_select0(words, sup, blk, sel0, z, cp + 1)  # z + 1 if none
        lits = nx - xi - 1
        if target < nxt + lits:
            x = xi + (target - nxt) + 1
            return x, cp, x - cp, target, steps
        nxt += lits
        cp += 1
        xi = nx
        if target < nxt + cpl[cp - 1]:
            return xi, cp, xi - cp, nxt, steps
        nxt += cpl[cp - 1]


@njit(cache=True)
def _extract_toehold(pt, scp, cpl, sr, lp, R, a, b, e, ab):
    out = np.empty(e - b + 1, dtype=np.int64)
    out[0] = ab
    if e == b:
        return out
    words = pt[0]
    z = pt[4]
    x, cp, lp_i, p, _ = _locate(pt, scp, cpl, a, b + 1)
    off = b + 1 - p
    v = ab
    i = 1
    pos = b + 1
    while pos <= e:
        if bv_access(words, x):
            v += lp[lp_i - 1]
            out[i] = v
            i += 1
            pos += 1
        else:
            s = sr[cp - 1] - 1
            ln = cpl[cp - 1]
            t = off
            while t < ln and pos <= e:
                v += R[s + t]
                out[i] = v
                i += 1
                pos += 1
                t += 1
        off = 0
        x += 1
        if x <= z:
            if bv_access(words, x):
                lp_i += 1
            else:
                cp += 1
    return out


@dataclass
class RlzsaStore:
    R: np.ndarray
    PT: BitVectorRS  # 1 = literal
    LP: np.ndarray
    SR: np.ndarray  # 1-based sources in R
    CPL: np.ndarray
    SCP: SparseSet
    V: np.ndarray
    a: int
    n: int
    a1: int  # A[1], anchor when no sample precedes a position

    @classmethod
    def build(cls, parsing: RlzParsing, R, A, a=DEFAULT_A):
        """Store for ``parsing`` of ``A^d`` against ``R``; ``A`` supplies the ``V`` samples."""
        A = np.asarray(A, dtype=np.int64)
        n = int(A.size)
        if parsing.n != n:
            raise ValueError(f"parsing covers {parsing.n} values, expected {n}")
        lit = np.asarray(parsing.is_literal, dtype=bool)
        length = parsing.length
        if np.any(length[lit] != 1) or np.any(length[~lit] < 2) or np.any(length > MAX_COPY):
            raise ValueError("inconsistent phrase lengths")
        R = np.asarray(R, dtype=np.int64)
        src = parsing.src[~lit]
        cpl = length[~lit].astype(np.int64)
        if np.any(src < 1) or np.any(src + cpl - 1 > R.size):
            raise ValueError("copy source outside the reference")
        copy_starts = parsing.starts[~lit]
        sampled = copy_starts[a - 1 :: a]
        return cls(
            R=R, PT=BitVectorRS(lit), LP=parsing.value[lit].astype(np.int64), SR=src.astype(np.int64),
            CPL=cpl, SCP=SparseSet(sampled, n), V=A[sampled - 1].copy(), a=int(a), n=n, a1=int(A[0]),
        )

    @property
    def z(self):
        return len(self.PT)

    @property
    def z_l(self):
        return self.PT.ones

    @property
    def z_c(self):
        return self.z - self.z_l

    def _pt(self):
        p = self.PT
        return (p.words, p.sup, p.blk, p.sel0, p.n)

    def _scp(self):
        s = self.SCP
        h = s.high
        return (s.low, s.l, s.m, h.words, h.sup, h.blk, h.sel1, h.sel0, h.n)

    def kernel_args(self):
        return self._pt(), self._scp(), self.CPL, self.SR, self.LP, self.R, self.a

    def locate_copy_phrase(self, b, stats=False):
        """Phrase containing position ``b + 1`` (``0 <= b < n``).

        Returns ``(x, x_cp, x_lp, p_x)``, all 1-based, where ``x_cp`` and
        ``x_lp`` count copy and literal phrases among phrases ``1..x``.
        """
        if not 0 <= b < self.n:
            raise IndexError(f"b = {b} outside [0, {self.n})")
        x, cp, lp, p, steps = _locate(self._pt(), self._scp(), self.CPL, self.a, b + 1)
        res = (int(x), int(cp), int(lp), int(p))
        return (res, int(steps)) if stats else res

    def extract_with_toehold(self, b, e, ab):
        """``A[b .. e]`` given ``ab = A[b]`` (1-based, inclusive)."""
        if not 1 <= b <= e <= self.n:
            raise IndexError(f"window [{b}, {e}] outside [1, {self.n}]")
        pt, scp, cpl, sr, lp, R, a = self.kernel_args()
        return _extract_toehold(pt, scp, cpl, sr, lp, R, a, b, e, ab)

    def extract(self, b, e):
        """``A[b .. e]`` anchored at the nearest sampled copy start at or before ``b``."""
        if not 1 <= b <= e <= self.n:
            raise IndexError(f"window [{b}, {e}] outside [1, {self.n}]")
        k = self.SCP.rank(b)
        if k > 0:
            q, aq = self.SCP.select(k), int(self.V[k - 1])
        else:
            q, aq = 1, self.a1
        return self.extract_with_toehold(q, e, aq)[b - q :]

    def size_report(self):
        z_c, z_l = self.z_c, self.z_l
        return {
            "R": _signed_nbytes(self.R),
            "PT": self.PT.nbytes(),
            "LP": _signed_nbytes(self.LP),
            "SR": packed_nbytes(z_c, bit_width(self.R.size)),
            "CPL": 2 * z_c,
            "SCP": self.SCP.nbytes(),
            "V": packed_nbytes(self.V.size, bit_width(self.n)),
        }

    @property
    def nbytes(self):
        return sum(self.size_report().values())


def _signed_nbytes(values):
    if values.size == 0:
        return 0
    return packed_nbytes(values.size, bit_width(int(values.max()) - int(values.min())))


# ---------------------------------------------------------------------------
# original layout
# ---------------------------------------------------------------------------


@njit(cache=True)
def _legacy_extract(S, PL, PS, R, a, b, e):
    # phrase containing b via the sample at or before it, then a forward scan
    k = np.searchsorted(PS, b, side="right") - 1
    x = k * a
    p = PS[k]
    while p + max(PL[x], 1) <= b:
        p += max(PL[x], 1)
        x += 1
    if PL[x] != 0:
        # the literal in front of every copy is an absolute anchor
        x -= 1
        p -= 1
    out = np.empty(e - b + 1, dtype=np.int64)
    v = 0
    pos = p
    while pos <= e:
        if PL[x] == 0:
            v = S[x]
            if pos >= b:
                out[pos - b] = v
            pos += 1
        else:
            s = S[x] - 1
            for t in range(PL[x]):
                if pos > e:
                    break
                v += R[s + t]
                if pos >= b:
                    out[pos - b] = v
                pos += 1
        x += 1
    return out


@dataclass
class LegacyRlzsaStore:
    R: np.ndarray
    S: np.ndarray  # copy source in R, or absolute A value for literals
    PL: np.ndarray  # phrase lengths, 0 for literals
    PS: np.ndarray  # start of phrases 1, a+1, 2a+1, ...
    a: int
    n: int

    @classmethod
    def build(cls, parsing: RlzParsing, R, A, a=LEGACY_A):
        """``parsing`` must place a literal in front of every copy."""
        A = np.asarray(A, dtype=np.int64)
        lit = np.asarray(parsing.is_literal, dtype=bool)
        if not lit[0] or np.any(~lit[1:] & ~lit[:-1]):
            raise ValueError("every copy phrase must follow a literal")
        starts = parsing.starts
        S = np.where(lit, A[starts - 1], parsing.src).astype(np.int64)
        PL = np.where(lit, 0, parsing.length).astype(np.int64)
        return cls(R=np.asarray(R, dtype=np.int64), S=S, PL=PL, PS=starts[::a].astype(np.int64),
                   a=int(a), n=int(A.size))

    @property
    def z(self):
        return int(self.S.size)

    def extract(self, b, e):
        if not 1 <= b <= e <= self.n:
            raise IndexError(f"window [{b}, {e}] outside [1, {self.n}]")
        return _legacy_extract(self.S, self.PL, self.PS, self.R, self.a, b, e)

    def extract_with_toehold(self, b, e, ab):
        return self.extract(b, e)

    def size_report(self):
        w = bit_width(self.n)
        return {
            "R": _signed_nbytes(self.R),
            "S": packed_nbytes(self.z, w),
            "PL": packed_nbytes(self.z, w),
            "PS": packed_nbytes(self.PS.size, w),
        }

    @property
    def nbytes(self):
        return sum(self.size_report().values())


def build_store(parsing, R, A, a=DEFAULT_A, legacy=False):
    if legacy:
        return LegacyRlzsaStore.build(parsing, R, A, a)
    return RlzsaStore.build(parsing, R, A, a)


def plain_phrase_scan(parsing, b):
    """Linear-scan reference for :meth:`RlzsaStore.locate_copy_phrase`."""
    ends = np.cumsum(parsing.length)
    x = int(np.searchsorted(ends, b + 1)) + 1
    lit = np.asarray(parsing.is_literal[:x], dtype=bool)
    x_lp = int(lit.sum())
    return x, x - x_lp, x_lp, int(ends[x - 1] - parsing.length[x - 1] + 1)

