"""Suffix array compressed by LZ-End parsing of its differential form.

The store keeps the parsing of ``A^d`` as plain arrays ``src``/``end``/``ext``
and samples the absolute value of ``A`` at every phrase end. A window
``A[x .. x+l]`` is rebuilt from the sample at the end of the phrase covering
``x+l`` after decoding ``A^d`` right to left.

In run-sample mode the phrase-end samples are dropped and the window is
anchored at the nearest BWT run boundary instead.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from ._bits import bit_width, packed_nbytes
from .lzend import parse
from .suffix import differentiate

DEFAULT_H = 1 << 13


@njit(cache=True)
def _phrase_of(end, pos):
    """0-based index of the phrase containing 1-based ``pos``."""
    lo = 0
    hi = end.size - 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if end[mid] >= pos:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True)
def decode_range(src, end, ext, lo, hi, out):
    """Write ``A^d[lo .. hi]`` (1-based, inclusive) into ``out[0 .. hi-lo]``.

    Segments are resolved right to left with an explicit stack. Each segment
    either emits the extension symbol at a phrase end or moves into the
    copy source, whose end position is strictly smaller. Returns the number of
    segment steps taken.
    """
    cap = 64
    s_lo = np.empty(cap, dtype=np.int64)
    s_hi = np.empty(cap, dtype=np.int64)
    s_out = np.empty(cap, dtype=np.int64)
    s_lo[0] = lo
    s_hi[0] = hi
    s_out[0] = 0
    top = 1
    steps = 0
    while top > 0:
        top -= 1
        a = s_lo[top]
        b = s_hi[top]
        o = s_out[top]
        while a <= b:
            steps += 1
            k = _phrase_of(end, b)
            if b == end[k]:
                out[o + b - a] = ext[k]
                b -= 1
                continue
            start = end[k - 1] + 1 if k > 0 else 1
            c = a if a > start else start
            # copy part [start, end[k]-1] maps onto [.., end[src]-1+1]
            delta = end[src[k] - 1] - (end[k] - 1)
            if c > a:
                if top + 1 >= cap:
                    cap *= 2
                    s_lo = _grow(s_lo, cap)
                    s_hi = _grow(s_hi, cap)
                    s_out = _grow(s_out, cap)
                s_lo[top] = a
                s_hi[top] = c - 1
                s_out[top] = o
                top += 1
            o += c - a
            a = c + delta
            b = b + delta
    return steps


@njit(cache=True)
def _grow(arr, cap):
    out = np.empty(cap, dtype=arr.dtype)
    out[: arr.size] = arr
    return out


@njit(cache=True)
def _extract_sampled(src, end, ext, samples, x, y):
    k = _phrase_of(end, y)
    e = end[k]
    d = np.empty(e - x, dtype=np.int64)
    steps = 0
    if e > x:
        steps = decode_range(src, end, ext, x + 1, e, d)
    out = np.empty(y - x + 1, dtype=np.int64)
    v = samples[k]
    for j in range(e, x - 1, -1):
        if j <= y:
            out[j - x] = v
        if j > x:
            v -= d[j - x - 1]
    return out, steps


@njit(cache=True)
def _extract_anchored(src, end, ext, apos, aval, x, y):
    # nearest known position <= x and >= y
    i = np.searchsorted(apos, x, side="right") - 1
    j = np.searchsorted(apos, y, side="left")
    left_cost = x - apos[i] if i >= 0 else 1 << 62
    right_cost = apos[j] - y if j < apos.size else 1 << 62
    out = np.empty(y - x + 1, dtype=np.int64)
    if left_cost <= right_cost:
        s = apos[i]
        d = np.empty(y - s, dtype=np.int64)
        steps = decode_range(src, end, ext, s + 1, y, d) if y > s else 0
        v = aval[i]
        for p in range(s, y + 1):
            if p > s:
                v += d[p - s - 1]
            if p >= x:
                out[p - x] = v
    else:
        e = apos[j]
        d = np.empty(e - x, dtype=np.int64)
        steps = decode_range(src, end, ext, x + 1, e, d) if e > x else 0
        v = aval[j]
        for p in range(e, x - 1, -1):
            if p <= y:
                out[p - x] = v
            if p > x:
                v -= d[p - x - 1]
    return out, steps


@dataclass
class LzEndSaStore:
    src: np.ndarray  # 1-based phrase numbers, 0 = empty phrase
    end: np.ndarray  # 1-based inclusive phrase ends
    ext: np.ndarray
    samples: np.ndarray  # A at each phrase end; None in run-sample mode
    n: int
    h: int
    anchor_pos: np.ndarray = None  # run-sample mode: sorted known positions
    anchor_val: np.ndarray = None

    @classmethod
    def build(cls, A, h=DEFAULT_H, runs=None, parsing=None):
        """Parse ``A^d`` with cap ``h``.

        Passing ``runs`` (a :class:`BwtRuns`) selects run-sample mode.
        """
        A = np.asarray(A, dtype=np.int64)
        if parsing is None:
            parsing = parse(differentiate(A), h)
        end = parsing.ends.astype(np.int64)
        store = cls(src=parsing.source.astype(np.int64), end=end, ext=parsing.ext.astype(np.int64),
                    samples=None, n=int(A.size), h=h)
        if runs is None:
            store.samples = A[end - 1].copy()
        else:
            pos = np.concatenate([runs.run_starts, runs.run_ends]).astype(np.int64)
            val = np.concatenate([runs.sa_at_run_start, runs.sa_at_run_end]).astype(np.int64)
            pos, idx = np.unique(pos, return_index=True)
            store.anchor_pos = pos
            store.anchor_val = val[idx]
        return store

    @property
    def z(self):
        return int(self.end.size)

    @property
    def run_sample_mode(self):
        return self.samples is None

    def lengths(self):
        return np.diff(self.end, prepend=0)

    def locate_phrase(self, pos):
        """Smallest 1-based phrase index ``i`` with ``end[i] >= pos``."""
        if not 1 <= pos <= self.n:
            raise IndexError(f"position {pos} outside [1, {self.n}]")
        return int(np.searchsorted(self.end, pos, side="left")) + 1

    def extract(self, x, ell, stats=False):
        """``A[x .. x+ell]`` as an int64 array (1-based ``x``)."""
        y = x + ell
        if x < 1 or ell < 0 or y > self.n:
            raise IndexError(f"window [{x}, {y}] outside [1, {self.n}]")
        if self.samples is not None:
            out, steps = _extract_sampled(self.src, self.end, self.ext, self.samples, x, y)
        else:
            out, steps = _extract_anchored(self.src, self.end, self.ext, self.anchor_pos, self.anchor_val, x, y)
        return (out, int(steps)) if stats else out

    def decode_differential(self, lo=1, hi=None):
        hi = self.n if hi is None else hi
        out = np.empty(hi - lo + 1, dtype=np.int64)
        decode_range(self.src, self.end, self.ext, lo, hi, out)
        return out

    def size_report(self):
        """Packed byte size of each stored array."""
        z, n = self.z, self.n
        rep = {
            "src": packed_nbytes(z, bit_width(z)),
            "end": packed_nbytes(z, bit_width(n)),
            "ext": 8 * z,
        }
        if self.samples is not None:
            rep["samples"] = packed_nbytes(z, bit_width(n))
        else:
            rep["anchors"] = 2 * packed_nbytes(self.anchor_pos.size, bit_width(n))
        return rep

    @property
    def nbytes(self):
        return sum(self.size_report().values())
