"""Self-index over a run-length BWT with a pluggable compressed suffix array.

Counting is backward search over the run heads ``L'``. A step needs the first
run of ``c`` at or after the run holding ``b`` and the last one at or before
the run holding ``e``, which the small-alphabet successor/predecessor
structure answers directly. The value ``A[b]`` (the toehold) is carried along
using the SA samples at run starts.

Locating then either walks ``Phi^-1`` from the toehold or decodes
``A[b .. e]`` from the attached store. The text gets a unique smallest
terminator internally; reported positions refer to the original text.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .lzend_sa import DEFAULT_H, LzEndSaStore
from .rank_select import SmallAlphabetRS, small_pred, small_succ
from .rlz import build_aligned_reference, build_reference, rlz_parse, value_frequencies
from .rlzsa import DEFAULT_A, LEGACY_A, LegacyRlzsaStore, RlzsaStore
from .suffix import (build_bwt_runs, build_suffix_array, densify, differentiate, phi_samples, rank_values,
                     terminate)

SCHEMES = ("phi", "lzend", "rlzsa", "rlzsa-legacy")


@dataclass
class SaInterval:
    b: int
    e: int
    toehold: int  # A[b]
    depth: int = 0

    @property
    def empty(self):
        return self.b > self.e

    def __len__(self):
        return max(0, self.e - self.b + 1)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _run_of(run_starts, j):
    """0-based run index holding 1-based row ``j``."""
    return np.searchsorted(run_starts, j, side="right") - 1


@njit(cache=True)
def _step(heads, run_starts, run_len, lf_base, sa_start, X, Y, B, b, e, t, c):
    """One backward step; returns ``(b', e', toehold')`` with ``b' > e'`` when empty."""
    xs = _run_of(run_starts, b)
    xe = _run_of(run_starts, e)
    if heads[xs] == c:
        nb = lf_base[xs] + (b - run_starts[xs])
        nt = t - 1
    else:
        y = small_succ(heads, X, B, c, xs + 2)[0] - 1
        if y > xe:
            return 1, 0, 0
        nb = lf_base[y]
        nt = sa_start[y] - 1
    if heads[xe] == c:
        ne = lf_base[xe] + (e - run_starts[xe])
    else:
        y = small_pred(heads, Y, B, c, xe)[0] - 1
        ne = lf_base[y] + run_len[y] - 1
    return nb, ne, nt


@njit(cache=True)
def _search(P, heads, run_starts, run_len, lf_base, sa_start, X, Y, B, n):
    b = 1
    e = n
    t = n  # the terminator suffix is the smallest
    for k in range(P.size - 1, -1, -1):
        c = P[k]
        if c < 1:
            return 1, 0, 0
        b, e, t = _step(heads, run_starts, run_len, lf_base, sa_start, X, Y, B, b, e, t, c)
        if b > e:
            return 1, 0, 0
    return b, e, t


@njit(cache=True)
def _phi_walk(u, phi_u, start, count):
    """``count`` values starting at ``start``, each the ``Phi``-sample image of the last."""
    out = np.empty(count, dtype=np.int64)
    v = start
    for k in range(count):
        out[k] = v
        if k + 1 < count:
            x = np.searchsorted(u, v, side="right") - 1
            v = phi_u[x] + (v - u[x])
    return out


# ---------------------------------------------------------------------------
# index
# ---------------------------------------------------------------------------


@dataclass
class SelfIndex:
    scheme: str
    n: int  # length of the original text
    alphabet: np.ndarray  # original symbol values, symbol c is alphabet[c-1]
    byte_mode: bool
    run_starts: np.ndarray
    run_heads: np.ndarray
    sa_at_run_start: np.ndarray
    sa_at_run_end: np.ndarray
    store: object = None
    params: dict = field(default_factory=dict)
    build_seconds: float = field(default=0.0, compare=False)

    def __post_init__(self):
        N = self.n + 1
        self.sigma = int(self.alphabet.size)
        self.run_len = np.diff(np.append(self.run_starts, N + 1)).astype(np.int64)
        counts = np.bincount(self.run_heads, weights=self.run_len, minlength=self.sigma + 1).astype(np.int64)
        self.C = np.zeros(self.sigma + 2, dtype=np.int64)
        np.cumsum(counts, out=self.C[1:])
        # LF of the first row of each run: C[c] + (c's in earlier runs) + 1
        before = np.zeros(self.run_heads.size, dtype=np.int64)
        seen = np.zeros(self.sigma + 1, dtype=np.int64)
        _prefix_counts(self.run_heads, self.run_len, seen, before)
        self.lf_base = self.C[self.run_heads] + before + 1
        self.rs = SmallAlphabetRS(self.run_heads, sigma=self.sigma + 1)
        # Phi^-1 samples at run ends: the row after a run end is a run start
        nxt = np.roll(self.sa_at_run_start, -1)
        order = np.argsort(self.sa_at_run_end, kind="stable")
        self.phi_inv_u = np.append(self.sa_at_run_end[order], N + 1).astype(np.int64)
        self.phi_inv_v = nxt[order].astype(np.int64)
        prev = np.roll(self.sa_at_run_end, 1)
        order = np.argsort(self.sa_at_run_start, kind="stable")
        self.phi_u = np.append(self.sa_at_run_start[order], N + 1).astype(np.int64)
        self.phi_v = prev[order].astype(np.int64)

    # -- properties --------------------------------------------------------
    @property
    def r(self):
        return int(self.run_starts.size)

    @property
    def n_total(self):
        """Length including the terminator."""
        return self.n + 1

    def _args(self):
        return (self.run_heads, self.run_starts, self.run_len, self.lf_base, self.sa_at_run_start,
                self.rs.X, self.rs.Y, self.rs.B)

    # -- pattern handling --------------------------------------------------
    def encode_pattern(self, pattern):
        """Pattern as symbols in ``[1, sigma]``; ``-1`` marks symbols not in the text."""
        if isinstance(pattern, (bytes, bytearray, memoryview, str)):
            if isinstance(pattern, str):
                pattern = pattern.encode("latin-1")
            vals = np.frombuffer(bytes(pattern), dtype=np.uint8).astype(np.int64)
        else:
            vals = np.asarray(pattern, dtype=np.int64).reshape(-1)
        alph = self.alphabet.astype(np.int64)
        pos = np.minimum(np.searchsorted(alph, vals), alph.size - 1)
        return np.where(alph[pos] == vals, pos + 1, -1).astype(np.int64)

    # -- queries -----------------------------------------------------------
    def full_interval(self):
        return SaInterval(1, self.n_total, self.n_total, 0)

    def backward_extend(self, iv, c):
        """Interval of ``c`` prepended to the pattern of ``iv``; ``c`` is an encoded symbol."""
        if iv.empty or c < 1 or c > self.sigma:
            return SaInterval(1, 0, 0, iv.depth + 1)
        b, e, t = _step(*self._args(), iv.b, iv.e, iv.toehold, c)
        if b > e:
            return SaInterval(1, 0, 0, iv.depth + 1)
        return SaInterval(int(b), int(e), int(t), iv.depth + 1)

    def interval(self, pattern):
        P = self.encode_pattern(pattern)
        if P.size == 0:
            raise ValueError("empty pattern")
        b, e, t = _search(P, *self._args(), self.n_total)
        return SaInterval(int(b), int(e), int(t), int(P.size))

    def count(self, pattern):
        return len(self.interval(pattern))

    def locate(self, pattern, mode=None):
        """Sorted 1-based occurrence positions.

        ``mode`` overrides how the suffix array range is decoded: ``"phi"``
        walks ``Phi^-1`` from the toehold, ``"store"`` uses the attached store.
        """
        iv = self.interval(pattern)
        if iv.empty:
            return np.zeros(0, dtype=np.int64)
        return np.sort(self.locate_interval(iv, mode))

    def locate_interval(self, iv, mode=None):
        """``A[b .. e]`` for a nonempty interval, unsorted."""
        mode = mode or ("phi" if self.scheme == "phi" else "store")
        if mode == "phi":
            return _phi_walk(self.phi_inv_u, self.phi_inv_v, iv.toehold, len(iv))
        if self.store is None:
            raise ValueError(f"scheme {self.scheme!r} has no suffix array store")
        if self.scheme == "lzend":
            return self.store.extract(iv.b, iv.e - iv.b)
        if self.scheme == "rlzsa":
            return self.store.extract_with_toehold(iv.b, iv.e, iv.toehold)
        return self.store.extract(iv.b, iv.e)

    def phi_step(self, v):
        """``Phi(v)``: the suffix array value preceding ``v``, cyclically."""
        if not 1 <= v <= self.n_total:
            raise IndexError(f"{v} outside [1, {self.n_total}]")
        x = int(np.searchsorted(self.phi_u, v, side="right")) - 1
        return int(self.phi_v[x] + (v - self.phi_u[x]))

    def phi_inverse_step(self, v):
        if not 1 <= v <= self.n_total:
            raise IndexError(f"{v} outside [1, {self.n_total}]")
        x = int(np.searchsorted(self.phi_inv_u, v, side="right")) - 1
        return int(self.phi_inv_v[x] + (v - self.phi_inv_u[x]))

    # -- bookkeeping ---------------------------------------------------------
    def size_report(self):
        w = max(1, int(self.n_total).bit_length())
        rep = {
            "run_heads": (self.r * max(1, int(self.sigma).bit_length()) + 7) // 8,
            "run_starts": (self.r * w + 7) // 8,
            "sa_samples": 2 * ((self.r * w + 7) // 8),
            "rank_select": self.rs.nbytes(),
        }
        if self.store is not None:
            rep.update({f"store.{k}": v for k, v in self.store.size_report().items()})
        return rep

    @property
    def nbytes(self):
        return sum(self.size_report().values())

    def summary(self):
        out = {"scheme": self.scheme, "n": self.n, "sigma": self.sigma, "r": self.r, "bytes": self.nbytes}
        st = self.store
        if isinstance(st, LzEndSaStore):
            out.update(z_end=st.z, h=st.h, run_sample_mode=st.run_sample_mode)
        elif isinstance(st, RlzsaStore):
            out.update(z=st.z, z_l=st.z_l, z_c=st.z_c, ref_size=int(st.R.size), a=st.a)
        elif isinstance(st, LegacyRlzsaStore):
            out.update(z=st.z, ref_size=int(st.R.size), a=st.a)
        out.update(params=self.params)
        return out


@njit(cache=True)
def _prefix_counts(heads, run_len, seen, before):
    for x in range(heads.size):
        c = heads[x]
        before[x] = seen[c]
        seen[c] += run_len[x]


def _encode_text(text):
    if isinstance(text, (bytes, bytearray, memoryview, str)):
        if isinstance(text, str):
            text = text.encode("latin-1")
        seq, alphabet = densify(text)
        return seq, alphabet, True
    vals = np.asarray(text, dtype=np.int64).reshape(-1)
    if vals.size == 0:
        raise ValueError("empty text")
    dense, alphabet = rank_values(vals)
    return dense + 1, alphabet, False


def build_index(text, scheme="rlzsa", h=DEFAULT_H, a=None, ref_size=None, seed=0, s=None, M=None,
                run_sample_mode=False):
    """Build a :class:`SelfIndex` over ``text`` (bytes, or an integer array).

    ``h`` is the LZ-End phrase cap (``None`` = unbounded), ``a`` the copy-start
    sampling rate, ``ref_size`` the reference target length for RLZ schemes.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    t0 = time.perf_counter()
    seq, alphabet, byte_mode = _encode_text(text)
    T = terminate(seq)
    A = build_suffix_array(T)
    runs = build_bwt_runs(T, A)
    params = {"seed": int(seed)}
    store = None
    if scheme == "lzend":
        store = LzEndSaStore.build(A, h, runs=runs if run_sample_mode else None)
        params.update(h=h, run_sample_mode=bool(run_sample_mode))
    elif scheme in ("rlzsa", "rlzsa-legacy"):
        Ad = differentiate(A)
        freq = value_frequencies(phi_samples(runs))
        kw = {} if s is None else {"s": int(s)}
        if scheme == "rlzsa":
            ref = build_reference(Ad, freq, t_R=ref_size, M=M, seed=seed, r=runs.r, **kw)
            a = DEFAULT_A if a is None else int(a)
            store = RlzsaStore.build(rlz_parse(Ad, ref.R), ref.R, A, a)
        else:
            ref = build_aligned_reference(Ad, freq, t_R=ref_size, r=runs.r, **kw)
            a = LEGACY_A if a is None else int(a)
            store = LegacyRlzsaStore.build(rlz_parse(Ad, ref.R, literal_first=True), ref.R, A, a)
        params.update(a=a, ref_size=int(ref.R.size), t_R=int(ref.t_R), s=kw.get("s", 3072))
        if M is not None:
            params["M"] = int(M)
    ix = SelfIndex(
        scheme=scheme, n=int(seq.size), alphabet=alphabet, byte_mode=byte_mode,
        run_starts=runs.run_starts.astype(np.int64), run_heads=runs.run_heads.astype(np.int64),
        sa_at_run_start=runs.sa_at_run_start.astype(np.int64), sa_at_run_end=runs.sa_at_run_end.astype(np.int64),
        store=store, params=params,
    )
    ix.build_seconds = time.perf_counter() - t0
    return ix


def naive_occurrences(text, pattern):
    """1-based start positions of ``pattern`` in ``text`` by direct scan."""
    text = bytes(text) if not isinstance(text, np.ndarray) else text
    if isinstance(text, bytes):
        pattern = bytes(pattern)
        out = []
        i = text.find(pattern)
        while i >= 0:
            out.append(i + 1)
            i = text.find(pattern, i + 1)
        return np.array(out, dtype=np.int64)
    pattern = np.asarray(pattern, dtype=np.int64)
    m = pattern.size
    if m > text.size:
        return np.zeros(0, dtype=np.int64)
    win = np.lib.stride_tricks.sliding_window_view(text, m)
    return np.flatnonzero((win == pattern).all(axis=1)).astype(np.int64) + 1
