import numpy as np
import pytest
from hypothesis import given, strategies as st

from csaindex.suffix import (RangeMin, accumulate, build_bwt_runs, build_lzend_context, build_suffix_array,
                             densify, differentiate, lcp_array, naive_lcp, phi_inverse_samples, phi_samples,
                             phi_table, terminate)

from conftest import naive_sa


def enc(s):
    return densify(s.encode())[0]


@pytest.mark.parametrize("text,expected", [("banana", [6, 4, 2, 1, 5, 3]), ("a", [1]), ("ba", [2, 1])])
def test_suffix_array_examples(text, expected):
    assert build_suffix_array(enc(text)).tolist() == expected


def test_suffix_array_rejects_empty():
    with pytest.raises(ValueError):
        build_suffix_array(np.zeros(0, dtype=np.int64))


def test_densify_rejects_zero_bytes():
    with pytest.raises(ValueError):
        densify(b"ab\x00c")


def test_suffix_array_matches_sorting_up_to_2000(rng):
    for n in list(range(1, 40)) + [255, 256, 1000, 2000]:
        for sigma in (1, 2, 4, 50):
            s = rng.integers(1, sigma + 1, n)
            assert np.array_equal(build_suffix_array(s), naive_sa(s))


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=120))
def test_suffix_array_signed_values(xs):
    s = np.array(xs, dtype=np.int64)
    assert np.array_equal(build_suffix_array(s), naive_sa(s))


def test_lcp_matches_naive(rng):
    for n in (1, 2, 17, 300, 2000):
        s = rng.integers(1, 3, n)
        A = build_suffix_array(s)
        assert np.array_equal(lcp_array(s, A), naive_lcp(s, A))


def test_rmq_exhaustive_512(rng):
    for n in (1, 15, 16, 17, 100, 512):
        h = rng.integers(0, 50, n)
        rmq = RangeMin(h)
        for i in range(n):
            m = h[i]
            for j in range(i, n):
                m = min(m, h[j])
                assert rmq.min(i, j) == m


def test_lzend_context_examples():
    ctx = build_lzend_context(enc("ab"))
    # reverse "ba" has suffix array [2, 1]; Ainv_rev[n - A_rev[k] - 1] = k
    assert ctx.Ainv_rev.tolist() == [0, 1]
    assert build_lzend_context(enc("a")).Ainv_rev.tolist() == [0]
    assert build_lzend_context(enc("aaa")).H.tolist() == [0, 1, 2]


def test_lzend_context_identity(rng):
    for _ in range(50):
        s = rng.integers(1, 4, int(rng.integers(1, 200)))
        ctx = build_lzend_context(s)
        n = s.size
        for k in range(n):
            assert ctx.Ainv_rev[n - ctx.A[k] - 1] == k


@pytest.mark.parametrize("text,L,r", [("banana", "nnbaaa", 3), ("aaaa", "aaaa", 1), ("ab", "ba", 2)])
def test_bwt_examples(text, L, r):
    s, alph = densify(text.encode())
    runs = build_bwt_runs(s, build_suffix_array(s))
    assert bytes(alph[runs.L - 1]).decode() == L
    assert runs.r == r
    assert runs.run_starts[0] == 1 and runs.run_lengths.sum() == len(text)


def test_run_samples_agree_with_A(rng):
    for _ in range(50):
        s = terminate(rng.integers(1, 4, int(rng.integers(1, 300))))
        A = build_suffix_array(s)
        runs = build_bwt_runs(s, A)
        assert np.array_equal(runs.sa_at_run_start, A[runs.run_starts - 1])
        assert np.array_equal(runs.sa_at_run_end, A[runs.run_ends - 1])
        assert np.all(runs.L[1:][np.diff(runs.L) != 0].size == runs.r - 1)


def test_differentiate_examples(rng):
    assert differentiate([6, 4, 2, 1, 5, 3]).tolist() == [6, -2, -2, -1, 4, -2]
    assert differentiate([1]).tolist() == [1]
    for _ in range(100):
        A = rng.permutation(int(rng.integers(1, 100))) + 1
        assert np.array_equal(accumulate(differentiate(A)), A)


def test_phi_samples_single_symbol():
    s = terminate([])  # only the terminator
    runs = build_bwt_runs(s, build_suffix_array(s))
    phi = phi_samples(runs)
    assert phi.u.tolist() == [1, 2]


def test_phi_banana():
    s = terminate(enc("banana"))
    A = build_suffix_array(s)
    phi = phi_samples(build_bwt_runs(s, A))
    table = phi_table(A)
    assert all(phi.phi(v) == table[v - 1] for v in range(1, A.size + 1))


def test_phi_and_inverse_match_tables(rng):
    for _ in range(100):
        s = terminate(rng.integers(1, int(rng.integers(2, 6)), int(rng.integers(1, 400))))
        A = build_suffix_array(s)
        runs = build_bwt_runs(s, A)
        phi, inv = phi_samples(runs), phi_inverse_samples(runs)
        table = phi_table(A)
        Ainv = np.empty_like(A)
        Ainv[A - 1] = np.arange(A.size)
        for v in range(1, A.size + 1):
            assert phi.phi(v) == table[v - 1]
            assert inv.phi(v) == A[(Ainv[v - 1] + 1) % A.size]
