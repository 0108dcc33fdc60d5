from hypothesis import given, strategies as st

from csaindex.corpus import random_text, repetitive_corpus
from csaindex.index import naive_occurrences
from csaindex.patterns import escape, generate, read_patterns, unescape, write_patterns


@given(st.binary(max_size=50))
def test_escape_round_trip(b):
    s = escape(b)
    assert "\n" not in s and " " not in s
    assert unescape(s) == b


def test_medium_regime_counts():
    text = repetitive_corpus(base_len=500, copies=16, edit_rate=0.01)
    pats, m = generate(text, 30, 8, "medium", seed=1)
    assert m == 8 and len(pats) == 30
    assert all(m / 4 <= naive_occurrences(text, p).size <= 4 * m for p in pats)


def test_frequent_regime_shrinks_length():
    text = random_text(20000, sigma=4, seed=3)
    pats, m = generate(text, 10, 12, "frequent", seed=2)
    assert m < 12 and len(pats) == 10
    assert all(naive_occurrences(text, p).size >= 100 * m for p in pats)


def test_file_format(tmp_path):
    path = tmp_path / "x.pat"
    pats = [b"ab c", b"\\x", b"\x01\xff"]
    write_patterns(path, pats, 4, 9, "frequent")
    assert path.read_text().splitlines()[0] == "# count=3 length=4 seed=9 regime=frequent"
    back, head = read_patterns(path)
    assert back == pats and head == {"count": "3", "length": "4", "seed": "9", "regime": "frequent"}
