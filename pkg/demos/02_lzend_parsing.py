# LZ-End parsing: each phrase copies a suffix that ends exactly at an earlier
# phrase boundary, then adds one literal symbol.

import time

import numpy as np

from csaindex.corpus import fibonacci_word, repetitive_corpus
from csaindex.lzend import decode, naive_parse_oracle, parse

# A tiny input first. Phrases are (source phrase, copy length, new symbol).

s = np.frombuffer(b"abababbabb", dtype=np.uint8).astype(np.int64)
p = parse(s)
print("phrases :", [(ph.source, ph.copy_len, chr(ph.ext)) for ph in p.phrases])
print("ends    :", p.ends.tolist())
print("oracle  :", naive_parse_oracle(s).ends.tolist())

# Fibonacci words are the classic worst case for many parsers but compress
# to a logarithmic number of LZ-End phrases.

for n in (100, 1000, 10000):
    print(f"fibonacci n={n:6d}  z={parse(fibonacci_word(n)).z}")

# The cap h bounds every phrase length, which bounds extraction time. It can
# only add phrases.

s = np.frombuffer(repetitive_corpus(base_len=5000, copies=40), dtype=np.uint8).astype(np.int64)
for h in (None, 4096, 256, 16):
    t = time.perf_counter()
    q = parse(s, h)
    assert np.array_equal(decode(q), s)
    print(f"h={str(h):5s} z={q.z:6d}  longest={q.lengths.max():6d}  {time.perf_counter() - t:.2f}s")
