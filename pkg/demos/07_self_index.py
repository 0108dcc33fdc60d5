# End to end: build every scheme over a repetitive text, query, save and load.

import os
import tempfile
import time

import numpy as np

from csaindex import container
from csaindex.corpus import repetitive_corpus
from csaindex.index import SCHEMES, build_index, naive_occurrences
from csaindex.patterns import generate

text = repetitive_corpus(base_len=20_000, copies=50)
indexes = {s: build_index(text, s) for s in SCHEMES}
for s, ix in indexes.items():
    print(f"{s:13s} built in {ix.build_seconds:5.2f}s, {8 * ix.nbytes / ix.n:.3f} bits/symbol")

pats, m = generate(text, 200, 5, "frequent", seed=3, index=indexes["phi"])
print(f"{len(pats)} frequent patterns of length {m}")

for s, ix in indexes.items():
    t = time.perf_counter()
    occ = sum(ix.locate(p).size for p in pats)
    print(f"{s:13s} {occ} occurrences in {1000 * (time.perf_counter() - t):.0f} ms")

p = pats[0]
assert all(np.array_equal(ix.locate(p), naive_occurrences(text, p)) for ix in indexes.values())

# The container is a flat binary file; loading rebuilds the derived tables.

with tempfile.TemporaryDirectory() as d:
    path = os.path.join(d, "x.csai")
    size = container.save(indexes["rlzsa"], path)
    back = container.load(path, "rlzsa")
    print(f"saved {size} bytes; same answers after load: {np.array_equal(back.locate(p), indexes['rlzsa'].locate(p))}")
