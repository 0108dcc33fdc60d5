# The RLZSA store: phrase types, literals, sources, copy lengths and sampled
# copy starts, with extraction anchored either at a toehold or at a sample.

import numpy as np

from csaindex.corpus import repetitive_corpus
from csaindex.rlz import build_reference, rlz_parse
from csaindex.rlzsa import build_store
from csaindex.suffix import build_bwt_runs, build_suffix_array, densify, differentiate, terminate

T = terminate(densify(repetitive_corpus(base_len=20_000, copies=50))[0])
A = build_suffix_array(T)
runs = build_bwt_runs(T, A)
Ad = differentiate(A)
ref = build_reference(Ad, r=runs.r)
store = build_store(rlz_parse(Ad, ref.R), ref.R, A, a=4)

print(f"phrases: {store.z} ({store.z_c} copies, {store.z_l} literals)")
for k, v in store.size_report().items():
    print(f"  {k:4s} {v:9d} bytes")
print(f"total {store.nbytes / (8 * A.size):.1%} of a plain 64-bit array")

# Finding the phrase of a position walks at most a copy phrases from a sample.

(x, x_cp, x_lp, p), steps = store.locate_copy_phrase(123_456, stats=True)
print(f"position 123457 is in phrase {x} starting at {p}, found after {steps} steps")

# With a toehold A[b] (which backward search provides for free) a window is
# decoded by summing differences forward.

b, e = 500_000, 500_020
print(store.extract_with_toehold(b, e, A[b - 1]).tolist() == A[b - 1 : e].tolist())
print(store.extract(b, e).tolist() == A[b - 1 : e].tolist())
