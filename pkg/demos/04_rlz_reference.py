# Building an RLZ reference for A^d and parsing against it.

import numpy as np

from csaindex.corpus import repetitive_corpus
from csaindex.rlz import (build_aligned_reference, build_reference, direct_frequencies, rlz_parse,
                          value_frequencies)
from csaindex.suffix import build_bwt_runs, build_suffix_array, densify, differentiate, phi_samples, terminate

T = terminate(densify(repetitive_corpus(base_len=20_000, copies=50))[0])
A = build_suffix_array(T)
runs = build_bwt_runs(T, A)
Ad = differentiate(A)
n = Ad.size

# Value frequencies of A^d come straight from the Phi samples, without
# materializing A^d. There are at most r + 1 distinct values.

freq = value_frequencies(phi_samples(runs))
print(f"n={n} r={runs.r} distinct values={len(freq)}")
print("same as counting directly:", freq.as_dict() == direct_frequencies(Ad).as_dict())

# Random windows scored by how many frequent, not yet covered values they
# bring in, compared against fixed aligned blocks.

ref = build_reference(Ad, freq, r=runs.r, seed=1)
old = build_aligned_reference(Ad, freq, r=runs.r)
print(f"reference: {len(ref)} values in {len(ref.segments)} segments (target {ref.t_R})")

for name, R, lf in (("random windows", ref.R, False), ("aligned blocks", old.R, True)):
    p = rlz_parse(Ad, R, literal_first=lf)
    assert np.array_equal(p.decode(R), Ad)
    print(f"{name:15s} z={p.z:7d}  n/z={n / p.z:6.1f}  literals={int(p.is_literal.sum())}")
