# Suffix array, BWT runs and the Phi function on a toy text.

# Every index in this package works on a text with a terminator (symbol 0)
# appended, so that all suffixes are distinct and the BWT is well defined.

import numpy as np

from csaindex.suffix import (build_bwt_runs, build_suffix_array, densify, differentiate, phi_samples, phi_table,
                             terminate)

text = b"abracadabra"
seq, alphabet = densify(text)
T = terminate(seq)
A = build_suffix_array(T)
print("text    :", text.decode() + "$")
print("A       :", A.tolist())

# The BWT column L[i] = T[A[i] - 1] is stored as runs. r, the number of runs,
# is the size measure everything else is tuned against.

runs = build_bwt_runs(T, A)
sym = np.concatenate([[ord("$")], alphabet])
print("L       :", bytes(sym[runs.L].astype(np.uint8)).decode())
print("r       :", runs.r, "runs starting at rows", runs.run_starts.tolist())

# The differential suffix array A^d keeps A[1] and then consecutive
# differences. On repetitive texts it repeats long stretches, which is what
# the LZ-End and RLZ compressors exploit.

print("A^d     :", differentiate(A).tolist())

# Phi(v) is the suffix array value just before v. It is piecewise linear with
# breakpoints at run starts, so 2r samples are enough to evaluate it anywhere.

phi = phi_samples(runs)
table = phi_table(A)
print("Phi     :", [phi.phi(v) for v in range(1, A.size + 1)])
print("matches the full table:", all(phi.phi(v) == table[v - 1] for v in range(1, A.size + 1)))
