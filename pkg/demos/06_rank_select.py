# Rank/select building blocks.

import numpy as np

from csaindex.rank_select import BitVectorRS, LargeAlphabetRS, SmallAlphabetRS, SparseSet

# Small alphabets: successor and predecessor occurrence queries.

text = "abracadabra"
alph = sorted(set(text))
seq = np.array([alph.index(c) for c in text])
rs = SmallAlphabetRS(seq)
b = alph.index("b")
print("next b at or after 1:", rs.succ_occ(b, 1), "| after 3:", rs.succ_occ(b, 3), "| after 10:", rs.succ_occ(b, 10))
print("last b at or before 8:", rs.pred_occ(b, 8))

# Bit vectors and Elias-Fano sets.

bits = np.random.default_rng(0).random(1000) < 0.1
bv = BitVectorRS(bits)
ef = SparseSet(np.flatnonzero(bits) + 1, 1000)
print("ones:", bv.ones, "rank1(500):", bv.rank1(500), "sparse rank(500):", ef.rank(500))
print("5th one:", bv.select1(5), ef.select(5))

# Large alphabets pick a rank strategy per symbol by its number of
# occurrences: linear scan, binary search or an Elias-Fano set.

rng = np.random.default_rng(1)
seq = np.concatenate([rng.integers(0, 10**5, 5000), np.full(10, 7), np.full(100, 8), np.full(1000, 9)])
rng.shuffle(seq)
big = LargeAlphabetRS(seq, 10**5)
for c in (7, 8, 9):
    print(f"symbol {c}: {big.occurrences(c):5d} occurrences, rank at n/2 = {big.rank(c, seq.size // 2)}")
