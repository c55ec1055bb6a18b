"""
Aligning three short care pathways
==================================

Three patients, four kinds of events: surgery (S), radiotherapy (R),
consultation (C) and physiotherapy (P). Dates are in days.

We compare the pathways with drop-DTW: events may be paired many-to-one,
pairs further apart than ``tau`` days are forbidden, and any event may be
left out at a fixed cost ``delta``.
"""
import numpy as np

from tseqclust import Alphabet, DropDtwParams, TimedSequence, Weights, align, cost_matrix, embed, pairwise_distances

ab = Alphabet(("S", "R", "C", "P"))
pathways = {
    "s1": [("S", 1), ("C", 2), ("R", 4.5)],
    "s2": [("C", 0), ("C", 2), ("P", 3), ("S", 4), ("R", 5)],
    "s3": [("S", 0), ("C", 1), ("C", 2), ("R", 4)],
}
seqs = [TimedSequence.from_pairs(k, v, ab) for k, v in pathways.items()]
s1, s2, s3 = (embed(s, ab) for s in seqs)

# %%
# A different event type costs sqrt(2) (one-hot vectors), three days of
# delay cost 1 with ``p_t = 1/9``. Leaving an event out costs 1.
params = DropDtwParams(Weights(p_e=1.0, p_t=1 / 9), delta=1.0, tau=3.5)

np.set_printoptions(precision=2, suppress=True)
print("event distances s1 x s2:")
print(cost_matrix(s1, s2, params.weights))

# %%
# The optimal alignment leaves out the physiotherapy session and the late
# surgery of s2: pairing them would cost more than dropping them.
cost, al = align(s1, s2, params)
print(f"\ncost(s1, s2) = {cost:.4f}")
for i, j in al.pairs:
    print(f"  {pathways['s1'][i]} ~ {pathways['s2'][j]}")
dropped = [pathways["s2"][j] for j in np.flatnonzero(al.col_drops)]
print("  dropped from s2:", dropped)

# %%
# s1 and s3 are much closer than s1 and s2.
print("\npairwise distances:")
print(pairwise_distances(seqs, ab, params))
