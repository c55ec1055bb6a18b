"""
Summarizing a set of timed sequences
====================================

The average of a set of timed sequences is a *probabilistic* timed sequence:
every event carries a distribution over event types. It is refined by
aligning every sequence to the current average and replacing each average
event by the mean of the events aligned to it.
"""
from tseqclust import DropDtwParams, TsrConfig, Weights, generate, tsr_average

ds = generate("missing", seed=0)
model3 = [s for s in ds.sequences if ds.labels[s.id] == 3]

params = DropDtwParams(Weights(p_e=1.0, p_t=1 / 9), delta=4.0)
res = tsr_average(model3, ds.alphabet, params, TsrConfig(maxit=10, rng_seed=0))

# %%
# The inertia (mean cost to the sequences) never increases.
print("inertia per iteration:", [round(v, 3) for v in res.inertia_trace])
print("stopped because:", res.stop_reason)

# %%
# Template: D@0, E@2, E@3, F@5, D@7, F@9, A@13 (dates jittered by N(0, 1)).
print("\naverage sequence:")
for dist, t in zip(res.center.dists, res.center.times):
    top = sorted(((p, ds.alphabet.symbol(k)) for k, p in enumerate(dist) if p > 0), reverse=True)
    print(f"  t={t:6.2f}  " + ", ".join(f"{s}:{p:.2f}" for p, s in top))
