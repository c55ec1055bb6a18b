"""
K-means on a larger corpus and per-cluster histograms
=====================================================

K-means alternates nearest-average assignment and re-averaging. Runs depend
on the initial pick of representatives, so several restarts are made and the
one of lowest total inertia is kept.
"""
from tseqclust import ClusterParams, DropDtwParams, Weights, confusion_and_kappa, generate, histogram_export, kmeans_cluster

ds = generate("extra", seed=1, n_per_model=60)
params = ClusterParams(k=3, metric=DropDtwParams(Weights(p_e=1.0, p_t=1 / 9), delta=4.0), restarts=5, rng_seed=0)
res = kmeans_cluster(ds.sequences, ds.alphabet, params)

print("total inertia per round:", [round(v, 1) for v in res.inertia_trace])
print("cluster sizes:", res.sizes())
print("kappa against the three models:", confusion_and_kappa(ds.labels, res.assignments)[1])

# %%
# Event counts per cluster, type and 5-day bin (first rows of each cluster).
clusters = {c: [s for s in ds.sequences if res.assignments[s.id] == c] for c in range(res.k)}
rows = histogram_export(clusters, ds.alphabet, bin_width=5)
for c in range(res.k):
    print(f"\ncluster {c}:")
    for _, typ, start, n in [r for r in rows if r[0] == c][:6]:
        print(f"  [{start:7.1f}, {start + 5:7.1f})  {typ}  {n}")
