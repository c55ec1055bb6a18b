"""
Why a drop cost helps clustering
================================

Model 3 is model 1 plus one aberrant event 1500 days later. With a finite
drop cost the aberrant event is simply left out and models 1 and 3 end up in
the same cluster. Without drops the aberrant event must be paired with
something, which dominates every distance involving model 3.
"""
import math

from tseqclust import ClusterParams, DropDtwParams, Weights, confusion_and_kappa, generate, hac_cluster, merge_labels

ds = generate("extra", seed=0)
truth = merge_labels(ds.labels, {3: 1})

for delta in (4.0, math.inf):
    params = ClusterParams(k=2, metric=DropDtwParams(Weights(p_e=1.0, p_t=1 / 9), delta=delta))
    res = hac_cluster(ds.sequences, ds.alphabet, params)
    cm, kappa = confusion_and_kappa(truth, res.assignments)
    print(f"delta = {delta}: kappa = {kappa:+.2f}")
    for cls, row in zip(cm.classes, cm.counts.tolist()):
        print(f"  true {cls}: {row}")
