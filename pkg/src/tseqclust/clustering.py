"""
Clustering of timed sequences with drop-DTW and TSR averages.

Two algorithms share the same representation of a cluster, its TSR average:

* :func:`hac_cluster` -- agglomerative clustering that repeatedly merges the
  two clusters whose representatives are closest and re-averages the merged
  members;
* :func:`kmeans_cluster` -- K-means alternating nearest-representative
  assignment and TSR update.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .averaging import TsrConfig, tsr_average
from .core import Alphabet, ProbTimedSequence, TimedSequence, embed
from .metric import DropDtwParams, drop_dtw_cost

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClusterParams:
    k: int
    metric: DropDtwParams = DropDtwParams()
    tsr: TsrConfig = TsrConfig()
    kmeans_max_rounds: int = 20
    restarts: int = 1
    rng_seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.kmeans_max_rounds < 1 or self.restarts < 1 or self.threads < 1:
            raise ValueError("kmeans_max_rounds, restarts and threads must be >= 1")


@dataclass
class Clustering:
    """Result of a clustering run.

    ``total_inertia`` is the sum over all sequences of the drop-DTW cost to
    the representative of their cluster.
    """

    assignments: dict[str, int]
    centroids: list[ProbTimedSequence]
    total_inertia: float
    inertia_trace: list[float] = field(default_factory=list)
    merges: int = 0

    @property
    def k(self) -> int:
        return len(self.centroids)

    def sizes(self) -> list[int]:
        counts = np.bincount(list(self.assignments.values()), minlength=self.k)
        return counts.tolist()

    def members(self, c: int) -> list[str]:
        return [sid for sid, a in self.assignments.items() if a == c]


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def pairwise_distances(
    seqs: Sequence[TimedSequence | ProbTimedSequence],
    alphabet: Alphabet | None,
    metric: DropDtwParams,
    threads: int = 1,
) -> np.ndarray:
    """Symmetric matrix of drop-DTW costs with a zero diagonal."""
    pseqs = [s if isinstance(s, ProbTimedSequence) else embed(s, alphabet) for s in seqs]
    n = len(pseqs)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    values = _map(lambda p: drop_dtw_cost(pseqs[p[0]], pseqs[p[1]], metric), pairs, threads)
    out = np.zeros((n, n))
    for (i, j), v in zip(pairs, values):
        out[i, j] = out[j, i] = v
    return out


def _check(seqs, k):
    if k > len(seqs):
        raise ValueError(f"k = {k} exceeds the number of sequences ({len(seqs)})")
    ids = [s.id for s in seqs]
    if len(set(ids)) != len(ids):
        raise ValueError("sequence ids must be unique")


def _sub_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


def _total_inertia(pseqs, labels, centroids, metric, threads):
    costs = _map(lambda i: drop_dtw_cost(centroids[labels[i]], pseqs[i], metric), range(len(pseqs)), threads)
    return float(sum(costs))


def hac_cluster(
    seqs: Sequence[TimedSequence], alphabet: Alphabet, params: ClusterParams
) -> Clustering:
    """Centroid-linkage agglomerative clustering down to ``params.k`` clusters.

    Every cluster starts as a singleton represented by the embedded sequence.
    The two clusters with the closest representatives (ties: lowest index
    pair) are merged and the merged representative is the TSR average of all
    their members. Exactly ``len(seqs) - k`` merges happen.
    """
    _check(seqs, params.k)
    metric, threads = params.metric, params.threads
    pseqs = [embed(s, alphabet) for s in seqs]
    reps: list[ProbTimedSequence] = list(pseqs)
    members: list[list[int]] = [[i] for i in range(len(seqs))]
    dist = pairwise_distances(pseqs, None, metric, threads)
    np.fill_diagonal(dist, np.inf)

    merges = 0
    while len(reps) > params.k:
        flat = int(np.argmin(dist))
        a, b = divmod(flat, dist.shape[1])
        a, b = min(a, b), max(a, b)
        merged = members[a] + members[b]
        cfg = replace(params.tsr, rng_seed=_sub_seed(params.rng_seed, merges))
        rep = tsr_average([pseqs[i] for i in merged], None, metric, cfg).center
        logger.debug("merge %d: clusters %d and %d (d=%.4g, %d members)", merges, a, b, dist[a, b], len(merged))

        members[a] = sorted(merged)
        reps[a] = rep
        del members[b], reps[b]
        dist = np.delete(np.delete(dist, b, axis=0), b, axis=1)
        others = [c for c in range(len(reps)) if c != a]
        row = _map(lambda c: drop_dtw_cost(rep, reps[c], metric), others, threads)
        for c, v in zip(others, row):
            dist[a, c] = dist[c, a] = v
        merges += 1

    labels = np.empty(len(seqs), dtype=int)
    for c, mem in enumerate(members):
        labels[mem] = c
    total = _total_inertia(pseqs, labels, reps, metric, threads)
    return Clustering(
        assignments={s.id: int(labels[i]) for i, s in enumerate(seqs)},
        centroids=reps,
        total_inertia=total,
        inertia_trace=[total],
        merges=merges,
    )


def _assign(pseqs, reps, metric, threads):
    def nearest(i):
        d = [drop_dtw_cost(r, pseqs[i], metric) for r in reps]
        c = int(np.argmin(d))  # first minimum, i.e. lowest cluster index on ties
        return c, d[c]

    res = _map(nearest, range(len(pseqs)), threads)
    return np.array([c for c, _ in res]), np.array([d for _, d in res])


def _repair_empty(labels, costs, reps, pseqs, k):
    """Give every empty cluster the sequence farthest from its representative."""
    labels, costs = labels.copy(), costs.copy()
    reps = list(reps)
    for c in range(k):
        if np.any(labels == c):
            continue
        sizes = np.bincount(labels, minlength=k)
        movable = np.flatnonzero(sizes[labels] > 1)
        i = int(movable[np.argmax(costs[movable])])
        logger.debug("cluster %d is empty; reseeding with sequence %d", c, i)
        labels[i] = c
        costs[i] = 0.0
        reps[c] = pseqs[i]
    return labels, costs, reps


def _kmeans_once(pseqs, params: ClusterParams, seed: int):
    k, metric, threads = params.k, params.metric, params.threads
    rng = np.random.default_rng(seed)
    reps = [pseqs[i] for i in rng.choice(len(pseqs), size=k, replace=False)]
    labels, costs = _assign(pseqs, reps, metric, threads)
    labels, costs, reps = _repair_empty(labels, costs, reps, pseqs, k)
    trace = [float(costs.sum())]

    for rnd in range(params.kmeans_max_rounds):
        new_reps = []
        for c in range(k):
            idx = np.flatnonzero(labels == c)
            cfg = replace(params.tsr, rng_seed=_sub_seed(seed, rnd, c))
            # warm start from the current representative keeps the round inertia non-increasing
            res = tsr_average([pseqs[i] for i in idx], None, metric, cfg, initial_center=reps[c])
            new_reps.append(res.center)
        new_labels, new_costs = _assign(pseqs, new_reps, metric, threads)
        new_labels, new_costs, new_reps = _repair_empty(new_labels, new_costs, new_reps, pseqs, k)
        stable = np.array_equal(new_labels, labels)
        reps, labels, costs = new_reps, new_labels, new_costs
        trace.append(float(costs.sum()))
        if stable:
            break
    return labels, reps, trace


def kmeans_cluster(
    seqs: Sequence[TimedSequence], alphabet: Alphabet, params: ClusterParams
) -> Clustering:
    """K-means with drop-DTW assignment and TSR representatives.

    Initial representatives are ``k`` distinct sequences drawn uniformly. With
    ``params.restarts > 1`` the run of lowest total inertia is kept.
    """
    _check(seqs, params.k)
    pseqs = [embed(s, alphabet) for s in seqs]
    best = None
    for r in range(params.restarts):
        labels, reps, trace = _kmeans_once(pseqs, params, _sub_seed(params.rng_seed, r))
        if best is None or trace[-1] < best[2][-1]:
            best = (labels, reps, trace)
    labels, reps, trace = best
    return Clustering(
        assignments={s.id: int(labels[i]) for i, s in enumerate(seqs)},
        centroids=reps,
        total_inertia=trace[-1],
        inertia_trace=trace,
    )
