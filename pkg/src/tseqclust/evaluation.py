"""Confusion matrices, Cohen's kappa and per-cluster event histograms."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import Alphabet, TimedSequence

SIZE, AGREEMENT = "size", "agreement"


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with rows = true classes, columns = matched predicted clusters.

    ``columns[c]`` is the predicted cluster id matched to true class
    ``classes[c]``; extra clusters (or padding ``None``) follow.
    """

    counts: np.ndarray
    classes: tuple
    columns: tuple

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def cohen_kappa(counts) -> float:
    """Cohen's kappa of a square contingency table, taken as it is."""
    counts = np.asarray(counts, dtype=float)
    if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
        raise ValueError("kappa needs a square matrix")
    total = counts.sum()
    if total == 0:
        raise ValueError("empty confusion matrix")
    p_o = np.trace(counts) / total
    p_c = float(counts.sum(axis=1) @ counts.sum(axis=0)) / total**2
    if math.isclose(p_c, 1.0):
        return 1.0 if math.isclose(p_o, 1.0) else 0.0
    return float((p_o - p_c) / (1.0 - p_c))


def merge_labels(labels: Mapping[str, object], merge: Mapping) -> dict:
    """Rename true classes, e.g. ``{3: 1}`` folds class 3 into class 1."""
    return {k: merge.get(v, v) for k, v in labels.items()}


def confusion_and_kappa(
    truth: Mapping[str, object], pred: Mapping[str, object], matching: str = SIZE
) -> tuple[ConfusionMatrix, float]:
    """Match predicted clusters to true classes one-to-one, then score.

    Parameters
    ----------
    truth, pred : mapping id -> label
        Must cover the same ids.
    matching : {"size", "agreement"}
        ``"size"`` pairs classes and clusters of closest sizes first (smallest
        total size mismatch) and breaks ties by agreement; ``"agreement"``
        maximizes the diagonal.

    Returns
    -------
    ConfusionMatrix, float
    """
    if set(truth) != set(pred):
        missing = sorted(set(truth) ^ set(pred))
        raise ValueError(f"truth and prediction cover different ids: {missing[:5]}")
    if matching not in (SIZE, AGREEMENT):
        raise ValueError(f"unknown matching {matching!r}")
    classes = sorted(set(truth.values()), key=str)
    clusters = sorted(set(pred.values()), key=str)
    K = max(len(classes), len(clusters))
    ci = {c: i for i, c in enumerate(classes)}
    pi = {c: i for i, c in enumerate(clusters)}
    raw = np.zeros((K, K), dtype=int)
    for sid in truth:
        raw[ci[truth[sid]], pi[pred[sid]]] += 1

    agreement = raw.astype(float)
    if matching == SIZE:
        row_sizes, col_sizes = raw.sum(axis=1), raw.sum(axis=0)
        mismatch = np.abs(row_sizes[:, None] - col_sizes[None, :])
        score = -(raw.sum() + 1.0) * mismatch + agreement
    else:
        score = agreement
    rows, cols = linear_sum_assignment(score, maximize=True)
    order = cols[np.argsort(rows)]
    counts = raw[:, order]
    names = tuple(clusters[j] if j < len(clusters) else None for j in order)
    padded = tuple(classes) + (None,) * (K - len(classes))
    return ConfusionMatrix(counts, padded, names), cohen_kappa(counts)


def histogram_export(
    clusters: Mapping[object, Sequence[TimedSequence]], alphabet: Alphabet, bin_width: float
) -> list[tuple]:
    """Count events per ``(cluster, type, time bin)``.

    Bins have width ``bin_width`` and start at the smallest timestamp over all
    clusters. Only nonzero counts are returned, sorted by cluster, bin start
    and type.
    """
    if not bin_width > 0:
        raise ValueError(f"bin width must be positive, got {bin_width}")
    times = [e.t for seqs in clusters.values() for s in seqs for e in s.events]
    if not times:
        return []
    origin = min(times)
    counts = Counter()
    for c, seqs in clusters.items():
        for s in seqs:
            for e in s.events:
                b = math.floor((e.t - origin) / bin_width)
                counts[(c, e.type_index, b)] += 1
    rows = [
        (c, alphabet.symbol(ti), origin + b * bin_width, n)
        for (c, ti, b), n in counts.items()
    ]
    rows.sort(key=lambda r: (str(r[0]), r[2], r[1]))
    return rows
