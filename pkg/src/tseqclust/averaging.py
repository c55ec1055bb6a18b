"""
Averaging of timed sequences (TSR).

Starting from one of the input sequences, the center is refined by repeating
two steps, in the spirit of DTW barycenter averaging:

1. align every sequence to the current center with drop-DTW;
2. replace each center event by the vertical average of the events aligned
   to it (mean distribution, mean date). Center events aligned to nothing
   are removed, so the center can only get shorter.

The inertia of a center is the mean drop-DTW cost to the sequences.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import Alphabet, ProbTimedSequence, TimedSequence, embed
from .metric import DropDtwParams, InfeasibleAlignmentError, align, drop_dtw_cost

logger = logging.getLogger(__name__)

LONGEST_RANDOM = "longest_random"


@dataclass(frozen=True)
class TsrConfig:
    """Settings of :func:`tsr_average`.

    Attributes
    ----------
    maxit : int
        Maximum number of refinement iterations.
    rel_tol : float
        Stop as soon as an iteration improves the inertia by less than
        ``rel_tol`` times the previous inertia.
    init : str or int
        ``"longest_random"`` picks uniformly among the longest sequences; an
        integer picks that sequence.
    rng_seed : int
    """

    maxit: int = 10
    rel_tol: float = 1e-6
    init: str | int = LONGEST_RANDOM
    rng_seed: int = 0

    def __post_init__(self):
        if self.maxit < 1:
            raise ValueError("maxit must be >= 1")
        if self.rel_tol < 0:
            raise ValueError("rel_tol must be >= 0")
        if self.init != LONGEST_RANDOM and not isinstance(self.init, (int, np.integer)):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass(frozen=True)
class TsrResult:
    center: ProbTimedSequence
    inertia_trace: list[float] = field(default_factory=list)
    iterations_run: int = 0
    lengths: list[int] = field(default_factory=list)
    stop_reason: str = "maxit"

    @property
    def inertia(self) -> float:
        return self.inertia_trace[-1]


def inertia(
    center: ProbTimedSequence, seqs: Sequence[ProbTimedSequence], params: DropDtwParams
) -> float:
    """Mean drop-DTW cost between ``center`` and each sequence."""
    if len(seqs) == 0:
        raise ValueError("inertia of an empty set of sequences")
    return float(np.mean([drop_dtw_cost(center, s, params) for s in seqs]))


def _as_prob(seqs, alphabet):
    out = []
    for s in seqs:
        if isinstance(s, ProbTimedSequence):
            out.append(s)
        else:
            if alphabet is None:
                raise ValueError("an alphabet is required to embed timed sequences")
            out.append(embed(s, alphabet))
    return out


def _align_all(center, pseqs, params):
    out = []
    for s in pseqs:
        try:
            out.append(align(center, s, params))
        except InfeasibleAlignmentError:
            # only with an infinite drop cost; the sequence supports no center event
            out.append((math.inf, None))
    return out


def vertical_average(
    center: ProbTimedSequence,
    seqs: Sequence[ProbTimedSequence],
    alignments,
) -> ProbTimedSequence:
    """Replace every center event by the mean of the events aligned to it.

    Center positions that receive no event are removed; the result is
    re-sorted by averaged timestamp (stable).
    """
    L, n = len(center), center.n_types
    dist_sum = np.zeros((L, n))
    time_sum = np.zeros(L)
    count = np.zeros(L, dtype=int)
    for s, al in zip(seqs, alignments):
        if al is None:
            continue
        for r, k in al.pairs:
            dist_sum[r] += s.dists[k]
            time_sum[r] += s.times[k]
            count[r] += 1
    keep = count > 0
    dists = dist_sum[keep] / count[keep, None]
    times = time_sum[keep] / count[keep]
    order = np.argsort(times, kind="stable")
    return ProbTimedSequence(dists[order], times[order], n_types=n)


def tsr_average(
    seqs: Sequence[TimedSequence | ProbTimedSequence],
    alphabet: Alphabet | None,
    params: DropDtwParams,
    cfg: TsrConfig = TsrConfig(),
    initial_center: ProbTimedSequence | None = None,
) -> TsrResult:
    """Average a set of timed sequences under drop-DTW.

    Parameters
    ----------
    seqs : sequence of TimedSequence or ProbTimedSequence
        Non-empty. Timed sequences are embedded with ``alphabet``.
    alphabet : Alphabet or None
    params : DropDtwParams
        Metric used both for aligning and for the inertia.
    cfg : TsrConfig
    initial_center : ProbTimedSequence, optional
        Warm start; overrides ``cfg.init``.

    Returns
    -------
    TsrResult
        ``inertia_trace[k]`` is the inertia of the k-th accepted center and
        ``lengths[k]`` its length. A refinement that would raise the inertia is
        discarded and ends the loop (``stop_reason == "increase"``), so the
        trace is non-increasing.
    """
    pseqs = _as_prob(seqs, alphabet)
    if not pseqs:
        raise ValueError("cannot average an empty set of sequences")

    if initial_center is not None:
        center = initial_center
    elif cfg.init == LONGEST_RANDOM:
        lengths = np.array([len(s) for s in pseqs])
        candidates = np.flatnonzero(lengths == lengths.max())
        rng = np.random.default_rng(cfg.rng_seed)
        center = pseqs[int(rng.choice(candidates))]
    else:
        center = pseqs[int(cfg.init)]

    m = len(pseqs)
    aligned = _align_all(center, pseqs, params)
    current = sum(c for c, _ in aligned) / m
    trace, lengths = [current], [len(center)]
    iterations = 0
    reason = "maxit"
    while iterations < cfg.maxit:
        iterations += 1
        candidate = vertical_average(center, pseqs, [a for _, a in aligned])
        if len(candidate) == 0:
            logger.debug("every center event lost its support; keeping the previous center")
            reason = "empty"
            break
        cand_aligned = _align_all(candidate, pseqs, params)
        cand_inertia = sum(c for c, _ in cand_aligned) / m
        if cand_inertia > current or math.isinf(cand_inertia):
            logger.debug("refinement did not lower inertia %.6g -> %.6g; stopping", current, cand_inertia)
            reason = "increase"
            break
        improvement = current - cand_inertia
        center, aligned, current = candidate, cand_aligned, cand_inertia
        trace.append(current)
        lengths.append(len(center))
        if math.isfinite(trace[-2]) and improvement <= cfg.rel_tol * trace[-2]:
            reason = "converged"
            break
    return TsrResult(center, trace, iterations, lengths, reason)
