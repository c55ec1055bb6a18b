"""Exhaustive drop-DTW, for testing the dynamic program on tiny inputs."""
from __future__ import annotations

import math

from .core import ProbTimedSequence
from .metric import Alignment, DropDtwParams, alignment_from_pairs, drop_total, event_distance

MAX_CELLS = 30


def brute_force_drop_dtw(
    x: ProbTimedSequence, z: ProbTimedSequence, params: DropDtwParams
) -> tuple[float, Alignment]:
    """Minimize the drop-DTW objective by enumerating every feasible alignment.

    Feasible alignments are the chains of allowed cells for the product order
    on index pairs, including the empty one. Match costs come from
    :func:`event_distance` directly, not from the vectorized cost matrix.

    Raises
    ------
    ValueError
        If ``len(x) * len(z)`` exceeds 30.
    """
    M, N = len(x), len(z)
    if M * N > MAX_CELLS:
        raise ValueError(f"{M}x{N} is too large for exhaustive search (max {MAX_CELLS} cells)")
    w, delta = params.weights, float(params.delta)

    cells = []
    for a in range(M):
        for b in range(N):
            if abs(a - b) >= params.sigma:
                continue
            if abs(x.times[a] - z.times[b]) > params.tau:
                continue
            cells.append((a, b, event_distance(x[a], z[b], w)))

    best = [drop_total(M + N, delta), ()]

    def extend(start, chain, matched, rows, cols):
        n_drops = (M - len(rows)) + (N - len(cols))
        total = matched + drop_total(n_drops, delta)
        if total < best[0]:
            best[0], best[1] = total, tuple(chain)
        last = chain[-1] if chain else (-1, -1)
        for k in range(start, len(cells)):
            a, b, c = cells[k]
            if a < last[0] or b < last[1]:
                continue
            chain.append((a, b))
            extend(
                k + 1,
                chain,
                matched + c,
                rows | {a},
                cols | {b},
            )
            chain.pop()

    # cells are in lexicographic order, so every chain is visited once in sorted order
    extend(0, [], 0.0, frozenset(), frozenset())
    cost = best[0]
    if math.isinf(cost):
        return cost, None
    return cost, alignment_from_pairs(best[1], M, N)
