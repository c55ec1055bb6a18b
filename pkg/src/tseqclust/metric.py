"""
Drop-DTW between probabilistic timed sequences.

Events live in the Euclidean space of dimension ``n + 1`` (type distribution
plus time), with the event distance

    d(a, b) = sqrt(p_e * ||a.dist - b.dist||^2 + p_t * (b.t - a.t)^2)

An alignment is any set of index pairs that is a chain for the product order
(monotone in both coordinates, many-to-one allowed, gaps allowed). Its cost is
the sum of matched distances plus ``delta`` for every element left unmatched
on either side. :func:`drop_dtw` computes the optimum by dynamic programming
and :func:`get_alignment` backtracks one optimal alignment.

Two optional constraints restrict which pairs may be matched: a Sakoe-Chiba
band ``|i - j| < sigma`` and a temporal threshold ``|t_i - t_j| <= tau``.
Dropping is never restricted, so the cost is finite whenever ``delta`` is.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ProbEvent, ProbTimedSequence

INF = math.inf


class InfeasibleAlignmentError(ValueError):
    """No alignment of finite cost exists (only possible with ``delta = inf``)."""


@dataclass(frozen=True)
class Weights:
    """Weights of the event-type term (``p_e``) and of the time term (``p_t``)."""

    p_e: float = 1.0
    p_t: float = 1.0

    def __post_init__(self):
        if self.p_e < 0 or self.p_t < 0:
            raise ValueError("weights must be nonnegative")
        if self.p_e == 0 and self.p_t == 0:
            raise ValueError("p_e and p_t cannot both be zero")


@dataclass(frozen=True)
class DropDtwParams:
    """Event weights, drop cost and the two matching constraints.

    ``delta = inf`` disables drops; ``sigma = inf`` and ``tau = inf`` disable the
    corresponding constraint.
    """

    weights: Weights = Weights()
    delta: float = INF
    sigma: float = INF
    tau: float = INF

    def __post_init__(self):
        if math.isnan(self.delta) or self.delta < 0:
            raise ValueError(f"drop cost must be >= 0, got {self.delta}")
        if math.isnan(self.tau) or self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.sigma != INF and (self.sigma < 1 or int(self.sigma) != self.sigma):
            raise ValueError(f"sigma must be a positive integer or inf, got {self.sigma}")


def event_distance(a: ProbEvent, b: ProbEvent, w: Weights) -> float:
    da, db = np.asarray(a.dist, dtype=float), np.asarray(b.dist, dtype=float)
    if da.shape != db.shape:
        raise ValueError(f"distribution dimensions differ: {da.shape} vs {db.shape}")
    diff = da - db
    dt = float(b.t) - float(a.t)
    return math.sqrt(w.p_e * float(diff @ diff) + w.p_t * dt * dt)


def cost_matrix(x: ProbTimedSequence, z: ProbTimedSequence, w: Weights) -> np.ndarray:
    """Pairwise event distances, shape ``(len(x), len(z))``."""
    if x.n_types != z.n_types:
        raise ValueError(f"distribution dimensions differ: {x.n_types} vs {z.n_types}")
    if len(x) == 0 or len(z) == 0:
        return np.zeros((len(x), len(z)))
    dd = x.dists[:, None, :] - z.dists[None, :, :]
    dt = z.times[None, :] - x.times[:, None]
    return np.sqrt(w.p_e * np.einsum("ijk,ijk->ij", dd, dd) + w.p_t * dt * dt)


def drop_total(n_drops: int, delta: float) -> float:
    # 0 * inf is nan; no drop costs nothing even when delta is infinite
    return n_drops * delta if n_drops else 0.0


def match_allowed(x: ProbTimedSequence, z: ProbTimedSequence, params: DropDtwParams) -> np.ndarray:
    """Boolean mask of the pairs that the band and the temporal threshold allow."""
    M, N = len(x), len(z)
    ok = np.ones((M, N), dtype=bool)
    if params.sigma != INF:
        ii, jj = np.indices((M, N))
        ok &= np.abs(ii - jj) < params.sigma
    if params.tau != INF:
        ok &= np.abs(x.times[:, None] - z.times[None, :]) <= params.tau
    return ok


@dataclass(frozen=True)
class DpTables:
    """Dynamic-programming tables, all of shape ``(M + 1, N + 1)``.

    Cell ``[i, j]`` refers to the prefixes ``x[:i]`` and ``z[:j]``.

    Attributes
    ----------
    match : D+, optimum when ``(i-1, j-1)`` is the last matched pair.
    drop : D-, optimum when ``x[i-1]`` or ``z[j-1]`` is dropped.
    total : D = min(D+, D-), optimum over the two prefixes.
    row_run : best cost with ``x[i-1]`` matched at some column ``< j`` and every
        later column up to ``j-1`` dropped.
    col_run : transpose of ``row_run``.
    cost_matrix : event distances used to fill the tables.
    allowed : mask of matchable pairs.
    """

    match: np.ndarray
    drop: np.ndarray
    total: np.ndarray
    row_run: np.ndarray
    col_run: np.ndarray
    cost_matrix: np.ndarray
    allowed: np.ndarray
    delta: float

    @property
    def cost(self) -> float:
        return float(self.total[-1, -1])


def _fill_tables(C: np.ndarray, allowed: np.ndarray, delta: float):
    M, N = C.shape
    Dp = [[INF] * (N + 1) for _ in range(M + 1)]
    Dm = [[INF] * (N + 1) for _ in range(M + 1)]
    D = [[INF] * (N + 1) for _ in range(M + 1)]
    R = [[INF] * (N + 1) for _ in range(M + 1)]
    K = [[INF] * (N + 1) for _ in range(M + 1)]
    Dp[0][0] = Dm[0][0] = D[0][0] = 0.0
    for i in range(1, M + 1):
        Dm[i][0] = D[i][0] = drop_total(i, delta)
    for j in range(1, N + 1):
        Dm[0][j] = D[0][j] = drop_total(j, delta)

    Cl = C.tolist()
    okl = allowed.tolist()
    for i in range(1, M + 1):
        Ci, oki = Cl[i - 1], okl[i - 1]
        Di, Dprev = D[i], D[i - 1]
        Dpi, Dmi, Ri, Ki, Kprev = Dp[i], Dm[i], R[i], K[i], K[i - 1]
        for j in range(1, N + 1):
            if oki[j - 1]:
                a, b, c = Dprev[j - 1], Ri[j - 1], Kprev[j]
                best = a if a <= b else b
                if c < best:
                    best = c
                m = Ci[j - 1] + best
            else:
                m = INF
            Dpi[j] = m
            r = Ri[j - 1] + delta
            Ri[j] = m if m <= r else r
            k = Kprev[j] + delta
            Ki[j] = m if m <= k else k
            up, left = Dprev[j], Di[j - 1]
            dm = delta + (up if up <= left else left)
            Dmi[j] = dm
            Di[j] = m if m <= dm else dm
    return Dp, Dm, D, R, K


def drop_dtw(
    x: ProbTimedSequence, z: ProbTimedSequence, params: DropDtwParams
) -> tuple[float, DpTables]:
    """Optimal drop-DTW cost between ``x`` (rows) and ``z`` (columns).

    Recursion, for ``1 <= i <= M`` and ``1 <= j <= N``::

        D+[i,j]  = C[i-1,j-1] + min(D[i-1,j-1], R[i,j-1], K[i-1,j])   if (i-1, j-1) allowed
        R[i,j]   = min(D+[i,j], R[i,j-1] + delta)
        K[i,j]   = min(D+[i,j], K[i-1,j] + delta)
        D-[i,j]  = delta + min(D[i-1,j], D[i,j-1])
        D[i,j]   = min(D+[i,j], D-[i,j])

    with ``D[i,0] = i * delta``, ``D[0,j] = j * delta`` and infinite match
    boundaries. With ``delta = inf`` and no constraint this is classical DTW.

    Returns
    -------
    cost : float
        ``D[M, N]``.
    tables : DpTables
    """
    C = cost_matrix(x, z, params.weights)
    allowed = match_allowed(x, z, params)
    Dp, Dm, D, R, K = _fill_tables(C, allowed, float(params.delta))
    tables = DpTables(
        match=np.array(Dp),
        drop=np.array(Dm),
        total=np.array(D),
        row_run=np.array(R),
        col_run=np.array(K),
        cost_matrix=C,
        allowed=allowed,
        delta=float(params.delta),
    )
    return tables.cost, tables


def drop_dtw_cost(x: ProbTimedSequence, z: ProbTimedSequence, params: DropDtwParams) -> float:
    """Same value as ``drop_dtw(x, z, params)[0]`` without building the table arrays."""
    C = cost_matrix(x, z, params.weights)
    allowed = match_allowed(x, z, params)
    D = _fill_tables(C, allowed, float(params.delta))[2]
    return D[-1][-1]


@dataclass(frozen=True)
class Alignment:
    """Matched pairs plus drop indicators (1 = element left unmatched)."""

    pairs: tuple[tuple[int, int], ...]
    row_drops: np.ndarray
    col_drops: np.ndarray

    def cost(self, C: np.ndarray, delta: float) -> float:
        matched = sum(C[i, j] for i, j in self.pairs)
        n_drops = int(self.row_drops.sum() + self.col_drops.sum())
        return float(matched) + drop_total(n_drops, delta)

    def to_json(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "row_drops": self.row_drops.astype(int).tolist(),
            "col_drops": self.col_drops.astype(int).tolist(),
        }


def alignment_from_pairs(pairs, M: int, N: int) -> Alignment:
    pairs = tuple(sorted((int(i), int(j)) for i, j in pairs))
    row_drops = np.ones(M, dtype=np.int8)
    col_drops = np.ones(N, dtype=np.int8)
    for i, j in pairs:
        row_drops[i] = 0
        col_drops[j] = 0
    return Alignment(pairs, row_drops, col_drops)


def get_alignment(tables: DpTables) -> Alignment:
    """Backtrack one optimal alignment from the tables of :func:`drop_dtw`.

    Ties prefer a match over a drop and, between drops, dropping the row
    element.
    """
    D, Dp, R, K = tables.total, tables.match, tables.row_run, tables.col_run
    C, delta = tables.cost_matrix, tables.delta
    M, N = C.shape
    if not math.isfinite(D[M, N]):
        raise InfeasibleAlignmentError("no finite-cost alignment exists")

    pairs = []
    i, j, state = M, N, "D"
    while i > 0 or j > 0:
        if state == "D":
            if i > 0 and j > 0 and Dp[i, j] == D[i, j]:
                state = "M"
            elif i > 0 and (j == 0 or delta + D[i - 1, j] == D[i, j]):
                i -= 1
            elif j > 0 and (i == 0 or delta + D[i, j - 1] == D[i, j]):
                j -= 1
            else:
                raise RuntimeError(f"inconsistent tables at D[{i}, {j}]")
        elif state == "M":
            pairs.append((i - 1, j - 1))
            a, b, c = D[i - 1, j - 1], R[i, j - 1], K[i - 1, j]
            best = min(a, b, c)
            if Dp[i, j] != C[i - 1, j - 1] + best:
                raise RuntimeError(f"inconsistent tables at D+[{i}, {j}]")
            if a == best:
                i, j, state = i - 1, j - 1, "D"
            elif b == best:
                j, state = j - 1, "R"
            else:
                i, state = i - 1, "K"
        elif state == "R":
            if R[i, j] == Dp[i, j]:
                state = "M"
            elif j > 0 and R[i, j - 1] + delta == R[i, j]:
                j -= 1
            else:
                raise RuntimeError(f"inconsistent tables at R[{i}, {j}]")
        else:
            if K[i, j] == Dp[i, j]:
                state = "M"
            elif i > 0 and K[i - 1, j] + delta == K[i, j]:
                i -= 1
            else:
                raise RuntimeError(f"inconsistent tables at K[{i}, {j}]")
    return alignment_from_pairs(pairs, M, N)


def align(x: ProbTimedSequence, z: ProbTimedSequence, params: DropDtwParams):
    """Cost and one optimal alignment."""
    cost, tables = drop_dtw(x, z, params)
    return cost, get_alignment(tables)
