"""Default metric parameters derived from an indifference delay."""
from __future__ import annotations

from dataclasses import dataclass

from .metric import DropDtwParams, Weights


@dataclass(frozen=True)
class ParamSuggestion:
    p_t: float
    p_e: float
    delta: float
    tau: float
    t_max: float

    def to_params(self, sigma: float = float("inf")) -> DropDtwParams:
        return DropDtwParams(Weights(p_e=self.p_e, p_t=self.p_t), delta=self.delta, sigma=sigma, tau=self.tau)


def suggest_parameters(tau: float, t_max: float) -> ParamSuggestion:
    """Derive weights and drop cost from the delay ``tau`` beyond which two
    events are never considered similar, and the largest delay ``t_max`` worth
    pairing.

    The type weight is ``tau**2`` times the time weight (``p_t = 1``), so that
    within ``tau`` days a type change outweighs the time gap, and the drop cost
    is ``(tau + t_max) / tau**2 + 1``.

    >>> s = suggest_parameters(3, 20)
    >>> (s.p_t, s.p_e, round(s.delta, 4))
    (1.0, 9.0, 3.5556)
    """
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if t_max < tau:
        raise ValueError(f"t_max ({t_max}) must be >= tau ({tau})")
    tau, t_max = float(tau), float(t_max)
    delta = (tau + t_max) / tau**2 + 1.0
    return ParamSuggestion(p_t=1.0, p_e=tau**2, delta=delta, tau=tau, t_max=t_max)
