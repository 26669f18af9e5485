"""Closed-form Kelly mathematics for repeated biased-coin wagers.

A wager is a coin that pays ``d`` per unit staked on a win (probability
``p``) and loses the stake on a loss (probability ``q = 1 - p``).  Betting
a fixed fraction ``f`` of wealth each turn, the asymptotic growth rate of
log wealth is

    G(f) = p * log(1 + d*f) + (1 - p) * log(1 - f)      [nats per bet]

Note the plus sign on the loss term: ``log(1 - f)`` is itself negative.
This is the convention under which the growth-maximizing fraction is the
Kelly fraction ``f* = p - q/d``; writing the loss term with a minus sign
instead would contradict that maximizer.  All logarithms here are natural
logs, so growth rates are in nats per bet.

Conventions used throughout:

* ``f = 0`` means no bet, ``f -> 1`` risks the whole stake per turn
  (``G -> -inf`` as ``f -> 1`` whenever ``p < 1``).
* Negative-edge inputs clamp to ``f = 0`` rather than raising: the sizing
  rule is "bet p - q/d when positive, nothing otherwise".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NoPositiveRoot

# Absolute tolerance for the critical-fraction root and the bracket margin
# keeping the search away from the f=1 log singularity.
_ROOT_TOL = 1e-12
_BRACKET_EPS = 1e-9


@dataclass(frozen=True)
class BetSpec:
    """A biased-coin wager: win probability ``p`` at odds ``d``.

    ``d`` is the payout per unit staked on a win; the stake is lost on a
    loss.  The loss probability ``q = 1 - p`` is derived, never stored.
    """

    p: float
    d: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"win probability must lie in [0, 1], got {self.p}")
        if not self.d > 0.0:
            raise DomainError(f"odds must be positive, got {self.d}")

    @property
    def q(self) -> float:
        return 1.0 - self.p


@dataclass(frozen=True)
class GrowthCurve:
    """Asymptotic growth rates evaluated on an increasing grid of fractions."""

    fractions: np.ndarray
    rates: np.ndarray

    def __post_init__(self) -> None:
        fractions = np.asarray(self.fractions, dtype=float)
        rates = np.asarray(self.rates, dtype=float)
        if fractions.shape != rates.shape or fractions.ndim != 1:
            raise DomainError("fractions and rates must be 1-d sequences of equal length")
        if np.any(np.diff(fractions) <= 0):
            raise DomainError("fractions must be strictly increasing")
        if np.any(fractions < 0) or np.any(fractions >= 1):
            raise DomainError("fractions must lie in [0, 1)")
        object.__setattr__(self, "fractions", fractions)
        object.__setattr__(self, "rates", rates)

    def argmax_fraction(self) -> float:
        """Grid fraction with the largest growth rate."""
        return float(self.fractions[int(np.argmax(self.rates))])


def kelly_fraction(bet: BetSpec) -> float:
    """Growth-optimal betting fraction ``max(p - q/d, 0)``."""
    return max(bet.p - bet.q / bet.d, 0.0)


def asymptotic_growth(bet: BetSpec, f: float) -> float:
    """Asymptotic growth rate ``p*log(1 + d*f) + (1-p)*log(1-f)`` in nats per bet.

    Raises :class:`DomainError` for ``f`` outside ``[0, 1)`` (the ``f = 1``
    boundary is a log singularity whenever ``p < 1``).
    """
    if not 0.0 <= f < 1.0:
        raise DomainError(f"betting fraction must lie in [0, 1), got {f}")
    return bet.p * math.log1p(bet.d * f) + bet.q * math.log1p(-f)


def growth_derivative(bet: BetSpec, f: float) -> float:
    """First derivative of the growth rate: ``d*p/(1 + d*f) - (1-p)/(1-f)``."""
    if not 0.0 <= f < 1.0:
        raise DomainError(f"betting fraction must lie in [0, 1), got {f}")
    return bet.d * bet.p / (1.0 + bet.d * f) - bet.q / (1.0 - f)


def growth_curve(bet: BetSpec, fractions: Sequence[float] | np.ndarray) -> GrowthCurve:
    """Evaluate the growth rate on an increasing grid of fractions."""
    fractions = np.asarray(fractions, dtype=float)
    if fractions.size and (fractions.min() < 0 or fractions.max() >= 1):
        raise DomainError("fractions must lie in [0, 1)")
    rates = bet.p * np.log1p(bet.d * fractions) + bet.q * np.log1p(-fractions)
    return GrowthCurve(fractions=fractions, rates=rates)


def critical_fraction(bet: BetSpec) -> float:
    """The fraction ``f_c > f*`` at which asymptotic growth crosses zero.

    Betting any more than ``f_c`` makes long-run growth negative (and ruin
    asymptotically certain); any less keeps it positive.  Located by
    bisection on ``(f* + eps, 1 - eps)`` to absolute tolerance 1e-12;
    bisection is derivative-free, which avoids the slope blowup near
    ``f -> 1``.  Requires a positive edge, otherwise no positive root
    exists and :class:`NoPositiveRoot` is raised.
    """
    f_star = kelly_fraction(bet)
    if f_star <= 0.0:
        raise NoPositiveRoot(f"bet (p={bet.p}, d={bet.d}) has no positive edge")
    if bet.p >= 1.0:
        raise NoPositiveRoot(
            f"bet (p={bet.p}, d={bet.d}) never loses, so growth never crosses zero"
        )
    lo = f_star + _BRACKET_EPS
    hi = 1.0 - _BRACKET_EPS
    if lo >= hi:
        raise NoPositiveRoot(f"root bracket is empty for (p={bet.p}, d={bet.d})")
    g_lo = asymptotic_growth(bet, lo)
    g_hi = asymptotic_growth(bet, hi)
    if g_lo <= 0.0 or g_hi >= 0.0:
        # p = 1 never crosses zero; extreme-edge bets may push the root
        # inside the epsilon margin.
        raise NoPositiveRoot(
            f"growth does not change sign on ({lo}, {hi}) for (p={bet.p}, d={bet.d})"
        )
    while hi - lo > _ROOT_TOL:
        mid = 0.5 * (lo + hi)
        if asymptotic_growth(bet, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def stochastic_p_fraction(p_mean: float, d: float) -> float:
    """Optimal fraction when the per-turn win probability is random.

    Only the mean of the win-probability distribution matters: the optimal
    fraction is ``max(E[P] - (1 - E[P])/d, 0)``, i.e. the Kelly fraction of
    the mean.
    """
    return kelly_fraction(BetSpec(p=p_mean, d=d))


def mixed_sequence_fractions(
    bets: Sequence[BetSpec | tuple[float, float]],
) -> list[float]:
    """Per-bet Kelly fractions for a heterogeneous sequence of wagers.

    Element-wise ``max(p_i - q_i/d_i, 0)``: bet the edge where there is
    one, nothing otherwise.  Accepts ``BetSpec`` instances or raw
    ``(p, d)`` pairs; the first domain violation is re-raised with the
    offending index.
    """
    fractions = []
    for i, bet in enumerate(bets):
        try:
            if not isinstance(bet, BetSpec):
                bet = BetSpec(*bet)
            fractions.append(kelly_fraction(bet))
        except DomainError as exc:
            raise DomainError(f"bet {i}: {exc}") from exc
    return fractions


def fractional_kelly(bet: BetSpec, alpha: float) -> float:
    """Scaled Kelly fraction ``alpha * f*`` for ``alpha`` in (0, 1].

    Trades some growth for smaller volatility and drawdowns; positive
    growth is retained for every ``alpha`` in (0, 1] because the growth
    curve is concave with its maximum at ``f*``.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha * kelly_fraction(bet)
