"""Deterministic-seeded simulation of fixed-fraction betting wealth processes.

A wealth path starts at ``w0`` and multiplies by ``1 + d*f`` on a win or
``1 - f`` on a loss each step; everything here works in log space, where
those factors become additive increments.  Two loss functionals summarize
a path:

* worst loss: ``log(W_0) - min_s log(W_s)``, the greatest relative loss
  measured from the starting capital;
* drawdown: ``max_s (max_{u<=s} log(W_u) - log(W_s))``, the greatest
  relative loss from a previous high.

Both are in nats and nonnegative (the index range includes ``s = 0``, so
the starting point itself bounds them below by zero), and drawdown
dominates worst loss because the running peak is at least ``W_0``.

Seeding contract: path ``k`` is a pure function of ``(root_seed, k)``
via a per-path spawned stream, so reruns and parallel runs produce
identical paths regardless of evaluation order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .betmath import BetSpec
from .errors import DomainError
from .seeding import stream

# A path is flagged ruined once wealth falls below this multiple of the
# starting capital; the discrete model never reaches exactly zero for f < 1.
DEFAULT_RUIN_FLOOR = 1e-9

# Cap on adaptive betting fractions, keeping log(1-f) finite when the
# running win-rate estimate hits 1 (e.g. an all-win prefix).
ADAPTIVE_F_MAX = 0.999


@dataclass(frozen=True)
class SimConfig:
    """Fixed-fraction simulation instance."""

    bet: BetSpec
    f: float
    n_steps: int
    n_paths: int
    root_seed: int
    w0: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.f < 1.0:
            raise DomainError(f"betting fraction must lie in [0, 1), got {self.f}")
        if self.n_steps < 1:
            raise DomainError(f"n_steps must be >= 1, got {self.n_steps}")
        if self.n_paths < 1:
            raise DomainError(f"n_paths must be >= 1, got {self.n_paths}")
        if not self.w0 > 0.0:
            raise DomainError(f"initial wealth must be positive, got {self.w0}")


@dataclass(frozen=True)
class WealthPath:
    """One simulated path: ``n+1`` log-wealth values and ``n`` win flags."""

    log_wealth: np.ndarray
    outcomes: np.ndarray

    def __post_init__(self) -> None:
        lw = np.asarray(self.log_wealth, dtype=float)
        out = np.asarray(self.outcomes, dtype=bool)
        if lw.ndim != 1 or lw.size < 1:
            raise DomainError("log_wealth must be a nonempty 1-d sequence")
        if out.shape != (lw.size - 1,):
            raise DomainError("outcomes must have one entry per step")
        if not np.all(np.isfinite(lw)):
            raise DomainError("log wealth must be finite")
        object.__setattr__(self, "log_wealth", lw)
        object.__setattr__(self, "outcomes", out)

    @property
    def n_steps(self) -> int:
        return self.log_wealth.size - 1


@dataclass(frozen=True)
class PathStats:
    """Per-path summary: realized growth rate, loss functionals, ruin flag."""

    growth_rate: float
    worst_loss: float
    drawdown: float
    ruined: bool


def outcome_matrix(bet: BetSpec, n_steps: int, n_paths: int, root_seed: int) -> np.ndarray:
    """Win/loss indicators, shape ``(n_paths, n_steps)``, dtype bool.

    Row ``k`` depends only on ``(root_seed, k)``.  Outcomes do not depend
    on the betting fraction, so one matrix can be reused across fractions
    (the common-random-numbers contract used by the grational solver).
    """
    if n_steps < 1 or n_paths < 1:
        raise DomainError("n_steps and n_paths must be >= 1")
    wins = np.empty((n_paths, n_steps), dtype=bool)
    for k in range(n_paths):
        wins[k] = stream(root_seed, k).random(n_steps) < bet.p
    return wins


def log_increments(bet: BetSpec, f: float, wins: np.ndarray) -> np.ndarray:
    """Map win flags to log-wealth increments log(1+d*f) / log(1-f)."""
    return np.where(wins, math.log1p(bet.d * f), math.log1p(-f))


def simulate_paths(config: SimConfig) -> list[WealthPath]:
    """Simulate ``n_paths`` independent paths, ordered by path index.

    Deterministic: identical configs give bit-identical paths, and path
    ``k`` never changes when ``n_paths`` grows.
    """
    wins = outcome_matrix(config.bet, config.n_steps, config.n_paths, config.root_seed)
    inc = log_increments(config.bet, config.f, wins)
    lw0 = math.log(config.w0)
    lw = np.empty((config.n_paths, config.n_steps + 1), dtype=float)
    lw[:, 0] = lw0
    np.cumsum(inc, axis=1, out=lw[:, 1:])
    lw[:, 1:] += lw0
    return [WealthPath(log_wealth=lw[k], outcomes=wins[k]) for k in range(config.n_paths)]


def worst_loss(path: WealthPath) -> float:
    """Greatest relative loss from the start: ``log(W_0) - min_s log(W_s)``.

    Nonnegative because ``s = 0`` is included in the minimum.
    """
    lw = path.log_wealth
    return float(lw[0] - lw.min())


def drawdown(path: WealthPath) -> float:
    """Greatest relative loss from a running peak, in one forward pass."""
    lw = path.log_wealth
    return float(np.max(np.maximum.accumulate(lw) - lw))


def path_stats(path: WealthPath, ruin_floor: float = DEFAULT_RUIN_FLOOR) -> PathStats:
    """Summarize one path; ``ruined`` means wealth fell below ``ruin_floor * W_0``."""
    if path.n_steps < 1:
        raise DomainError("growth rate needs at least one step")
    if not 0.0 < ruin_floor < 1.0:
        raise DomainError(f"ruin floor must lie in (0, 1), got {ruin_floor}")
    lw = path.log_wealth
    wl = worst_loss(path)
    return PathStats(
        growth_rate=float((lw[-1] - lw[0]) / path.n_steps),
        worst_loss=wl,
        drawdown=drawdown(path),
        ruined=bool(wl > -math.log(ruin_floor)),
    )


def ruin_probability_all_in(bet: BetSpec, n: int) -> float:
    """Probability of ruin within ``n`` all-in bets: ``1 - p^n``.

    Betting everything each turn, a single loss is ruin, so only the
    all-win sequence survives.  Monotone to 1 as ``n`` grows for p < 1.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return 1.0 - bet.p**n


def adaptive_policy_growth(bet: BetSpec, n_steps: int, root_seed: int) -> float:
    """Realized growth rate of the plug-in policy with unknown ``p``.

    At step ``k+1`` the bettor bets the estimate built from the first
    ``k`` outcomes: ``f_k = clip(xbar_k - (1 - xbar_k)/d, 0, 0.999)``,
    with ``f_0 = 0`` (no bet before any data).  The cap keeps the loss
    increment finite when an all-win prefix drives ``xbar_k`` to 1.
    Vectorizable because outcomes never depend on the bet size.
    """
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps}")
    x = stream(root_seed).random(n_steps) < bet.p
    seen = np.arange(n_steps, dtype=float)  # outcomes observed before each step
    wins_before = np.concatenate(([0.0], np.cumsum(x)[:-1].astype(float)))
    xbar = wins_before / np.maximum(seen, 1.0)  # step 0: no data, xbar 0 -> f 0
    f = np.clip(xbar - (1.0 - xbar) / bet.d, 0.0, ADAPTIVE_F_MAX)
    inc = np.where(x, np.log1p(bet.d * f), np.log1p(-f))
    return float(inc.sum() / n_steps)


def write_paths_csv(paths: Sequence[WealthPath], fh: IO[str]) -> None:
    """Emit paths as CSV rows (path_id, step, log_wealth, outcome).

    Step 0 has no outcome; its cell is left empty.  Outcomes are 1/0.
    """
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["path_id", "step", "log_wealth", "outcome"])
    for k, path in enumerate(paths):
        writer.writerow([k, 0, format(path.log_wealth[0], ".12g"), ""])
        for s in range(1, path.log_wealth.size):
            writer.writerow(
                [k, s, format(path.log_wealth[s], ".12g"), int(path.outcomes[s - 1])]
            )
