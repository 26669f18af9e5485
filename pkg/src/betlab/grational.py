"""Growth maximization under a probability cap on a loss functional.

The problem: choose a betting fraction ``f`` maximizing the expected
realized growth rate over an ``n_steps`` horizon, subject to

    P[loss(W(f); n_steps) >= loss_threshold] <= max_prob

where ``loss`` is either the worst-loss or the drawdown functional (both
in nats, see :mod:`betlab.wealthsim`).  The threshold is a loss size, not
odds; it is named ``loss_threshold`` to keep it apart from the odds field
of the bet.

Solver: grid search with common random numbers.  The objective is
one-dimensional and concave and the estimates are noisy, so reusing one
outcome matrix for every grid fraction makes the estimated growth curve
exactly concave and the monotonicity properties (in ``max_prob`` and in
``loss_threshold``) hold exactly rather than up to Monte Carlo noise.
Outcomes never depend on the bet size, which is what makes the reuse
legitimate.

Feasibility is judged on the point estimate (estimate <= max_prob); the
±2 s.e. band is reported alongside for the caller to interpret.  Finite
``n_steps`` stands in for the asymptotic variant: pass a large horizon
(10^4 is a reasonable default) when the long-run answer is wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .betmath import BetSpec, GrowthCurve
from .errors import BudgetError, DomainError, InfeasibleThreshold
from .wealthsim import outcome_matrix

_MIN_PATHS = 1000
_F_CAP = 0.999


class LossKind(str, Enum):
    WORST_LOSS = "worstloss"
    DRAWDOWN = "drawdown"


@dataclass(frozen=True)
class GrationalProblem:
    """One constrained-growth instance."""

    bet: BetSpec
    n_steps: int
    loss_kind: LossKind
    loss_threshold: float
    max_prob: float

    def __post_init__(self) -> None:
        if self.n_steps < 1:
            raise DomainError(f"n_steps must be >= 1, got {self.n_steps}")
        if not isinstance(self.loss_kind, LossKind):
            raise DomainError(f"loss_kind must be a LossKind, got {self.loss_kind!r}")
        if not self.loss_threshold > 0.0:
            raise InfeasibleThreshold(
                f"loss threshold must be positive, got {self.loss_threshold}; "
                "a nonpositive threshold is violated even by f = 0"
            )
        if not 0.0 <= self.max_prob <= 1.0:
            raise DomainError(f"max_prob must lie in [0, 1], got {self.max_prob}")


@dataclass(frozen=True)
class McBudget:
    """Monte Carlo budget: number of paths and the root seed."""

    n_paths: int
    root_seed: int

    def __post_init__(self) -> None:
        if self.n_paths < 1:
            raise DomainError(f"n_paths must be >= 1, got {self.n_paths}")


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo point estimate with its standard error."""

    value: float
    se: float


@dataclass(frozen=True)
class GrationalGrid:
    """Per-fraction estimates across the search grid (ascending f)."""

    f: np.ndarray
    e_growth: np.ndarray
    se_growth: np.ndarray
    p_violation: np.ndarray
    se_violation: np.ndarray
    feasible: np.ndarray

    def growth_curve(self) -> GrowthCurve:
        return GrowthCurve(fractions=self.f, rates=self.e_growth)


@dataclass(frozen=True)
class GrationalSolution:
    f_star: float
    expected_growth: McEstimate
    violation_prob: McEstimate
    feasible: bool
    grid: GrationalGrid


def _path_losses(lw: np.ndarray, kind: LossKind) -> np.ndarray:
    # lw has a leading zero column (s = 0), so both functionals are >= 0.
    if kind is LossKind.WORST_LOSS:
        return -lw.min(axis=1)
    return (np.maximum.accumulate(lw, axis=1) - lw).max(axis=1)


def _grid_stats(
    problem: GrationalProblem, wins: np.ndarray, fractions: np.ndarray
) -> GrationalGrid:
    n_paths, n_steps = wins.shape
    # Prefix win counts: log wealth at (path, s) is linear in them, so one
    # int matrix serves every fraction on the grid.
    counts = np.zeros((n_paths, n_steps + 1), dtype=np.int64)
    np.cumsum(wins, axis=1, out=counts[:, 1:])
    steps = np.arange(n_steps + 1, dtype=float)

    e_growth = np.empty(fractions.size)
    se_growth = np.empty(fractions.size)
    p_violation = np.empty(fractions.size)
    se_violation = np.empty(fractions.size)
    d = problem.bet.d
    for i, f in enumerate(fractions):
        a = math.log1p(d * f)
        b = math.log1p(-f)
        lw = counts * (a - b) + steps * b
        growth = lw[:, -1] / n_steps
        e_growth[i] = growth.mean()
        se_growth[i] = growth.std(ddof=1) / math.sqrt(n_paths) if n_paths > 1 else 0.0
        hits = _path_losses(lw, problem.loss_kind) >= problem.loss_threshold
        p_hat = hits.mean()
        p_violation[i] = p_hat
        se_violation[i] = math.sqrt(p_hat * (1.0 - p_hat) / n_paths)
    return GrationalGrid(
        f=fractions,
        e_growth=e_growth,
        se_growth=se_growth,
        p_violation=p_violation,
        se_violation=se_violation,
        feasible=p_violation <= problem.max_prob,
    )


def solve(
    problem: GrationalProblem,
    budget: McBudget,
    grid_step: float = 0.01,
    f_max: float = _F_CAP,
) -> GrationalSolution:
    """Grid-search the constrained problem with common random numbers.

    The grid is {0, grid_step, 2*grid_step, ...} up to min(f_max, 0.999);
    every fraction is scored on the same outcome matrix.  Returns the
    feasible fraction with the largest estimated expected growth.  f = 0
    incurs zero loss, so with a positive threshold the feasible set is
    never empty.
    """
    if not 0.0 < grid_step <= 0.1:
        raise DomainError(f"grid_step must lie in (0, 0.1], got {grid_step}")
    if not 0.0 <= f_max < 1.0:
        raise DomainError(f"f_max must lie in [0, 1), got {f_max}")
    if budget.n_paths < _MIN_PATHS:
        raise BudgetError(
            f"need at least {_MIN_PATHS} paths for usable violation estimates, "
            f"got {budget.n_paths}"
        )
    cap = min(f_max, _F_CAP)
    fractions = np.arange(math.floor(cap / grid_step) + 1) * grid_step
    wins = outcome_matrix(problem.bet, problem.n_steps, budget.n_paths, budget.root_seed)
    grid = _grid_stats(problem, wins, fractions)

    feasible_idx = np.flatnonzero(grid.feasible)
    if feasible_idx.size == 0:
        return GrationalSolution(
            f_star=0.0,
            expected_growth=McEstimate(0.0, 0.0),
            violation_prob=McEstimate(0.0, 0.0),
            feasible=False,
            grid=grid,
        )
    best = feasible_idx[np.argmax(grid.e_growth[feasible_idx])]
    return GrationalSolution(
        f_star=float(grid.f[best]),
        expected_growth=McEstimate(float(grid.e_growth[best]), float(grid.se_growth[best])),
        violation_prob=McEstimate(
            float(grid.p_violation[best]), float(grid.se_violation[best])
        ),
        feasible=True,
        grid=grid,
    )


def violation_probability(
    bet: BetSpec,
    f: float,
    n_steps: int,
    loss_kind: LossKind,
    loss_threshold: float,
    budget: McBudget,
) -> McEstimate:
    """Monte Carlo estimate of P[loss >= loss_threshold] at one fraction.

    Deterministic given the budget's seed; binomial standard error.
    f = 0 returns exactly zero.
    """
    problem = GrationalProblem(
        bet=bet,
        n_steps=n_steps,
        loss_kind=loss_kind,
        loss_threshold=loss_threshold,
        max_prob=1.0,
    )
    if not 0.0 <= f < 1.0:
        raise DomainError(f"betting fraction must lie in [0, 1), got {f}")
    wins = outcome_matrix(bet, n_steps, budget.n_paths, budget.root_seed)
    grid = _grid_stats(problem, wins, np.asarray([f], dtype=float))
    return McEstimate(float(grid.p_violation[0]), float(grid.se_violation[0]))
