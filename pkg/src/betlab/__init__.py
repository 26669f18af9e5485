"""Gambling-theoretic market machinery: bet sizing, constrained growth,
trading-system statistics, guessing-game exploitation, auction clearing,
and strategy-lifecycle classification."""

from .betmath import (
    BetSpec,
    GrowthCurve,
    asymptotic_growth,
    critical_fraction,
    fractional_kelly,
    growth_curve,
    growth_derivative,
    kelly_fraction,
    mixed_sequence_fractions,
    stochastic_p_fraction,
)
from .errors import (
    BudgetError,
    DomainError,
    EmptySelection,
    InfeasibleThreshold,
    NoClear,
    NoPositiveRoot,
)
from .grational import (
    GrationalProblem,
    GrationalSolution,
    LossKind,
    McBudget,
    solve,
    violation_probability,
)
from .seeding import DEFAULT_SEED, stream
from .wealthsim import (
    PathStats,
    SimConfig,
    WealthPath,
    adaptive_policy_growth,
    drawdown,
    path_stats,
    ruin_probability_all_in,
    simulate_paths,
    worst_loss,
)

__all__ = [
    "BetSpec",
    "GrowthCurve",
    "asymptotic_growth",
    "critical_fraction",
    "fractional_kelly",
    "growth_curve",
    "growth_derivative",
    "kelly_fraction",
    "mixed_sequence_fractions",
    "stochastic_p_fraction",
    "BudgetError",
    "DomainError",
    "EmptySelection",
    "InfeasibleThreshold",
    "NoClear",
    "NoPositiveRoot",
    "GrationalProblem",
    "GrationalSolution",
    "LossKind",
    "McBudget",
    "solve",
    "violation_probability",
    "DEFAULT_SEED",
    "stream",
    "PathStats",
    "SimConfig",
    "WealthPath",
    "adaptive_policy_growth",
    "drawdown",
    "path_stats",
    "ruin_probability_all_in",
    "simulate_paths",
    "worst_loss",
]

__version__ = "0.1.0"
