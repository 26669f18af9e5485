"""Command-line entry point: one subcommand per module.

Conventions shared by every subcommand:

* ``--seed`` fixes all randomness; when absent, the ``GRATIONAL_SEED``
  environment variable is consulted, then a fixed default.  Identical
  invocations produce byte-identical output.
* ``--format text|json|csv`` (default text).  Text floats are printed
  with 12 significant digits, round-half-even; json carries full
  precision.  Undefined values print as NA in text, null in json.
* ``--output PATH`` writes the payload to a file instead of stdout.
* Exit codes: 0 success, 1 domain error (reported on stderr), 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import IO, Callable, Iterable, Sequence

import numpy as np

from . import betmath, games, grational, millerclear, popp, sysstats, wealthsim
from .errors import DomainError, NoPositiveRoot
from .seeding import DEFAULT_SEED

SEED_ENV_VAR = "GRATIONAL_SEED"


def _fmt(value: object) -> str:
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _kv_text(payload: dict) -> str:
    return "\n".join(f"{key} {_fmt(value)}" for key, value in payload.items())


def _rows_writer(rows: Iterable[Sequence[object]]) -> Callable[[IO[str]], None]:
    def write(fh: IO[str]) -> None:
        csv.writer(fh, lineterminator="\n").writerows(
            [[_fmt(cell) if not isinstance(cell, str) else cell for cell in row] for row in rows]
        )

    return write


@dataclass
class CommandOutput:
    text: str
    payload: dict
    csv_write: Callable[[IO[str]], None]


def _seed_type(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {value}")
    return value


def _resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(SEED_ENV_VAR)
    if env is None:
        return DEFAULT_SEED
    try:
        return _seed_type(env)
    except ValueError as exc:
        raise DomainError(f"bad {SEED_ENV_VAR} value {env!r}: {exc}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"expected comma-separated numbers, got {text!r}") from exc


def _cmd_kelly(args: argparse.Namespace) -> CommandOutput:
    bet = betmath.BetSpec(p=args.p, d=args.d)
    f = betmath.kelly_fraction(bet)
    try:
        f_c = betmath.critical_fraction(bet)
    except NoPositiveRoot:
        f_c = None
    growth = betmath.asymptotic_growth(bet, f) if f < 1.0 else math.log1p(bet.d)
    payload = {"f": f, "f_c": f_c, "growth": growth}
    return CommandOutput(
        text=_kv_text(payload),
        payload=payload,
        csv_write=_rows_writer([["f", "f_c", "growth"], [f, f_c, growth]]),
    )


def _cmd_simulate(args: argparse.Namespace) -> CommandOutput:
    config = wealthsim.SimConfig(
        bet=betmath.BetSpec(p=args.p, d=args.d),
        f=args.f,
        n_steps=args.steps,
        n_paths=args.paths,
        root_seed=_resolve_seed(args.seed),
        w0=args.w0,
    )
    paths = wealthsim.simulate_paths(config)
    stats = [wealthsim.path_stats(p) for p in paths]
    growth = np.asarray([s.growth_rate for s in stats])
    payload = {
        "n_paths": config.n_paths,
        "n_steps": config.n_steps,
        "f": config.f,
        "asymptotic_growth": betmath.asymptotic_growth(config.bet, config.f),
        "mean_growth": float(growth.mean()),
        "se_growth": float(growth.std(ddof=1) / math.sqrt(len(stats)))
        if len(stats) > 1
        else None,
        "mean_worst_loss": float(np.mean([s.worst_loss for s in stats])),
        "mean_drawdown": float(np.mean([s.drawdown for s in stats])),
        "ruin_fraction": float(np.mean([s.ruined for s in stats])),
    }
    return CommandOutput(
        text=_kv_text(payload),
        payload=payload,
        csv_write=lambda fh: wealthsim.write_paths_csv(paths, fh),
    )


def _cmd_grational(args: argparse.Namespace) -> CommandOutput:
    problem = grational.GrationalProblem(
        bet=betmath.BetSpec(p=args.p, d=args.d),
        n_steps=args.steps,
        loss_kind=grational.LossKind(args.loss),
        loss_threshold=args.threshold,
        max_prob=args.max_prob,
    )
    budget = grational.McBudget(n_paths=args.paths, root_seed=_resolve_seed(args.seed))
    solution = grational.solve(
        problem, budget, grid_step=args.grid_step, f_max=args.f_max
    )
    payload = {
        "f_star": solution.f_star,
        "expected_growth": solution.expected_growth.value,
        "se_growth": solution.expected_growth.se,
        "violation_prob": solution.violation_prob.value,
        "se_violation": solution.violation_prob.se,
        "feasible": solution.feasible,
    }
    grid = solution.grid
    rows: list[Sequence[object]] = [
        ["f", "e_growth", "se_growth", "p_violation", "se_violation", "feasible"]
    ]
    for i in range(grid.f.size):
        rows.append(
            [
                float(grid.f[i]),
                float(grid.e_growth[i]),
                float(grid.se_growth[i]),
                float(grid.p_violation[i]),
                float(grid.se_violation[i]),
                int(grid.feasible[i]),
            ]
        )
    return CommandOutput(
        text=_kv_text(payload), payload=payload, csv_write=_rows_writer(rows)
    )


def _cmd_stats(args: argparse.Namespace) -> CommandOutput:
    with open(args.input, newline="") as fh:
        series = sysstats.read_trades_csv(fh)
    which = sysstats.Filter(args.filter)
    label = {"long": "Long", "short": "Short", "all": "All"}[which.value]
    row = sysstats.summarize(series, which)
    fields = sysstats.display_fields(row)

    text = sysstats.format_summary_text([(label, row)])
    payload: dict = {label: fields}
    if args.years is not None:
        avg = sysstats.average_gain_per_year(row, args.years)
        text += f"\navg_gain_per_year {_fmt(avg)}"
        payload["avg_gain_per_year"] = avg
    if args.ppgs_alpha is not None:
        label_cls = sysstats.ppgs_classify(series, alpha=args.ppgs_alpha).value
        text += f"\nclassification {label_cls}"
        payload["classification"] = label_cls
    rows = [["filter", *sysstats.SUMMARY_COLUMNS], [label, *fields.values()]]
    return CommandOutput(text=text, payload=payload, csv_write=_rows_writer(rows))


def _cmd_pennies(args: argparse.Namespace) -> CommandOutput:
    seed = _resolve_seed(args.seed)
    if args.spy:
        transcript = games.spy_match(args.p1, args.rounds, seed, stake=args.stake)
    else:
        if args.p2 is None:
            raise DomainError("--p2 is required unless --spy is given")
        transcript = games.play_match(
            args.p1, args.p2, args.rounds, seed, stake=args.stake, rake=args.rake
        )
    payload = {
        "rounds": transcript.n_rounds,
        "stake": transcript.stake,
        "rake": transcript.rake,
        "total_gain1": transcript.total_gain1,
        "total_gain2": transcript.total_gain2,
        "mean_gain1": transcript.total_gain1 / transcript.n_rounds,
        "mean_gain2": transcript.total_gain2 / transcript.n_rounds,
    }
    return CommandOutput(
        text=_kv_text(payload),
        payload=payload,
        csv_write=lambda fh: games.write_transcript_csv(transcript, fh),
    )


def _cmd_miller(args: argparse.Namespace) -> CommandOutput:
    auction = millerclear.AuctionSpec(
        n_shares=args.shares, m_buyers=args.buyers, short_supply=args.short
    )
    level = auction.quantile_level()
    seed = _resolve_seed(args.seed)
    prices = []
    for sd in args.sds:
        if args.mode == "normal":
            dist: millerclear.OpinionDistribution = millerclear.NormalOpinions(
                mean=args.mean, sd=sd
            )
        else:
            dist = millerclear.sample_normal_opinions(args.mean, sd, args.buyers, seed)
        prices.append(millerclear.clearing_price(dist, auction))
    payload = {
        "mean": args.mean,
        "quantile_level": level,
        "mode": args.mode,
        "sds": args.sds,
        "prices": prices,
    }
    text = "\n".join(f"{_fmt(sd)} {_fmt(price)}" for sd, price in zip(args.sds, prices))
    rows: list[Sequence[object]] = [["sd", "clearing_price"]]
    rows += [[sd, price] for sd, price in zip(args.sds, prices)]
    return CommandOutput(text=text, payload=payload, csv_write=_rows_writer(rows))


def _cmd_popp(args: argparse.Namespace) -> CommandOutput:
    ranking = popp.classify_phase(args.state)
    multipliers = {phase: popp.kelly_multiplier(phase) for phase, _ in ranking}
    top_phase = ranking[0][0]
    payload = {
        "ranking": [{"phase": phase.value, "score": score} for phase, score in ranking],
        "kelly_multiplier": multipliers[top_phase],
    }
    text = "\n".join(f"{phase.value} {score}" for phase, score in ranking)
    text += f"\nkelly_multiplier {_fmt(multipliers[top_phase])}"
    rows: list[Sequence[object]] = [["phase", "score", "kelly_multiplier"]]
    rows += [[phase.value, score, multipliers[phase]] for phase, score in ranking]
    return CommandOutput(text=text, payload=payload, csv_write=_rows_writer(rows))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betlab",
        description="Bet sizing, wealth simulation, constrained growth, "
        "trading statistics, guessing games, auction clearing, and "
        "strategy-lifecycle classification.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed",
        type=_seed_type,
        default=None,
        help=f"root seed (default: ${SEED_ENV_VAR} or {DEFAULT_SEED})",
    )
    common.add_argument(
        "--format", choices=["text", "json", "csv"], default="text",
        help="output format (default text)",
    )
    common.add_argument("--output", default=None, help="write output to this file")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("kelly", parents=[common], help="optimal fraction and growth")
    p.add_argument("--p", type=float, required=True, help="win probability")
    p.add_argument("--d", type=float, required=True, help="odds paid per unit on a win")
    p.set_defaults(handler=_cmd_kelly)

    p = sub.add_parser("simulate", parents=[common], help="fixed-fraction wealth paths")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--f", type=float, required=True, help="betting fraction")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--paths", type=int, required=True)
    p.add_argument("--w0", type=float, default=1.0, help="starting wealth")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser(
        "grational", parents=[common], help="growth max under a loss-probability cap"
    )
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--steps", type=int, required=True, help="horizon length")
    p.add_argument(
        "--loss", choices=[k.value for k in grational.LossKind], default="worstloss"
    )
    p.add_argument("--threshold", type=float, required=True, help="loss size in nats")
    p.add_argument("--max-prob", type=float, required=True, help="violation cap u")
    p.add_argument("--paths", type=int, default=2000)
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--f-max", type=float, default=0.999)
    p.set_defaults(handler=_cmd_grational)

    p = sub.add_parser("stats", parents=[common], help="summary row from a trades CSV")
    p.add_argument("--input", required=True, help="CSV with header period_id,side,pnl")
    p.add_argument("--filter", choices=["long", "short", "all"], default="all")
    p.add_argument("--years", type=float, default=None, help="report average P&L per year")
    p.add_argument(
        "--ppgs-alpha", type=float, default=None,
        help="classify the per-period expectation sign at this significance level",
    )
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("pennies", parents=[common], help="matching-pennies matches")
    p.add_argument("--p1", type=games.parse_strategy, required=True)
    p.add_argument("--p2", type=games.parse_strategy, default=None)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--stake", type=float, default=1.0, help="stake per round")
    p.add_argument("--rake", type=float, default=0.0, help="per-round referee fee")
    p.add_argument(
        "--spy", action="store_true",
        help="player 2 sees player 1's current choice before choosing",
    )
    p.set_defaults(handler=_cmd_pennies)

    p = sub.add_parser("miller", parents=[common], help="auction clearing vs dispersion")
    p.add_argument("--mean", type=float, default=50.0)
    p.add_argument("--sds", type=_float_list, required=True, help="comma-separated sds")
    p.add_argument("--shares", type=int, required=True)
    p.add_argument("--buyers", type=int, required=True)
    p.add_argument("--short", type=int, default=0, help="short-sold extra supply")
    p.add_argument("--mode", choices=["normal", "empirical"], default="normal")
    p.set_defaults(handler=_cmd_miller)

    p = sub.add_parser("popp", parents=[common], help="classify a lifecycle sign vector")
    p.add_argument(
        "--state",
        type=popp.StateVars.from_tokens,
        required=True,
        help="nine comma-separated levels: ret,vol,sr,spd,pop,lev,sdiv,slink,srob",
    )
    p.set_defaults(handler=_cmd_popp)
    return parser


def _emit(args: argparse.Namespace, result: CommandOutput) -> None:
    def write(fh: IO[str]) -> None:
        if args.format == "text":
            fh.write(result.text + "\n")
        elif args.format == "json":
            fh.write(json.dumps(result.payload, indent=2, allow_nan=False) + "\n")
        else:
            result.csv_write(fh)

    if args.output is None:
        write(sys.stdout)
    else:
        with open(args.output, "w", newline="") as fh:
            write(fh)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors and --help
        return int(exc.code or 0)
    try:
        result = args.handler(args)
        _emit(args, result)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
