#!/usr/bin/env python3
"""Round-robin matching-pennies tournament between the built-in strategies.

Every ordered pair plays one seeded match; the table reports player 1's
mean gain per round.  The coin flipper should sit at zero against
everything; the pattern-based strategies should beat the predictable
ones and lose nothing to the random ones.

Output CSV columns: player1, player2, rounds, mean_gain1.
"""

import argparse
import csv
import sys

from betlab.games import parse_strategy, play_match
from betlab.seeding import DEFAULT_SEED

LINEUP = [
    "coinflip",
    "biased:0.6",
    "biased:0.8",
    "fixed:H",
    "alternator",
    "exploiter:k=1",
    "exploiter:k=2",
    "bestresponse:0.6",
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rounds", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--output", default=None)
    args = ap.parse_args()

    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["player1", "player2", "rounds", "mean_gain1"])
    for spec1 in LINEUP:
        for spec2 in LINEUP:
            transcript = play_match(
                parse_strategy(spec1), parse_strategy(spec2),
                args.rounds, root_seed=args.seed,
            )
            writer.writerow([
                spec1, spec2, args.rounds,
                format(transcript.total_gain1 / args.rounds, ".12g"),
            ])
    if args.output:
        fh.close()


if __name__ == "__main__":
    main()
