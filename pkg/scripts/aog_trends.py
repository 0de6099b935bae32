"""Closed-form equilibrium welfare and POA of the alternating-ordering game
for several mine payoffs, one CSV row per (mu, b)."""

import argparse
import csv
import sys
from fractions import Fraction

from capgames.aog import AogParams, PoaUndefined, poa, w_best_closed_form, w_eq_closed_form
from capgames.rational import format_rational, parse_rational


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=10)
    ap.add_argument("--rho", type=parse_rational, default=Fraction(1, 5))
    ap.add_argument("--mu", type=parse_rational, nargs="+",
                    default=[Fraction(-4, 5), Fraction(-3, 5), Fraction(-2, 5)])
    ap.add_argument("--max-b", type=int, default=24)
    args = ap.parse_args(argv)

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["mu", "b", "w_eq", "w_best", "poa"])
    for mu in args.mu:
        p = AogParams(args.M, args.rho, mu)
        for b in range(1, args.max_b + 1):
            try:
                ratio = format_rational(poa(p, b))
            except PoaUndefined:
                ratio = ""
            out.writerow([format_rational(mu), b, format_rational(w_eq_closed_form(p, b)),
                          format_rational(w_best_closed_form(p, b)), ratio])
    return 0


if __name__ == "__main__":
    sys.exit(main())
