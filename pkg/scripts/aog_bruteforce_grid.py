"""Brute-force check of the alternating-ordering closed forms on a grid of
(M, rho, mu, b).  Prints one CSV row per cell and exits non-zero on any
mismatch."""

import argparse
import csv
import sys
import time
from fractions import Fraction

from capgames.aog import AogParams, build_layout, w_best_closed_form, w_eq_closed_form
from capgames.rational import format_rational
from capgames.solvers import GmgView, enumerate_pnes, max_welfare

F = Fraction
POINTS = [(F(1, 5), F(-1, 2)), (F(1, 4), F(-1)), (F(2, 5), F(-3, 2)), (F(1, 10), F(-1, 5)),
          (F(3, 10), F(-8, 5))]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, nargs="+", default=[1, 2])
    args = ap.parse_args(argv)

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["M", "rho", "mu", "b", "pnes", "w_eq_closed", "w_eq_set", "w_best_closed",
                  "w_best_bruteforce", "ok"])
    failures = 0
    t0 = time.perf_counter()
    for M in args.M:
        for rho, mu in POINTS:
            p = AogParams(M, rho, mu)
            for b in range(1, 2 * M + 4):
                view = GmgView(build_layout(p, b))
                eq = enumerate_pnes(view)
                opt = max_welfare(view)[0]
                ws = sorted(set(eq.welfares))
                ok = ws == [w_eq_closed_form(p, b)] and opt == w_best_closed_form(p, b)
                failures += not ok
                out.writerow([M, format_rational(rho), format_rational(mu), b, len(eq),
                              format_rational(w_eq_closed_form(p, b)),
                              " ".join(map(format_rational, ws)),
                              format_rational(w_best_closed_form(p, b)),
                              format_rational(opt), ok])
    print(f"# {failures} mismatches, {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
