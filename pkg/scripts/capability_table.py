"""Property verdicts (PP, BWR, AP, BFR) for every counterexample generator,
as a small CSV table."""

import argparse
import csv
import sys
from fractions import Fraction

from capgames import constructions as cx
from capgames.gmg import GOLD, MINE
from capgames.properties import check_all, sweep

F = Fraction


def instances():
    yield "cex_pp_positive d=(1,2)", "PP", cx.cex_pp_positive([1, 2]).game, None
    yield "cex_pp_zero d=(0,1)", "PP", cx.cex_pp_zero([0, 1]).game, None
    yield "cex_ap d=1", "AP", cx.cex_ap([1]), None
    yield "gmg_cex_pp gold (1,1/2)", "PP", cx.gmg_cex_pp(GOLD, [1, F(1, 2)]).layout, [1, 2, 3]
    yield "gmg_cex_pp gold (1,2)", "PP", cx.gmg_cex_pp(GOLD, [1, 2]).layout, None
    yield "gmg_cex_pp mine (-2,-1)", "PP", cx.gmg_cex_pp(MINE, [-2, -1]).layout, None
    yield "gmg_cex_pp mine (-1,-2)", "PP", cx.gmg_cex_pp(MINE, [-1, -2]).layout, [1, 2, 3]
    yield "gmg_cex_bwr (1,9/10,1/2)", "BWR", cx.gmg_cex_bwr([1, F(9, 10), F(1, 2)], 3).layout, None
    yield "gmg_cex_bfr (1,1)", "BFR", cx.gmg_cex_bfr([1, 1]).layout, None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=None)
    args = ap.parse_args(argv)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["instance", "target", "levels", "PP", "BWR", "AP", "BFR"])
    for name, target, obj, levels in instances():
        sr = sweep(obj, levels, budget=args.budget)
        v = check_all(sr)
        lv = f"{sr.levels[0].b}..{sr.levels[-1].b} of {sr.max_level}"
        out.writerow([name, target, lv] + [v[k].status for k in ("PP", "BWR", "AP", "BFR")])
    return 0


if __name__ == "__main__":
    sys.exit(main())
