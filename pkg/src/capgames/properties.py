"""Capability sweeps and the four capability-preference checks.

For a level ``b`` let bestw(b) / worstw(b) be the best / worst equilibrium
welfare.  The checks compare levels:

* PP:  bestw(b) <= worstw(b + 1)
* BWR: bestw(b) <= worstw(b_bar)
* AP:  bestw(b + 1) <= worstw(b)
* BFR: bestw(b) <= worstw(1) for b >= 2

A violation among the computed levels fails the check.  A pass needs every
level 1..b_bar; anything less is inconclusive.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .core import DncGame, longest_path_weight
from .gmg import EnumerationTooLarge, GmgLayout
from .rational import NEG_INF, format_rational
from .solvers import SearchBudgetExceeded, enumerate_pnes, max_welfare, view_for

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
Instance = Union[DncGame, GmgLayout]


@dataclass(frozen=True)
class LevelResult:
    b: int
    bestw: Optional[Fraction]
    worstw: Optional[Fraction]
    centralized: Optional[Fraction] = None
    equilibria: int = 0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class SweepResult:
    levels: list[LevelResult]
    max_level: int
    notes: list[str] = field(default_factory=list)

    def level(self, b: int) -> Optional[LevelResult]:
        for r in self.levels:
            if r.b == b and r.ok:
                return r
        return None

    @property
    def complete(self) -> bool:
        return all(self.level(b) is not None for b in range(1, self.max_level + 1))

    def bestw(self, b: int):
        r = self.level(b)
        return None if r is None else (NEG_INF if r.bestw is None else r.bestw)

    def worstw(self, b: int):
        r = self.level(b)
        return None if r is None else (NEG_INF if r.worstw is None else r.worstw)


def max_level(obj: Instance) -> int:
    """b_bar: |E| for a layout, heaviest simple s-t path for a network."""
    if isinstance(obj, GmgLayout):
        return obj.max_bound
    return longest_path_weight(obj)


def _solve_level(args) -> LevelResult:
    obj, b, centralized, budget = args
    try:
        view = view_for(obj, b)
        eq = enumerate_pnes(view, budget)
        opt = max_welfare(view, budget)[0] if centralized else None
        return LevelResult(b, eq.bestw, eq.worstw, opt, len(eq))
    except (SearchBudgetExceeded, EnumerationTooLarge) as exc:
        return LevelResult(b, None, None, None, 0, str(exc))


def sweep(obj: Instance, levels: Optional[Iterable[int]] = None, *,
          centralized: bool = False, budget: Optional[int] = None,
          workers: int = 1) -> SweepResult:
    """bestw / worstw for every requested level (default 1..b_bar)."""
    top = max_level(obj)
    wanted = list(range(1, top + 1)) if levels is None else sorted(set(levels))
    notes = []
    if any(b > top for b in wanted):
        notes.append(f"levels capped at b_bar={top}")
        wanted = [b for b in wanted if b <= top]
    jobs = [(obj, b, centralized, budget) for b in wanted]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_solve_level, jobs))
    else:
        rows = [_solve_level(j) for j in jobs]
    for r in rows:
        if not r.ok:
            notes.append(f"b={r.b}: {r.error}")
    return SweepResult(rows, top, notes)


@dataclass(frozen=True)
class Verdict:
    prop: str
    status: str
    witness: Optional[tuple] = None

    def __str__(self) -> str:
        if self.witness is None:
            return f"{self.prop}: {self.status}"
        (b1, w1), (b2, w2) = self.witness
        return (f"{self.prop}: {self.status} (bestw({b1})={format_rational(w1)} > "
                f"worstw({b2})={format_rational(w2)})")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL


def _check(name: str, sr: SweepResult, pairs) -> Verdict:
    """``pairs`` yields (b_best, b_worst) whose order must hold."""
    for b1, b2 in pairs:
        hi, lo = sr.bestw(b1), sr.worstw(b2)
        if hi is None or lo is None:
            continue
        if hi > lo:
            return Verdict(name, FAIL, ((b1, hi), (b2, lo)))
    return Verdict(name, PASS if sr.complete else INCONCLUSIVE)


def check_pp(sr: SweepResult) -> Verdict:
    return _check("PP", sr, ((b, b + 1) for b in range(1, sr.max_level)))


def check_bwr(sr: SweepResult) -> Verdict:
    return _check("BWR", sr, ((b, sr.max_level) for b in range(1, sr.max_level + 1)))


def check_ap(sr: SweepResult) -> Verdict:
    return _check("AP", sr, ((b + 1, b) for b in range(1, sr.max_level)))


def check_bfr(sr: SweepResult) -> Verdict:
    return _check("BFR", sr, ((b, 1) for b in range(2, sr.max_level + 1)))


def check_all(sr: SweepResult) -> dict[str, Verdict]:
    return {v.prop: v for v in (check_pp(sr), check_bwr(sr), check_ap(sr), check_bfr(sr))}


def sweep_csv(sr: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["b", "bestw", "worstw", "centralized_best"])
    for r in sr.levels:
        cells = [r.bestw, r.worstw, r.centralized]
        w.writerow([r.b] + ["" if c is None else format_rational(c) for c in cells])
    for v in check_all(sr).values():
        buf.write(f"# {v}\n")
    for note in sr.notes:
        buf.write(f"# note: {note}\n")
    return buf.getvalue()
