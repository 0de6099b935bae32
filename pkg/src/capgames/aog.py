"""The alternating-ordering game.

Two players, two lines, ``4M + 2`` resources.  Blocks of four repeat
``gold@1, gold@0, mine@1, mine@0`` for ``M`` rounds, then two closing gold
(line 1, line 0).  Payoffs are normalized to ``r_g = (1, rho)`` and
``r_m = (mu, mu)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .gmg import GOLD, MINE, GmgLayout, IntervalStrategy, Resource, welfare
from .rational import parse_rational


class OutsideInterior(ValueError):
    pass


class PoaUndefined(ArithmeticError):
    pass


@dataclass(frozen=True)
class AogParams:
    M: int
    rho: Fraction
    mu: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", parse_rational(self.rho))
        object.__setattr__(self, "mu", parse_rational(self.mu))
        if self.M < 1:
            raise ValueError("M must be at least 1")
        if not 0 < self.rho < Fraction(1, 2):
            raise ValueError("rho must lie in (0, 1/2)")
        if not self.mu < 0:
            raise ValueError("mu must be negative")

    @property
    def interior(self) -> bool:
        return -2 + self.rho < self.mu < -self.rho

    @property
    def saturation(self) -> int:
        """Level from which every extra segment is useless: 2M + 2."""
        return 2 * self.M + 2

    @property
    def last(self) -> int:
        return 4 * self.M + 1


def build_layout(params: AogParams, b: int = 1) -> GmgLayout:
    M = params.M
    res = []
    for j in range(M):
        for off, line, kind in ((0, 1, GOLD), (1, 0, GOLD), (2, 1, MINE), (3, 0, MINE)):
            res.append(Resource(Fraction(4 * j + off), line, kind))
    res.append(Resource(Fraction(4 * M), 1, GOLD))
    res.append(Resource(Fraction(4 * M + 1), 0, GOLD))
    return GmgLayout(tuple(res), K=2, players=2,
                     gold_payoff=(Fraction(1), params.rho),
                     mine_payoff=(params.mu, params.mu), bound=b)


def _require_interior(params: AogParams) -> None:
    if not params.interior:
        raise OutsideInterior(
            f"outside interior region: need -2 + rho < mu < -rho (rho={params.rho}, mu={params.mu})")


def w_eq_closed_form(params: AogParams, b: int) -> Fraction:
    """Common welfare of every PNE at level ``b``."""
    _require_interior(params)
    M, rho, mu = params.M, params.rho, params.mu
    if b <= 2 * M + 1:
        return (2 * M + 1) * (1 + mu) + 2 * (1 - rho) + (2 * rho - mu - 1) * b
    return (4 * M + 4) * rho


def w_best_closed_form(params: AogParams, b: int) -> Fraction:
    """Centralized optimum at level ``b``."""
    return 2 * params.M + 2 + params.mu * max(2 * params.M + 1 - b, 0)


def poa(params: AogParams, b: int) -> Fraction:
    w_eq = w_eq_closed_form(params, b)
    if w_eq <= 0:
        raise PoaUndefined(f"POA undefined: equilibrium welfare {w_eq} is not positive")
    return w_best_closed_form(params, b) / w_eq


def poa_piecewise(params: AogParams, b: int) -> Fraction:
    """The same ratio written as 1 + (1 - 2 rho)(b - 1) / (...)."""
    M, rho, mu = params.M, params.rho, params.mu
    if b > 2 * M + 1:
        return 1 / (2 * rho)
    den = 2 * M + 2 + 2 * M * mu + (2 * rho - mu - 1) * (b - 1)
    return 1 + (1 - 2 * rho) * (b - 1) / den


# --------------------------------------------------------------------------
# strategy forms

@dataclass(frozen=True)
class FormClass:
    form: Optional[str]
    c: int
    gold: int
    mines: int
    segments: int

    def expected_counts(self, M: int) -> Optional[tuple[int, int]]:
        c = self.c
        return {
            "S1": (M + c + 1, M - c),
            "S2": (M + c + 1, M - c),
            "S3": (M + c + 1, M - c + 1),
            "S4": (M + c, M - c),
        }.get(self.form)


def coverage_counts(layout: GmgLayout, f: IntervalStrategy) -> tuple[int, int]:
    cov = f.covers(layout)
    gold = sum(1 for p in cov if layout.resources[p].kind == GOLD)
    return gold, len(cov) - gold


def classify_form(f: IntervalStrategy, M: int) -> FormClass:
    """Match the line-1 intervals against the four optimal shapes.

    Inner left endpoints must sit just after a line-0 mine (``4j + 3``) and
    inner right endpoints on a line-1 gold (``4j``); the outer ends decide
    which shape applies.
    """
    last = 4 * M + 1
    if len(f.assignment) != last + 1:
        raise ValueError(f"strategy has {len(f.assignment)} positions, expected {last + 1}")
    iv = f.intervals(1)
    layout = build_layout(AogParams(M, Fraction(1, 4), Fraction(-1)))
    gold, mines = coverage_counts(layout, f)
    at_start = bool(iv) and iv[0][0] == 0
    at_end = bool(iv) and iv[-1][1] == last
    lefts = [a for k, (a, _) in enumerate(iv) if not (k == 0 and at_start)]
    rights = [a for k, (_, a) in enumerate(iv) if not (k == len(iv) - 1 and at_end)]
    ok = all(a % 4 == 3 for a in lefts) and all(a % 4 == 0 for a in rights)
    if at_start and at_end:
        form, c, k = "S1", len(iv) - 1, 2 * len(iv) - 1
    elif not at_start and not at_end:
        form, c, k = "S2", len(iv), 2 * len(iv) + 1
    elif at_start:
        form, c, k = "S3", len(iv), 2 * len(iv)
    else:
        form, c, k = "S4", len(iv), 2 * len(iv)
    assert k == f.segments
    return FormClass(form if ok else None, c, gold, mines, k)


def payoff_cover_bound(params: AogParams, gold_a: int, gold_b: int, mines_b: int) -> Fraction:
    """Upper bound on B's payoff given A covers ``gold_a`` gold."""
    return (1 - params.rho) * (2 * params.M + 2 - gold_a) + params.rho * gold_b + params.mu * mines_b


# --------------------------------------------------------------------------
# witnesses outside the interior

@dataclass(frozen=True)
class Witness:
    params: AogParams
    first: tuple[IntervalStrategy, IntervalStrategy]
    second: tuple[IntervalStrategy, IntervalStrategy]

    def welfares(self) -> tuple[Fraction, Fraction]:
        layout = build_layout(self.params, 2)
        return welfare(layout, self.first), welfare(layout, self.second)


def witness_min_M(rho: Fraction, mu: Fraction) -> int:
    rho, mu = parse_rational(rho), parse_rational(mu)
    if mu >= -rho:
        bound = 2 * (rho + mu) / (1 - rho) + 1
    elif mu <= -2 + rho:
        bound = 2 * (-mu - rho) / (1 - rho)
    else:
        raise OutsideInterior("no witness exists inside the interior region")
    M = max(1, int(bound // 1) + 1)
    while not M > bound:
        M += 1
    return M


def necessary_condition_witnesses(rho, mu, M: Optional[int] = None) -> Witness:
    """Two b = 2 PNEs with different welfare, for (rho, mu) off the interior."""
    rho, mu = parse_rational(rho), parse_rational(mu)
    if -2 + rho < mu < -rho:
        raise OutsideInterior("no witness exists: all PNEs share one welfare inside the interior")
    M = witness_min_M(rho, mu) if M is None else M
    params = AogParams(M, rho, mu)
    size, last, h = 4 * M + 2, 4 * M + 1, 4 * (M // 2)

    def f(*iv: tuple[int, int]) -> IntervalStrategy:
        return IntervalStrategy.from_intervals(size, iv)

    if mu >= -rho:
        first = (f((0, 0)), f((0, 4 * M)))
        second = (f((0, h)), f((h + 3, last)))
    else:
        first = (f((4 * M - 1, last)), f((3, last)))
        second = (f((h + 3, last)), f((0, h)))
    return Witness(params, first, second)


# --------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class AogRow:
    b: int
    w_eq: Optional[Fraction]
    w_eq_bruteforce: Optional[Fraction]
    w_best: Fraction
    poa: Optional[Fraction]


def sweep_rows(params: AogParams, levels, bruteforce: bool = False,
               budget: Optional[int] = None) -> list[AogRow]:
    from .solvers import GmgView, enumerate_pnes

    rows = []
    for b in levels:
        w_eq = w_eq_closed_form(params, b) if params.interior else None
        try:
            ratio = poa(params, b) if params.interior else None
        except PoaUndefined:
            ratio = None
        brute = None
        if bruteforce:
            eq = enumerate_pnes(GmgView(build_layout(params, b)), budget)
            ws = set(eq.welfares)
            brute = ws.pop() if len(ws) == 1 else None
        rows.append(AogRow(b, w_eq, brute, w_best_closed_form(params, b), ratio))
    return rows
