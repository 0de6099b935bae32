"""Gold-and-Mines games.

Resources sit on ``K`` horizontal lines at distinct x-coordinates.  A player
picks a piecewise-constant function from x to a line; the resources it hits
are the ones it covers.  Payoffs depend only on the line chosen at each
resource, so strategies are stored as one line index per resource position.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .core import DNCDA, DncGame, Edge, Path
from .rational import format_rational, parse_rational, parse_table

GOLD = "gold"
MINE = "mine"


class LayoutError(ValueError):
    pass


class EnumerationTooLarge(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Resource:
    x: Fraction
    line: int
    kind: str


@dataclass(frozen=True)
class GmgLayout:
    resources: tuple[Resource, ...]
    K: int
    players: int
    gold_payoff: tuple[Fraction, ...]
    mine_payoff: tuple[Fraction, ...]
    bound: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "resources", tuple(sorted(self.resources)))

    @property
    def size(self) -> int:
        return len(self.resources)

    def r(self, p: int, load: int) -> Fraction:
        """Per-player payoff of resource ``p`` at ``load``."""
        table = self.gold_payoff if self.resources[p].kind == GOLD else self.mine_payoff
        return table[load - 1]

    def with_bound(self, bound: int) -> "GmgLayout":
        return GmgLayout(self.resources, self.K, self.players,
                         self.gold_payoff, self.mine_payoff, bound)

    def with_players(self, players: int) -> "GmgLayout":
        return GmgLayout(self.resources, self.K, players,
                         self.gold_payoff, self.mine_payoff, self.bound)

    @property
    def gold_positions(self) -> list[int]:
        return [p for p, r in enumerate(self.resources) if r.kind == GOLD]

    @property
    def max_bound(self) -> int:
        """b-bar: with |E| segments every assignment is realizable."""
        return max(1, self.size)


def validate_layout(layout: GmgLayout) -> list[str]:
    problems = []
    n = layout.players
    if n < 1:
        problems.append(f"players={n}")
    if layout.K < 1:
        problems.append(f"K={layout.K}")
    if layout.bound < 1:
        problems.append(f"bound={layout.bound}")
    xs = [r.x for r in layout.resources]
    if len(set(xs)) != len(xs):
        problems.append("resource x-coordinates must be distinct")
    for r in layout.resources:
        if not 0 <= r.line < layout.K:
            problems.append(f"line {r.line} out of range at x={r.x}")
        if r.kind not in (GOLD, MINE):
            problems.append(f"unknown kind {r.kind!r}")
    kinds = {r.kind for r in layout.resources}
    if GOLD in kinds:
        if len(layout.gold_payoff) < n:
            problems.append("gold payoff table shorter than player count")
        elif any(v <= 0 for v in layout.gold_payoff[:n]):
            problems.append("gold payoff must be positive")
    if MINE in kinds:
        if len(layout.mine_payoff) < n:
            problems.append("mine payoff table shorter than player count")
        elif any(v >= 0 for v in layout.mine_payoff[:n]):
            problems.append("mine payoff must be negative")
    return problems


@dataclass(frozen=True, order=True)
class IntervalStrategy:
    assignment: tuple[int, ...]

    @property
    def segments(self) -> int:
        a = self.assignment
        return 1 + sum(1 for u, v in zip(a, a[1:]) if u != v)

    def covers(self, layout: GmgLayout) -> list[int]:
        return [p for p, r in enumerate(layout.resources) if self.assignment[p] == r.line]

    def intervals(self, line: int) -> list[tuple[int, int]]:
        """Maximal runs of positions on ``line`` as closed index intervals."""
        out, start = [], None
        for p, y in enumerate(self.assignment):
            if y == line and start is None:
                start = p
            elif y != line and start is not None:
                out.append((start, p - 1))
                start = None
        if start is not None:
            out.append((start, len(self.assignment) - 1))
        return out

    @classmethod
    def from_intervals(cls, size: int, intervals: Sequence[tuple[int, int]],
                       line: int = 1, other: int = 0) -> "IntervalStrategy":
        """Two-line helper: positions inside ``intervals`` go to ``line``."""
        a = [other] * size
        for lo, hi in intervals:
            for p in range(lo, hi + 1):
                a[p] = line
        return cls(tuple(a))

    def __str__(self) -> str:
        return "".join(str(y) for y in self.assignment)


GmgProfile = tuple[IntervalStrategy, ...]


def coverage_loads(layout: GmgLayout, profile: Sequence[IntervalStrategy]) -> list[int]:
    x = [0] * layout.size
    for f in profile:
        for p in f.covers(layout):
            x[p] += 1
    return x


def payoff(layout: GmgLayout, profile: Sequence[IntervalStrategy], i: int) -> Fraction:
    x = coverage_loads(layout, profile)
    return sum((layout.r(p, x[p]) for p in profile[i].covers(layout)), Fraction(0))


def welfare(layout: GmgLayout, profile: Sequence[IntervalStrategy]) -> Fraction:
    x = coverage_loads(layout, profile)
    return sum((x[p] * layout.r(p, x[p]) for p in range(layout.size) if x[p]), Fraction(0))


def potential(layout: GmgLayout, profile: Sequence[IntervalStrategy]) -> Fraction:
    """phi = sum over resources of r(1) + ... + r(x)."""
    x = coverage_loads(layout, profile)
    return sum((layout.r(p, i) for p in range(layout.size) for i in range(1, x[p] + 1)),
               Fraction(0))


def gold_welfare(layout: GmgLayout, x: int) -> Fraction:
    """w_g(x) = x * r_g(x)."""
    if not 1 <= x <= len(layout.gold_payoff):
        raise ValueError(f"load {x} outside 1..{len(layout.gold_payoff)}")
    return x * layout.gold_payoff[x - 1]


def strategy_count(size: int, K: int, b: int) -> int:
    if size == 0:
        return 1
    return sum(math.comb(size - 1, j) * K * (K - 1) ** j for j in range(min(b, size)))


def iter_strategies(layout: GmgLayout, b: Optional[int] = None) -> Iterator[IntervalStrategy]:
    b = layout.bound if b is None else b
    E, K = layout.size, layout.K
    a: list[int] = []

    def rec(changes: int) -> Iterator[IntervalStrategy]:
        if len(a) == E:
            yield IntervalStrategy(tuple(a))
            return
        for y in range(K):
            c = changes + (1 if a and a[-1] != y else 0)
            if c > b - 1:
                continue
            a.append(y)
            yield from rec(c)
            a.pop()

    yield from rec(0)


def enumerate_strategies(layout: GmgLayout, b: Optional[int] = None,
                         limit: int = 1_000_000) -> list[IntervalStrategy]:
    """All assignments with at most ``b - 1`` line changes, lexicographic."""
    b = layout.bound if b is None else b
    total = strategy_count(layout.size, layout.K, b)
    if total > limit:
        raise EnumerationTooLarge(f"{total} strategies exceed the limit {limit}")
    return list(iter_strategies(layout, b))


# --------------------------------------------------------------------------
# conversion to a DncDa game

def _vertex(i: int, j: int) -> str:
    return f"v{i}_{j}"


@dataclass(frozen=True)
class DncdaImage:
    """A GMG rendered as a DncDa game.

    Column ``i`` of the grid sits just before resource ``i``; the horizontal
    default edge leaving ``v{i}_{j}`` carries ``-r`` of resource ``i`` when the
    resource lies on line ``j``.  A path pays one unit to enter the grid and
    one unit per line switch, so a ``k``-segment strategy has length ``k``.
    """

    layout: GmgLayout
    game: DncGame

    def path_of(self, f: IntervalStrategy) -> Path:
        E = self.layout.size
        path = ["s", _vertex(0, f.assignment[0] if E else 0)]
        for i in range(E):
            j = f.assignment[i]
            if i > 0 and j != f.assignment[i - 1]:
                path.append(_vertex(i, j))
            path.append(_vertex(i + 1, j))
        path.append("t")
        return tuple(path)

    def strategy_of(self, path: Path) -> IntervalStrategy:
        """Line used by each horizontal edge; redundant switches collapse."""
        a = [0] * self.layout.size
        for u, v in zip(path[1:-2], path[2:-1]):
            iu, ju = _parse_vertex(u)
            iv, jv = _parse_vertex(v)
            if iv == iu + 1:
                a[iu] = ju
        return IntervalStrategy(tuple(a))


def _parse_vertex(v: str) -> tuple[int, int]:
    i, j = v[1:].split("_")
    return int(i), int(j)


def to_dncda(layout: GmgLayout) -> DncdaImage:
    n, K, E = layout.players, layout.K, layout.size
    zero = tuple(Fraction(0) for _ in range(n))
    edges = []
    for j in range(K):
        edges.append(Edge("s", _vertex(0, j), 1, zero))
        edges.append(Edge(_vertex(E, j), "t", 0, zero))
    for i, res in enumerate(layout.resources):
        table = layout.gold_payoff if res.kind == GOLD else layout.mine_payoff
        neg = tuple(-v for v in table[:n])
        for j in range(K):
            edges.append(Edge(_vertex(i, j), _vertex(i + 1, j), 0,
                              neg if res.line == j else zero))
    for i in range(1, E):
        for j in range(K):
            for j2 in range(K):
                if j != j2:
                    edges.append(Edge(_vertex(i, j), _vertex(i, j2), 1, zero))
    verts = ["s", "t"] + [_vertex(i, j) for i in range(E + 1) for j in range(K)]
    game = DncGame(tuple(verts), tuple(edges), "s", "t", layout.bound, n, DNCDA)
    return DncdaImage(layout, game)


# --------------------------------------------------------------------------
# JSON

def layout_to_dict(layout: GmgLayout) -> dict:
    return {
        "K": layout.K,
        "players": layout.players,
        "bound": layout.bound,
        "gold_payoff": [format_rational(v) for v in layout.gold_payoff],
        "mine_payoff": [format_rational(v) for v in layout.mine_payoff],
        "resources": [{"x": format_rational(r.x), "line": r.line, "kind": r.kind}
                      for r in layout.resources],
    }


def layout_from_dict(data: dict) -> GmgLayout:
    try:
        return GmgLayout(
            resources=tuple(Resource(parse_rational(r["x"]), int(r["line"]), str(r["kind"]))
                            for r in data["resources"]),
            K=int(data["K"]),
            players=int(data["players"]),
            gold_payoff=parse_table(data.get("gold_payoff", [])),
            mine_payoff=parse_table(data.get("mine_payoff", [])),
            bound=int(data.get("bound", 1)),
        )
    except (KeyError, TypeError) as exc:
        raise LayoutError(f"malformed layout JSON: {exc}") from exc


def dumps_layout(layout: GmgLayout) -> str:
    return json.dumps(layout_to_dict(layout), indent=2)


def make_layout(spec: Sequence[tuple[int, str]], *, K: int, players: int,
                gold, mine=(), bound: int = 1) -> GmgLayout:
    """Build a layout from ``(line, kind)`` pairs placed at x = 0, 1, 2, ..."""
    res = tuple(Resource(Fraction(t), line, kind) for t, (line, kind) in enumerate(spec))
    return GmgLayout(res, K, players, parse_table(gold), parse_table(mine), bound)
