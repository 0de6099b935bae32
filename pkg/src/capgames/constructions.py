"""Instance generators: hardness reductions and capability counterexamples.

Weighted edges are expanded into unit chains whose first edge carries the
delay table.  Every generator returns an instance that passes validation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import core
from .core import DNC, DNCDAS, DncGame, Edge, Path
from .gmg import GOLD, MINE, GmgLayout, IntervalStrategy, Resource, gold_welfare
from .rational import parse_table


class NoCounterexample(ValueError):
    """The requested property holds for every instance with this table."""


Table = tuple[Fraction, ...]


def _const(value, n: int) -> Table:
    return tuple(Fraction(value) for _ in range(n))


def _step(n: int, *steps: tuple[int, Fraction]) -> Table:
    """sum of c * 1{x >= k} over ``steps`` of (k, c), for x = 1..n."""
    return tuple(sum((Fraction(c) for k, c in steps if x >= k), Fraction(0))
                 for x in range(1, n + 1))


def expand_weighted_edge(src: str, dst: str, weight: int, delay: Sequence) -> list[Edge]:
    """``weight`` unit edges through fresh vertices; delay on the first."""
    if weight < 1:
        raise ValueError("weighted edges need weight >= 1")
    delay = parse_table(delay)
    zero = tuple(Fraction(0) for _ in delay)
    hops = [src] + [f"{src}>{dst}#{k}" for k in range(1, weight)] + [dst]
    return [Edge(a, b, 1, delay if k == 0 else zero)
            for k, (a, b) in enumerate(zip(hops, hops[1:]))]


def _game(edges: list[Edge], source: str, sink: str, bound: int, players: int,
          variant: str) -> DncGame:
    verts = {source, sink} | {e.src for e in edges} | {e.dst for e in edges}
    return DncGame(tuple(verts), tuple(edges), source, sink, bound, players, variant)


# --------------------------------------------------------------------------
# quadratic threshold games

@dataclass(frozen=True)
class ThresholdGame:
    """Player i either takes every pair resource r_ij (in) or r_i (out).

    Players are numbered 1..n; ``pair_delay[(i, j)]`` with i < j and
    ``out_delay[i]`` hold delay tables indexed by load 1, 2, ...
    """

    n: int
    pair_delay: dict = field(hash=False)
    out_delay: dict = field(hash=False)

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need at least two players")
        for i, j in itertools.combinations(range(1, self.n + 1), 2):
            if (i, j) not in self.pair_delay:
                raise ValueError(f"missing pair resource r_{i}{j}")
        for t in list(self.pair_delay.values()) + list(self.out_delay.values()):
            if any(a > b for a, b in zip(t, t[1:])):
                raise ValueError("threshold delay tables must be non-decreasing")

    def table(self, key, length: int) -> Table:
        t = self.pair_delay[key] if isinstance(key, tuple) else self.out_delay[key]
        t = parse_table(t)
        return t[:length] + (t[-1],) * max(0, length - len(t))

    def pair(self, i: int, j: int) -> tuple[int, int]:
        return (min(i, j), max(i, j))

    def cost(self, choice: Sequence[bool], i: int) -> Fraction:
        """Delay of player ``i`` (1-based) when ``choice[k-1]`` means k is in."""
        if not choice[i - 1]:
            return self.table(i, 1)[0]
        total = Fraction(0)
        for j in range(1, self.n + 1):
            if j != i:
                load = 1 + int(choice[j - 1])
                total += self.table(self.pair(i, j), 2)[load - 1]
        return total

    def pnes(self) -> list[tuple[bool, ...]]:
        out = []
        for choice in itertools.product((False, True), repeat=self.n):
            stable = True
            for i in range(1, self.n + 1):
                flipped = list(choice)
                flipped[i - 1] = not flipped[i - 1]
                if self.cost(flipped, i) < self.cost(choice, i):
                    stable = False
                    break
            if stable:
                out.append(choice)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ThresholdGame":
        n = int(data["n"])
        pairs = {}
        for key, t in data["pair_delay"].items():
            i, j = (int(v) for v in key.split(","))
            pairs[(min(i, j), max(i, j))] = parse_table(t)
        outs = {int(k): parse_table(t) for k, t in data["out_delay"].items()}
        return cls(n, pairs, outs)


@dataclass(frozen=True)
class ThresholdReduction:
    tg: ThresholdGame
    game: DncGame
    R: Fraction

    def role(self, path: Path) -> Optional[tuple[int, bool]]:
        """(player role, goes in) for a path through s -> s_i, else None."""
        hubs = [v for v in path if v.startswith("s") and v[1:].isdigit()]
        if len(hubs) != 1:
            return None
        i = int(hubs[0][1:])
        goes_in = any(v.startswith("v") for v in path)
        return i, goes_in

    def to_threshold(self, profile: Sequence[Path]) -> Optional[tuple[bool, ...]]:
        roles = [self.role(p) for p in profile]
        if any(r is None for r in roles) or sorted(r[0] for r in roles) != list(range(1, self.tg.n + 1)):
            return None
        choice = [False] * self.tg.n
        for i, goes_in in roles:
            choice[i - 1] = goes_in
        return tuple(choice)


def threshold_to_dnc(tg: ThresholdGame) -> ThresholdReduction:
    n = tg.n
    keys = list(tg.pair_delay) + list(tg.out_delay)
    R = sum((max(tg.table(k, n)) for k in keys), Fraction(0)) + 1
    zero = _const(0, n)
    w = {i: i * (i - 2) + 2 * n + 1 for i in range(1, n + 1)}
    b = n * n + 3

    def vin(i: int, j: int) -> str:
        return f"v{i}_{j}"

    def vout(i: int, j: int) -> str:
        return f"v{i}_{j}'" if j < i else vin(i, j)

    edges: list[Edge] = []
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            if j < i:   # off-diagonal vertex holds r_{j i}
                edges.append(Edge(vin(i, j), vout(i, j), 1, tg.table((j, i), n)))
                edges += expand_weighted_edge(vout(i, j), vin(i, j + 1), i, zero)
            if i < n:
                edges.append(Edge(vout(i, j), vin(i + 1, j), 1, zero))
        si, ti = f"s{i}", f"t{i}"
        edges += expand_weighted_edge("s", si, b - w[i] - 1, _step(n, (2, (n + 1) * R)))
        edges.append(Edge(si, vin(i, 1), 1, zero))
        edges.append(Edge(vout(n, i), ti, 1, zero))
        edges += expand_weighted_edge(si, ti, w[i], tg.table(i, n))
        edges.append(Edge(ti, "t", 1, _const((n - i) * R, n)))
    return ThresholdReduction(tg, _game(edges, "s", "t", b, n, DNC), R)


# --------------------------------------------------------------------------
# 3-partition

@dataclass(frozen=True)
class Partition3Instance:
    items: tuple[int, ...]
    T: int

    def __post_init__(self) -> None:
        a, T = self.items, self.T
        if len(a) % 3 or not a:
            raise ValueError("need 3m items")
        if sum(a) != self.m * T:
            raise ValueError(f"items sum to {sum(a)}, expected m*T = {self.m * T}")
        if not all(4 * x > T and 2 * x < T for x in a):
            raise ValueError("every item must satisfy T/4 < a < T/2")

    @property
    def m(self) -> int:
        return len(self.items) // 3

    def solvable(self) -> bool:
        """Exhaustive search for a partition into triples summing to T."""
        def rec(rest: tuple[int, ...]) -> bool:
            if not rest:
                return True
            first, others = rest[0], rest[1:]
            for j, k in itertools.combinations(range(len(others)), 2):
                if first + others[j] + others[k] == self.T:
                    left = tuple(x for q, x in enumerate(others) if q not in (j, k))
                    if rec(left):
                        return True
            return False
        return rec(tuple(sorted(self.items)))


def _partition_chain(inst: Partition3Instance, n: int, fast: Table, slow: Table) -> list[Edge]:
    zero = _const(0, n)
    edges: list[Edge] = []
    for i, a in enumerate(inst.items, start=1):
        edges.append(Edge(f"t{i - 1}", f"t{i}", 1, slow))
        edges.append(Edge(f"t{i - 1}", f"s{i}", 1, zero))
        edges += expand_weighted_edge(f"s{i}", f"t{i}", a, fast)
    return edges


def partition3_best_to_dnc(inst: Partition3Instance) -> DncGame:
    m = inst.m
    n = m
    fast = _step(n, (1, 1), (2, 2))
    edges = _partition_chain(inst, n, fast, _const(2, n))
    return _game(edges, "t0", f"t{3 * m}", inst.T + 3 * m, n, DNC)


def partition3_worst_to_dnc(inst: Partition3Instance) -> DncGame:
    m = inst.m
    n = 4 * m
    R = 9 * m + 2
    fast = _step(n, (2, 2), (3, 2))
    edges = _partition_chain(inst, n, fast, _const(3, n))
    edges.append(Edge("s", "t0", 1, _step(n, (m + 1, R))))
    for i, a in enumerate(inst.items, start=1):
        edges += expand_weighted_edge("s", f"s{i}", inst.T + i - a + 1, _step(n, (2, R)))
    return _game(edges, "s", f"t{3 * m}", inst.T + 3 * m + 1, n, DNC)


def partition3_targets(inst: Partition3Instance) -> dict[str, int]:
    m = inst.m
    d0 = 9 * m * (3 * m - 1) // 2
    return {"best": m * (6 * m - 3), "worst": d0 + m * (9 * m + 3), "D0": d0}


# --------------------------------------------------------------------------
# DncDaS counterexamples

def first_jump(table: Sequence[Fraction]) -> Optional[int]:
    """Smallest x (1-based) with d(x) != d(x + 1)."""
    for x in range(1, len(table)):
        if table[x - 1] != table[x]:
            return x
    return None


def _dncdas(spec: list[tuple[str, str, int]], table: Table, bound: int, players: int) -> DncGame:
    edges = [Edge(a, b, w, table) for a, b, w in spec]
    return _game(edges, "s", "t", bound, players, DNCDAS)


def _chain(names: list[str]) -> list[tuple[str, str, int]]:
    return [(a, b, 0) for a, b in zip(names, names[1:])]


@dataclass(frozen=True)
class PpPositive:
    game: DncGame
    v: int
    rho: Fraction
    N1: int
    N2: int

    @property
    def W1(self) -> Fraction:
        d = self.game.edges[0].delay
        return -(self.v + 1) * (self.N1 + self.N2 + 3) * d[self.v - 1]

    @property
    def W2(self) -> Fraction:
        d = self.game.edges[0].delay
        return -(self.v + 1) * (2 * self.N1 + 3) * d[self.v]


def cex_pp_positive(delay: Sequence) -> PpPositive:
    """Two parallel default chains with one crossing; b = 2 crowds everyone."""
    d = parse_table(delay)
    v = first_jump(d)
    if v is None:
        raise NoCounterexample("no counterexample exists: constant delay keeps PP")
    if d[v - 1] <= 0:
        raise ValueError("first jump starts at zero delay; use cex_pp_zero")
    if len(d) < v + 1:
        raise ValueError("table too short")
    rho = d[v] / d[v - 1]
    N1 = math.floor(1 / (rho - 1))
    N2 = math.floor((N1 + 2) * rho) - 1
    up1 = [f"a{k}" for k in range(N1 + 1)]
    up2 = [f"b{k}" for k in range(N2 + 1)]
    lo1 = [f"c{k}" for k in range(N2 + 1)]
    lo2 = [f"e{k}" for k in range(N1 + 1)]
    spec = [("s", up1[0], 1), ("s", lo1[0], 1), (up1[-1], lo2[0], 1)]
    spec += _chain(up1 + up2 + ["t"]) + _chain(lo1 + lo2 + ["t"])
    return PpPositive(_dncdas(spec, d[:v + 1], 2, v + 1), v, rho, N1, N2)


@dataclass(frozen=True)
class PpZero:
    game: DncGame
    v: int
    N1: int
    N2: int

    @property
    def W2(self) -> Fraction:
        d = self.game.edges[0].delay
        return -2 * self.v * self.N1 * d[2 * self.v - 1]


def cex_pp_zero(delay: Sequence) -> PpZero:
    """Zero delay up to the first jump; both b = 2 routes share a short bridge."""
    d = parse_table(delay)
    v = first_jump(d)
    if v is None:
        raise NoCounterexample("no counterexample exists: constant delay keeps PP")
    if d[v - 1] != 0:
        raise ValueError("first jump starts above zero; use cex_pp_positive")
    if len(d) < 2 * v:
        raise ValueError(f"table needs {2 * v} entries")
    N1 = 1
    N2 = max(1, math.floor(d[2 * v - 1] / d[v]))
    left = [f"c{k}" for k in range(N2 + 1)]
    right = [f"e{k}" for k in range(N2 + 1)]
    up = [f"a{k}" for k in range(N1 + 1)]
    spec = [("s", left[0], 1), ("s", up[0], 1), (left[-1], up[0], 1), (up[-1], right[0], 1)]
    spec += _chain(left + right + ["t"]) + _chain(up + ["t"])
    return PpZero(_dncdas(spec, d[:2 * v], 2, 2 * v), v, N1, N2)


def cex_ap(delay: Sequence) -> DncGame:
    """A default detour that a second unit of capability skips."""
    d = parse_table(delay)
    nz = [x for x in range(1, len(d) + 1) if d[x - 1] != 0]
    if not nz:
        raise NoCounterexample("AP holds universally for the zero delay")
    v = nz[0]
    spec = [("s", "1", 1), ("1", "2", 0), ("2", "t", 0), ("1", "t", 1)]
    return _dncdas(spec, d[:v], 2, v)


# --------------------------------------------------------------------------
# GMG counterexamples

@dataclass(frozen=True)
class SqueezeBlock:
    lines: tuple[int, ...]
    ratio: Fraction

    def D(self, t: int) -> Fraction:
        n0 = sum(1 for y in self.lines[:t] if y == 0)
        n1 = t - n0
        return self.ratio * n0 - n1

    @property
    def N(self) -> int:
        return len(self.lines)


def squeeze_block(ratio: Fraction, guard_line: int, guard: Fraction) -> SqueezeBlock:
    """Greedy block: keep D(t) = ratio * N0 - N1 inside (0, 3).

    Gold with rho < 1 uses ratio = rho and guards N0; mines with rho > 1 use
    ratio = 1 / rho and guard N1.
    """
    lines: list[int] = []

    def D() -> Fraction:
        n0 = lines.count(0)
        return ratio * n0 - (len(lines) - n0)

    while lines.count(guard_line) < guard:
        lines.append(0 if D() <= 1 else 1)
    while D() <= 1 + ratio:
        lines.append(0)
    return SqueezeBlock(tuple(lines), ratio)


@dataclass(frozen=True)
class GmgCounterexample:
    layout: GmgLayout
    note: str
    block: Optional[SqueezeBlock] = None
    witness: Optional[tuple[IntervalStrategy, ...]] = None


def _layout_from_lines(lines: Sequence[int], kind: str, n: int, table: Table) -> GmgLayout:
    res = tuple(Resource(Fraction(t), y, kind) for t, y in enumerate(lines))
    gold = table if kind == GOLD else _const(1, n)
    mine = table if kind == MINE else _const(-1, n)
    return GmgLayout(res, 2, n, gold, mine, 1)


def gmg_cex_pp(kind: str, table: Sequence) -> GmgCounterexample:
    t = parse_table(table)
    v = first_jump(t)
    if v is None:
        raise NoCounterexample("PP holds universally for constant payoffs")
    if len(t) < v + 1:
        raise ValueError("table too short")
    n = v + 1
    rho = t[v] / t[v - 1]
    t = t[:n]
    squeeze = (kind == GOLD and rho < 1) or (kind == MINE and rho > 1)
    if squeeze:
        if kind == GOLD:
            block = squeeze_block(rho, 0, 3 / (1 - rho))
        else:
            block = squeeze_block(1 / rho, 1, 3 / (1 - 1 / rho))
        flipped = tuple(1 - y for y in reversed(block.lines))
        layout = _layout_from_lines(block.lines + flipped, kind, n, t)
        first = 0 if kind == GOLD else 1
        f = IntervalStrategy((first,) * block.N + (1 - first,) * block.N)
        return GmgCounterexample(layout, f"{kind} squeeze, rho={rho}", block, (f,) * n)
    bound = rho / (rho - 1) if kind == GOLD else rho / (1 - rho)
    N = math.floor(bound) + 1
    lines = [0] * N + [1] * N + [0] * (N + 1)
    layout = _layout_from_lines(lines, kind, n, t)
    if kind == GOLD:
        f = IntervalStrategy(tuple([0] * N + [1] * N + [1] * (N + 1)))
    else:
        f = IntervalStrategy(tuple([1] * N + [0] * N + [0] * (N + 1)))
    return GmgCounterexample(layout, f"{kind} stuck layout, rho={rho}, N={N}", None, (f,) * n)


def gmg_cex_bwr(gold_table: Sequence, n: Optional[int] = None) -> GmgCounterexample:
    """One gold per line; a ring of partial covers beats full coverage."""
    t = parse_table(gold_table)
    n = len(t) if n is None else n
    probe = GmgLayout((), n, n, t, _const(-1, n), 1)
    w = [gold_welfare(probe, x) for x in range(1, n + 1)]
    best = max(w)
    if w[n - 1] == best:
        raise NoCounterexample("BWR holds: gold welfare peaks at n")
    n_prime = w.index(best) + 1
    res = tuple(Resource(Fraction(j), j, GOLD) for j in range(n))
    layout = GmgLayout(res, n, n, t[:n], _const(-1, n), n_prime)
    ring = tuple(ring_cover(n, n_prime, i) for i in range(n))
    return GmgCounterexample(layout, f"ring cover at b={n_prime}", None, ring)


def ring_cover(n: int, width: int, i: int) -> IntervalStrategy:
    """Cover golds i .. i + width - 1 (mod n) with exactly ``width`` segments."""
    covered = {(i + k) % n for k in range(width)}
    a: list[Optional[int]] = [p if p in covered else None for p in range(n)]
    first = next(p for p in range(n) if a[p] is not None)
    for p in range(n):
        if a[p] is None:
            a[p] = a[p - 1] if p > 0 else a[first]
    return IntervalStrategy(tuple(a))


def gmg_cex_bfr(gold_table: Sequence, n: Optional[int] = None) -> GmgCounterexample:
    """N gold on line 0 then one on line 1: b = 1 strands the last gold."""
    t = parse_table(gold_table)
    n = len(t) if n is None else n
    lo, hi = min(t[:n]), max(t[:n])
    N = math.floor(hi / lo) + 1
    res = tuple(Resource(Fraction(k), 0 if k < N else 1, GOLD) for k in range(N + 1))
    layout = GmgLayout(res, 2, n, t[:n], _const(-1, n), 1)
    return GmgCounterexample(layout, f"N={N}")
