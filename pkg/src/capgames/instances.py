"""Seeded random instances for tests, scripts and the CLI."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .core import DNC, DNCDA, DncGame, Edge
from .gmg import GOLD, MINE, GmgLayout, Resource


def random_table(rng: random.Random, n: int, *, lo: int = 0, hi: int = 6,
                 den: int = 2) -> tuple[Fraction, ...]:
    """A non-decreasing table of length ``n`` with small rational steps."""
    v = Fraction(rng.randint(lo * den, hi * den), den)
    out = [v]
    for _ in range(n - 1):
        v += Fraction(rng.randint(0, 2 * den), den)
        out.append(v)
    return tuple(out)


def random_dnc(seed: int, *, vertices: int = 6, players: int = 2,
               density: float = 0.35, bound: Optional[int] = None) -> DncGame:
    """Unit-weight network on ``vertices`` nodes with an s-v1-...-t backbone."""
    rng = random.Random(seed)
    inner = [f"v{k}" for k in range(1, vertices - 1)]
    names = ["s"] + inner + ["t"]
    keys = set(zip(names, names[1:]))
    for a in names[:-1]:
        for b in names[1:]:
            if a != b and rng.random() < density:
                keys.add((a, b))
    edges = tuple(Edge(a, b, 1, random_table(rng, players)) for a, b in sorted(keys))
    b = bound if bound is not None else rng.randint(1, len(names) - 1)
    return DncGame(tuple(names), edges, "s", "t", b, players, DNC)


def random_dncda(seed: int, *, vertices: int = 6, players: int = 2,
                 density: float = 0.3, bound: Optional[int] = None) -> DncGame:
    """Default-action network: each interior vertex has one zero edge to a
    later vertex, so zero edges never close a cycle; source edges are unit."""
    rng = random.Random(seed)
    inner = [f"v{k}" for k in range(1, vertices - 1)]
    names = ["s"] + inner + ["t"]
    edges: dict[tuple[str, str], Edge] = {}
    edges[("s", names[1])] = Edge("s", names[1], 1, random_table(rng, players))
    for k, v in enumerate(inner, start=1):
        d = names[rng.randint(k + 1, len(names) - 1)]
        edges[(v, d)] = Edge(v, d, 0, random_table(rng, players))
    for a in names[:-1]:
        for b in names[1:]:
            if a != b and (a, b) not in edges and rng.random() < density:
                edges[(a, b)] = Edge(a, b, 1, random_table(rng, players))
    b = bound if bound is not None else rng.randint(1, 3)
    return DncGame(tuple(names), tuple(edges.values()), "s", "t", b, players, DNCDA)


def random_layout(seed: int, *, size: int = 5, K: int = 2, players: int = 2,
                  mine_rate: float = 0.4, bound: Optional[int] = None) -> GmgLayout:
    """Resources at x = 0..size-1; gold payoff shrinks with load, mines hurt."""
    rng = random.Random(seed)
    res = tuple(Resource(Fraction(p), rng.randrange(K), MINE if rng.random() < mine_rate else GOLD)
                for p in range(size))
    gold = tuple(sorted((Fraction(rng.randint(1, 8), rng.randint(1, 3)) for _ in range(players)),
                        reverse=True))
    mine = tuple(-Fraction(rng.randint(1, 8), rng.randint(1, 3)) for _ in range(players))
    b = bound if bound is not None else rng.randint(1, max(1, size))
    return GmgLayout(res, K, players, gold, mine, b)
