"""Distance-bounded network congestion games (DNC, DncDa, DncDaS).

A game is a directed graph whose edges carry a length (0 or 1) and a
non-decreasing delay table indexed by load.  Players share the source and
sink; a strategy is a simple s-t path whose total length is within the bound.
Everything here is exact and deterministic: vertex ids are strings and all
iteration happens in sorted order.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .rational import INF, Infinity, format_rational, parse_rational, parse_table

DNC = "dnc"
DNCDA = "dncda"
DNCDAS = "dncdas"
VARIANTS = (DNC, DNCDA, DNCDAS)

Path = tuple[str, ...]
EdgeKey = tuple[str, str]
Profile = tuple[Optional[Path], ...]


class GameError(ValueError):
    """Raised when a game or profile violates a structural invariant."""


class NoFeasiblePath(GameError):
    pass


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    weight: int
    delay: tuple[Fraction, ...]

    @property
    def key(self) -> EdgeKey:
        return (self.src, self.dst)

    def d(self, load: int) -> Fraction:
        """Delay at ``load`` (1-based)."""
        return self.delay[load - 1]


@dataclass(frozen=True)
class DncGame:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    source: str
    sink: str
    bound: int
    players: int
    variant: str = DNC

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.key)))

    @cached_property
    def edge_map(self) -> dict[EdgeKey, Edge]:
        return {e.key: e for e in self.edges}

    @cached_property
    def out_edges(self) -> dict[str, tuple[Edge, ...]]:
        out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out.setdefault(e.src, []).append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[Edge, ...]]:
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc.setdefault(e.dst, []).append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def default_action(self, v: str) -> Optional[str]:
        for e in self.out_edges.get(v, ()):
            if e.weight == 0:
                return e.dst
        return None

    def with_bound(self, bound: int) -> "DncGame":
        return DncGame(self.vertices, self.edges, self.source, self.sink,
                       bound, self.players, self.variant)

    def with_players(self, players: int) -> "DncGame":
        return DncGame(self.vertices, self.edges, self.source, self.sink,
                       self.bound, players, self.variant)


def path_edges(path: Path) -> list[EdgeKey]:
    return list(zip(path, path[1:]))


def path_weight(game: DncGame, path: Path) -> int:
    return sum(game.edge_map[k].weight for k in path_edges(path))


def is_feasible_path(game: DncGame, path: Path) -> bool:
    if not path or path[0] != game.source or path[-1] != game.sink:
        return False
    if len(set(path)) != len(path):
        return False
    if any(k not in game.edge_map for k in path_edges(path)):
        return False
    return path_weight(game, path) <= game.bound


# --------------------------------------------------------------------------
# validation

MISSING_DEFAULT = "missing default action"
MULTIPLE_DEFAULTS = "multiple default actions"
ZERO_WEIGHT_CYCLE = "zero-weight cycle"
NEGATIVE_CYCLE = "negative-delay cycle"
NONMONOTONE_DELAY = "non-monotone delay table"
WEIGHTED_SOURCE_EDGE = "weighted source edge"
SELF_LOOP = "self-loop"
DUPLICATE_EDGE = "duplicate edge"
UNKNOWN_VERTEX = "unknown vertex"
SHORT_TABLE = "delay table shorter than player count"
BAD_WEIGHT = "illegal edge weight"
BAD_PARAMETER = "illegal game parameter"
UNSHARED_DELAY = "delay tables differ"
NEGATIVE_DELAY = "negative delay"


@dataclass(frozen=True)
class Issue:
    code: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    @property
    def codes(self) -> set[str]:
        return {i.code for i in self.issues}

    def raise_if_invalid(self) -> None:
        if self.issues:
            raise GameError("; ".join(str(i) for i in self.issues))


def validate_game(game: DncGame, *, require_monotone: bool = True) -> ValidationReport:
    """Check every invariant of the game's variant.

    ``require_monotone=False`` skips the non-decreasing check; the GMG
    conversion needs it when payoffs grow with load.
    """
    issues: list[Issue] = []
    add = lambda code, detail: issues.append(Issue(code, detail))  # noqa: E731

    if game.variant not in VARIANTS:
        add(BAD_PARAMETER, f"variant {game.variant!r}")
    if game.players < 1:
        add(BAD_PARAMETER, f"players={game.players}")
    if game.bound < 0:
        add(BAD_PARAMETER, f"bound={game.bound}")
    vset = set(game.vertices)
    for v in (game.source, game.sink):
        if v not in vset:
            add(UNKNOWN_VERTEX, v)

    seen: Counter[EdgeKey] = Counter(e.key for e in game.edges)
    for key, count in sorted(seen.items()):
        if count > 1:
            add(DUPLICATE_EDGE, f"{key[0]}->{key[1]}")

    for e in game.edges:
        tag = f"{e.src}->{e.dst}"
        if e.src == e.dst:
            add(SELF_LOOP, tag)
        for v in (e.src, e.dst):
            if v not in vset:
                add(UNKNOWN_VERTEX, f"{v} on {tag}")
        if len(e.delay) < game.players:
            add(SHORT_TABLE, tag)
        if require_monotone and any(a > b for a, b in zip(e.delay, e.delay[1:])):
            add(NONMONOTONE_DELAY, tag)
        if game.variant == DNC and e.weight != 1:
            add(BAD_WEIGHT, f"{tag} has weight {e.weight} in a DNC game")
        if game.variant != DNC and e.weight not in (0, 1):
            add(BAD_WEIGHT, f"{tag} has weight {e.weight}")

    if game.variant in (DNCDA, DNCDAS):
        for e in game.out_edges.get(game.source, ()):
            if e.weight != 1:
                add(WEIGHTED_SOURCE_EDGE, f"{e.src}->{e.dst}")
        for v in game.vertices:
            if v in (game.source, game.sink):
                continue
            zero = [e for e in game.out_edges.get(v, ()) if e.weight == 0]
            if not zero:
                add(MISSING_DEFAULT, v)
            elif len(zero) > 1:
                add(MULTIPLE_DEFAULTS, f"{v} -> {', '.join(e.dst for e in zero)}")
        cycle = _zero_weight_cycle(game)
        if cycle:
            add(ZERO_WEIGHT_CYCLE, " -> ".join(cycle))

    if game.variant == DNCDAS and game.edges:
        first = game.edges[0].delay
        if any(e.delay != first for e in game.edges):
            add(UNSHARED_DELAY, "all edges must share one delay table")
        if any(x < 0 for x in first):
            add(NEGATIVE_DELAY, "shared delay table has a negative entry")

    cycle = _negative_cycle(game)
    if cycle:
        add(NEGATIVE_CYCLE, " -> ".join(cycle))
    return ValidationReport(tuple(issues))


def _zero_weight_cycle(game: DncGame) -> Optional[list[str]]:
    """Kahn's algorithm on the zero-weight subgraph; returns a cycle if any."""
    zero = [e for e in game.edges if e.weight == 0 and e.src != e.dst]
    indeg = Counter(e.dst for e in zero)
    succ: dict[str, list[str]] = {}
    for e in zero:
        succ.setdefault(e.src, []).append(e.dst)
    nodes = sorted({e.src for e in zero} | {e.dst for e in zero})
    queue = [v for v in nodes if indeg[v] == 0]
    removed = set()
    while queue:
        v = queue.pop()
        removed.add(v)
        for w in succ.get(v, ()):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    rest = [v for v in nodes if v not in removed]
    if not rest:
        return None
    # walk forward inside the residual graph until a vertex repeats
    v, order = rest[0], []
    while v not in order:
        order.append(v)
        v = next(w for w in sorted(succ.get(v, ())) if w not in removed)
    return order[order.index(v):] + [v]


def _negative_cycle(game: DncGame) -> Optional[list[str]]:
    """Bellman-Ford from a virtual root with weights d_e(1)."""
    dist = {v: Fraction(0) for v in game.vertices}
    pred: dict[str, str] = {}
    edges = [e for e in game.edges if e.delay and e.src in dist and e.dst in dist]
    last = None
    for _ in range(len(game.vertices)):
        last = None
        for e in edges:
            nd = dist[e.src] + e.delay[0]
            if nd < dist[e.dst]:
                dist[e.dst] = nd
                pred[e.dst] = e.src
                last = e.dst
        if last is None:
            return None
    v = last
    for _ in range(len(game.vertices)):
        v = pred[v]
    cycle = [v]
    u = pred[v]
    while u != v:
        cycle.append(u)
        u = pred[u]
    cycle.append(v)
    return cycle[::-1]


# --------------------------------------------------------------------------
# evaluation

def loads(game: DncGame, profile: Profile) -> dict[EdgeKey, int]:
    """Players per edge; edges nobody uses are absent."""
    count: Counter[EdgeKey] = Counter()
    for path in profile:
        if path is not None:
            count.update(path_edges(path))
    return {k: count[k] for k in sorted(count)}


def player_delay(game: DncGame, profile: Profile, i: int,
                 load_map: Optional[dict[EdgeKey, int]] = None) -> Fraction | Infinity:
    path = profile[i]
    if path is None:
        return INF
    x = load_map if load_map is not None else loads(game, profile)
    return sum((game.edge_map[k].d(x[k]) for k in path_edges(path)), Fraction(0))


def social_welfare(game: DncGame, profile: Profile) -> Fraction | Infinity:
    x = loads(game, profile)
    total: Fraction | Infinity = Fraction(0)
    for i in range(len(profile)):
        total = total + player_delay(game, profile, i, x)
    return -total


def rosenthal_potential(game: DncGame, profile: Profile) -> Fraction:
    x = loads(game, profile)
    return sum((sum(game.edge_map[k].delay[:n], Fraction(0)) for k, n in x.items()),
               Fraction(0))


def enumerate_strategies(game: DncGame, bound: Optional[int] = None) -> list[Path]:
    """All simple s-t paths of total weight <= bound, lexicographic order."""
    b = game.bound if bound is None else bound
    out: list[Path] = []
    if game.source == game.sink:
        return [(game.source,)]
    path = [game.source]
    on_path = {game.source}

    def dfs(v: str, used: int) -> None:
        for e in game.out_edges.get(v, ()):
            w = e.dst
            if w in on_path or used + e.weight > b:
                continue
            path.append(w)
            if w == game.sink:
                out.append(tuple(path))
            else:
                on_path.add(w)
                dfs(w, used + e.weight)
                on_path.discard(w)
            path.pop()

    dfs(game.source, 0)
    out.sort()
    return out


def longest_path_weight(game: DncGame) -> int:
    """b-bar: heaviest simple s-t path (exponential; desk-scale graphs only)."""
    best = -1
    on_path = {game.source}

    def dfs(v: str, used: int) -> None:
        nonlocal best
        for e in game.out_edges.get(v, ()):
            w = e.dst
            if w in on_path:
                continue
            if w == game.sink:
                best = max(best, used + e.weight)
                continue
            on_path.add(w)
            dfs(w, used + e.weight)
            on_path.discard(w)

    if game.source == game.sink:
        return 0
    dfs(game.source, 0)
    return best


@dataclass(frozen=True)
class Deviation:
    player: int
    path: Path
    old_delay: Fraction
    new_delay: Fraction


def is_pne(game: DncGame, profile: Profile,
           strategies: Optional[Sequence[Path]] = None) -> tuple[bool, Optional[Deviation]]:
    """PNE test.  With ``strategies`` every listed deviation is tried;
    otherwise each player's best response comes from the budgeted DP."""
    from .solvers import best_response_dnc

    x = loads(game, profile)
    for i, path in enumerate(profile):
        cur = player_delay(game, profile, i, x)
        if strategies is None:
            alt, val = best_response_dnc(game, profile, i)
        else:
            alt, val = _best_listed(game, profile, i, strategies)
        if val < cur:
            return False, Deviation(i, alt, cur, val)
    return True, None


def deviation_delay(game: DncGame, profile: Profile, i: int, path: Path) -> Fraction:
    others = loads(game, profile[:i] + profile[i + 1:])
    return sum((game.edge_map[k].d(others.get(k, 0) + 1) for k in path_edges(path)),
               Fraction(0))


def _best_listed(game, profile, i, strategies):
    best = None
    for p in strategies:
        val = deviation_delay(game, profile, i, p)
        if best is None or val < best[1]:
            best = (p, val)
    return best


def replace(profile: Profile, i: int, path: Path) -> Profile:
    return profile[:i] + (path,) + profile[i + 1:]


# --------------------------------------------------------------------------
# JSON

def game_to_dict(game: DncGame) -> dict:
    return {
        "variant": game.variant,
        "vertices": list(game.vertices),
        "edges": [{"from": e.src, "to": e.dst, "weight": e.weight,
                   "delay": [format_rational(x) for x in e.delay]} for e in game.edges],
        "source": game.source,
        "sink": game.sink,
        "bound": game.bound,
        "players": game.players,
    }


def game_from_dict(data: dict) -> DncGame:
    try:
        edges = tuple(Edge(str(e["from"]), str(e["to"]), int(e.get("weight", 1)),
                           parse_table(e["delay"])) for e in data["edges"])
        return DncGame(
            vertices=tuple(str(v) for v in data["vertices"]),
            edges=edges,
            source=str(data["source"]),
            sink=str(data["sink"]),
            bound=int(data["bound"]),
            players=int(data["players"]),
            variant=str(data.get("variant", DNC)).lower(),
        )
    except (KeyError, TypeError) as exc:
        raise GameError(f"malformed game JSON: {exc}") from exc


def dumps_game(game: DncGame) -> str:
    return json.dumps(game_to_dict(game), indent=2)


def iter_profiles(strategies: Sequence[Path], n: int) -> Iterator[Profile]:
    """Mixed-radix walk over all ordered profiles."""
    idx = [0] * n
    if not strategies:
        return
    while True:
        yield tuple(strategies[j] for j in idx)
        k = n - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < len(strategies):
                break
            idx[k] = 0
            k -= 1
        if k < 0:
            return


def make_game(edges: Iterable[tuple], source: str = "s", sink: str = "t", *,
              bound: int, players: int, variant: str = DNC) -> DncGame:
    """Convenience builder: ``edges`` are ``(src, dst, weight, delay_table)``."""
    es = tuple(Edge(str(a), str(b), int(w), tuple(parse_rational(x) for x in d))
               for a, b, w, d in edges)
    verts = {source, sink} | {e.src for e in es} | {e.dst for e in es}
    return DncGame(tuple(verts), es, source, sink, bound, players, variant)
