"""Best responses, best-response dynamics and exhaustive PNE search.

DNC-family games and GMG layouts are both wrapped in a ``FiniteGameView``:
a shared strategy list, the resources each strategy occupies, and a cost
table per resource.  GMG payoffs enter as negated costs, so one search engine
serves both.  Welfare is always ``-(total cost)``.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from . import core, gmg
from .core import DncGame, NoFeasiblePath, Path, Profile
from .rational import NEG_INF, common_denominator

DEFAULT_BUDGET = 5_000_000


def default_budget() -> int:
    raw = os.environ.get("CAPGAMES_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, budget: int, estimate: Any):
        super().__init__(f"search budget exceeded: budget {budget}, estimated size {estimate}")
        self.budget = budget
        self.estimate = estimate


class DynamicsDiverged(RuntimeError):
    pass


# --------------------------------------------------------------------------
# best responses

def _zero_topo_order(game: DncGame) -> list[str]:
    zero = [e for e in game.edges if e.weight == 0]
    indeg = Counter(e.dst for e in zero)
    ready = sorted(v for v in game.vertices if indeg[v] == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for e in game.out_edges.get(v, ()):
            if e.weight == 0:
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    ready.append(e.dst)
        ready.sort()
    return order


def _drop_cycles(walk: list[str]) -> list[str]:
    out: list[str] = []
    pos: dict[str, int] = {}
    for v in walk:
        if v in pos:
            for u in out[pos[v] + 1:]:
                del pos[u]
            del out[pos[v] + 1:]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


def best_response_dnc(game: DncGame, profile: Profile, i: int,
                      bound: Optional[int] = None) -> tuple[Path, Fraction]:
    """Cheapest feasible path for player ``i`` against the other paths.

    Layered DP over the length budget: ``f[d][v]`` is the least delay of a
    walk from s to v of length at most d.  Unit edges advance the layer;
    zero edges are relaxed inside a layer in topological order.  Ties keep the
    earlier candidate (carried value first, then sources in sorted order).
    """
    b = game.bound if bound is None else bound
    others = core.loads(game, tuple(p for k, p in enumerate(profile) if k != i))
    cost = {e.key: e.d(others.get(e.key, 0) + 1) for e in game.edges}
    topo = _zero_topo_order(game)
    unit = [e for e in game.edges if e.weight == 1]
    zero_out = {v: [e for e in game.out_edges.get(v, ()) if e.weight == 0] for v in topo}

    def relax_zero(f: dict, pred: dict, d: int) -> None:
        for u in topo:
            if u not in f:
                continue
            for e in zero_out[u]:
                cand = f[u] + cost[e.key]
                if e.dst not in f or cand < f[e.dst]:
                    f[e.dst] = cand
                    pred[e.dst] = (d, u)

    f0: dict[str, Fraction] = {game.source: Fraction(0)}
    p0: dict[str, Any] = {game.source: None}
    relax_zero(f0, p0, 0)
    layers, preds = [f0], [p0]
    for d in range(1, b + 1):
        prev = layers[-1]
        f = dict(prev)
        pred: dict[str, Any] = {v: "carry" for v in prev}
        for e in unit:
            if e.src in prev:
                cand = prev[e.src] + cost[e.key]
                if e.dst not in f or cand < f[e.dst]:
                    f[e.dst] = cand
                    pred[e.dst] = (d - 1, e.src)
        relax_zero(f, pred, d)
        layers.append(f)
        preds.append(pred)

    if game.sink not in layers[b]:
        raise NoFeasiblePath(f"no s-t path within bound {b}")
    walk, d, v = [], b, game.sink
    while True:
        p = preds[d][v]
        if p == "carry":
            d -= 1
            continue
        walk.append(v)
        if p is None:
            break
        d, v = p
    path = tuple(_drop_cycles(walk[::-1]))
    value = sum((cost[k] for k in core.path_edges(path)), Fraction(0))
    return path, value


def best_response_gmg(layout: gmg.GmgLayout, opponent_loads: Sequence[int],
                      b: Optional[int] = None) -> tuple[gmg.IntervalStrategy, Fraction]:
    """Best <= b segment strategy against fixed opponent coverage counts.

    ``R[k][n]`` is the best payoff over the first ``n`` positions using at most
    ``k`` segments; a segment on line ``l`` over ``[n', n)`` earns the prefix
    difference ``s[n][l] - s[n'][l]``.  Ties go to the smallest cut and the
    lowest line.
    """
    b = layout.bound if b is None else b
    E, K = layout.size, layout.K
    if E == 0:
        return gmg.IntervalStrategy(()), Fraction(0)
    r = [layout.r(p, opponent_loads[p] + 1) for p in range(E)]
    s = [[Fraction(0)] * K]
    for p, res in enumerate(layout.resources):
        row = list(s[-1])
        row[res.line] += r[p]
        s.append(row)
    R = [[None] * (E + 1) for _ in range(b + 1)]
    arg: list[list[Any]] = [[None] * (E + 1) for _ in range(b + 1)]
    for k in range(b + 1):
        R[k][0] = Fraction(0)
    for k in range(1, b + 1):
        for n in range(1, E + 1):
            best, pick = None, None
            for n0 in range(n):
                if R[k - 1][n0] is None:
                    continue
                for line in range(K):
                    val = R[k - 1][n0] + s[n][line] - s[n0][line]
                    if best is None or val > best:
                        best, pick = val, (n0, line)
            R[k][n], arg[k][n] = best, pick
    a = [0] * E
    k, n = b, E
    while n > 0:
        n0, line = arg[k][n]
        for p in range(n0, n):
            a[p] = line
        k, n = k - 1, n0
    return gmg.IntervalStrategy(tuple(a)), R[b][E]


# --------------------------------------------------------------------------
# finite game views

class FiniteGameView:
    """Symmetric finite congestion game over an explicit strategy list."""

    sense = "cost"
    n: int
    strategies: list
    res_sets: list[tuple[int, ...]]
    tables: list[tuple[Fraction, ...]]

    def _finish(self) -> None:
        self.index = {s: k for k, s in enumerate(self.strategies)}

    # native-sense utility: delay (DNC) or payoff (GMG)
    def utility(self, idx: Sequence[int], i: int) -> Fraction:
        c = self.cost(idx, i)
        return c if self.sense == "cost" else -c

    def load_vector(self, idx: Sequence[int]) -> Counter:
        x: Counter = Counter()
        for k in idx:
            x.update(self.res_sets[k])
        return x

    def cost(self, idx: Sequence[int], i: int) -> Fraction:
        x = self.load_vector(idx)
        return sum((self.tables[e][x[e] - 1] for e in self.res_sets[idx[i]]), Fraction(0))

    def deviation_cost(self, idx: Sequence[int], i: int, k: int) -> Fraction:
        x = self.load_vector(idx)
        x.subtract(self.res_sets[idx[i]])
        return sum((self.tables[e][x[e]] for e in self.res_sets[k]), Fraction(0))

    def welfare(self, idx: Sequence[int]) -> Fraction:
        x = self.load_vector(idx)
        return -sum((x[e] * self.tables[e][x[e] - 1] for e in x if x[e]), Fraction(0))

    def rosenthal(self, idx: Sequence[int]) -> Fraction:
        """Cost-sense potential; decreases along improving moves."""
        x = self.load_vector(idx)
        return sum((sum(self.tables[e][:x[e]], Fraction(0)) for e in x), Fraction(0))

    def potential(self, idx: Sequence[int]) -> Fraction:
        phi = self.rosenthal(idx)
        return phi if self.sense == "cost" else -phi

    def native(self, idx: Sequence[int]) -> tuple:
        return tuple(self.strategies[k] for k in idx)

    def best_response(self, idx: Sequence[int], i: int) -> tuple[int, Fraction]:
        """Best strategy index and its cost; subclasses use their DP."""
        best = None
        for k in range(len(self.strategies)):
            c = self.deviation_cost(idx, i, k)
            if best is None or c < best[1]:
                best = (k, c)
        return best

    def is_pne(self, idx: Sequence[int]) -> bool:
        for i in range(len(idx)):
            if self.best_response(idx, i)[1] < self.cost(idx, i):
                return False
        return True

    def default_profile(self) -> tuple[int, ...]:
        return (0,) * self.n

    @property
    def max_level(self) -> int:
        raise NotImplementedError


class DncView(FiniteGameView):
    sense = "cost"

    def __init__(self, game: DncGame, bound: Optional[int] = None):
        self.game = game if bound is None else game.with_bound(bound)
        self.n = self.game.players
        self.strategies = core.enumerate_strategies(self.game)
        keys = sorted({k for p in self.strategies for k in core.path_edges(p)})
        pos = {k: j for j, k in enumerate(keys)}
        self.resources = keys
        self.res_sets = [tuple(pos[k] for k in core.path_edges(p)) for p in self.strategies]
        self.tables = [self.game.edge_map[k].delay[:self.n] for k in keys]
        self._finish()

    def best_response(self, idx, i):
        path, val = best_response_dnc(self.game, self.native(idx), i)
        return self.index[path], val

    def default_profile(self) -> tuple[int, ...]:
        g = self.game
        if g.variant != core.DNC:
            outs = g.out_edges.get(g.source, ())
            if outs:
                path, v = [g.source, outs[0].dst], outs[0].dst
                while v != g.sink and g.default_action(v) is not None and len(path) <= len(g.vertices):
                    v = g.default_action(v)
                    path.append(v)
                if tuple(path) in self.index:
                    return (self.index[tuple(path)],) * self.n
        return (0,) * self.n

    @property
    def max_level(self) -> int:
        return core.longest_path_weight(self.game)


class GmgView(FiniteGameView):
    sense = "payoff"

    def __init__(self, layout: gmg.GmgLayout, bound: Optional[int] = None):
        self.layout = layout if bound is None else layout.with_bound(bound)
        self.n = self.layout.players
        self.b = self.layout.bound
        self.strategies = gmg.enumerate_strategies(self.layout, self.b, limit=default_budget())
        self.resources = list(range(self.layout.size))
        self.res_sets = [tuple(f.covers(self.layout)) for f in self.strategies]
        self.tables = [tuple(-self.layout.r(p, x) for x in range(1, self.n + 1))
                       for p in range(self.layout.size)]
        self._finish()

    def best_response(self, idx, i):
        x = self.load_vector(idx)
        x.subtract(self.res_sets[idx[i]])
        f, val = best_response_gmg(self.layout, [x[p] for p in range(self.layout.size)], self.b)
        return self.index[f], -val

    def default_profile(self) -> tuple[int, ...]:
        zero = gmg.IntervalStrategy((0,) * self.layout.size)
        return (self.index[zero],) * self.n

    @property
    def max_level(self) -> int:
        return self.layout.max_bound


def view_for(obj, bound: Optional[int] = None) -> FiniteGameView:
    if isinstance(obj, DncGame):
        return DncView(obj, bound)
    if isinstance(obj, gmg.GmgLayout):
        return GmgView(obj, bound)
    raise TypeError(f"no view for {type(obj).__name__}")


# --------------------------------------------------------------------------
# dynamics

@dataclass(frozen=True)
class TraceStep:
    step: int
    player: int
    old: Fraction
    new: Fraction
    potential: Fraction


@dataclass
class DynamicsResult:
    profile: tuple[int, ...]
    trace: list[TraceStep]
    initial_potential: Fraction

    @property
    def steps(self) -> int:
        return len(self.trace)


def best_response_dynamics(view: FiniteGameView, initial: Optional[Sequence[int]] = None,
                           pivot: str = "max", max_steps: int = 100_000) -> DynamicsResult:
    """Move one improving player at a time until nobody can improve.

    ``pivot='max'`` moves the player with the largest improvement (lowest index
    on ties); ``'round-robin'`` scans players cyclically from the last mover.
    """
    if pivot not in ("max", "round-robin"):
        raise ValueError(f"unknown pivot rule {pivot!r}")
    idx = list(view.default_profile() if initial is None else initial)
    trace: list[TraceStep] = []
    phi0 = view.potential(idx)
    last = -1
    for step in range(1, max_steps + 1):
        order = range(view.n)
        if pivot == "round-robin":
            order = [(last + 1 + k) % view.n for k in range(view.n)]
        move = None
        for i in order:
            cur = view.cost(idx, i)
            k, val = view.best_response(idx, i)
            gain = cur - val
            if gain > 0 and (move is None or gain > move[0]):
                move = (gain, i, k, cur, val)
                if pivot == "round-robin":
                    break
        if move is None:
            return DynamicsResult(tuple(idx), trace, phi0)
        _, i, k, cur, val = move
        idx[i] = k
        sign = 1 if view.sense == "cost" else -1
        trace.append(TraceStep(step, i, sign * cur, sign * val, view.potential(idx)))
        last = i
    raise DynamicsDiverged(f"no equilibrium after {max_steps} moves")


def trace_rows(result: DynamicsResult) -> list[list[str]]:
    rows = [["step", "player", "old_delay", "new_delay", "potential"],
            ["0", "", "", "", str(result.initial_potential)]]
    for t in result.trace:
        rows.append([str(t.step), str(t.player), str(t.old), str(t.new), str(t.potential)])
    return rows


# --------------------------------------------------------------------------
# exhaustive search

@dataclass
class EquilibriumSet:
    """PNEs as sorted strategy-index multisets.

    Players are interchangeable, so each multiset stands for all of its
    orderings; ``ordered_count`` counts those.
    """

    view: FiniteGameView = field(repr=False)
    multisets: list[tuple[int, ...]]
    welfares: list[Fraction]

    @property
    def bestw(self):
        return max(self.welfares) if self.welfares else None

    @property
    def worstw(self):
        return min(self.welfares) if self.welfares else None

    @property
    def profiles(self) -> list[tuple]:
        return [self.view.native(m) for m in self.multisets]

    @property
    def ordered_count(self) -> int:
        return sum(_orderings(m) for m in self.multisets)

    def __len__(self) -> int:
        return len(self.multisets)

    def contains(self, idx: Sequence[int]) -> bool:
        return tuple(sorted(idx)) in set(self.multisets)


def _orderings(m: Sequence[int]) -> int:
    out = math.factorial(len(m))
    for c in Counter(m).values():
        out //= math.factorial(c)
    return out


class _Engine:
    """Integer-scaled incidence data; identical resource columns merged."""

    def __init__(self, view: FiniteGameView):
        S, n = len(view.strategies), view.n
        self.S, self.n = S, n
        cols: dict[tuple, list[int]] = {}
        E0 = len(view.tables)
        member = [[] for _ in range(E0)]
        for k, rs in enumerate(view.res_sets):
            for e in rs:
                member[e].append(k)
        for e in range(E0):
            if member[e]:
                cols.setdefault(tuple(member[e]), []).append(e)
        groups = sorted(cols.items(), key=lambda kv: kv[1][0])
        scale = common_denominator(v for t in view.tables for v in t)
        self.scale = scale
        tables = []
        for _, es in groups:
            tables.append([sum(int(view.tables[e][x - 1] * scale) for e in es)
                           for x in range(1, n + 1)])
        E = len(groups)
        self.E = E
        big = max((abs(v) for t in tables for v in t), default=0) * max(n, 1) * max(E, 1) * 4
        dtype = np.int64 if big < 2 ** 62 else object
        T = np.zeros((E, n + 2), dtype=dtype)
        for e, t in enumerate(tables):
            T[e, 1:n + 1] = t
            T[e, n + 1] = t[-1]
        self.T = T
        A = np.zeros((S, E), dtype=np.int64)
        for e, (members, _) in enumerate(groups):
            A[list(members), e] = 1
        self.A = A
        self.Abool = A.astype(bool)
        self.monotone = all(a <= b for t in tables for a, b in zip(t, t[1:]))
        self.rows = np.arange(E)
        # suffix intersection / union of strategy resource sets
        common = np.ones((S + 1, E), dtype=bool)
        anyuse = np.zeros((S + 1, E), dtype=bool)
        for k in range(S - 1, -1, -1):
            common[k] = common[k + 1] & self.Abool[k]
            anyuse[k] = anyuse[k + 1] | self.Abool[k]
        self.common = common.astype(np.int64)
        self.anyuse = anyuse.astype(np.int64)

    def welfare_int(self, L) -> int:
        return -int(sum(int(L[e]) * int(self.T[e, int(L[e])]) for e in range(self.E) if L[e]))


def _count_multisets(S: int, n: int) -> int:
    return math.comb(S + n - 1, n) if S else 0


def _pairs_search(eng: _Engine) -> list[tuple[tuple[int, ...], int]]:
    A, T = eng.A, eng.T
    t1, t2 = T[:, 1], T[:, 2]
    base = A @ t1
    D = (A * (t2 - t1)) @ A.T
    C = base[None, :] + D          # C[m, a]: cost of a against m
    br = C == C.min(axis=1, keepdims=True)
    mask = br & br.T
    out = []
    for a, m in zip(*np.nonzero(np.triu(mask))):
        L = A[a] + A[m]
        out.append(((int(a), int(m)), eng.welfare_int(L)))
    return out


def _single_search(eng: _Engine) -> list[tuple[tuple[int, ...], int]]:
    base = eng.A @ eng.T[:, 1]
    lo = base.min()
    return [((int(k),), eng.welfare_int(eng.A[k])) for k in np.nonzero(base == lo)[0]]


class _Dfs:
    def __init__(self, eng: _Engine, budget: int, prune: bool):
        self.eng, self.budget, self.prune = eng, budget, prune
        self.nodes = 0
        self.found: list[tuple[tuple[int, ...], int]] = []

    def leaf(self, idx, L) -> None:
        eng = self.eng
        T, A, rows = eng.T, eng.A, eng.rows
        for u in sorted(set(idx)):
            cur = int(T[rows, L][eng.Abool[u]].sum())
            dev = A @ T[rows, L - A[u] + 1]
            if dev.min() < cur:
                return
        self.found.append((tuple(idx), eng.welfare_int(L)))

    def hopeless(self, idx, L, j) -> bool:
        eng = self.eng
        T, A, rows, n = eng.T, eng.A, eng.rows, eng.n
        r = n - len(idx)
        lmin = L + r * eng.common[j]
        lmax = L + r * eng.anyuse[j]
        for u in sorted(set(idx)):
            lb = T[rows, lmin][eng.Abool[u]].sum()
            ub = (A @ T[rows, np.minimum(n, lmax - A[u] + 1)]).min()
            if lb > ub:
                return True
        fut = A[j:] @ T[rows, np.maximum(L + 1, lmin)]
        ub = (A @ T[rows, np.minimum(n, lmax + 1)]).min()
        return fut.min() > ub

    def run(self, idx: list[int], L) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(self.budget, f">{self.budget} search nodes")
        if len(idx) == self.eng.n:
            self.leaf(idx, L)
            return
        j0 = idx[-1] if idx else 0
        if self.prune and idx and self.hopeless(idx, L, j0):
            return
        for j in range(j0, self.eng.S):
            idx.append(j)
            self.run(idx, L + self.eng.A[j])
            idx.pop()


def _subtree(args) -> tuple[list, int]:
    eng, budget, prune, j = args
    dfs = _Dfs(eng, budget, prune)
    dfs.nodes = 1
    dfs.run([j], eng.A[j].copy())
    return dfs.found, dfs.nodes


def enumerate_pnes(view: FiniteGameView, budget: Optional[int] = None,
                   workers: int = 1, prune: bool = True) -> EquilibriumSet:
    """Every PNE of ``view`` by exhaustive search over strategy multisets.

    Two players use a vectorized best-response matrix.  Larger games walk
    sorted index tuples; when every cost table is non-decreasing, subtrees in
    which some player's cost lower bound exceeds a deviation upper bound are
    skipped.  ``prune=False`` forces the plain walk (a test oracle).
    """
    budget = default_budget() if budget is None else budget
    S, n = len(view.strategies), view.n
    if S == 0:
        return EquilibriumSet(view, [], [])
    eng = _Engine(view)
    if n == 1:
        found = _single_search(eng)
    elif n == 2 and S * S <= 4_000_000 and prune:
        if S * S > budget:
            raise SearchBudgetExceeded(budget, S * S)
        found = _pairs_search(eng)
    else:
        prune = prune and eng.monotone
        size = _count_multisets(S, n)
        if not prune and size > budget:
            raise SearchBudgetExceeded(budget, size)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_subtree, [(eng, budget, prune, j) for j in range(S)]))
            found = [x for part, _ in parts for x in part]
        else:
            dfs = _Dfs(eng, budget, prune)
            dfs.run([], np.zeros(eng.E, dtype=np.int64))
            found = dfs.found
    found.sort()
    return EquilibriumSet(view, [m for m, _ in found],
                          [Fraction(w, eng.scale) for _, w in found])


def max_welfare(view: FiniteGameView, budget: Optional[int] = None) -> tuple[Fraction, tuple[int, ...]]:
    """Centralized optimum over all profiles, with one maximizing multiset."""
    budget = default_budget() if budget is None else budget
    S, n = len(view.strategies), view.n
    if S == 0:
        return NEG_INF, ()
    size = _count_multisets(S, n)
    if size > budget:
        raise SearchBudgetExceeded(budget, size)
    eng = _Engine(view)
    A, T = eng.A, eng.T
    if n == 1:
        tot = A @ T[:, 1]
        k = int(np.argmin(tot))
        return Fraction(-int(tot[k]), eng.scale), (k,)
    if n == 2 and S * S <= 4_000_000:
        t1, t2 = T[:, 1], T[:, 2]
        base = A @ t1
        D = (A * (2 * t2 - 2 * t1)) @ A.T
        tot = base[:, None] + base[None, :] + D
        tot = np.where(np.triu(np.ones((S, S), dtype=bool)), tot, tot.max() + 1)
        a, m = np.unravel_index(int(np.argmin(tot)), tot.shape)
        return Fraction(-int(tot[a, m]), eng.scale), (int(a), int(m))
    best: list[Any] = [None, None]
    idx: list[int] = []

    def rec(L) -> None:
        if len(idx) == n:
            w = eng.welfare_int(L)
            if best[0] is None or w > best[0]:
                best[0], best[1] = w, tuple(idx)
            return
        for j in range(idx[-1] if idx else 0, S):
            idx.append(j)
            rec(L + A[j])
            idx.pop()

    rec(np.zeros(eng.E, dtype=np.int64))
    return Fraction(best[0], eng.scale), best[1]


def is_pne_bruteforce(view: FiniteGameView, idx: Sequence[int]) -> bool:
    """Check every unilateral deviation explicitly (oracle for tests)."""
    for i in range(len(idx)):
        cur = view.cost(idx, i)
        if any(view.deviation_cost(idx, i, k) < cur for k in range(len(view.strategies))):
            return False
    return True
