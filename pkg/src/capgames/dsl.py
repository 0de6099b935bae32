"""The two strategy languages.

Path programs (DncDa)::

    return DA(u);
    if (u == V) { return W; } else { <program> }

Piecewise programs (GMG)::

    return C;
    if (x < T) { return C; } else { <program> }

Program size is the number of ``if`` statements, so a path program of size k
describes a path of length k and a piecewise program of size k has at most
k + 1 segments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import DncGame, Path, path_edges
from .gmg import GmgLayout, IntervalStrategy
from .rational import parse_rational


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class CompileError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(==|[(){};<])|(-?[A-Za-z0-9_.]+(?:/[0-9]+)?))")
_KEYWORDS = {"if", "else", "return", "ret", "DA"}


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens, pos = [], 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(i: int) -> tuple[int, int]:
        ln = max(k for k, s in enumerate(line_starts) if s <= i)
        return ln + 1, i - line_starts[ln] + 1

    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", *where(start))
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append(Token(m.group(1) or m.group(2), *where(start)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        last = self.tokens[-1] if self.tokens else Token("", 1, 1)
        self.eof = Token("<end of input>", last.line, last.col + len(last.text))

    def peek(self) -> Token:
        return self.tokens[self.i] if self.i < len(self.tokens) else self.eof

    def expect(self, *options: str) -> Token:
        tok = self.peek()
        if tok.text not in options:
            raise ParseError(f"expected {' or '.join(repr(o) for o in options)}, got {tok.text!r}",
                             tok.line, tok.col)
        self.i += 1
        return tok

    def atom(self, what: str) -> Token:
        tok = self.peek()
        if tok is self.eof or tok.text in _KEYWORDS or not _TOKEN.fullmatch(tok.text) \
                or tok.text in "(){};<" or tok.text == "==":
            raise ParseError(f"expected {what}, got {tok.text!r}", tok.line, tok.col)
        self.i += 1
        return tok

    def done(self) -> None:
        tok = self.peek()
        if tok is not self.eof:
            raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)


# --------------------------------------------------------------------------
# path programs

@dataclass(frozen=True)
class PathProgram:
    """Guarded jumps ``u == V -> W``; every other vertex takes its default."""

    cases: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "cases", tuple(sorted(self.cases)))
        guards = [g for g, _ in self.cases]
        if len(set(guards)) != len(guards):
            raise ValueError("duplicate guard in path program")

    @property
    def size(self) -> int:
        return len(self.cases)

    def lookup(self, u: str) -> Optional[str]:
        for g, w in self.cases:
            if g == u:
                return w
        return None

    def emit(self) -> str:
        return _emit_nested([f"if (u == {g}) {{ return {w}; }}" for g, w in self.cases],
                            "return DA(u);")


def _emit_nested(heads: list[str], tail: str) -> str:
    lines, depth = [], 0
    for h in heads:
        lines.append("    " * depth + h + " else {")
        depth += 1
    lines.append("    " * depth + tail)
    for d in range(depth - 1, -1, -1):
        lines.append("    " * d + "}")
    return "\n".join(lines) + "\n"


def parse_path_program(text: str) -> PathProgram:
    p = _Parser(text)
    cases: list[tuple[str, str]] = []
    depth = 0
    while True:
        tok = p.peek()
        if tok.text in ("return", "ret"):
            p.i += 1
            p.expect("DA")
            p.expect("(")
            p.expect("u", "vu")
            p.expect(")")
            p.expect(";")
            break
        p.expect("if")
        p.expect("(")
        p.expect("u", "vu")
        p.expect("==")
        guard = p.atom("vertex id")
        p.expect(")")
        p.expect("{")
        p.expect("return", "ret")
        target = p.atom("vertex id")
        p.expect(";")
        p.expect("}")
        p.expect("else")
        p.expect("{")
        if any(g == guard.text for g, _ in cases):
            raise ParseError(f"duplicate guard {guard.text!r}", guard.line, guard.col)
        cases.append((guard.text, target.text))
        depth += 1
    for _ in range(depth):
        p.expect("}")
    p.done()
    return PathProgram(tuple(cases))


def compile_path_program(game: DncGame, prog: PathProgram) -> Path:
    """Follow the program from s: guarded jump if present, else the default."""
    guards = dict(prog.cases)
    for g, w in prog.cases:
        for v in (g, w):
            if v not in game.vertices:
                raise CompileError(f"unknown vertex {v!r}")
    path, seen, u = [game.source], {game.source}, game.source
    while u != game.sink:
        if u in guards:
            w = guards[u]
            if (u, w) not in game.edge_map:
                raise CompileError(f"illegal transition {u} -> {w}")
        else:
            w = game.default_action(u)
            if w is None:
                raise CompileError(f"no default action at {u!r}")
        if w in seen:
            raise CompileError(f"cycle in program path at {w!r}")
        path.append(w)
        seen.add(w)
        u = w
    return tuple(path)


def minimal_path_program(game: DncGame, path: Path) -> PathProgram:
    """One guard per unit-length edge on the path."""
    return PathProgram(tuple((u, v) for u, v in path_edges(path)
                             if game.edge_map[(u, v)].weight == 1))


# --------------------------------------------------------------------------
# piecewise programs

@dataclass(frozen=True)
class PiecewiseProgram:
    """``x < thresholds[k]`` selects ``constants[k]``; past the last, the tail."""

    thresholds: tuple[Fraction, ...] = ()
    constants: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        if len(self.constants) != len(self.thresholds) + 1:
            raise ValueError("need exactly one more constant than thresholds")
        if any(a >= b for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be strictly increasing")
        if any(c < 0 for c in self.constants):
            raise ValueError("line constants must be non-negative")

    @property
    def size(self) -> int:
        return len(self.thresholds)

    def line_at(self, x: Fraction) -> int:
        k = 0
        while k < len(self.thresholds) and x >= self.thresholds[k]:
            k += 1
        return self.constants[k]

    def evaluate(self, layout: GmgLayout) -> IntervalStrategy:
        if max(self.constants) >= layout.K:
            raise CompileError(f"line constant {max(self.constants)} >= K={layout.K}")
        return IntervalStrategy(tuple(self.line_at(r.x) for r in layout.resources))

    def emit(self) -> str:
        heads = [f"if (x < {t}) {{ return {c}; }}"
                 for t, c in zip(self.thresholds, self.constants)]
        return _emit_nested(heads, f"return {self.constants[-1]};")


def parse_piecewise_program(text: str) -> PiecewiseProgram:
    p = _Parser(text)
    thresholds: list[Fraction] = []
    constants: list[int] = []
    depth = 0

    def constant() -> int:
        tok = p.atom("line index")
        if not tok.text.isdigit():
            raise ParseError(f"line index must be a non-negative integer, got {tok.text!r}",
                             tok.line, tok.col)
        return int(tok.text)

    while True:
        tok = p.peek()
        if tok.text in ("return", "ret"):
            p.i += 1
            constants.append(constant())
            p.expect(";")
            break
        p.expect("if")
        p.expect("(")
        p.expect("x", "vx")
        p.expect("<")
        ttok = p.atom("threshold")
        try:
            t = parse_rational(ttok.text)
        except ValueError:
            raise ParseError(f"bad threshold {ttok.text!r}", ttok.line, ttok.col) from None
        if thresholds and t <= thresholds[-1]:
            raise ParseError("thresholds must be strictly increasing", ttok.line, ttok.col)
        thresholds.append(t)
        p.expect(")")
        p.expect("{")
        p.expect("return", "ret")
        constants.append(constant())
        p.expect(";")
        p.expect("}")
        p.expect("else")
        p.expect("{")
        depth += 1
    for _ in range(depth):
        p.expect("}")
    p.done()
    return PiecewiseProgram(tuple(thresholds), tuple(constants))


def program_for_strategy(layout: GmgLayout, f: IntervalStrategy) -> PiecewiseProgram:
    """Shortest program: a threshold at each resource where the line changes."""
    a = f.assignment
    if not a:
        return PiecewiseProgram((), (0,))
    thresholds, constants = [], [a[0]]
    for p in range(1, len(a)):
        if a[p] != a[p - 1]:
            thresholds.append(layout.resources[p].x)
            constants.append(a[p])
    return PiecewiseProgram(tuple(thresholds), tuple(constants))


def index_cuts(layout: GmgLayout, thresholds: Sequence[Fraction]) -> tuple[int, ...]:
    """Resource count left of each threshold: the only thing evaluation sees."""
    xs = [r.x for r in layout.resources]
    return tuple(sum(1 for x in xs if x < t) for t in thresholds)
