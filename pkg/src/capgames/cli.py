"""Command-line entry point.

Exit codes: 0 success, 1 usage or parse error, 2 domain error (invalid game,
illegal program, parameters outside a construction's range), 3 search budget
exceeded.  Results go to stdout or ``--out``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

from . import aog, constructions as cx, core, dsl, gmg, instances, properties
from .rational import format_rational, parse_rational
from .solvers import (DynamicsDiverged, SearchBudgetExceeded, best_response_dynamics,
                      enumerate_pnes, max_welfare, trace_rows, view_for)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_BUDGET = 0, 1, 2, 3

Instance = Union[core.DncGame, gmg.GmgLayout]


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    out: Optional[str] = None
    budget: Optional[int] = None
    pivot: str = "max"
    levels: Optional[list[int]] = None
    workers: int = 1
    seed: int = 0


class BudgetError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Exit 1 on usage errors; read ``-4/5`` or ``-1,-2`` as values, not flags."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-[\d.][\d./,-]*$")

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_levels(text: str) -> list[int]:
    """``"1..24"``, ``"1,3,5"``, ``"4"`` or a mix such as ``"1..3,7"``."""
    out: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = (int(v) for v in part.split(".."))
                out.update(range(lo, hi + 1))
            else:
                out.add(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad level list {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("levels must be positive integers")
    return sorted(out)


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _table(text: str):
    return tuple(_rational(v) for v in text.split(","))


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


# --------------------------------------------------------------------------
# I/O helpers

def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from None


def load_instance(path: str) -> Instance:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object")
    try:
        if "resources" in data:
            return gmg.layout_from_dict(data)
        return core.game_from_dict(data)
    except (core.GameError, gmg.LayoutError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def instance_problems(obj: Instance) -> list[str]:
    if isinstance(obj, gmg.GmgLayout):
        return gmg.validate_layout(obj)
    return [str(i) for i in core.validate_game(obj).issues]


def _require_valid(obj: Instance) -> None:
    problems = instance_problems(obj)
    if problems:
        raise DomainError("invalid instance:\n  " + "\n  ".join(problems))


def dump_instance(obj: Instance) -> str:
    if isinstance(obj, gmg.GmgLayout):
        return gmg.dumps_layout(obj) + "\n"
    return core.dumps_game(obj) + "\n"


def _csv(rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _fmt(v) -> Optional[str]:
    return None if v is None else format_rational(v)


def _strategy_text(s) -> str:
    return "-".join(s) if isinstance(s, tuple) else str(s)


# --------------------------------------------------------------------------
# subcommands

def cmd_validate(args, cfg: RunConfig) -> str:
    obj = load_instance(args.file)
    problems = instance_problems(obj)
    if problems:
        raise DomainError("\n".join(problems))
    kind = "layout" if isinstance(obj, gmg.GmgLayout) else obj.variant
    return f"ok ({kind})\n"


def cmd_solve(args, cfg: RunConfig) -> str:
    obj = load_instance(args.file)
    _require_valid(obj)
    view = view_for(obj, args.bound)
    try:
        res = best_response_dynamics(view, pivot=cfg.pivot, max_steps=args.max_steps)
    except DynamicsDiverged as exc:
        raise DomainError(str(exc)) from None
    if args.csv:
        return _csv(trace_rows(res))
    out = {
        "profile": [_strategy_text(s) for s in view.native(res.profile)],
        "steps": res.steps,
        "potential": format_rational(view.potential(res.profile)),
        "welfare": format_rational(view.welfare(res.profile)),
        "is_pne": view.is_pne(res.profile),
    }
    return json.dumps(out, indent=2) + "\n"


def cmd_enumerate(args, cfg: RunConfig) -> str:
    obj = load_instance(args.file)
    _require_valid(obj)
    view = view_for(obj, args.bound)
    eq = enumerate_pnes(view, cfg.budget, workers=cfg.workers)
    wel = eq.welfares
    if args.csv:
        rows = [["profile", "welfare"]]
        rows += [[" | ".join(_strategy_text(s) for s in p), format_rational(w)]
                 for p, w in zip(eq.profiles, wel)]
        return _csv(rows)
    out = {
        "strategies": len(view.strategies),
        "pnes": len(eq),
        "ordered_pnes": eq.ordered_count,
        "bestw": _fmt(max(wel)) if wel else None,
        "worstw": _fmt(min(wel)) if wel else None,
        "equilibria": [{"profile": [_strategy_text(s) for s in p], "welfare": format_rational(w)}
                       for p, w in zip(eq.profiles, wel)],
    }
    if args.centralized:
        out["centralized_best"] = _fmt(max_welfare(view, cfg.budget)[0])
    return json.dumps(out, indent=2) + "\n"


def cmd_sweep(args, cfg: RunConfig) -> str:
    obj = load_instance(args.file)
    _require_valid(obj)
    sr = properties.sweep(obj, cfg.levels, centralized=args.centralized,
                          budget=cfg.budget, workers=cfg.workers)
    if sr.levels and all(not r.ok for r in sr.levels):
        raise BudgetError("; ".join(sr.notes))
    return properties.sweep_csv(sr)


def cmd_aog(args, cfg: RunConfig) -> str:
    try:
        params = aog.AogParams(args.M, args.rho, args.mu)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    if args.layout:
        return dump_instance(aog.build_layout(params, args.layout))
    if not params.interior:
        raise DomainError(f"outside interior region: need -2 + rho < mu < -rho "
                          f"(rho={params.rho}, mu={params.mu})")
    levels = cfg.levels or list(range(1, params.saturation + 2))
    rows = aog.sweep_rows(params, levels, bruteforce=args.bruteforce, budget=cfg.budget)
    header = ["b", "w_eq_closed"] + (["w_eq_bruteforce"] if args.bruteforce else []) + ["w_best", "poa"]
    table = [header]
    for r in rows:
        cells = [r.b, _fmt(r.w_eq)] + ([_fmt(r.w_eq_bruteforce) or ""] if args.bruteforce else [])
        table.append(cells + [_fmt(r.w_best), _fmt(r.poa) or ""])
    if args.csv:
        return _csv(table)
    return json.dumps([dict(zip(header, row)) for row in table[1:]], indent=2) + "\n"


def cmd_construct(args, cfg: RunConfig) -> str:
    kind = args.kind
    if kind == "threshold":
        if args.tables:
            tg = cx.ThresholdGame.from_dict(_read_json(args.tables))
        else:
            tg = _random_threshold(args.n, cfg.seed)
        return dump_instance(cx.threshold_to_dnc(tg).game)
    if kind in ("partition3-best", "partition3-worst"):
        if args.items is None or args.T is None:
            raise UsageError(f"{kind} needs --items and --T")
        inst = cx.Partition3Instance(args.items, args.T)
        build = cx.partition3_best_to_dnc if kind == "partition3-best" else cx.partition3_worst_to_dnc
        return dump_instance(build(inst))
    if kind in ("pp-positive", "pp-zero", "ap", "gmg-pp-gold", "gmg-pp-mine", "gmg-bwr", "gmg-bfr"):
        if args.table is None:
            raise UsageError(f"{kind} needs --table")
        t = args.table
        obj = {
            "pp-positive": lambda: cx.cex_pp_positive(t).game,
            "pp-zero": lambda: cx.cex_pp_zero(t).game,
            "ap": lambda: cx.cex_ap(t),
            "gmg-pp-gold": lambda: cx.gmg_cex_pp(gmg.GOLD, t).layout,
            "gmg-pp-mine": lambda: cx.gmg_cex_pp(gmg.MINE, t).layout,
            "gmg-bwr": lambda: cx.gmg_cex_bwr(t, args.n).layout,
            "gmg-bfr": lambda: cx.gmg_cex_bfr(t, args.n).layout,
        }[kind]()
        return dump_instance(obj)
    if kind == "gmg-dncda":
        if not args.file:
            raise UsageError("gmg-dncda needs --file with a layout")
        layout = load_instance(args.file)
        if not isinstance(layout, gmg.GmgLayout):
            raise UsageError("gmg-dncda expects a layout")
        return dump_instance(gmg.to_dncda(layout).game)
    gen = {"random-dnc": instances.random_dnc, "random-dncda": instances.random_dncda}
    if kind in gen:
        return dump_instance(gen[kind](cfg.seed, vertices=args.vertices, players=args.players))
    if kind == "random-layout":
        return dump_instance(instances.random_layout(cfg.seed, size=args.size, K=args.K,
                                                     players=args.players))
    raise UsageError(f"unknown construction {kind!r}")


def _random_threshold(n: int, seed: int) -> cx.ThresholdGame:
    import random

    rng = random.Random(seed)
    pairs = {(i, j): instances.random_table(rng, 2) for i in range(1, n + 1)
             for j in range(i + 1, n + 1)}
    outs = {i: instances.random_table(rng, 1, hi=3 * (n - 1)) for i in range(1, n + 1)}
    return cx.ThresholdGame(n, pairs, outs)


def cmd_parse_program(args, cfg: RunConfig) -> str:
    try:
        text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    if args.grammar == "path":
        prog = dsl.parse_path_program(text)
        out = {"size": prog.size, "program": prog.emit()}
        if args.instance:
            game = load_instance(args.instance)
            if not isinstance(game, core.DncGame):
                raise UsageError("path programs run on DncDa games")
            _require_valid(game)
            path = dsl.compile_path_program(game, prog)
            out["path"] = list(path)
            out["length"] = core.path_weight(game, path)
    else:
        prog = dsl.parse_piecewise_program(text)
        out = {"size": prog.size, "program": prog.emit()}
        if args.instance:
            layout = load_instance(args.instance)
            if not isinstance(layout, gmg.GmgLayout):
                raise UsageError("piecewise programs run on GMG layouts")
            f = prog.evaluate(layout)
            out["assignment"] = list(f.assignment)
            out["segments"] = f.segments
    return json.dumps(out, indent=2) + "\n"


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write results here instead of stdout")
    common.add_argument("--budget", type=int, help="search-node / profile budget (env CAPGAMES_BUDGET)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="capgames", description="Capability-bounded congestion games.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check a game or layout JSON")
    s.add_argument("file")

    s = sub.add_parser("solve", parents=[common], help="best-response dynamics to a PNE")
    s.add_argument("file")
    s.add_argument("--bound", type=int)
    s.add_argument("--pivot", choices=("max", "round-robin"), default="max")
    s.add_argument("--max-steps", type=int, default=100_000)
    s.add_argument("--csv", action="store_true", help="emit the potential trace")

    s = sub.add_parser("enumerate", parents=[common], help="all PNEs by exhaustive search")
    s.add_argument("file")
    s.add_argument("--bound", type=int)
    s.add_argument("--csv", action="store_true")
    s.add_argument("--centralized", action="store_true", help="also compute the optimum")

    s = sub.add_parser("sweep", parents=[common], help="bestw/worstw per level plus checks")
    s.add_argument("file")
    s.add_argument("--levels", type=parse_levels)
    s.add_argument("--centralized", action="store_true")
    s.add_argument("--csv", action="store_true", help="accepted for symmetry; output is CSV")

    s = sub.add_parser("construct", parents=[common], help="emit a generated instance")
    s.add_argument("kind", choices=(
        "threshold", "partition3-best", "partition3-worst", "pp-positive", "pp-zero", "ap",
        "gmg-pp-gold", "gmg-pp-mine", "gmg-bwr", "gmg-bfr", "gmg-dncda",
        "random-dnc", "random-dncda", "random-layout"))
    s.add_argument("--n", type=int, default=2, help="players (threshold, gmg-bwr, gmg-bfr)")
    s.add_argument("--tables", help="threshold-game JSON")
    s.add_argument("--items", type=_ints)
    s.add_argument("--T", type=int)
    s.add_argument("--table", type=_table, help="comma-separated delay or payoff table")
    s.add_argument("--file", help="input layout for gmg-dncda")
    s.add_argument("--vertices", type=int, default=6)
    s.add_argument("--players", type=int, default=2)
    s.add_argument("--size", type=int, default=5)
    s.add_argument("--K", type=int, default=2)

    s = sub.add_parser("aog", parents=[common], help="alternating-ordering game tables")
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--rho", type=_rational, required=True)
    s.add_argument("--mu", type=_rational, required=True)
    s.add_argument("--levels", type=parse_levels)
    s.add_argument("--csv", action="store_true")
    s.add_argument("--bruteforce", action="store_true", help="add enumerated W_eq column")
    s.add_argument("--layout", type=int, metavar="B", help="emit the layout JSON at level B")

    s = sub.add_parser("parse-program", parents=[common], help="parse and re-emit a program")
    s.add_argument("file")
    s.add_argument("--grammar", choices=("path", "piecewise"), default="path")
    s.add_argument("--instance", help="game or layout JSON to run the program on")
    return p


_COMMANDS = {
    "validate": cmd_validate, "solve": cmd_solve, "enumerate": cmd_enumerate,
    "sweep": cmd_sweep, "aog": cmd_aog, "construct": cmd_construct,
    "parse-program": cmd_parse_program,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(args.subcommand, [getattr(args, "file", None) or ""], args.out,
                    args.budget, getattr(args, "pivot", "max"), getattr(args, "levels", None),
                    args.workers, args.seed)
    try:
        text = _COMMANDS[args.subcommand](args, cfg)
    except (UsageError, dsl.ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SearchBudgetExceeded, BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except gmg.EnumerationTooLarge as exc:
        print(f"error: search budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, dsl.CompileError, core.GameError, gmg.LayoutError,
            cx.NoCounterexample, aog.OutsideInterior, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
