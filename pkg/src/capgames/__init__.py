"""Capability-bounded congestion games: models, solvers and checkers."""

from .core import DncGame, Edge, validate_game
from .gmg import GmgLayout, IntervalStrategy, Resource
from .rational import INF, parse_rational
from .solvers import DncView, GmgView, enumerate_pnes, best_response_dynamics

__all__ = [
    "DncGame", "Edge", "validate_game",
    "GmgLayout", "IntervalStrategy", "Resource",
    "INF", "parse_rational",
    "DncView", "GmgView", "enumerate_pnes", "best_response_dynamics",
]
__version__ = "0.1.0"
