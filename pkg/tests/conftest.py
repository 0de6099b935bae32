from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from capgames.core import DNCDA, make_game

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# Dashed (unit) and solid (default) edges of the worked DncDa example.
WORKED_UNIT = [("s", "1"), ("s", "2"), ("1", "2"), ("2", "4"), ("2", "t"), ("3", "4"), ("4", "t")]
WORKED_DEFAULT = [("1", "3"), ("2", "3"), ("3", "t"), ("4", "5"), ("5", "t")]


def worked_game(bound=1, players=1, table=(1, 2)):
    edges = [(a, b, 1, table) for a, b in WORKED_UNIT] + [(a, b, 0, table) for a, b in WORKED_DEFAULT]
    return make_game(edges, bound=bound, players=players, variant=DNCDA)


@pytest.fixture
def worked():
    return worked_game()


def F(x):
    return Fraction(x)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "VERDICTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[n])
