"""Exact rational helpers.

All real-valued quantities are :class:`fractions.Fraction`.  This module adds
string parsing/formatting for the JSON and CLI surfaces and an infinity
sentinel that orders above (or below) every rational.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Union

Number = Union[int, Fraction]


def parse_rational(value: object) -> Fraction:
    """Parse ``"p/q"``, an integer, or a decimal string exactly.

    Floats are routed through their shortest ``repr`` so ``0.2`` becomes
    ``1/5`` rather than the binary approximation.
    """
    if isinstance(value, bool):
        raise TypeError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    if isinstance(value, Infinity):
        return str(value)
    return str(Fraction(value))


def parse_table(values: Iterable[object]) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)


@functools.total_ordering
class Infinity:
    """Signed infinity, comparable with any rational."""

    __slots__ = ("sign",)

    def __init__(self, sign: int = 1) -> None:
        self.sign = 1 if sign > 0 else -1

    def __neg__(self) -> "Infinity":
        return Infinity(-self.sign)

    def __add__(self, other: object) -> "Infinity":
        if isinstance(other, Infinity) and other.sign != self.sign:
            raise ArithmeticError("inf - inf is undefined")
        return self

    __radd__ = __add__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Infinity) and other.sign == self.sign

    def __lt__(self, other: object) -> bool:
        if isinstance(other, Infinity):
            return self.sign < other.sign
        return self.sign < 0

    def __hash__(self) -> int:
        return hash(("inf", self.sign))

    def __repr__(self) -> str:
        return "INF" if self.sign > 0 else "-INF"

    def __str__(self) -> str:
        return "inf" if self.sign > 0 else "-inf"


INF = Infinity(1)
NEG_INF = Infinity(-1)


def common_denominator(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators."""
    return math.lcm(1, *(Fraction(v).denominator for v in values))
