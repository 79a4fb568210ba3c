"""
Certified real arithmetic on top of mpmath's interval context.

Every real-valued bound is an `iv.mpf` enclosure; comparisons that the
current precision cannot decide are retried at doubled precision.
"""
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Optional

from mpmath import iv
from mpmath.libmp import round_ceiling, round_floor, to_float

from src.utils.errors import UndecidableComparison

DEFAULT_BITS = 96
MAX_BITS = 4096


@contextmanager
def interval_precision(bits: int):
    saved = iv.prec
    iv.prec = max(bits, 16)
    try:
        yield
    finally:
        iv.prec = saved


def rational(q) -> "iv.mpf":
    """Enclosure of an exact rational (int or Fraction)."""
    q = Fraction(q)
    return iv.mpf(q.numerator) / q.denominator


def lower(x) -> float:
    """Left endpoint rounded down to a double."""
    return to_float(x._mpi_[0], rnd=round_floor)


def upper(x) -> float:
    return to_float(x._mpi_[1], rnd=round_ceiling)


def radius(x) -> float:
    return float(x.delta) / 2


def midpoint(x) -> float:
    return float(x.mid)


def hull(*xs):
    lo = min(xs, key=lambda x: x.a).a
    hi = max(xs, key=lambda x: x.b).b
    return iv.mpf([lo, hi])


def imin(*xs):
    lo = min((x.a for x in xs))
    hi = min((x.b for x in xs))
    return iv.mpf([lo, hi])


def imax(*xs):
    lo = max((x.a for x in xs))
    hi = max((x.b for x in xs))
    return iv.mpf([lo, hi])


def decide(predicate: Callable[[], Optional[bool]], bits: int = DEFAULT_BITS, what: str = "comparison") -> bool:
    """
    Evaluate an interval predicate, doubling precision while it returns None.

    The predicate must rebuild its intervals on every call so that they pick up
    the current precision.
    """
    while bits <= MAX_BITS:
        with interval_precision(bits):
            verdict = predicate()
        if verdict is not None:
            return bool(verdict)
        bits *= 2
    raise UndecidableComparison(f"{what} undecided at {MAX_BITS} bits")


def to_json(x) -> dict:
    return {"lo": lower(x), "hi": upper(x)}
