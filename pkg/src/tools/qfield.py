"""
Exact arithmetic in a real quadratic field Q(√D).

Elements are stored as x + y√D with rational x, y. Signs in both real
embeddings are decided exactly from the signs of x, y and of x² − y²D.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Tuple, Union

from src.tools.arith import is_squarefree
from src.utils.errors import (DivisionByZero, MalformedInput, MixedFields,
                              NotGreaterThanOne, NotSquarefree)

Rational = Union[int, Fraction]
Interval = Tuple[Fraction, Fraction]


def _sign(q) -> int:
    return (q > 0) - (q < 0)


@dataclass(frozen=True)
class QuadraticField:
    D: int

    def __post_init__(self):
        if self.D <= 1:
            raise NotGreaterThanOne(f"D must be ≥ 2, got {self.D}")
        if not is_squarefree(self.D):
            raise NotSquarefree(f"{self.D} is not squarefree")

    def __repr__(self) -> str:
        return f"QuadraticField({self.D})"

    def __str__(self) -> str:
        return f"Q(√{self.D})"

    @property
    def is_one_mod_four(self) -> bool:
        return self.D % 4 == 1

    @cached_property
    def disc(self) -> int:
        return self.D if self.is_one_mod_four else 4 * self.D

    @cached_property
    def omega(self) -> FieldElement:
        if self.is_one_mod_four:
            return FieldElement(self, Fraction(1, 2), Fraction(1, 2))
        return FieldElement(self, 0, 1)

    @cached_property
    def xi(self) -> FieldElement:
        return -self.omega.conj()

    @property
    def trace_omega(self) -> int:
        """t = Tr(ω); minimal polynomial of ω is X² − tX + n."""
        return 1 if self.is_one_mod_four else 0

    @property
    def norm_omega(self) -> int:
        return (1 - self.D) // 4 if self.is_one_mod_four else -self.D

    @cached_property
    def sqrt_disc(self) -> FieldElement:
        """ω − ω' = √Δ (positive in the first embedding)."""
        return self.omega - self.omega.conj()

    @cached_property
    def one(self) -> FieldElement:
        return FieldElement(self, 1, 0)

    @cached_property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0, 0)

    def element(self, x: Rational, y: Rational = 0) -> FieldElement:
        return FieldElement(self, x, y)

    def from_basis(self, u: Rational, v: Rational) -> FieldElement:
        """u + v·ω."""
        return self.one * u + self.omega * v

    def parse(self, text: str) -> FieldElement:
        return parse_element(text, self)


def field_new(D: int) -> QuadraticField:
    return QuadraticField(D)


@dataclass(frozen=True, eq=True)
class FieldElement:
    field: QuadraticField
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    # --- coercion ---
    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedFields(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, other, 0)
        return NotImplemented

    # --- ring operations ---
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.x, -self.y)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.x - other.x, self.y - other.y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        D = self.field.D
        return FieldElement(self.field,
                            self.x * other.x + D * self.y * other.y,
                            self.x * other.y + self.y * other.x)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        n = self.norm()
        if n == 0:
            raise DivisionByZero("division by zero in " + str(self.field))
        c = self.conj()
        return FieldElement(self.field, c.x / n, c.y / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> FieldElement:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.x) or bool(self.y)

    # --- conjugation, norm, trace ---
    def conj(self) -> FieldElement:
        return FieldElement(self.field, self.x, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x - self.field.D * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def norm_trace(self) -> Tuple[Fraction, Fraction]:
        return self.norm(), self.trace()

    def is_rational(self) -> bool:
        return self.y == 0

    def is_integral(self) -> bool:
        n, t = self.norm_trace()
        return n.denominator == 1 and t.denominator == 1

    def coords(self) -> Tuple[Fraction, Fraction]:
        """Coordinates (u, v) with self = u + v·ω."""
        if self.field.is_one_mod_four:
            v = 2 * self.y
            return self.x - self.y, v
        return self.x, self.y

    # --- signs ---
    def sign(self) -> int:
        """Exact sign of x + y√D."""
        sx, sy = _sign(self.x), _sign(self.y)
        if sx == 0 or sy == 0 or sx == sy:
            return sx or sy
        # opposite signs: the larger square wins
        return sx * _sign(self.x * self.x - self.field.D * self.y * self.y)

    def sign_conj(self) -> int:
        return self.conj().sign()

    def signature(self) -> Tuple[int, int]:
        return self.sign(), self.sign_conj()

    def is_totally_positive(self) -> bool:
        return self.sign() > 0 and self.sign_conj() > 0

    def succ(self, other) -> bool:
        """self ≻ other: self − other is totally positive."""
        return (self - other).is_totally_positive()

    # --- real embeddings ---
    def embed_interval(self, precision: int) -> Tuple[Interval, Interval]:
        """Enclosing rational intervals of width ≤ 2^-precision for (a, a')."""
        if self.y == 0:
            return (self.x, self.x), (self.x, self.x)
        abs_y = abs(self.y)
        k = precision + max(1, math.ceil(abs_y).bit_length())
        scale = 1 << k
        r = isqrt(self.field.D * scale * scale)
        lo_sqrt, hi_sqrt = Fraction(r, scale), Fraction(r + 1, scale)
        if self.y > 0:
            first = (self.x + self.y * lo_sqrt, self.x + self.y * hi_sqrt)
            second = (self.x - self.y * hi_sqrt, self.x - self.y * lo_sqrt)
        else:
            first = (self.x + self.y * hi_sqrt, self.x + self.y * lo_sqrt)
            second = (self.x - self.y * lo_sqrt, self.x - self.y * hi_sqrt)
        return first, second

    def approx(self) -> Tuple[float, float]:
        """Float values of both embeddings; display and ordering only."""
        s = math.sqrt(self.field.D)
        return float(self.x) + float(self.y) * s, float(self.x) - float(self.y) * s

    # --- text form ---
    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"FieldElement({format_element(self)})"


def is_totally_positive(a: FieldElement) -> bool:
    return a.is_totally_positive()


def conj(a: FieldElement) -> FieldElement:
    return a.conj()


def norm_trace(a: FieldElement) -> Tuple[Fraction, Fraction]:
    return a.norm_trace()


def elem_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise MalformedInput(f"unknown operation {op!r}")


def format_element(a: FieldElement) -> str:
    """'x+y*sqrt(D)' with rationals as p/q; the y-part is dropped when zero."""
    if a.y == 0:
        return str(a.x)
    sign = "+" if a.y > 0 else "-"
    return f"{a.x}{sign}{abs(a.y)}*sqrt({a.field.D})"


_ELEMENT_RE = re.compile(
    r"^\s*(?P<x>[+-]?\d+(?:/\d+)?)?\s*"
    r"(?:(?P<sign>[+-])?\s*(?P<y>\d+(?:/\d+)?)?\s*\*?\s*sqrt\(\s*(?P<D>\d+)\s*\))?\s*$"
)


def parse_element(text: str, field: QuadraticField) -> FieldElement:
    match = _ELEMENT_RE.match(text)
    if not match or (match.group("x") is None and match.group("D") is None):
        raise MalformedInput(f"cannot parse field element {text!r}")
    x = Fraction(match.group("x")) if match.group("x") else Fraction(0)
    y = Fraction(0)
    if match.group("D") is not None:
        if int(match.group("D")) != field.D:
            raise MixedFields(f"{text!r} does not live in {field}")
        y = Fraction(match.group("y")) if match.group("y") else Fraction(1)
        if match.group("sign") == "-":
            y = -y
        elif match.group("sign") is None and match.group("x") is not None:
            if match.group("y") is not None:
                raise MalformedInput(f"missing sign before sqrt in {text!r}")
            # "3*sqrt(2)": the leading number is the coefficient
            x, y = Fraction(0), x
    return FieldElement(field, x, y)
