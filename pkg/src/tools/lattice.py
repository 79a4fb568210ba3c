"""
Exact lattice-point enumeration.

Binary forms are Gauss-reduced with their basis change tracked, then
enumerated row by row; higher-rank Grams go through an exact rational
LDL decomposition and a depth-first Fincke–Pohst search.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterator, List, Sequence, Tuple

from src.tools.arith import ceil_frac, floor_frac

Vector = Tuple[int, ...]
Matrix = List[List[Fraction]]


class BinaryForm:
    """Positive definite a·x² + b·xy + c·y² over Z, with a tracked basis change.

    `basis` holds the images of the reduced coordinates in the original ones:
    a reduced point (x, y) corresponds to x·basis[0] + y·basis[1].
    """

    def __init__(self, a: int, b: int, c: int,
                 basis: Tuple[Tuple[int, int], Tuple[int, int]] = ((1, 0), (0, 1))):
        self.a, self.b, self.c = a, b, c
        self.basis = basis
        if a <= 0 or self.discriminant() >= 0:
            raise ValueError(f"{self} is not positive definite")

    def __repr__(self):
        return f"{self.a}x^2 + {self.b}xy + {self.c}y^2"

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def value(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def normalize(self) -> BinaryForm:
        a, b, c = self.a, self.b, self.c
        r = (a - b) // (2 * a)
        (e1, e2) = self.basis
        f2 = (e2[0] + r * e1[0], e2[1] + r * e1[1])
        return BinaryForm(a, b + 2 * r * a, a * r * r + b * r + c, (e1, f2))

    def reduced_form(self) -> BinaryForm:
        form = self.normalize()
        while form.a > form.c:
            e1, e2 = form.basis
            # (x, y) -> (-y, x) keeps orientation
            form = BinaryForm(form.c, -form.b, form.a, (e2, (-e1[0], -e1[1]))).normalize()
        return form

    def points(self, bound: int) -> Iterator[Tuple[int, int]]:
        """All (x, y) in reduced coordinates with value ≤ bound."""
        if bound < 0:
            return
        a, b = self.a, self.b
        disc = -self.discriminant()
        y_max = isqrt(4 * a * bound // disc)
        for y in range(-y_max, y_max + 1):
            room = 4 * a * bound - disc * y * y
            if room < 0:
                continue
            r = isqrt(room)
            for x in range((-b * y - r - 1) // (2 * a), (-b * y + r + 1) // (2 * a) + 1):
                if self.value(x, y) <= bound:
                    yield x, y

    def original_points(self, bound: int) -> Iterator[Tuple[int, int]]:
        (e1, e2) = self.basis
        for x, y in self.points(bound):
            yield x * e1[0] + y * e2[0], x * e1[1] + y * e2[1]


def ldl(gram: Sequence[Sequence]) -> Tuple[List[Fraction], Matrix]:
    """
    Exact decomposition q(v) = Σ d_i (v_i + Σ_{j>i} mu[i][j] v_j)².

    Returns (d, mu); d has a non-positive entry iff gram is not positive definite.
    """
    n = len(gram)
    Q = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        if Q[i][i] <= 0:
            return [Q[k][k] for k in range(n)], Q
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    return [Q[i][i] for i in range(n)], Q


def is_positive_definite(gram: Sequence[Sequence]) -> bool:
    n = len(gram)
    if any(Fraction(gram[i][j]) != Fraction(gram[j][i]) for i in range(n) for j in range(n)):
        return False
    d, _ = ldl(gram)
    return all(x > 0 for x in d)


def leading_minors(gram: Sequence[Sequence]) -> List[Fraction]:
    d, _ = ldl(gram)
    out, acc = [], Fraction(1)
    for x in d:
        acc *= x
        out.append(acc)
    return out


def quadratic_value(gram: Sequence[Sequence], v: Sequence[int]) -> Fraction:
    n = len(v)
    return sum(Fraction(gram[i][j]) * v[i] * v[j] for i in range(n) for j in range(n))


def short_vectors(gram: Sequence[Sequence], bound) -> Iterator[Vector]:
    """Every integer v with vᵀ·gram·v ≤ bound (zero vector included)."""
    n = len(gram)
    d, mu = ldl(gram)
    if any(x <= 0 for x in d):
        raise ValueError("Gram matrix is not positive definite")
    bound = Fraction(bound)
    if bound < 0:
        return
    v = [0] * n

    def search(i: int, remaining: Fraction) -> Iterator[Vector]:
        if i < 0:
            yield tuple(v)
            return
        center = -sum((mu[i][j] * v[j] for j in range(i + 1, n)), Fraction(0))
        radius2 = remaining / d[i]
        slack = isqrt(floor_frac(radius2)) + 1
        for x in range(floor_frac(center) - slack, ceil_frac(center) + slack + 1):
            gap = d[i] * (x - center) ** 2
            if gap <= remaining:
                v[i] = x
                yield from search(i - 1, remaining - gap)
        v[i] = 0

    yield from search(n - 1, bound)


def count_points(gram: Sequence[Sequence], bound) -> int:
    return sum(1 for _ in short_vectors(gram, bound))
