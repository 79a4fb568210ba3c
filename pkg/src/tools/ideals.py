"""
Fractional ideals of O_K in normal form q·(Z·a ⊕ Z·(b+ω)).

The normal form comes from the Hermite normal form of the generator
coordinates over (1, ω); equal ideals have identical (scale, a, b).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy import ZZ, factorint
from sympy.ntheory import sqrt_mod
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from src.tools.arith import ceil_div, ceil_frac, ceil_sqrt, kronecker
from src.tools.cfrac import convergents, fundamental_unit
from src.tools.lattice import BinaryForm
from src.tools.qfield import FieldElement, QuadraticField
from src.utils.errors import MixedFields, NotAnIdeal, NotIntegral, NotPositive, ZeroIdeal

PLUS_PLUS = "++"
PLUS_MINUS = "+-"


def _hnf_columns(columns: Sequence[Tuple[int, int]]) -> Tuple[int, int, int]:
    """(A, B, C) with the lattice spanned by columns equal to Z(A,0) ⊕ Z(B,C)."""
    rows = [[ZZ(col[0]) for col in columns], [ZZ(col[1]) for col in columns]]
    matrix = DomainMatrix(rows, (2, len(columns)), ZZ)
    hnf = hermite_normal_form(matrix).to_Matrix()
    if hnf.shape != (2, 2):
        raise ZeroIdeal("generators do not span a rank-2 module")
    return int(hnf[0, 0]), int(hnf[0, 1]), int(hnf[1, 1])


@dataclass(frozen=True)
class FracIdeal:
    field: QuadraticField
    scale: Fraction
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale <= 0 or self.a <= 0 or not 0 <= self.b < self.a:
            raise NotAnIdeal(f"invalid normal form (scale={self.scale}, a={self.a}, b={self.b})")
        if self._omega_shift_norm(self.b) % self.a != 0:
            raise NotAnIdeal(f"{self.a} does not divide N({self.b}+ω) in {self.field}")

    def _omega_shift_norm(self, b: int) -> int:
        # N(b + ω) = b² + t·b + n
        return b * b + self.field.trace_omega * b + self.field.norm_omega

    # --- construction ---
    @classmethod
    def from_gens(cls, gens: Sequence[FieldElement]) -> FracIdeal:
        gens = [g for g in gens if g]
        if not gens:
            raise ZeroIdeal("all generators are zero")
        field = gens[0].field
        omega = field.omega
        coords = []
        for g in gens:
            if g.field != field:
                raise MixedFields(f"{g.field} vs {field}")
            coords.append(g.coords())
            coords.append((g * omega).coords())
        m = lcm(*(c.denominator for pair in coords for c in pair))
        A, B, C = _hnf_columns([(int(u * m), int(v * m)) for u, v in coords])
        if A % C or B % C:
            raise ArithmeticError("module spanned by g and gω is not an ideal")
        a = A // C
        return cls(field, Fraction(C, m), a, (B // C) % a)

    @classmethod
    def unit(cls, field: QuadraticField) -> FracIdeal:
        return cls(field, 1, 1, 0)

    @classmethod
    def principal(cls, g: FieldElement) -> FracIdeal:
        return cls.from_gens([g])

    # --- basic data ---
    def __str__(self):
        prefix = "" if self.scale == 1 else f"{self.scale}·"
        if self.a == 1:
            return f"{prefix}O" if prefix else "O"
        return f"{prefix}({self.a}, {self.b}+ω)"

    def basis(self) -> Tuple[FieldElement, FieldElement]:
        f = self.field
        return f.element(self.scale * self.a), (f.omega + self.b) * self.scale

    def norm(self) -> Fraction:
        return self.scale * self.scale * self.a

    def is_integral(self) -> bool:
        return self.scale.denominator == 1

    def is_unit(self) -> bool:
        return self.scale == 1 and self.a == 1

    def primitive_part(self) -> Tuple[Fraction, FracIdeal]:
        return self.scale, FracIdeal(self.field, 1, self.a, self.b)

    def contains(self, e: FieldElement) -> bool:
        if e.field != self.field:
            raise MixedFields(f"{e.field} vs {self.field}")
        u, v = (e / self.scale).coords()
        if v.denominator != 1:
            return False
        x = (u - v * self.b) / self.a
        return x.denominator == 1

    # --- arithmetic ---
    def _check(self, other: FracIdeal):
        if other.field != self.field:
            raise MixedFields(f"{self.field} vs {other.field}")

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return FracIdeal.from_gens([g * other for g in self.basis()])
        self._check(other)
        return FracIdeal.from_gens([e * f for e in self.basis() for f in other.basis()])

    def scaled(self, q) -> FracIdeal:
        q = abs(Fraction(q))
        if q == 0:
            raise ZeroIdeal("scaling by zero")
        return FracIdeal(self.field, self.scale * q, self.a, self.b)

    def conjugate(self) -> FracIdeal:
        return FracIdeal.from_gens([g.conj() for g in self.basis()])

    def inverse(self) -> FracIdeal:
        return self.conjugate().scaled(1 / self.norm())

    def __truediv__(self, other: FracIdeal) -> FracIdeal:
        self._check(other)
        return self * other.inverse()


def ideal_from_gens(gens: Sequence[FieldElement]) -> FracIdeal:
    return FracIdeal.from_gens(gens)


def ideal_arith(I: FracIdeal, J: FracIdeal, op: str):
    I._check(J)
    if op == "mul":
        return I * J
    if op == "div":
        return I / J
    if op == "eq":
        return I == J
    raise ValueError(f"unknown ideal operation {op!r}")


def different_codifferent(field: QuadraticField) -> Tuple[FracIdeal, FracIdeal]:
    different = FracIdeal.principal(field.sqrt_disc)
    return different, different.inverse()


# --- enumeration of integral ideals ---

def integral_ideals_of_norm(field: QuadraticField, n: int) -> List[FracIdeal]:
    out = []
    for c in range(1, isqrt(n) + 1):
        if n % (c * c):
            continue
        a = n // (c * c)
        t, m = field.trace_omega, field.norm_omega
        for b in range(a):
            if (b * b + t * b + m) % a == 0:
                out.append(FracIdeal(field, c, a, b))
    return out


def integral_ideals_up_to(field: QuadraticField, bound: int) -> List[FracIdeal]:
    return [I for n in range(1, bound + 1) for I in integral_ideals_of_norm(field, n)]


# --- factorization ---

@dataclass(frozen=True)
class IdealFactorization:
    ideal: FracIdeal
    factors: Tuple[Tuple[FracIdeal, int], ...]

    def product(self) -> FracIdeal:
        result = FracIdeal.unit(self.ideal.field)
        for prime, e in self.factors:
            for _ in range(e):
                result = result * prime
        return result


def _roots_mod_p(field: QuadraticField, p: int) -> List[int]:
    """Roots of X² + tX + n (mod p); N(b + ω) ≡ 0 iff b is such a root."""
    t, n = field.trace_omega, field.norm_omega
    if p == 2:
        return [x for x in range(2) if (x * x + t * x + n) % 2 == 0]
    inv2 = pow(2, -1, p)
    roots = sqrt_mod(field.disc % p, p, all_roots=True) or []
    return sorted({(-t + r) * inv2 % p for r in roots})


def rational_prime_factors(field: QuadraticField, p: int) -> List[Tuple[FracIdeal, int]]:
    """Prime ideals above p with their exponent in (p)."""
    chi = kronecker(field.disc, p)
    if chi == -1:
        return [(FracIdeal(field, p, 1, 0), 1)]
    roots = _roots_mod_p(field, p)
    if chi == 0:
        return [(FracIdeal(field, 1, p, roots[0]), 2)]
    return [(FracIdeal(field, 1, p, r), 1) for r in roots]


def factor(I: FracIdeal) -> IdealFactorization:
    if not I.is_integral():
        raise NotIntegral(f"{I} is not integral")
    exponents: Counter = Counter()
    c = int(I.scale)
    for p, e in factorint(c).items():
        for prime, k in rational_prime_factors(I.field, p):
            exponents[prime] += k * e
    for p, e in factorint(I.a).items():
        exponents[FracIdeal(I.field, 1, p, I.b % p)] += e
    factors = tuple(sorted(exponents.items(),
                           key=lambda item: (item[0].norm(), item[0].a, item[0].b)))
    result = IdealFactorization(I, factors)
    if result.product() != I:
        raise ArithmeticError(f"factorization of {I} does not reassemble")
    return result


def sigma_ideal(I: FracIdeal) -> int:
    total = 1
    for prime, e in factor(I).factors:
        q = int(prime.norm())
        total *= sum(q ** k for k in range(e + 1))
    return total


# --- elements of bounded norm ---

def _unit_ratio(unit: FieldElement) -> FieldElement:
    """unit/unit' : the factor by which multiplication by `unit` moves α/α'."""
    return unit / unit.conj()


def in_window(alpha: FieldElement, E: FieldElement, signature: str) -> bool:
    """1 ≤ α/α' < E (TP) or 1 ≤ α/(−α') < E ((+,−)), decided exactly."""
    if signature == PLUS_PLUS:
        return alpha.y >= 0 and (E * alpha.conj() - alpha).sign() > 0
    return alpha.x >= 0 and (-(E * alpha.conj()) - alpha).sign() > 0


def reduce_to_window(alpha: FieldElement, unit: Optional[FieldElement] = None) -> FieldElement:
    """The representative of α·⟨unit⟩ inside the window of its signature."""
    if alpha.sign() <= 0:
        raise NotPositive(f"{alpha} is not positive in the first embedding")
    unit = unit or fundamental_unit(alpha.field).eps_plus
    signature = PLUS_PLUS if alpha.sign_conj() > 0 else PLUS_MINUS
    E = _unit_ratio(unit)
    first, second = alpha.approx()
    ratio = abs(first / second) if second else math.inf
    e1 = E.approx()[0]
    if math.isfinite(ratio) and ratio > 0:
        k = math.floor(math.log(ratio) / math.log(e1))
        alpha = alpha * unit ** (-k)
    while not (alpha.y >= 0 if signature == PLUS_PLUS else alpha.x >= 0):
        alpha = alpha * unit
    while not in_window(alpha, E, signature):
        alpha = alpha / unit
    return alpha


def window_elements(I: FracIdeal, bound, signature: str = PLUS_PLUS,
                    unit: Optional[FieldElement] = None) -> Iterator[FieldElement]:
    """
    Every α ∈ I of the given signature with |N(α)| ≤ bound, one per orbit of
    the totally positive unit `unit` (default ε₊), taken inside the window.
    """
    if not I.is_integral():
        raise NotIntegral(f"window enumeration needs an integral ideal, got {I}")
    field = I.field
    unit = unit or fundamental_unit(field).eps_plus
    E = _unit_ratio(unit)
    E_hi = ceil_frac(E.embed_interval(8)[0][1])
    X = int(bound)
    disc = field.disc
    c, a, b = int(I.scale), I.a, I.b
    shift = 2 * b + field.trace_omega
    step = 2 * c * a
    e1, e2 = I.basis()

    if signature == PLUS_PLUS:
        y_max = isqrt(X * E_hi // (c * c * disc)) + 1
        y_range = range(0, y_max + 1)
    else:
        y_max = isqrt(4 * X * E_hi // (c * c * disc)) + 1
        y_range = range(1, y_max + 1)

    for y in y_range:
        Y = y * c
        Y2D = Y * Y * disc
        if signature == PLUS_PLUS:
            # α' > 0 ⇔ T > Y√Δ ; N ≤ X ⇔ T² ≤ 4X + Y²Δ
            t_lo, t_hi = isqrt(Y2D) + 1, isqrt(4 * X + Y2D)
        else:
            # α' < 0 ⇔ T² < Y²Δ ; |N| ≤ X ⇔ T² ≥ Y²Δ − 4X ; window needs T ≥ 0
            t_lo, t_hi = ceil_sqrt(Y2D - 4 * X), isqrt(Y2D)
        if t_lo > t_hi:
            continue
        # T = x·2ca + Y·(2b + t)
        x_lo = ceil_div(t_lo - Y * shift, step)
        x_hi = (t_hi - Y * shift) // step
        for x in range(x_lo, x_hi + 1):
            alpha = e1 * x + e2 * y
            if not alpha:
                continue
            if signature == PLUS_PLUS and not alpha.is_totally_positive():
                continue
            if signature == PLUS_MINUS and alpha.signature() != (1, -1):
                continue
            if abs(alpha.norm()) <= X and in_window(alpha, E, signature):
                yield alpha


def short_elements(I: FracIdeal, weight: FieldElement, bound) -> Iterator[FieldElement]:
    """Nonzero β ∈ I with Tr(weight·β²) ≤ bound (weight totally positive)."""
    f1, f2 = I.basis()
    A, C = (weight * f1 * f1).trace(), (weight * f2 * f2).trace()
    B = 2 * (weight * f1 * f2).trace()
    m = lcm(A.denominator, B.denominator, C.denominator)
    form = BinaryForm(int(A * m), int(B * m), int(C * m)).reduced_form()
    limit = math.floor(Fraction(bound) * m)
    for x, y in form.original_points(limit):
        if x or y:
            yield f1 * x + f2 * y


# --- generators and classes ---

def principal_generator(I: FracIdeal) -> Optional[Tuple[FieldElement, str]]:
    """A generator γ > 0 of I with its signature, or None if I is not principal."""
    scale, P = I.primitive_part()
    for signature in (PLUS_PLUS, PLUS_MINUS):
        for gamma in window_elements(P, P.a, signature):
            if abs(gamma.norm()) == P.a:
                return gamma * scale, signature
    return None


def tp_generator(I: FracIdeal) -> Optional[FieldElement]:
    scale, P = I.primitive_part()
    for gamma in window_elements(P, P.a, PLUS_PLUS):
        if gamma.norm() == P.a:
            return gamma * scale
    return None


def is_narrow_equivalent(I: FracIdeal, J: FracIdeal) -> bool:
    I._check(J)
    return tp_generator(I / J) is not None


def is_equivalent(I: FracIdeal, J: FracIdeal) -> bool:
    I._check(J)
    return principal_generator(I / J) is not None


def minkowski_candidates(field: QuadraticField) -> List[FracIdeal]:
    return integral_ideals_up_to(field, isqrt(field.disc) // 2)


def narrow_class_reps(field: QuadraticField) -> List[FracIdeal]:
    """
    One integral ideal per narrow class, O_K first.

    The Minkowski candidates cover the wide classes; their multiples by a
    (+,−) element, a principal ideal without totally positive generator
    whenever h⁺ = 2h, cover the remaining narrow classes.
    """
    candidates = minkowski_candidates(field)
    twist = smallest_pm_convergent(field)
    candidates += [J * twist for J in candidates]
    reps: List[FracIdeal] = []
    for J in candidates:
        if not any(is_narrow_equivalent(J, R) for R in reps):
            reps.append(J)
    return reps


def class_reps(field: QuadraticField) -> List[FracIdeal]:
    reps: List[FracIdeal] = []
    for J in minkowski_candidates(field):
        if not any(is_equivalent(J, R) for R in reps):
            reps.append(J)
    return reps


def codifferent_tp_principal(field: QuadraticField) -> Optional[FieldElement]:
    return tp_generator(different_codifferent(field)[1])


def smallest_pm_convergent(field: QuadraticField) -> FieldElement:
    """The even-index convergent α_i (a (+,−) integer) of least |N| over one period."""
    e = fundamental_unit(field).expansion
    even = [c.alpha for c in convergents(e, 2 * e.s) if c.index >= 0 and c.index % 2 == 0]
    return min(even, key=lambda alpha: (abs(alpha.norm()), alpha.trace()))
