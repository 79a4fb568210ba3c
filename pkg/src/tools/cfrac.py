"""
Periodic continued fractions of quadratic irrationals.

A quadratic irrational is carried as the surd state (P + √M)/Q with integers
P, Q, M and Q | M − P²; the expansion stops at the first repeated state.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt, lcm
from typing import List, Tuple

from src.tools.qfield import FieldElement, QuadraticField
from src.utils.errors import IndexTooSmall, RangeError, RationalInput


@dataclass(frozen=True)
class CFExpansion:
    """[u0, ..., u_{k-1}; period] of `subject`."""
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]
    subject: FieldElement

    @property
    def u0(self) -> int:
        return self.term(0)

    @property
    def s(self) -> int:
        return len(self.period)

    def term(self, k: int) -> int:
        """u_k, with u_{ts+i} = u_i past the preperiod."""
        if k < 0:
            raise IndexTooSmall(f"partial quotient index {k} < 0")
        if k < len(self.preperiod):
            return self.preperiod[k]
        return self.period[(k - len(self.preperiod)) % self.s]

    def terms(self, count: int) -> List[int]:
        return [self.term(k) for k in range(count)]


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int
    alpha: FieldElement


@dataclass(frozen=True)
class FundamentalUnit:
    epsilon: FieldElement
    norm: int
    eps_plus: FieldElement
    expansion: CFExpansion


def _surd_state(x: FieldElement) -> Tuple[int, int, int]:
    """(P, Q, M) with x = (P + √M)/Q and Q | M − P²."""
    L = lcm(x.x.denominator, x.y.denominator)
    a, b = int(x.x * L), int(x.y * L)
    P, Q, M = (a, L, b * b * x.field.D) if b > 0 else (-a, -L, b * b * x.field.D)
    if (M - P * P) % Q != 0:
        P, M, Q = P * abs(Q), M * Q * Q, Q * abs(Q)
    return P, Q, M


def cf_expand(x: FieldElement) -> CFExpansion:
    if x.y == 0:
        raise RationalInput(f"{x} is rational")
    P, Q, M = _surd_state(x)
    r = isqrt(M)
    seen = {}
    terms: List[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(terms)
        # floor((P + √M)/Q); √M is irrational so r < √M < r + 1
        u = (P + r) // Q if Q > 0 else (P + r + 1) // Q
        terms.append(u)
        P = u * Q - P
        Q = (M - P * P) // Q
    start = seen[(P, Q)]
    return CFExpansion(tuple(terms[:start]), tuple(terms[start:]), x)


def convergents(e: CFExpansion, upto: int) -> List[Convergent]:
    """Convergents −1..upto; alpha_i = p_i + q_i·ω."""
    if upto < -1:
        raise IndexTooSmall(f"convergent index {upto} < -1")
    omega = e.subject.field.omega
    p_prev, q_prev = 0, 1
    p, q = 1, 0
    out = [Convergent(-1, 1, 0, e.subject.field.one)]
    for i in range(upto + 1):
        u = e.term(i)
        p, p_prev = u * p + p_prev, p
        q, q_prev = u * q + q_prev, q
        out.append(Convergent(i, p, q, omega * q + p))
    return out


def convergent(e: CFExpansion, i: int) -> Convergent:
    if i < -1:
        raise IndexTooSmall(f"convergent index {i} < -1")
    return convergents(e, i)[-1]


def semiconvergent(e: CFExpansion, i: int, r: int) -> FieldElement:
    """α_{i,r} = α_i + r·α_{i+1} for 0 ≤ r < u_{i+2}."""
    if i < -1:
        raise IndexTooSmall(f"semiconvergent index {i} < -1")
    bound = e.term(i + 2)
    if not 0 <= r < bound:
        raise RangeError(f"r = {r} outside 0 ≤ r < u_{i + 2} = {bound}")
    conv = convergents(e, i + 1)
    return conv[-2].alpha + conv[-1].alpha * r


def semiconvergents(e: CFExpansion, indices) -> List[Tuple[int, int, FieldElement]]:
    """All (i, r, α_{i,r}) for the given indices, sharing one convergent pass."""
    indices = list(indices)
    if not indices:
        return []
    conv = convergents(e, max(indices) + 1)
    out = []
    for i in indices:
        lo, hi = conv[i + 1].alpha, conv[i + 2].alpha
        for r in range(e.term(i + 2)):
            out.append((i, r, lo + hi * r))
    return out


@lru_cache(maxsize=None)
def fundamental_unit(field: QuadraticField) -> FundamentalUnit:
    e = cf_expand(field.xi)
    eps = convergent(e, e.s - 1).alpha
    n = eps.norm()
    if n not in (1, -1) or n != (-1) ** e.s:
        raise ArithmeticError(f"α_(s-1) = {eps} is not a unit of norm (-1)^s in {field}")
    eps_plus = eps if n == 1 else eps * eps
    return FundamentalUnit(eps, int(n), eps_plus, e)


def closing_term_expected(field: QuadraticField, u0: int) -> int:
    """Last period term of ξ_D: 2u0 for D ≡ 2,3 and 2u0 + 1 for D ≡ 1 (mod 4)."""
    return 2 * u0 + 1 if field.is_one_mod_four else 2 * u0


def partial_quotient_sum(e: CFExpansion, parity: str) -> int:
    """u_1 + ... + u_s over odd/even positions within one period (all for odd s)."""
    period = [e.term(k) for k in range(1, e.s + 1)]
    if e.s % 2 == 1:
        return sum(period)
    start = 0 if parity == "odd" else 1
    return sum(period[start::2])
