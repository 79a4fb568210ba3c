"""Integer helpers shared by the arithmetic kernels."""
from fractions import Fraction
from math import isqrt

from sympy import factorint, jacobi_symbol


def is_squarefree(n: int) -> bool:
    return n > 0 and all(e == 1 for e in factorint(n).values())


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n ≥ 1."""
    if n < 1:
        raise ValueError("kronecker symbol needs n ≥ 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(jacobi_symbol(a % n, n))


def ceil_div(num: int, den: int) -> int:
    return -((-num) // den)


def ceil_sqrt(n: int) -> int:
    """Smallest integer r ≥ 0 with r² ≥ n."""
    if n <= 0:
        return 0
    return isqrt(n - 1) + 1


def floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


def ceil_frac(q: Fraction) -> int:
    return ceil_div(q.numerator, q.denominator)


def r_d(d: int) -> int:
    """Number of Siegel coefficients b_ℓ(2d): ⌊d/6⌋, plus one unless d ≡ 1 (mod 6)."""
    if d < 1:
        raise ValueError("degree must be ≥ 1")
    return d // 6 if d % 6 == 1 else d // 6 + 1


def squarefree_range(lo: int, hi: int):
    """Squarefree D with lo ≤ D ≤ hi."""
    return [D for D in range(max(lo, 2), hi + 1) if is_squarefree(D)]
