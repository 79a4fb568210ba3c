from fractions import Fraction

import pytest
from mpmath import iv

from src.tools.arith import (ceil_div, ceil_frac, ceil_sqrt, floor_frac, is_squarefree, kronecker, r_d,
                             squarefree_range)
from src.tools.intervals import (decide, hull, imax, imin, interval_precision, lower, rational, to_json,
                                  upper)
from src.utils.errors import UndecidableComparison


def test_squarefree():
    assert [n for n in range(1, 20) if is_squarefree(n)] == [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]
    assert squarefree_range(0, 10) == [2, 3, 5, 6, 7, 10]
    assert squarefree_range(11, 10) == []


def test_kronecker_symbol():
    assert [kronecker(5, n) for n in range(1, 6)] == [1, -1, -1, 1, 0]
    assert [kronecker(8, n) for n in (1, 3, 5, 7)] == [1, -1, -1, 1]
    assert kronecker(12, 2) == 0
    with pytest.raises(ValueError):
        kronecker(5, 0)


def test_rounding_helpers():
    assert ceil_div(7, 2) == 4 and ceil_div(-7, 2) == -3
    assert [ceil_sqrt(n) for n in (0, 1, 2, 4, 5, 9, 10)] == [0, 1, 2, 2, 3, 3, 4]
    assert floor_frac(Fraction(-1, 2)) == -1 and ceil_frac(Fraction(-1, 2)) == 0
    assert floor_frac(Fraction(7, 3)) == 2 and ceil_frac(Fraction(7, 3)) == 3


@pytest.mark.parametrize("d, expected", [(1, 0), (2, 1), (5, 1), (6, 2), (7, 1), (12, 3), (13, 2)])
def test_r_d(d, expected):
    assert r_d(d) == expected


def test_rational_enclosure_and_helpers():
    with interval_precision(64):
        third = rational(Fraction(1, 3))
        assert Fraction(lower(third)) <= Fraction(1, 3) <= Fraction(upper(third))
        assert 1 in third * 3
        a, b = iv.mpf([1, 2]), iv.mpf([3, 5])
        assert hull(a, b).a == 1 and hull(a, b).b == 5
        assert imin(a, b) == a and imax(a, b) == b
        assert to_json(a) == {"lo": 1.0, "hi": 2.0}


def test_reported_endpoints_round_outward():
    # the nearest double to 1/3 lies below it
    with interval_precision(96):
        third = rational(Fraction(1, 3))
        assert Fraction(upper(third)) > Fraction(1, 3) > Fraction(lower(third))
        minus = -third
        assert Fraction(lower(minus)) < Fraction(-1, 3) < Fraction(upper(minus))
        exact = iv.mpf(3)
        assert lower(exact) == upper(exact) == 3.0


def test_decide_raises_precision_until_resolved():
    calls = []

    def predicate():
        calls.append(iv.prec)
        return True if iv.prec >= 200 else None

    assert decide(predicate, bits=64) is True
    assert calls == [64, 128, 256]


def test_decide_gives_up():
    with pytest.raises(UndecidableComparison):
        decide(lambda: None, bits=1024)
