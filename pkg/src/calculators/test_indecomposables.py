import json
import random
from fractions import Fraction

import pytest

from src.calculators.indecomposables import (IndecomposableCalculator, check_norm_bound, express_as_sum,
                                             find_square_below, i_indecomposables, indecomposables_pm,
                                             indecomposables_ring, integral_rescale, is_decomposable,
                                             kappa_field_bound, kappa_is_one, kappa_upper_cf,
                                             kappa_upper_classcount, norm_class_counts)
from src.tools.cfrac import fundamental_unit, partial_quotient_sum
from src.tools.ideals import FracIdeal
from src.tools.qfield import field_new
from src.utils.errors import NotInIdealPlus, NotIntegral, NotPrincipal
from src.utils.logger import get_log_file


@pytest.fixture(scope="module")
def K2():
    return field_new(2)


@pytest.fixture(scope="module")
def K3():
    return field_new(3)


@pytest.fixture(scope="module")
def K5():
    return field_new(5)


def reps(classes):
    return {c.representative for c in classes}


def test_is_decomposable(K2):
    O = FracIdeal.unit(K2)
    assert is_decomposable(K2.element(2), O) == (K2.one, K2.one)
    assert is_decomposable(K2.element(2, 1), O) is None
    assert is_decomposable(K2.one, O) is None
    beta, gamma = is_decomposable(K2.element(5, 2), O)
    assert beta + gamma == K2.element(5, 2)
    assert beta.is_totally_positive() and gamma.is_totally_positive()


def test_membership_is_checked(K2):
    O = FracIdeal.unit(K2)
    with pytest.raises(NotInIdealPlus):
        is_decomposable(K2.element(1, 1), O)
    with pytest.raises(NotInIdealPlus):
        is_decomposable(K2.one, FracIdeal(K2, 1, 2, 0))


def test_square_witness(K2):
    O = FracIdeal.unit(K2)
    beta = find_square_below(K2.element(5, 2), O)
    assert beta is not None and K2.element(5, 2).succ(beta * beta)
    assert find_square_below(K2.one, O) is None


@pytest.mark.parametrize("D, expected", [
    (2, {(1, 0), (2, 1)}),
    (3, {(1, 0)}),
    (5, {(1, 0)}),
])
def test_ring_indecomposables(D, expected):
    K = field_new(D)
    assert reps(indecomposables_ring(K)) == {K.element(*xy) for xy in expected}


def test_plus_minus_indecomposables(K2, K3, K5):
    assert reps(indecomposables_pm(K3)) == {K3.element(1, 1), K3.element(0, 1)}
    assert reps(indecomposables_pm(K2)) == {K2.element(1, 1), K2.element(0, 1)}
    assert reps(indecomposables_pm(K5)) == {K5.omega}


@pytest.mark.parametrize("D", [6, 7, 11, 13, 14])
def test_cf_counts_match_partial_quotients(D):
    K = field_new(D)
    e = fundamental_unit(K).expansion
    assert len(indecomposables_ring(K)) == partial_quotient_sum(e, "odd")
    assert len(indecomposables_pm(K)) == partial_quotient_sum(e, "even")


def test_brute_force_agrees_with_continued_fraction(K2, K3):
    assert reps(i_indecomposables(FracIdeal.unit(K2))) == {K2.one, K2.element(2, 1)}
    assert reps(i_indecomposables(FracIdeal(K3, 1, 3, 0))) == {K3.element(3), K3.element(3, 1)}
    assert reps(i_indecomposables(FracIdeal.unit(K3))) == {K3.one}
    with pytest.raises(NotIntegral):
        i_indecomposables(FracIdeal(K3, Fraction(1, 6), 3, 0))


def test_kappa_bounds(K2, K3, K5):
    root3 = FracIdeal(K3, 1, 3, 0)
    assert kappa_upper_cf(root3) == 2
    assert kappa_upper_classcount(root3) == 2
    assert not kappa_is_one(root3)
    assert kappa_is_one(FracIdeal.unit(K3))
    assert kappa_upper_cf(FracIdeal.unit(K5)) == 1
    with pytest.raises(NotPrincipal):
        kappa_upper_cf(FracIdeal(field_new(10), 1, 2, 0))

    for K, expected in ((K2, (1, 1)), (K3, (2, 2)), (K5, (1, 1))):
        bound = kappa_field_bound(K)
        assert (bound.lower, bound.upper) == expected


def test_integral_rescale(K5):
    codifferent = FracIdeal(K5, Fraction(1, 5), 5, 2)
    J, m = integral_rescale(codifferent)
    assert m == 5 and J == FracIdeal(K5, 1, 5, 2)


def test_express_as_sum(K2, K3):
    for K in (K2, K3):
        O = FracIdeal.unit(K)
        classes = i_indecomposables(O)
        for w in (K.element(5, 2), K.element(7), K.element(9, 4)):
            terms = express_as_sum(w, O, classes)
            assert sum((rep * mult for rep, mult in terms), K.zero) == w
            assert all(mult.is_totally_positive() and mult.norm() == 1 for _, mult in terms)


def test_norm_class_counts(K2, K3):
    assert norm_class_counts(K2, [1]) == {1: 1}
    counts = norm_class_counts(K3, [1, 10, 100])
    assert counts[1] == 2
    assert counts[1] <= counts[10] <= counts[100]


def test_check_norm_bound(K2, K5):
    outcome = check_norm_bound(FracIdeal.unit(K2), samples=5, rng=random.Random(1))
    assert outcome["counterexample"] is None and outcome["checked"] > 0
    assert check_norm_bound(FracIdeal(K5, 2, 1, 0), samples=3)["counterexample"] is None


def test_calculator_reports_and_logs(K3):
    calculator = IndecomposableCalculator()
    kappa = calculator.kappa(K3)
    assert (kappa["lower"], kappa["upper"]) == (2, 2)
    assert kappa["narrow_class_number"] == 2

    field = calculator.analyze_field(K3)
    assert field["ring"]["count"] == 1 and field["plus_minus"]["count"] == 2

    ideal = calculator.analyze_ideal(FracIdeal(K3, Fraction(1, 6), 3, 0))
    assert ideal["rescale"] == 6 and ideal["count"] == 2 and ideal["kappa_upper_cf"] == 2
    assert ideal["kappa_is_one"] is False

    with open(get_log_file(), encoding="utf-8") as f:
        entries = json.load(f)
    assert [e["action"] for e in entries] == ["ENUMERATION"] * 3
