from fractions import Fraction

import pytest

from src.tools.arith import squarefree_range
from src.tools.ideals import (PLUS_MINUS, FracIdeal, class_reps, codifferent_tp_principal, different_codifferent,
                              factor, ideal_arith, ideal_from_gens, in_window, integral_ideals_of_norm,
                              integral_ideals_up_to, is_equivalent, is_narrow_equivalent, narrow_class_reps,
                              principal_generator, rational_prime_factors, reduce_to_window, short_elements,
                              sigma_ideal, smallest_pm_convergent, tp_generator, window_elements)
from src.tools.cfrac import fundamental_unit
from src.tools.qfield import field_new
from src.utils.errors import MixedFields, NotAnIdeal, NotIntegral, NotPositive, ZeroIdeal


@pytest.fixture(scope="module")
def K2():
    return field_new(2)


@pytest.fixture(scope="module")
def K3():
    return field_new(3)


@pytest.fixture(scope="module")
def K5():
    return field_new(5)


def test_normal_form_of_principal_ideals(K2, K3, K5):
    assert FracIdeal.principal(K3.element(0, 1)) == FracIdeal(K3, 1, 3, 0)
    assert FracIdeal.principal(K5.element(2)) == FracIdeal(K5, 2, 1, 0)
    assert FracIdeal.principal(K2.element(0, 1)) == FracIdeal(K2, 1, 2, 0)
    # the normal form does not depend on the generating set
    assert ideal_from_gens([K2.element(2), K2.element(0, 1)]) == FracIdeal(K2, 1, 2, 0)
    assert FracIdeal.principal(K2.element(1, 1)).is_unit()


def test_invalid_normal_forms(K5):
    with pytest.raises(NotAnIdeal):
        FracIdeal(K5, 1, 3, 0)
    with pytest.raises(NotAnIdeal):
        FracIdeal(K5, 0, 1, 0)
    with pytest.raises(ZeroIdeal):
        ideal_from_gens([K5.zero])


def test_arithmetic(K2, K5):
    P = FracIdeal(K2, 1, 2, 0)
    assert P * P == FracIdeal(K2, 2, 1, 0)
    assert P.norm() == 2 and (P * P).norm() == 4
    assert P / P == FracIdeal.unit(K2)
    assert ideal_arith(P, P, "div") == FracIdeal.unit(K2)
    assert ideal_arith(P, FracIdeal(K2, 1, 2, 0), "eq")
    assert P.inverse() == FracIdeal(K2, Fraction(1, 2), 2, 0)
    assert P.contains(K2.element(0, 1)) and not P.contains(K2.one)
    with pytest.raises(MixedFields):
        P * FracIdeal.unit(K5)


def test_different_and_codifferent(K2, K5):
    different, codifferent = different_codifferent(K5)
    assert different == FracIdeal(K5, 1, 5, 2)
    assert codifferent.norm() == Fraction(1, 5)
    assert codifferent.contains(K5.one)
    assert not codifferent.contains(K5.element(Fraction(1, 2)))
    different2, codifferent2 = different_codifferent(K2)
    assert different2.norm() == 8 and codifferent2.norm() == Fraction(1, 8)


def test_enumeration_and_factorization(K2, K5):
    assert integral_ideals_of_norm(K5, 4) == [FracIdeal(K5, 2, 1, 0)]
    assert len(integral_ideals_of_norm(K2, 7)) == 2
    assert rational_prime_factors(K5, 2) == [(FracIdeal(K5, 2, 1, 0), 1)]
    assert rational_prime_factors(K2, 2) == [(FracIdeal(K2, 1, 2, 0), 2)]

    I = FracIdeal(K2, 6, 1, 0)
    F = factor(I)
    assert F.product() == I
    assert sum(e for _, e in F.factors) == 3
    with pytest.raises(NotIntegral):
        factor(FracIdeal(K2, Fraction(1, 2), 1, 0))


def test_sigma(K2, K5):
    assert sigma_ideal(FracIdeal.unit(K5)) == 1
    assert sigma_ideal(FracIdeal(K5, 2, 1, 0)) == 5
    assert sigma_ideal(FracIdeal(K5, 1, 5, 2)) == 6
    assert sigma_ideal(FracIdeal(K2, 2, 1, 0)) == 7


def test_window_reduction(K2, K3):
    eps_plus = fundamental_unit(K3).eps_plus
    E = eps_plus / eps_plus.conj()
    alpha = K3.element(1, 1)
    assert in_window(alpha, E, PLUS_MINUS)
    assert reduce_to_window(alpha * eps_plus ** 3) == alpha
    assert reduce_to_window(alpha / eps_plus ** 2) == alpha
    # 3+2√3 sits on the window boundary and maps to √3
    assert reduce_to_window(K3.element(3, 2)) == K3.element(0, 1)
    assert reduce_to_window(K2.element(3, -2)) == K2.one


def test_window_elements(K2, K3):
    O2 = FracIdeal.unit(K2)
    assert set(window_elements(O2, 2)) == {K2.one, K2.element(2, 1)}
    assert set(window_elements(O2, 2, PLUS_MINUS)) == {K2.element(1, 1), K2.element(0, 1)}
    assert list(window_elements(FracIdeal.unit(K3), 1, PLUS_MINUS)) == []
    with pytest.raises(NotIntegral):
        list(window_elements(FracIdeal(K2, Fraction(1, 2), 1, 0), 4))


def test_short_elements(K2):
    found = set(short_elements(FracIdeal.unit(K2), K2.one, 2))
    assert found == {K2.one, -K2.one}


def test_generators(K2, K3):
    root3 = FracIdeal(K3, 1, 3, 0)
    gamma, signature = principal_generator(root3)
    assert signature == PLUS_MINUS and abs(gamma.norm()) == 3
    assert tp_generator(root3) is None
    # N(ε) = −1 in Q(√2), so (√2) also has a totally positive generator
    g = tp_generator(FracIdeal(K2, 1, 2, 0))
    assert g.is_totally_positive() and g.norm() == 2
    K10 = field_new(10)
    assert principal_generator(FracIdeal(K10, 1, 2, 0)) is None


def test_class_numbers(K2, K3, K5):
    assert len(narrow_class_reps(K2)) == 1
    assert len(narrow_class_reps(K5)) == 1
    reps3 = narrow_class_reps(K3)
    assert len(reps3) == 2 and reps3[0] == FracIdeal.unit(K3)
    assert not is_narrow_equivalent(reps3[0], reps3[1])
    assert is_equivalent(reps3[0], reps3[1])
    assert len(class_reps(K3)) == 1
    K10 = field_new(10)
    assert len(class_reps(K10)) == 2
    assert len(narrow_class_reps(K10)) == 2


def test_codifferent_generators(K3, K5):
    delta = codifferent_tp_principal(K5)
    _, codifferent = different_codifferent(K5)
    assert delta.is_totally_positive() and codifferent.contains(delta)
    assert delta.norm() == Fraction(1, 5)
    assert codifferent_tp_principal(K3) is None


def test_smallest_pm_convergent(K3):
    alpha = smallest_pm_convergent(K3)
    assert alpha == K3.element(1, 1)
    assert alpha.signature() == (1, -1)


def test_window_reduction_needs_a_positive_element(K2, K3):
    for alpha in (-K2.one, K3.element(-1, -1), K3.element(1, -1), K2.zero):
        with pytest.raises(NotPositive):
            reduce_to_window(alpha)


@pytest.mark.parametrize("D", [5, 10])
def test_factorization_reassembles_every_ideal(D):
    K = field_new(D)
    for I in integral_ideals_up_to(K, 500):
        F = factor(I)
        assert F.product() == I
        norm = 1
        for prime, e in F.factors:
            assert prime.is_integral() and prime.norm() > 1
            norm *= prime.norm() ** e
        assert norm == I.norm()


def test_narrow_class_number_follows_the_unit_norm():
    for D in squarefree_range(2, 60):
        K = field_new(D)
        h, h_plus = len(class_reps(K)), len(narrow_class_reps(K))
        assert h_plus == (h if fundamental_unit(K).norm == -1 else 2 * h), D
