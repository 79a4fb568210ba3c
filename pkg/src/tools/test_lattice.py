from fractions import Fraction

import pytest

from src.tools.lattice import (BinaryForm, count_points, is_positive_definite, ldl, leading_minors,
                               quadratic_value, short_vectors)


def test_reduced_form_keeps_discriminant_and_values():
    form = BinaryForm(10, 17, 8)
    reduced = form.reduced_form()
    assert reduced.discriminant() == form.discriminant()
    assert abs(reduced.b) <= reduced.a <= reduced.c
    for x, y in reduced.points(30):
        (e1, e2) = reduced.basis
        ox, oy = x * e1[0] + y * e2[0], x * e1[1] + y * e2[1]
        assert form.value(ox, oy) == reduced.value(x, y)


def test_points_match_brute_force():
    form = BinaryForm(3, 5, 7).reduced_form()
    found = set(BinaryForm(3, 5, 7).reduced_form().original_points(40))
    brute = {(x, y) for x in range(-20, 21) for y in range(-20, 21)
             if BinaryForm(3, 5, 7).value(x, y) <= 40}
    assert found == brute
    assert (0, 0) in found and form.a <= form.c


def test_indefinite_form_rejected():
    with pytest.raises(ValueError):
        BinaryForm(1, 3, 1)


def test_ldl_and_minors():
    d, _ = ldl([[2, 1], [1, 2]])
    assert d == [2, Fraction(3, 2)]
    assert leading_minors([[2, 1], [1, 2]]) == [2, 3]
    assert is_positive_definite([[1, 1], [1, 2]])
    assert not is_positive_definite([[1, 2], [2, 1]])
    assert not is_positive_definite([[1, 1], [0, 2]])


def test_short_vectors_in_small_lattices():
    assert count_points([[1, 0], [0, 1]], 1) == 5
    assert count_points([[1, 1], [1, 2]], 1) == 5
    # A2 root lattice (doubled): six minimal vectors
    assert count_points([[2, 1], [1, 2]], 2) == 7
    assert count_points([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1) == 7
    assert list(short_vectors([[1, 0], [0, 1]], Fraction(1, 2))) == [(0, 0)]


def test_short_vectors_respect_bound():
    gram = [[4, 1, 0], [1, 3, 1], [0, 1, 5]]
    vectors = list(short_vectors(gram, 12))
    assert len(set(vectors)) == len(vectors)
    assert all(quadratic_value(gram, v) <= 12 for v in vectors)
    brute = [(a, b, c) for a in range(-3, 4) for b in range(-3, 4) for c in range(-3, 4)
             if quadratic_value(gram, (a, b, c)) <= 12]
    assert sorted(vectors) == sorted(brute)


def test_short_vectors_not_positive_definite():
    with pytest.raises(ValueError):
        list(short_vectors([[1, 2], [2, 1]], 3))
