from fractions import Fraction

import pytest
from mpmath import iv

from src.calculators.bounds import (B_of, BoundCalculator, G_of, IntGram, cap_C, certify_growth, count_short_vectors,
                                    counting_chain, disc_threshold, discriminants_between,
                                    fundamental_discriminants_below, g_bound, lifting_disc_bound, main_rhs,
                                    min_codifferent_trace, min_rank_bound, monotonicity_point, radicand_of,
                                    rank_report, robin_bound, scan_row, theorem_bound, trace_transfer,
                                    verify_counting_chain)
from src.calculators.zeta import EXTERNAL, SiegelData
from src.tools.ideals import codifferent_tp_principal
from src.tools.intervals import lower, midpoint, upper
from src.tools.qfield import field_new
from src.utils.errors import (DegreeTooLarge, DegreeTooSmall, DomainError, MissingCoefficient,
                              NoCoefficientOfRequiredSign, NotInCodifferent, NotPositiveDefinite)

B1 = SiegelData(2, (Fraction(1, 240),), EXTERNAL)


@pytest.mark.parametrize("R, i, expected", [(1, 1, 7), (2, 1, 19), (6, 1, 167), (0, 1, 1), (1, 2, 15)])
def test_cap_C(R, i, expected):
    assert cap_C(R, i) == expected


def test_robin_bound():
    assert lower(robin_bound(12)) > 28
    assert lower(robin_bound(3)) > 4
    with pytest.raises(DomainError):
        robin_bound(2)


def test_g_and_G():
    assert g_bound(1, 2, 5) == iv.mpf(4)
    assert midpoint(g_bound(1, 2, 1000)) == pytest.approx(855.6, abs=0.5)
    assert G_of(5, 2) == iv.mpf(1) / 4
    with pytest.raises(DegreeTooSmall):
        G_of(5, 1)


def test_B_of():
    assert B_of(2, B1) == 240
    with pytest.raises(NoCoefficientOfRequiredSign):
        B_of(2, SiegelData(2, (Fraction(-1, 240),), EXTERNAL))
    assert B_of(3, SiegelData(3, (Fraction(-1, 7),), EXTERNAL)) == 7
    with pytest.raises(MissingCoefficient):
        B_of(3, B1)


def test_main_rhs_and_min_rank():
    assert midpoint(main_rhs(5, 2, B1)) == pytest.approx(1.8438e-5, rel=1e-3)
    assert midpoint(main_rhs(8, 2, B1)) == pytest.approx(3.7315e-5, rel=1e-3)
    assert min_rank_bound(5, 2, B1) == 1
    with pytest.raises(DomainError):
        main_rhs(0, 2, B1)


def test_rhs_grows_past_the_monotonicity_point():
    assert certify_growth()
    start = monotonicity_point(2)
    assert start == 12
    values = [midpoint(main_rhs(disc, 2, B1)) for disc in (start, 2 * start, 10 * start, 1000 * start)]
    assert values == sorted(values)


def test_disc_threshold():
    threshold = disc_threshold(2, 1, B1)
    assert min_rank_bound(threshold, 2, B1) == 1
    assert min_rank_bound(threshold + 1, 2, B1) >= 2
    assert min_rank_bound(10 * threshold, 2, B1) >= 2


def test_lifting_bound():
    bound = lifting_disc_bound(2, B1)
    assert lower(bound) > 5.52 and upper(bound) < 5.53
    assert fundamental_discriminants_below(bound) == [5]
    assert min_codifferent_trace(field_new(5)) == 1
    with pytest.raises(DegreeTooLarge):
        lifting_disc_bound(44, None)
    with pytest.raises(MissingCoefficient):
        lifting_disc_bound(3, B1)


def test_discriminants():
    assert [radicand_of(disc) for disc in (5, 8, 12, 13, 4, 9, 16, 20, 24)] == [5, 2, 3, 13, None, None, None, None, 6]
    assert discriminants_between(1, 30) == [5, 8, 12, 13, 17, 21, 24, 28, 29]


def test_int_gram():
    gram = IntGram([[1, 0], [0, 1]])
    assert gram.is_classical and gram.rank == 2 and gram.determinant() == 1
    half = IntGram([[1, Fraction(1, 2)], [Fraction(1, 2), 1]])
    assert not half.is_classical and half.doubled() == [[2, 1], [1, 2]]
    assert count_short_vectors(half, 1) == 7
    assert theorem_bound(half, 1) == cap_C(2, 2)
    with pytest.raises(NotPositiveDefinite):
        IntGram([[1, 2], [2, 1]])
    with pytest.raises(NotPositiveDefinite):
        IntGram([[Fraction(1, 2), 0], [0, 1]])
    with pytest.raises(NotPositiveDefinite):
        IntGram([[1, 0, 0], [0, 1, 0]])


def test_short_vector_counts_respect_the_theorem():
    for rows in ([[1, 0], [0, 1]], [[1, 1], [1, 2]], [[2, 1, 0], [1, 2, 1], [0, 1, 2]]):
        gram = IntGram(rows)
        for i in (1, 2):
            assert count_short_vectors(gram, i) <= theorem_bound(gram, i)
    assert count_short_vectors(IntGram([[1, 0], [0, 1]]), 1) == 5
    assert count_short_vectors(IntGram([[1, 1], [1, 2]]), 1) == 5


def test_trace_transfer():
    K5, K2 = field_new(5), field_new(2)
    delta = K5.omega / K5.sqrt_disc
    assert trace_transfer(K5, [[K5.one]], delta).to_list() == [["1", "1"], ["1", "2"]]
    assert trace_transfer(K2, [[K2.one]], K2.element(2, 1) / 4).to_list() == [["1", "1"], ["1", "2"]]
    # O_K sits inside its codifferent
    assert trace_transfer(K5, [[K5.one]], K5.one).to_list() == [["2", "1"], ["1", "3"]]
    with pytest.raises(NotInCodifferent):
        trace_transfer(K5, [[K5.one]], K5.element(Fraction(1, 2)))
    with pytest.raises(NotPositiveDefinite):
        trace_transfer(K5, [[K5.one, K5.one], [K5.one, K5.one]], delta)


def test_counting_chain():
    K5 = field_new(5)
    delta = K5.omega / K5.sqrt_disc
    chain = counting_chain(K5, [[K5.one]], delta)
    assert chain == {"lhs": 4, "rhs": 2, "cap": 18, "holds": True}
    identity3 = [[K5.one if i == j else K5.zero for j in range(3)] for i in range(3)]
    assert verify_counting_chain(K5, identity3, delta)
    assert cap_C(6, 1) > upper(main_rhs(5, 2, B1))


def test_reports():
    report = rank_report(5, 2, B1).to_dict()
    assert report["R_min"] == 1 and report["B"] == "240"
    assert report["notes"][0] == "no rank is excluded at this discriminant"

    calculator = BoundCalculator()
    result = calculator.rankbound(5, 2, B1)
    assert result["r_d"] == 1 and "threshold" not in result
    lift = calculator.lift(2, B1)
    assert lift["admissible_discriminants"] == [5]
    assert lift["min_codifferent_trace"] == {"5": 1}


def test_scan():
    row = scan_row((12, B1, 96))
    assert row["D"] == 3 and row["h⁺"] == 2 and row["N(ε)"] == 1
    assert row["s₁"] == 10 and row["ζ(−1)"] == "1/6" and row["R_min"] == 1
    rows = BoundCalculator().scan(5, 13, B1)
    assert [r["Δ"] for r in rows] == [5, 8, 12, 13]
    assert [r["D"] for r in rows] == [5, 2, 3, 13]


def test_cap_C_grows_with_the_rank():
    for i in (1, 2, 3):
        caps = [cap_C(R, i) for R in range(0, 40)]
        assert all(a < b for a, b in zip(caps, caps[1:]))


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


@pytest.mark.parametrize("D", [2, 5, 13])
def test_trace_transfer_determinant(D):
    # det of the transferred Gram is Δ^R·N(δ^R·det G) for the basis (1, ω)
    K = field_new(D)
    delta = codifferent_tp_principal(K)
    grams = [
        [[K.one]],
        [[K.element(3)]],
        [[K.element(2), K.one], [K.one, K.omega + 2]],
        [[K.element(4), K.omega], [K.omega, K.element(4)]],
    ]
    for gram in grams:
        R = len(gram)
        det = gram[0][0] if R == 1 else _det2(gram)
        transferred = trace_transfer(K, gram, delta)
        assert transferred.rank == 2 * R
        assert transferred.determinant() == K.disc ** R * (delta ** R * det).norm()
