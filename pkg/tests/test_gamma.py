import math
from fractions import Fraction

import pytest

from auxfield.combinatorics import n_of_L
from auxfield.gamma import (
    figure1_data,
    g_elimination_check,
    gamma_l_loop,
    method2_gamma_check,
    prefactor_series,
    stirling_coefficients,
    table1,
)
from conftest import load_csv, load_stirling


def test_stirling_golden_list():
    assert stirling_coefficients(14) == load_stirling()


@pytest.mark.parametrize("L, text", [
    (1, "1/12"),
    (9, "432261921612371/514904800886784000"),
    (14, "1511513601028097903631961/2798245444487443560529920000"),
])
def test_stirling_examples(L, text):
    assert stirling_coefficients(14)[L] == Fraction(text)


def test_stirling_matches_live_n_of_L():
    assert stirling_coefficients(14) == [n_of_L(L) for L in range(15)]


@pytest.mark.parametrize("N, l, ratio", [(1, 2, 0.99898), (5, 4, 1.00000), (2, 1, 0.95950), (5, 3, 1.00002)])
def test_l_loop_ratio_examples(N, l, ratio):
    assert gamma_l_loop(N, l).ratio == pytest.approx(ratio, abs=5e-6)


def test_exact_reference_is_factorial():
    e = gamma_l_loop(10, 0)
    assert e.exact == 362880.0
    assert e.approx == pytest.approx(4.53999e5, rel=1e-5)


def test_non_integer_N_uses_quadrature():
    assert gamma_l_loop(7.5, 2).exact == pytest.approx(math.gamma(7.5), rel=1e-11)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        gamma_l_loop(0, 1)
    with pytest.raises(ValueError):
        gamma_l_loop(1, 16)
    with pytest.raises(ValueError):
        stirling_coefficients(-1)


def test_gamma_table_golden():
    golden = load_csv("gamma_table.csv")
    table = table1()
    for row, line in zip(golden, table):
        for col, e in zip(("N1", "N2", "N5", "N10"), line):
            assert e.approx == pytest.approx(float(row[col]), rel=1e-4)
            assert e.ratio == pytest.approx(float(row[col + "_ratio"]), rel=1e-4)


def test_asymptotic_signature_at_N_1():
    dev = [abs(gamma_l_loop(1, l).ratio - 1) for l in range(16)]
    # best truncation among the higher orders sits at 6-loop, after which it recedes
    assert min(range(4, 16), key=lambda l: dev[l]) == 6
    assert dev[14] > dev[6] and dev[15] > dev[6]
    assert max(dev[12:]) > max(dev[4:12])


def test_prefactor_series():
    pre = prefactor_series(4)
    assert pre == [1, 0, Fraction(-1, 12), Fraction(-1, 12), Fraction(-103, 1440)]


def test_method2_equivalence_exact():
    rep = method2_gamma_check(4)
    assert rep.ok, rep.mismatches()
    assert rep.combined[4] == Fraction(-571, 2488320)
    assert method2_gamma_check(7).ok


def test_method2_report_lists_mismatch():
    rep = method2_gamma_check(2)
    broken = type(rep)(rep.prefactor, rep.loop_factor, rep.combined[:2] + [Fraction(0)], rep.expected)
    assert not broken.ok
    assert broken.mismatches() == [(2, Fraction(0), Fraction(1, 288))]


@pytest.mark.parametrize("N", [1, 3, 7.5])
def test_prefactor_elimination(N):
    (row,) = g_elimination_check([N])
    assert row.rel_diff < 1e-10


def test_figure1_matches_table_ratios():
    fig = figure1_data()
    tab = table1()
    assert [L for L, _ in fig] == list(range(15))
    for L, ratios in fig:
        assert ratios == [e.ratio for e in tab[L + 1]]
