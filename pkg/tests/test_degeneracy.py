from fractions import Fraction

import pytest

from tautcalc.degeneracy import (
    DegeneracyProblem,
    chern_character_Mi,
    chern_classes_by_exp_log,
    chern_classes_Mi,
    diagonal_class,
    discrepancy_annihilated,
    double_shift_sum,
    fp_determinant,
    fp_matrix,
    fp_report,
    gamma23_breakdown,
    intersect_diagonal,
    intersect_gamma23,
    intersect_point_slice,
    n_combinatorial,
    rational_determinant,
    reference_chern_character,
    reference_chern_classes,
    reference_twisted_entry,
    shifted_sequence,
    theta_pure_coefficients,
    theta_pure_matrix,
    twisted_entry,
)
from tautcalc.exactnum import fp_closed_form, vandermonde_v
from tautcalc.tautring import RingSignature, eta, gamma, integrate, multiply, parse_debug_lines, theta

P3 = DegeneracyProblem(3)
S = RingSignature.pair(5)


def test_problem_defaults_and_validation():
    assert (P3.g, P3.d, P3.m, P3.degree_cap) == (5, 8, 2, 7)
    assert DegeneracyProblem(3, 40).m == 40
    with pytest.raises(ValueError):
        DegeneracyProblem(3, 1)
    with pytest.raises(ValueError):
        DegeneracyProblem(1)


def test_ch_r3_i1_by_hand():
    ch = chern_character_Mi(1, P3)
    assert ch.rank_part == P3.m + 2
    e2, e3, th = eta(S, 2), eta(S, 3), theta(S)
    g23, g24, g34 = gamma(S, 2, 3), gamma(S, 2, 4), gamma(S, 3, 4)
    assert ch[1] == 7 * e2 + 7 * e3 - g23 + g24 + g34
    assert ch[2] == -12 * e2 * e3 - e2 * g34 - e3 * g24 - e2 * th - e3 * th
    assert ch[3] == e2 * e3 * th
    assert ch[9] == 0 * e2


def test_ch_of_M0_is_constant():
    ch = chern_character_Mi(0, P3)
    assert all(ch[k].is_zero() for k in range(1, 6))
    c = chern_classes_Mi(0, P3)
    assert all(c[k].is_zero() for k in range(1, 8))


def test_c3_of_M1_vanishes():
    assert chern_classes_Mi(1, P3)[3].is_zero()


@pytest.mark.parametrize("r", [2, 3, 4])
def test_chern_character_closed_forms(r):
    for prob in (DegeneracyProblem(r), DegeneracyProblem(r, 17)):
        for i in range(r + 1):
            ch, ref = chern_character_Mi(i, prob), reference_chern_character(i, prob)
            assert ch.rank_part == ref[0].constant()
            assert [ch[k] for k in (1, 2, 3)] == ref[1:]


@pytest.mark.parametrize("r", [2, 3, 4])
def test_newton_and_exp_log_agree(r):
    prob = DegeneracyProblem(r)
    for i in range(r + 1):
        a, b = chern_classes_Mi(i, prob), chern_classes_by_exp_log(i, prob, top=6)
        assert all(a[k] == b[k] for k in range(7))


def test_c2_c3_corrected_forms_and_irrelevance():
    for i in range(4):
        c = chern_classes_Mi(i, P3)
        fixed = reference_chern_classes(i, P3, corrected=True)
        stated = reference_chern_classes(i, P3)
        assert c[2] == fixed[2] and c[3] == fixed[3]
        assert discrepancy_annihilated(c[2] - stated[2], P3)
        assert discrepancy_annihilated(c[3] - stated[3], P3)


def test_stated_c2_bracket_differs_from_i_2():
    # the two forms agree exactly when g i^4 = g i^2
    same = [reference_chern_classes(i, P3)[2] == chern_classes_Mi(i, P3)[2] for i in range(4)]
    assert same == [True, True, False, False]


def test_c2_eta_eta_coefficients_r3():
    got = [chern_classes_Mi(i, P3)[2].coefficient("eta2*eta3") for i in (1, 2, 3)]
    assert got == [56, 400, 1368]


def test_c3_coefficients_r3():
    c3 = [chern_classes_Mi(i, P3)[3] for i in (1, 2, 3)]
    assert [x.coefficient("eta2*eta3*theta") for x in c3] == [0, -72, -396]
    assert [x.coefficient("eta2*gamma34*theta") for x in c3] == [0, -4, -18]


def test_twisted_entries_match_closed_form():
    for i in range(4):
        for j in range(-1, 8):
            assert twisted_entry(i, j, P3, reduced=True) == reference_twisted_entry(i, j, P3)


def test_twisted_entry_index_check():
    with pytest.raises(ValueError):
        twisted_entry(4, 1, P3)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_minors_match_leibniz(r):
    prob = DegeneracyProblem(r)
    assert fp_determinant(prob) == fp_determinant(prob, method="leibniz")


def test_thread_count_does_not_change_result():
    prob = DegeneracyProblem(4)
    assert fp_determinant(prob, threads=1) == fp_determinant(prob, threads=4)


def test_unknown_method():
    with pytest.raises(ValueError):
        fp_determinant(P3, method="lu")
    with pytest.raises(ValueError):
        fp_determinant(DegeneracyProblem(5), method="leibniz")


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_diagonal_intersection_equals_closed_form(r):
    prob = DegeneracyProblem(r)
    det = fp_determinant(prob)
    assert intersect_diagonal(det, prob.g) == fp_closed_form(r) == n_combinatorial(prob)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_reduced_matrix_gives_same_numbers(r):
    prob = DegeneracyProblem(r)
    full, red = fp_determinant(prob), fp_determinant(prob, reduced=True)
    for y in (eta(RingSignature.pair(prob.g), 2), eta(RingSignature.pair(prob.g), 3),
              gamma(RingSignature.pair(prob.g), 2, 3)):
        assert integrate(multiply(full, y)) == integrate(multiply(red, y))


def test_point_slices_r3():
    det = fp_determinant(P3)
    assert intersect_point_slice(det, 5, 2) == intersect_point_slice(det, 5, 3) == 50
    assert intersect_gamma23(det, 5) == 140
    assert intersect_diagonal(det, 5) == 50 + 50 + 140


def test_m_independence():
    a, b = fp_determinant(DegeneracyProblem(3, 2)), fp_determinant(DegeneracyProblem(3, 9))
    assert intersect_diagonal(a, 5) == intersect_diagonal(b, 5)
    assert intersect_point_slice(a, 5) == intersect_point_slice(b, 5)


def test_gamma23_breakdown_third_part_zero():
    for r in (2, 3, 4):
        parts = gamma23_breakdown(DegeneracyProblem(r))
        assert parts["third"] == 0


def test_shifted_sequences():
    assert shifted_sequence(3, (1,)) == [0, 1, 4, 6]
    assert shifted_sequence(3, (1, 3)) == [0, 1, 4, 5]
    # r=2: only (1,2) contributes: 2 * V(0,1,3) = 2 * (1*3*2)/(1*1*6)
    assert double_shift_sum(2) == 2 * vandermonde_v([0, 1, 3])


@pytest.mark.parametrize("r", range(2, 9))
def test_theta_pure_part(r):
    prob = DegeneracyProblem(r)
    assert theta_pure_coefficients(prob) == theta_pure_matrix(r)
    assert rational_determinant(theta_pure_matrix(r)) == vandermonde_v(range(0, 2 * r + 1, 2))


def test_theta_pure_r1():
    assert rational_determinant(theta_pure_matrix(1)) == vandermonde_v([0, 2]) == Fraction(1)


def test_fp_matrix_shape():
    m = fp_matrix(P3)
    assert len(m) == 4 and all(len(row) == 4 for row in m)
    # row 0 is (1, 0, 0, 0): c^{(0)}_{-j}
    assert m[0][0].constant() == 1 and all(x.is_zero() for x in m[0][1:])


def test_report_ok():
    rep = fp_report(DegeneracyProblem(4), threads=2)
    assert rep.ok
    assert rep.diagonal == 34560 and rep.point_slice == 7776


def test_diagonal_class():
    assert diagonal_class(5) == parse_debug_lines(S, ["eta2 : 1", "eta3 : 1", "gamma23 : 1"])
