from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tautcalc.degeneracy import rational_determinant
from tautcalc.exactnum import (
    binomial,
    catalan_generating_series,
    check_catalan_series,
    check_final_identity,
    check_identity_power_sum,
    check_master_identity_sigma,
    central_weight,
    factorial_ratio_product,
    format_rational,
    fp_closed_form,
    generalized_binomial,
    inv_factorial,
    p_polynomial,
    power_sum_lhs,
    solve_linear,
    sqrt_one_minus_4x,
    vandermonde_v,
)


@pytest.mark.parametrize("n,k,want", [(5, 2, 10), (5, -1, 0), (5, 6, 0), (-3, 1, 0), (0, 0, 1)])
def test_binomial_edges(n, k, want):
    assert binomial(n, k) == want


@given(st.integers(0, 60), st.integers(-5, 65))
def test_binomial_matches_math_comb(n, k):
    want = comb(n, k) if 0 <= k <= n else 0
    assert binomial(n, k) == want


def test_inv_factorial():
    assert inv_factorial(-1) == 0
    assert inv_factorial(0) == 1
    assert inv_factorial(5) == Fraction(1, 120)


def _v_by_matrix(b):
    # det(1/(b_i - j)!) straight from the definition
    r = len(b) - 1
    return rational_determinant([[inv_factorial(bi - j) for j in range(r + 1)] for bi in b])


@settings(max_examples=60)
@given(st.lists(st.integers(0, 14), min_size=1, max_size=5))
def test_vandermonde_equals_factorial_determinant(b):
    # the determinant is antisymmetric, so compare on the sorted sequence
    b = sorted(b)
    assert vandermonde_v(b) == _v_by_matrix(b)


def test_vandermonde_zero_cases():
    assert vandermonde_v([0, 2, 2, 6]) == 0
    assert vandermonde_v([-1, 2, 4]) == 0
    assert _v_by_matrix([-1, 2, 4]) == 0


def test_vandermonde_even_sequence_r2():
    # V(0,2,4) = (2*4*2)/(0!2!4!) = 16/48
    assert vandermonde_v([0, 2, 4]) == Fraction(1, 3)


def test_factorial_ratio_product_small():
    assert factorial_ratio_product(3) == Fraction(1, 2) * Fraction(2, 24) * Fraction(6, 720)


def test_central_weight_r1():
    # C(1,1) * 1 * C(1,0) = 1
    assert central_weight(1, 1) == 1


@pytest.mark.parametrize("power", [1, 2, 3])
def test_power_sum_identities(power):
    assert all(check_identity_power_sum(r, power) for r in range(1, 51))


def test_power_sum_r2_by_hand():
    # i=1: C(1,1)*2*C(3,1) = 6 ; i=2: C(3,2)*1*C(1,0) = 3 -> 6 + 2*3 = 12 = C(3,2)*4
    assert power_sum_lhs(2, 1) == 12


def test_power_sum_rejects_other_powers():
    with pytest.raises(ValueError):
        check_identity_power_sum(3, 4)


def test_sigma_identity():
    assert all(check_master_identity_sigma(r) for r in range(3, 41))
    with pytest.raises(ValueError):
        check_master_identity_sigma(2)


def test_p_polynomial_r3():
    # (729 + 729 - 1701 - 1917 - 900 - 204)/16 = -204 at r=3
    assert p_polynomial(3, 0) == -204
    assert p_polynomial(3, 1) == -204 + 304 - 76


def test_final_identity():
    assert all(check_final_identity(r) for r in range(1, 41))


def test_catalan():
    series = catalan_generating_series(100)
    assert series == [Fraction(comb(2 * n, n), n + 1) for n in range(101)]
    assert check_catalan_series(100)


def test_sqrt_series_squares_to_one_minus_4x():
    s = sqrt_one_minus_4x(20)
    sq = [sum(s[k] * s[n - k] for k in range(n + 1)) for n in range(21)]
    assert sq == [1, -4] + [0] * 19


def test_generalized_binomial_integer_alpha():
    assert generalized_binomial(Fraction(7), 3) == 35
    assert generalized_binomial(Fraction(1, 2), 2) == Fraction(-1, 8)


def test_fp_closed_form_r3():
    # 4! * 2^6 * (1/2 * 1/12 * 1/120) * (2*9*16*5/16) with g = 5: 120*64/2880*90
    assert fp_closed_form(3) == 240
    assert fp_closed_form(2) == 6


def test_fp_closed_form_is_integral():
    for r in range(2, 12):
        assert fp_closed_form(r).denominator == 1


@settings(max_examples=50)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_solve_linear_roundtrip(matrix, rhs):
    if rational_determinant(matrix) == 0:
        with pytest.raises(ZeroDivisionError):
            solve_linear(matrix, rhs)
        return
    x = solve_linear(matrix, rhs)
    assert [sum(Fraction(a) * b for a, b in zip(row, x)) for row in matrix] == rhs


def test_solve_linear_rejects_non_square():
    with pytest.raises(ValueError):
        solve_linear([[1, 2]], [1])


@pytest.mark.parametrize("x,want", [(Fraction(6, 4), "3/2"), (Fraction(-4, 2), "-2"), (7, "7"), (Fraction(0), "0")])
def test_format_rational(x, want):
    assert format_rational(x) == want
