"""Exact integer/rational helpers and the closed-form combinatorial identities.

Every scalar in the package is a :class:`fractions.Fraction`.  Nothing in here
touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Sequence

ExactRational = Fraction


def binomial(n: int, k: int) -> Fraction:
    """n choose k, total on the integers: 0 whenever k < 0, k > n or n < 0."""
    if k < 0 or n < 0 or k > n:
        return Fraction(0)
    return Fraction(comb(n, k))


def inv_factorial(k: int) -> Fraction:
    """1/k!, with 1/k! = 0 for negative k."""
    if k < 0:
        return Fraction(0)
    return Fraction(1, factorial(k))


def vandermonde_v(b: Sequence[int]) -> Fraction:
    """prod_{l<k}(b_k - b_l) / prod_j b_j!.

    Equals det(1/(b_i - j)!)_{0<=i,j<=r}.  A negative entry gives a zero row in
    that determinant, so the value is 0 there as well as on repeated entries.
    """
    b = list(b)
    if any(x < 0 for x in b):
        return Fraction(0)
    num = 1
    for k in range(len(b)):
        for l in range(k):
            num *= b[k] - b[l]
    if num == 0:
        return Fraction(0)
    return Fraction(num, prod(factorial(x) for x in b))


def factorial_ratio_product(r: int) -> Fraction:
    """prod_{i=1}^r i!/(2i)!"""
    return prod((Fraction(factorial(i), factorial(2 * i)) for i in range(1, r + 1)), start=Fraction(1))


def central_weight(r: int, i: int) -> Fraction:
    """C(2i-1, i) * (r-i+1) * C(2r-2i+1, r-i), the summand shared by all identities."""
    return binomial(2 * i - 1, i) * (r - i + 1) * binomial(2 * r - 2 * i + 1, r - i)


def power_sum_lhs(r: int, power: int) -> Fraction:
    return sum((Fraction(i) ** power * central_weight(r, i) for i in range(1, r + 1)), Fraction(0))


def power_sum_rhs(r: int, power: int) -> Fraction:
    two = Fraction(2)
    if power == 1:
        return binomial(r + 1, 2) * two ** (2 * r - 2)
    if power == 2:
        return two ** (2 * r - 2) * binomial(r + 2, 3) + two ** (2 * r - 3) * binomial(r + 1, 3)
    if power == 3:
        return (two ** (2 * r - 2) * binomial(r + 3, 4)
                + 5 * two ** (2 * r - 3) * binomial(r + 2, 4)
                + two ** (2 * r - 4) * binomial(r + 1, 4))
    raise ValueError(f"power must be 1, 2 or 3, got {power}")


def check_identity_power_sum(r: int, power: int) -> bool:
    return power_sum_lhs(r, power) == power_sum_rhs(r, power)


def p_polynomial(r: int, i: int) -> Fraction:
    r = Fraction(r)
    head = (r**6 + 3 * r**5 - 21 * r**4 - 71 * r**3 - 100 * r**2 - 68 * r) / 16
    return head + i * (6 * r**3 + 12 * r**2 + 10 * r + 4) - i * i * (6 * r**2 + 6 * r + 4)


def master_identity_sides(r: int) -> tuple[Fraction, Fraction]:
    lhs = (Fraction(2) ** (2 * r - 6) * (r * (r + 1) + 2)
           * (r - 2) * (r - 1) * r * (r + 1) * (r + 2) * (r + 3))
    rhs = 2 * sum((i * central_weight(r, i) * p_polynomial(r, i) for i in range(1, r + 1)), Fraction(0))
    return lhs, rhs


def check_master_identity_sigma(r: int) -> bool:
    if r < 3:
        raise ValueError("the sigma identity is stated for r >= 3")
    lhs, rhs = master_identity_sides(r)
    return lhs == rhs


def final_identity_sides(r: int) -> tuple[Fraction, Fraction]:
    lhs = Fraction((r - 1) * r * (r + 1) * (r + 2), 16) * Fraction(2) ** (2 * r - 1)
    rhs = sum(((4 * i**3 - 2 * i**2 * (r + 1)) * central_weight(r, i) for i in range(0, r + 1)), Fraction(0))
    return lhs, rhs


def check_final_identity(r: int) -> bool:
    lhs, rhs = final_identity_sides(r)
    return lhs == rhs


def generalized_binomial(alpha: Fraction, n: int) -> Fraction:
    """alpha choose n for rational alpha."""
    out = Fraction(1)
    for j in range(n):
        out = out * (alpha - j) / (j + 1)
    return out


def sqrt_one_minus_4x(degree_cap: int) -> list[Fraction]:
    """Coefficients 0..degree_cap of (1 - 4x)^(1/2) from the binomial series."""
    half = Fraction(1, 2)
    return [generalized_binomial(half, n) * Fraction(-4) ** n for n in range(degree_cap + 1)]


def catalan_generating_series(degree_cap: int) -> list[Fraction]:
    """Coefficients 0..degree_cap of (1 - sqrt(1-4x)) / (2x)."""
    s = sqrt_one_minus_4x(degree_cap + 1)
    assert s[0] == 1
    # (1 - s)/(2x): the constant terms cancel, shift down by one.
    return [-s[n + 1] / 2 for n in range(degree_cap + 1)]


def check_catalan_series(degree: int) -> bool:
    series = catalan_generating_series(degree)
    return all(series[i] == Fraction(factorial(2 * i), factorial(i) * factorial(i + 1))
               for i in range(degree + 1))


catalan_series_check = check_catalan_series


@lru_cache(maxsize=None)
def fp_closed_form(r: int) -> Fraction:
    """g! 2^{r(r+1)/2} prod i!/(2i)! (r-1) r^2 (r+1)^2 (r+2) / 16 with g = r(r+1)/2 - 1.

    The number of g^r_{g+r} with vanishing (0,2,...,2r) at a moving point on a
    general curve of that genus.
    """
    g = r * (r + 1) // 2 - 1
    return (factorial(g) * Fraction(2) ** (r * (r + 1) // 2) * factorial_ratio_product(r)
            * Fraction((r - 1) * r**2 * (r + 1) ** 2 * (r + 2), 16))


def solve_linear(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Exact Gauss-Jordan elimination for a square system; raises on singular input."""
    n = len(matrix)
    rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    if any(len(row) != n + 1 for row in rows) or len(rows) != n:
        raise ValueError("solve_linear needs a square system")
    for col in range(n):
        pivot = next((k for k in range(col, n) if rows[k][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular linear system")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for k in range(n):
            if k != col and rows[k][col] != 0:
                f = rows[k][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[col])]
    return [row[n] for row in rows]


def format_rational(x: Fraction | int) -> str:
    """'p/q' in lowest terms, or 'n' when integral."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
