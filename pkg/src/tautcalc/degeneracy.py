"""Chern data of the bundles M_i on C x C x Pic and the flag degeneracy class.

For a curve of genus g = r(r+1)/2 - 1, the locus Z of (x, y, L) with
h^0(L(-i(x+y))) >= r+1-i for all i is the degeneracy locus of
E -> M_r -> ... -> M_0, where M_i is the pushforward of L(mp) restricted to
the divisor D_i = m p + i Delta_12 + i Delta_13.  Its class is the
determinant det(c^{(i)}_{2i-j}) of twisted Chern classes.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial

from .exactnum import fp_closed_form, inv_factorial, vandermonde_v
from .tautring import (
    RingSignature,
    TautClass,
    eta,
    exp_nilpotent,
    gamma,
    integrate,
    multiply,
    one,
    pushforward_factor1,
    theta,
    zero,
)


@dataclass(frozen=True)
class DegeneracyProblem:
    r: int
    m: int | None = None

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("r must be at least 2")
        if self.m is None:
            object.__setattr__(self, "m", self.g - self.r)
        if self.m <= self.g - 1 - self.r:
            raise ValueError(f"m must exceed g-1-r = {self.g - 1 - self.r}, got {self.m}")

    @property
    def g(self) -> int:
        return self.r * (self.r + 1) // 2 - 1

    @property
    def d(self) -> int:
        return self.g + self.r

    @property
    def degree_cap(self) -> int:
        """Complex dimension of C x C x Pic; anything above integrates to 0."""
        return self.g + 2


@dataclass
class ChernSeries:
    """pieces[j] is the degree-j part (pieces[0] is the rank / c_0 as a constant class)."""

    pieces: list[TautClass]

    @property
    def rank_part(self) -> Fraction:
        return self.pieces[0].constant()

    @property
    def signature(self) -> RingSignature:
        return self.pieces[0].signature

    def __getitem__(self, j: int) -> TautClass:
        if j < 0:
            return zero(self.signature)
        if j >= len(self.pieces):
            return zero(self.signature)
        return self.pieces[j]

    def total(self) -> TautClass:
        out = zero(self.signature)
        for p in self.pieces:
            out = out + p
        return out


def _check_i(i: int, prob: DegeneracyProblem):
    if not 0 <= i <= prob.r:
        raise ValueError(f"i must lie in 0..{prob.r}, got {i}")


def divisor_class_D(i: int, prob: DegeneracyProblem) -> TautClass:
    _check_i(i, prob)
    S = RingSignature.triple(prob.g)
    return ((prob.m + 2 * i) * eta(S, 1) + i * eta(S, 2) + i * eta(S, 3)
            + i * gamma(S, 1, 2) + i * gamma(S, 1, 3))


def chern_character_poincare(prob: DegeneracyProblem) -> TautClass:
    """ch of the Poincare bundle of degree g+r+m pulled back from factors (1, Pic)."""
    S = RingSignature.triple(prob.g)
    e1 = eta(S, 1)
    return 1 + (prob.g + prob.r + prob.m) * e1 + gamma(S, 1, 4) - e1 * theta(S)


@lru_cache(maxsize=None)
def chern_character_Mi(i: int, prob: DegeneracyProblem) -> ChernSeries:
    """ch(M_i) by Grothendieck-Riemann-Roch along the projection forgetting factor 1."""
    _check_i(i, prob)
    S = RingSignature.triple(prob.g)
    cap = S.dimension
    ch_O_D = 1 - exp_nilpotent(-divisor_class_D(i, prob), cap)
    todd = 1 + (1 - prob.g) * eta(S, 1)
    upstairs = multiply(multiply(todd, chern_character_poincare(prob), cap), ch_O_D, cap)
    ch = pushforward_factor1(upstairs)
    top = max(max(ch.degrees(), default=0), 3)
    return ChernSeries([ch.degree_part(d) for d in range(top + 1)])


def chern_classes_from_character(ch: ChernSeries, top: int, degree_cap: int | None = None) -> ChernSeries:
    """Total Chern class c_0..c_top from ch via Newton's identities.

    With power sums p_k = k! ch_k:  n c_n = sum_{k=1}^n (-1)^{k-1} p_k c_{n-k}.
    """
    if top < 1:
        raise ValueError("top must be >= 1")
    S = ch.signature
    p = [None] + [ch[k] * Fraction(_fact(k)) for k in range(1, top + 1)]
    c = [one(S)]
    for n in range(1, top + 1):
        acc = zero(S)
        for k in range(1, n + 1):
            term = multiply(p[k], c[n - k], degree_cap)
            acc = acc + term if k % 2 == 1 else acc - term
        c.append(acc / n)
    return ChernSeries(c)


def _fact(k: int) -> int:
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


@lru_cache(maxsize=None)
def chern_classes_Mi(i: int, prob: DegeneracyProblem) -> ChernSeries:
    return chern_classes_from_character(chern_character_Mi(i, prob), 2 * prob.r + 2, prob.degree_cap)


@lru_cache(maxsize=None)
def reduced_chern_classes_Mi(i: int, prob: DegeneracyProblem) -> ChernSeries:
    """c'(M_i): c(M_i) with every part killed by eta_2, eta_3 and gamma_23 dropped.

    Only c_1 and the (eta_2+eta_3) theta, gamma_24 gamma_34 part of c_2 survive.
    """
    full = chern_classes_Mi(i, prob)
    S = full.signature
    kept = [full[0], full[1]]
    c2 = zero(S)
    for mono, coef in full[2].items():
        if mono.theta == 1 or mono.gammas == ((2, 4), (3, 4)):
            c2 = c2 + TautClass(S, {mono: coef})
    kept.append(c2)
    return ChernSeries(kept)


def twisted_entry(i: int, j: int, prob: DegeneracyProblem, reduced: bool = False) -> TautClass:
    """c^{(i)}_j = sum_k c_k(M_i) theta^{j-k} / (j-k)!, i.e. c(M_i) * c(-E) with c(-E) = e^theta."""
    _check_i(i, prob)
    return _twisted_entry(i, j, prob, reduced)


@lru_cache(maxsize=None)
def _twisted_entry(i, j, prob, reduced):
    S = RingSignature.pair(prob.g)
    if j < 0:
        return zero(S)
    c = reduced_chern_classes_Mi(i, prob) if reduced else chern_classes_Mi(i, prob)
    out = zero(S)
    for k in range(0, j + 1):
        ck = c[k]
        if ck.is_zero():
            continue
        out = out + multiply(ck, theta(S, j - k), prob.degree_cap) * inv_factorial(j - k)
    return out.truncate(prob.degree_cap)


def _pair_gens(prob: DegeneracyProblem):
    S = RingSignature.pair(prob.g)
    return S, eta(S, 2), eta(S, 3), gamma(S, 2, 3), gamma(S, 2, 4), gamma(S, 3, 4), theta(S)


def reference_chern_character(i: int, prob: DegeneracyProblem) -> list[TautClass]:
    """Closed forms for ch_0..ch_3(M_i)."""
    _check_i(i, prob)
    S, e2, e3, g23, g24, g34, th = _pair_gens(prob)
    r, g = prob.r, prob.g
    return [
        one(S) * (prob.m + 2 * i),
        i * (r + 1 + i * g - 2 * i) * (e2 + e3) + i * (g24 + g34) - i * i * g23,
        -i * (e2 + e3) * th + i * i * (2 * i - r - 1 - 2 * i * g) * e2 * e3 - i * i * (e2 * g34 + e3 * g24),
        i * i * e2 * e3 * th,
    ]


def reference_chern_classes(i: int, prob: DegeneracyProblem, corrected: bool = False) -> dict[int, TautClass]:
    """Closed forms for c_2 and c_3 of M_i, as stated or with the two corrections.

    Corrections: the eta_2 eta_3 bracket of c_2 has -g i^2 (not -g i^4); c_3
    has +2 (not +1) in its bracket and an extra -i^2(i-1)(eta_2 gamma_34 +
    eta_3 gamma_24) theta.  Both differences are killed by eta_2, eta_3 and
    gamma_23, so no intersection number downstream depends on them.
    """
    _check_i(i, prob)
    S, e2, e3, g23, g24, g34, th = _pair_gens(prob)
    r, g = prob.r, prob.g
    lead = r + 1 + i * g - 2 * i
    quartic = g * i**2 if corrected else g * i**4
    c2 = (i * i * (lead**2 - quartic + 2 * i * g + r + 1 - 2 * i) * e2 * e3
          + i * i * (r + 2 + i * g - 3 * i) * (e2 * g34 + e3 * g24)
          + (i - i * i) * (e2 + e3) * th + i * i * g24 * g34)
    const = 2 if corrected else 1
    c3 = i * i * (2 * (1 - i) * lead - 4 * i + 2 * i * i + const) * e2 * e3 * th
    if corrected:
        c3 = c3 - i * i * (i - 1) * (e2 * g34 + e3 * g24) * th
    return {2: c2, 3: c3}


def reference_twisted_entry(i: int, j: int, prob: DegeneracyProblem) -> TautClass:
    """Closed form of the reduced twisted entry c^{(i)}_j."""
    _check_i(i, prob)
    S, e2, e3, g23, g24, g34, th = _pair_gens(prob)
    if j < 0:
        return zero(S)
    if j == 0:
        return one(S)
    eta_sum, gam = e2 + e3, g24 + g34
    lin = i * i * (prob.g - 2) + i * (prob.r + 1)
    out = (theta(S, j) * inv_factorial(j)
           + (lin * inv_factorial(j - 1) + (i - i * i) * inv_factorial(j - 2)) * eta_sum * theta(S, j - 1)
           + i * inv_factorial(j - 1) * gam * theta(S, j - 1)
           - i * i * inv_factorial(j - 1) * g23 * theta(S, j - 1))
    if j >= 2:
        out = out + i * i * inv_factorial(j - 2) * g24 * g34 * theta(S, j - 2)
    return out.truncate(prob.degree_cap)


def discrepancy_annihilated(x: TautClass, prob: DegeneracyProblem) -> bool:
    """True when x . eta_2, x . eta_3 and x . gamma_23 all vanish."""
    S, e2, e3, g23 = _pair_gens(prob)[:4]
    return all(multiply(x, y, prob.degree_cap).is_zero() for y in (e2, e3, g23))


def chern_classes_by_exp_log(i: int, prob: DegeneracyProblem, top: int = 4) -> ChernSeries:
    """c(M_i) = exp(sum_k (-1)^{k-1} (k-1)! ch_k), independent of Newton's recursion."""
    ch = chern_character_Mi(i, prob)
    S = ch.signature
    cap = prob.degree_cap
    log_c = zero(S)
    for k in range(1, cap + 1):
        if ch[k].is_zero():
            continue
        log_c = log_c + ch[k] * ((-1) ** (k - 1) * factorial(k - 1))
    # log_c has no constant term, so the series stops after cap terms
    total, power = one(S), one(S)
    for n in range(1, cap + 1):
        power = multiply(power, log_c, cap)
        total = total + power * inv_factorial(n)
    return ChernSeries([total.degree_part(d) for d in range(top + 1)])


def fp_matrix(prob: DegeneracyProblem, reduced: bool = False) -> list[list[TautClass]]:
    n = prob.r + 1
    return [[twisted_entry(i, 2 * i - j, prob, reduced) for j in range(n)] for i in range(n)]


def _minor_determinant(matrix, degree_cap, threads: int = 1):
    """Expansion by minors over column subsets, bottom rows first.

    minors[S] is the determinant of the last |S| rows restricted to columns S.
    Each subset size is one level; entries within a level are independent.
    """
    n = len(matrix)
    S = matrix[0][0].signature
    minors: dict[tuple[int, ...], TautClass] = {(): one(S)}

    def expand(cols):
        row = n - len(cols)
        acc = zero(S)
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if entry.is_zero():
                continue
            rest = cols[:pos] + cols[pos + 1:]
            sub = minors[rest]
            if sub.is_zero():
                continue
            term = multiply(entry, sub, degree_cap)
            acc = acc + term if pos % 2 == 0 else acc - term
        return acc

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for size in range(1, n + 1):
            level = list(combinations(range(n), size))
            if pool is not None:
                values = list(pool.map(expand, level))
            else:
                values = [expand(c) for c in level]
            # insert in a fixed order so the memo table is identical for any thread count
            for cols, val in zip(level, values):
                minors[cols] = val
    finally:
        if pool is not None:
            pool.shutdown()
    return minors[tuple(range(n))]


def _permutation_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                sign = -sign
    return sign


def leibniz_determinant(matrix, degree_cap=None) -> TautClass:
    """Sum over permutations; the independent check for small r."""
    n = len(matrix)
    S = matrix[0][0].signature
    total = zero(S)
    for perm in permutations(range(n)):
        term = one(S)
        for row, col in enumerate(perm):
            term = multiply(term, matrix[row][col], degree_cap)
            if term.is_zero():
                break
        if not term.is_zero():
            total = total + term * _permutation_sign(perm)
    return total


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("TAUTCALC_THREADS", "1")))
    except ValueError:
        return 1


def fp_determinant(prob: DegeneracyProblem, reduced: bool = False, method: str = "minors",
                   threads: int | None = None) -> TautClass:
    matrix = fp_matrix(prob, reduced)
    if method == "minors":
        return _minor_determinant(matrix, prob.degree_cap, threads or default_threads())
    if method == "leibniz":
        if prob.r > 4:
            raise ValueError("the Leibniz expansion is only used for r <= 4")
        return leibniz_determinant(matrix, prob.degree_cap)
    raise ValueError(f"unknown method {method!r}")


def theta_pure_matrix(r: int) -> list[list[Fraction]]:
    """(1/(2i-j)!)_{0<=i,j<=r}: the theta^{2i-j} coefficients of the entries."""
    return [[inv_factorial(2 * i - j) for j in range(r + 1)] for i in range(r + 1)]


def theta_pure_coefficients(prob: DegeneracyProblem) -> list[list[Fraction]]:
    """Read the theta-pure coefficients off the engine's own matrix."""
    out = []
    for i, row in enumerate(fp_matrix(prob)):
        out.append([entry.coefficient(_theta_mono(2 * i - j)) if 2 * i - j >= 0 else Fraction(0)
                    for j, entry in enumerate(row)])
    return out


def _theta_mono(p):
    from .tautring import TautMonomial
    return TautMonomial(p, (), ())


def rational_determinant(matrix: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-valued elimination."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((k for k in range(col, n) if a[k][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for k in range(col + 1, n):
            f = a[k][col] / a[col][col]
            if f:
                a[k] = [x - f * y for x, y in zip(a[k], a[col])]
    return det


def diagonal_class(g: int) -> TautClass:
    S = RingSignature.pair(g)
    return eta(S, 2) + gamma(S, 2, 3) + eta(S, 3)


def intersect_diagonal(det: TautClass, g: int) -> Fraction:
    return integrate(multiply(det, diagonal_class(g)))


def intersect_point_slice(det: TautClass, g: int, factor: int = 2) -> Fraction:
    """[Z] . (C x {p} x Pic) for the marked point on the given factor."""
    S = RingSignature.pair(g)
    return integrate(multiply(det, eta(S, factor)))


def intersect_gamma23(det: TautClass, g: int) -> Fraction:
    S = RingSignature.pair(g)
    return integrate(multiply(det, gamma(S, 2, 3)))


def shifted_sequence(r: int, lowered: tuple[int, ...]) -> list[int]:
    """(0, 2, ..., 2r) with each position in `lowered` decreased by one."""
    return [2 * k - (1 if k in lowered else 0) for k in range(r + 1)]


def single_shift_sum(r: int, weight) -> Fraction:
    return sum((Fraction(weight(i)) * vandermonde_v(shifted_sequence(r, (i,))) for i in range(r + 1)),
               Fraction(0))


def double_shift_sum(r: int) -> Fraction:
    """sum_{i1<i2} i1 i2 V(... 2i1-1 ... 2i2-1 ...)"""
    return sum((Fraction(a * b) * vandermonde_v(shifted_sequence(r, (a, b)))
                for a, b in combinations(range(r + 1), 2)), Fraction(0))


def n_combinatorial(prob: DegeneracyProblem) -> Fraction:
    """The closed double sum for [Z].[Delta x Pic]."""
    r, g = prob.r, prob.g
    # V-sums give the eta_2 eta_3 theta^g coefficient; integration multiplies by g!
    raw = (2 * single_shift_sum(r, lambda i: i * i * (g - 2) + i * (r + 1) + i * i * g)
           - 8 * double_shift_sum(r))
    return factorial(g) * raw


def point_slice_breakdown(prob: DegeneracyProblem) -> Fraction:
    """sum [i^2(g-2) + i(r+1)] V(...) - 2 sum i1 i2 V(...)"""
    r, g = prob.r, prob.g
    raw = single_shift_sum(r, lambda i: i * i * (g - 2) + i * (r + 1)) - 2 * double_shift_sum(r)
    return factorial(g) * raw


def gamma23_breakdown(prob: DegeneracyProblem) -> dict[str, Fraction]:
    """The three ways gamma_23 . det can be non-zero, evaluated with V-values.

    The third (the gamma_24 gamma_34 theta^{j-2} summand in one row) corresponds
    to b_i = 2i-2, which repeats b_{i-1}; it is evaluated rather than assumed 0.
    """
    r, g = prob.r, prob.g
    first = single_shift_sum(r, lambda i: 2 * g * i * i)
    second = -4 * double_shift_sum(r)
    third = Fraction(0)
    for i in range(r + 1):
        seq = [2 * k for k in range(r + 1)]
        seq[i] = 2 * i - 2
        # gamma_23 * gamma_24 gamma_34 = -2 eta_2 eta_3 theta
        third += Fraction(-2 * i * i) * vandermonde_v(seq)
    scale = factorial(g)
    return {"first": scale * first, "second": scale * second, "third": scale * third}


@dataclass
class FPReport:
    r: int
    g: int
    m: int
    diagonal: Fraction
    point_slice: Fraction
    point_slice_other: Fraction
    gamma23: Fraction
    combinatorial: Fraction
    closed_form: Fraction
    breakdown: Fraction
    gamma23_parts: dict[str, Fraction] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.diagonal == self.combinatorial == self.closed_form
                and self.point_slice == self.breakdown == self.point_slice_other
                and self.gamma23 == sum(self.gamma23_parts.values()))


def fp_report(prob: DegeneracyProblem, threads: int | None = None) -> FPReport:
    det = fp_determinant(prob, threads=threads)
    g = prob.g
    return FPReport(
        r=prob.r, g=g, m=prob.m,
        diagonal=intersect_diagonal(det, g),
        point_slice=intersect_point_slice(det, g, 2),
        point_slice_other=intersect_point_slice(det, g, 3),
        gamma23=intersect_gamma23(det, g),
        combinatorial=n_combinatorial(prob),
        closed_form=fp_closed_form(prob.r),
        breakdown=point_slice_breakdown(prob),
        gamma23_parts=gamma23_breakdown(prob),
    )
