"""Brill-Noether numbers, vanishing-sequence constraint solving, test curves and
the general-type check for R_{14,2}."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .divisors import (
    PointedDivisorClass2,
    PrymDivisorClass,
    UnknownCoefficientError,
    prym_genus,
    solve_prym_class,
)
from .exactnum import binomial, solve_linear

# The multivanishing count is stated with (g-r+d) as second factor; the
# expected dimension needs (g-d+r), which is what rho_multivanishing uses.
MULTIVANISHING_SIGN_NOTE = "second factor taken as (g-d+r); stated as (g-r+d)"


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class RamificationProfile:
    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        if not self.orders:
            raise ProfileError("empty profile")
        if self.orders[0] < 0:
            raise ProfileError("vanishing orders must be non-negative")
        if any(b <= a for a, b in zip(self.orders, self.orders[1:])):
            raise ProfileError(f"orders must be strictly increasing: {self.orders}")

    @property
    def r(self) -> int:
        return len(self.orders) - 1

    def validate(self, r: int, d: int):
        if self.r != r:
            raise ProfileError(f"profile has {self.r + 1} entries, expected {r + 1}")
        if self.orders[-1] > d:
            raise ProfileError(f"order {self.orders[-1]} exceeds d = {d}")

    def weight(self) -> int:
        return sum(a - i for i, a in enumerate(self.orders))


@dataclass(frozen=True)
class MultivanishingProfile:
    orders: tuple[int, ...]
    divisor_degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        object.__setattr__(self, "divisor_degrees", tuple(self.divisor_degrees))
        degs = self.divisor_degrees
        if not degs or degs[0] != 0 or any(b <= a for a, b in zip(degs, degs[1:])):
            raise ProfileError("divisor degrees must start at 0 and increase strictly")
        if any(b < a for a, b in zip(self.orders, self.orders[1:])):
            raise ProfileError("multivanishing orders must be weakly increasing")
        for a in self.orders:
            if a not in degs:
                raise ProfileError(f"order {a} is not the degree of a divisor in the chain")
        for level, deg in enumerate(degs[:-1]):
            if self.orders.count(deg) > degs[level + 1] - deg:
                raise ProfileError(f"too many sections with multivanishing order {deg}")

    @property
    def r(self) -> int:
        return len(self.orders) - 1

    def multiplicities(self) -> list[int]:
        return [self.orders.count(deg) for deg in self.divisor_degrees]


def rho(g: int, r: int, d: int) -> int:
    return g - (r + 1) * (g - d + r)


def rho_ramified(g: int, r: int, d: int, profiles: Sequence[RamificationProfile] = ()) -> int:
    for p in profiles:
        p.validate(r, d)
    return (rho(g, r, d) - sum(sum(p.orders) for p in profiles)
            + len(profiles) * (r * (r + 1) // 2))


def rho_multivanishing(g: int, r: int, d: int, prof: MultivanishingProfile) -> int:
    if prof.r != r:
        raise ProfileError(f"profile has {prof.r + 1} entries, expected {r + 1}")
    if prof.orders[-1] > d:
        raise ProfileError("order exceeds d")
    repeats = sum(int(binomial(k, 2)) for k in prof.multiplicities())
    return rho(g, r, d) - sum(a - j for j, a in enumerate(prof.orders)) - repeats


@dataclass(frozen=True)
class BNData:
    g: int
    r: int
    d: int
    profiles: tuple[RamificationProfile, ...] = ()

    @property
    def n(self) -> int:
        return len(self.profiles)

    def rho(self) -> int:
        return rho_ramified(self.g, self.r, self.d, self.profiles)


# case -> (shape predicate, lower bound on rho as a function of r)
_CASES: dict[str, tuple[Callable[[BNData], bool], Callable[[int], int], str]] = {
    "I": (lambda x: x.g == 0, lambda r: 0, "genus 0, any number of points"),
    "II": (lambda x: x.g == 1 and x.n == 1, lambda r: 0, "genus 1, one point"),
    "III": (lambda x: x.g == 1 and x.n == 2, lambda r: -r, "genus 1, two points"),
    "IV": (lambda x: x.g == 2 and x.n == 1, lambda r: 0, "genus 2, one non-Weierstrass point"),
    "V": (lambda x: x.g == 2 and x.n == 1, lambda r: 0, "genus 2, one point, general boundary curve"),
    "VI": (lambda x: True, lambda r: 0, "general pointed curve"),
}


def feasibility_checks(case: str, data: BNData) -> bool:
    """Necessary condition for a (limit) linear series with the given data to exist."""
    try:
        shape, bound, desc = _CASES[case]
    except KeyError:
        raise ValueError(f"unknown case {case!r}") from None
    if not shape(data):
        raise ValueError(f"case {case} needs {desc}; got g={data.g}, n={data.n}")
    return data.rho() >= bound(data.r)


def _increasing_sequences(length: int, lo: int, hi: int, ok_step: Callable[[int, int], bool],
                          ok_value: Callable[[int], bool]) -> Iterator[tuple[int, ...]]:
    def rec(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        start = prefix[-1] + 1 if prefix else lo
        for v in range(start, hi + 1):
            if not ok_value(v):
                continue
            if prefix and not ok_step(prefix[-1], v):
                continue
            # remaining entries need room above v
            if hi - v < length - len(prefix) - 1:
                break
            yield from rec(prefix + [v])
    yield from rec([])


def vanishing_sequence_candidates(r: int, case: str) -> list[tuple[int, ...]]:
    """All sequences meeting the constraint set of the named degeneration.

    secondrel: orders at the node of an elliptic-tail Prym curve, genus g-1
        aspect of a g^r_{2g-2}; a_0 >= g-r-1, a_r <= g+r-1, gaps >= 2.
    even / odd: multivanishing orders along (x+y)-multiples on the genus g-1
        normalisation of a curve in Delta_0'', concentrated multidegree
        (2g-3, 1) or (2g-2, 0).  Orders are even and distinct, and lie in
        [g-r-2, g+r-2] resp. [g-r-1, g+r-1].
    """
    if r < 3:
        raise ValueError("r must be >= 3")
    g = prym_genus(r)
    if case == "secondrel":
        lo, hi = max(0, g - r - 1), min(2 * g - 2, g + r - 1)
        return list(_increasing_sequences(r + 1, lo, hi, lambda a, b: b - a >= 2, lambda v: True))
    if case in ("even", "odd"):
        shift = 2 if case == "even" else 1
        lo, hi = max(0, g - r - shift), min(2 * g - 4, g + r - shift)
        return list(_increasing_sequences(r + 1, lo, hi, lambda a, b: b > a, lambda v: v % 2 == 0))
    raise ValueError(f"unknown case {case!r}")


def vanishing_sequence_solver(r: int, case: str) -> RamificationProfile:
    sols = vanishing_sequence_candidates(r, case)
    if len(sols) != 1:
        raise ProfileError(f"expected a unique sequence for r={r}, case {case}; found {len(sols)}")
    return RamificationProfile(sols[0])


def feasible_parity_case(r: int) -> str:
    """The Delta_0'' multidegree that can occur: 'even' iff g - r is even."""
    return "even" if (prym_genus(r) - r) % 2 == 0 else "odd"


@dataclass(frozen=True)
class TestCurveProfile:
    name: str
    pairings: dict[str, Fraction] = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def pairing(self, generator: str) -> Fraction:
        return self.pairings.get(generator, Fraction(0))


def nikulin_pencil(g: int) -> TestCurveProfile:
    return TestCurveProfile("Xi_g", {"lambda": Fraction(g + 1), "delta0p": Fraction(6 * g + 2),
                                     "delta0ram": Fraction(8)})


def elliptic_tail_curve(g: int, which: str) -> TestCurveProfile:
    """Pullbacks of the elliptic-pencil test curve of M_g to Delta_{g-1} or Delta_1.

    Pairings are the ones encoded in the two vanishing relations
    a - 12 b0' + b_{g-1} = 0 and a - 4 b0'' - 4 b0ram + b_1 = 0.
    """
    if which == "A_{g-1}":
        return TestCurveProfile(which, {"lambda": Fraction(1), "delta0p": Fraction(12),
                                        f"delta{g - 1}": Fraction(-1)})
    if which == "A_1":
        return TestCurveProfile(which, {"lambda": Fraction(1), "delta0pp": Fraction(4),
                                        "delta0ram": Fraction(4), "delta1": Fraction(-1)})
    raise ValueError(which)


def pointed_test_curve(g: int) -> TestCurveProfile:
    """A = {[C, x, y]}_{x in C} in M_{g,2}."""
    return TestCurveProfile("A_pointed", {"psi1": Fraction(2 * g - 1), "psi2": Fraction(1),
                                          "delta0,12": Fraction(1)})


def test_curve_pairing(curve: TestCurveProfile, cls: PrymDivisorClass | PointedDivisorClass2) -> Fraction:
    coeffs = cls.signed_coefficients()
    total = Fraction(0)
    for gen, value in curve.pairings.items():
        if value == 0:
            continue
        if gen not in coeffs:
            raise UnknownCoefficientError(f"class has no generator {gen}")
        c = coeffs[gen]
        if c is None:
            raise UnknownCoefficientError(f"coefficient of {gen} is unknown")
        total += value * c
    return total


test_curve_pairing.__test__ = False


def nikulin_pairing(r: int) -> Fraction:
    x = solve_prym_class(r)
    return test_curve_pairing(nikulin_pencil(x.g), x)


# Classes on R_{14,2} in the (psi, lambda, delta_0', delta_0^ram) coordinates
KODAIRA_INPUTS = {
    "BN_14": (Fraction(0), Fraction(34), Fraction(-5), Fraction(-10)),
    "GP_28_24": (Fraction(19289), Fraction(308624), Fraction(-47784), Fraction(-62470)),
    "R5_15": (Fraction(15), Fraction(128), Fraction(-20), Fraction(-30)),
}
KODAIRA_TARGET = (Fraction(13), Fraction(-2), Fraction(-3))
KODAIRA_EXPECTED = (Fraction(4603, 63570), Fraction(1, 50856), Fraction(683, 19560))


@dataclass
class KodairaReport:
    coefficients: tuple[Fraction, Fraction, Fraction]
    combination: tuple[Fraction, Fraction, Fraction, Fraction]
    expected_coefficients: bool
    hits_target: bool
    psi_below_one: bool

    @property
    def psi(self) -> Fraction:
        return self.combination[0]

    @property
    def passed(self) -> bool:
        return self.expected_coefficients and self.hits_target and self.psi_below_one


def kodaira_combination(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    rows = list(KODAIRA_INPUTS.values())
    return tuple(sum((c * row[k] for c, row in zip(coeffs, rows)), Fraction(0)) for k in range(4))


def evaluate_kodaira(coeffs: Sequence[Fraction]) -> KodairaReport:
    coeffs = tuple(Fraction(c) for c in coeffs)
    comb = kodaira_combination(coeffs)
    return KodairaReport(
        coefficients=coeffs,
        combination=comb,
        expected_coefficients=coeffs == KODAIRA_EXPECTED,
        hits_target=comb[1:] == KODAIRA_TARGET,
        psi_below_one=comb[0] < 1,
    )


def kodaira_r14_2() -> KodairaReport:
    rows = list(KODAIRA_INPUTS.values())
    matrix = [[row[k] for row in rows] for k in (1, 2, 3)]
    coeffs = solve_linear(matrix, KODAIRA_TARGET)
    return evaluate_kodaira(coeffs)
