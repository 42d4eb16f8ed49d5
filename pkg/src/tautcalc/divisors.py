"""Divisor classes on the Prym and pointed moduli compactifications.

Coefficient conventions follow the class displays:  a Prym class is
a*lambda - b0p*delta_0' - b0pp*delta_0'' - b0ram*delta_0^ram - sum b_i delta_i
- sum b_{i:g-i} delta_{i:g-i}, so boundary coefficients are stored with the
sign flipped.  ``None`` marks a coefficient that is not known; it is never
silently read as 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .exactnum import binomial, factorial_ratio_product, p_polynomial


class UnknownCoefficientError(LookupError):
    pass


class InconsistentSystemError(ArithmeticError):
    pass


def _known(value, label):
    if value is None:
        raise UnknownCoefficientError(f"coefficient {label} is unknown")
    return value


def prym_genus(r: int) -> int:
    return r * (r + 1) // 2


@dataclass
class PrymDivisorClass:
    g: int
    a: Fraction = Fraction(0)
    b0p: Fraction = Fraction(0)
    b0pp: Fraction = Fraction(0)
    b0ram: Fraction = Fraction(0)
    b: dict[int, Fraction | None] = field(default_factory=dict)
    b_mixed: dict[int, Fraction | None] = field(default_factory=dict)
    scale: Fraction | None = None

    def __post_init__(self):
        for i in self.b:
            if not 1 <= i <= self.g - 1:
                raise IndexError(f"delta_{i} is outside 1..{self.g - 1}")
        for i in self.b_mixed:
            if not 1 <= i <= self.g // 2:
                raise IndexError(f"delta_{i}:{self.g - i} is outside 1..{self.g // 2}")

    @classmethod
    def generator(cls, g: int, name: str, index: int | None = None) -> "PrymDivisorClass":
        """The class equal to a single generator, e.g. ('delta', 2) or ('lambda',)."""
        x = cls(g, b={i: Fraction(0) for i in range(1, g)})
        if name == "lambda":
            x.a = Fraction(1)
        elif name == "delta0p":
            x.b0p = Fraction(-1)
        elif name == "delta0pp":
            x.b0pp = Fraction(-1)
        elif name == "delta0ram":
            x.b0ram = Fraction(-1)
        elif name == "delta":
            x.b[index] = Fraction(-1)
        elif name == "delta_mixed":
            x.b_mixed[index] = Fraction(-1)
        else:
            raise ValueError(f"unknown generator {name!r}")
        return x

    def coefficient_b(self, i: int) -> Fraction:
        if i not in self.b:
            raise UnknownCoefficientError(f"b_{i}")
        return _known(self.b[i], f"b_{i}")

    def unknown_labels(self) -> list[str]:
        out = [f"{i}" for i, v in sorted(self.b.items()) if v is None]
        out += [f"{i}:{self.g - i}" for i, v in sorted(self.b_mixed.items()) if v is None]
        return out

    def signed_coefficients(self) -> dict[str, Fraction | None]:
        """Generator name -> coefficient in the class (boundary entries negated)."""
        out = {"lambda": self.a, "delta0p": -self.b0p, "delta0pp": -self.b0pp, "delta0ram": -self.b0ram}
        for i, v in self.b.items():
            out[f"delta{i}"] = None if v is None else -v
        for i, v in self.b_mixed.items():
            out[f"delta{i}:{self.g - i}"] = None if v is None else -v
        return out


@dataclass
class PointedDivisorClass2:
    g: int
    a1: Fraction
    a2: Fraction
    a: Fraction
    b0: Fraction
    b_12: dict[int, Fraction]
    b_1: dict[int, Fraction | None]
    c_scale: Fraction | None = None

    def __post_init__(self):
        if any(not 0 <= i <= self.g - 1 for i in self.b_12):
            raise IndexError("delta_{i,{1,2}} runs over 0..g-1")
        if any(not 1 <= i <= self.g - 1 for i in self.b_1):
            raise IndexError("delta_{i,1} runs over 1..g-1")

    def signed_coefficients(self) -> dict[str, Fraction | None]:
        out = {"psi1": self.a1, "psi2": self.a2, "lambda": self.a, "delta0": -self.b0}
        for i, v in self.b_12.items():
            out[f"delta{i},12"] = -v
        for i, v in self.b_1.items():
            out[f"delta{i},1"] = None if v is None else -v
        return out

    def unknown_labels(self) -> list[str]:
        return [f"{i},1" for i, v in sorted(self.b_1.items()) if v is None]


@dataclass
class OnePointedClass:
    """psi*psi + lambda*lambda + sum delta[i]*delta_i, coefficients stored signed."""

    h: int
    psi: Fraction
    lambda_: Fraction
    delta: dict[int, Fraction]

    def __post_init__(self):
        if any(not 0 <= i <= self.h - 1 for i in self.delta):
            raise IndexError(f"delta index outside 0..{self.h - 1}")

    def __add__(self, other: "OnePointedClass") -> "OnePointedClass":
        if self.h != other.h:
            raise ValueError("genus mismatch")
        keys = sorted(set(self.delta) | set(other.delta))
        return OnePointedClass(self.h, self.psi + other.psi, self.lambda_ + other.lambda_,
                               {i: self.delta.get(i, 0) + other.delta.get(i, 0) for i in keys})

    def scaled(self, c) -> "OnePointedClass":
        c = Fraction(c)
        return OnePointedClass(self.h, c * self.psi, c * self.lambda_, {i: c * v for i, v in self.delta.items()})


@dataclass
class Eps0Class:
    g: int
    eps: dict[int, Fraction]

    def __post_init__(self):
        if any(not 2 <= i <= self.g - 2 for i in self.eps):
            raise IndexError(f"epsilon index outside 2..{self.g - 2}")

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.eps.values())


def pullback_to_genus0(x: PrymDivisorClass) -> Eps0Class:
    """Pull back along M_{0,g}/S_{g-1} -> R_g (elliptic tails, one Prym tail).

    lambda and the delta_0 classes and delta_{i:g-i} pull back to 0,
    delta_i to eps_i for 2 <= i <= g-2, and delta_1, delta_{g-1} to the
    stated combinations of eps_i.
    """
    g = x.g
    if g < 4:
        raise ValueError("needs g >= 4")
    signed = {i: -x.coefficient_b(i) for i in range(1, g)}
    eps = {}
    for i in range(2, g - 1):
        eps[i] = (signed[i]
                  - signed[g - 1] * Fraction((i - 1) * (g - i), g - 2)
                  - signed[1] * Fraction((g - i - 1) * (g - i), (g - 2) * (g - 1)))
    return Eps0Class(g, eps)


def interpolated_b(g: int, i: int, b1: Fraction, bgm1: Fraction) -> Fraction:
    """b_i forced by the vanishing pullback to M_{0,g}/S_{g-1}."""
    return Fraction((i - 1) * (g - i), g - 2) * bgm1 + Fraction((g - i - 1) * (g - i), (g - 1) * (g - 2)) * b1


def slope_b0p(g: int) -> Fraction:
    return 6 + Fraction(6, g)


def slope_b0pp(g: int) -> Fraction:
    return Fraction(8 * g + 8, g * g - g + 2)


def solve_prym_class(r: int) -> PrymDivisorClass:
    """Coefficients of the Prym-Brill-Noether divisor for g = r(r+1)/2, normalised to a = g+1.

    Solved by substitution: the two slopes give b0', b0''; the A_{g-1}
    relation gives b_{g-1}; the interpolation at i = g-2 together with
    b_{g-2} = 30 b0' - 3a gives b_1; the A_1 relation gives b0^ram.  All
    relations are then re-checked.
    """
    if r < 3:
        raise ValueError("r must be >= 3")
    g = prym_genus(r)
    a = Fraction(g + 1)
    b0p = a / slope_b0p(g)
    b0pp = a / slope_b0pp(g)
    bgm1 = 12 * b0p - a
    target = 30 * b0p - 3 * a
    # b_{g-2} = alpha*b_{g-1} + beta*b_1
    alpha = Fraction((g - 3) * 2, g - 2)
    beta = Fraction(2, (g - 1) * (g - 2))
    b1 = (target - alpha * bgm1) / beta
    b0ram = (a - 4 * b0pp + b1) / 4
    b = {i: interpolated_b(g, i, b1, bgm1) for i in range(1, g)}
    x = PrymDivisorClass(g, a, b0p, b0pp, b0ram, b, {i: None for i in range(1, g // 2 + 1)})
    problems = prym_relation_residuals(x)
    bad = {k: v for k, v in problems.items() if v != 0}
    if bad:
        raise InconsistentSystemError(f"relations violated: {bad}")
    return x


def prym_relation_residuals(x: PrymDivisorClass) -> dict[str, Fraction]:
    """Every relation the coefficients must satisfy, as residuals (all 0 when consistent)."""
    g = x.g
    b = {i: x.coefficient_b(i) for i in range(1, g)}
    out = {
        "A_{g-1}: a - 12b0' + b_{g-1}": x.a - 12 * x.b0p + b[g - 1],
        "A_1: a - 4b0'' - 4b0ram + b_1": x.a - 4 * x.b0pp - 4 * x.b0ram + b[1],
        "b_{g-2} = 30b0' - 3a": b[g - 2] - (30 * x.b0p - 3 * x.a),
        "a/b0' = 6 + 6/g": x.a / x.b0p - slope_b0p(g),
        "a/b0'' = (8g+8)/(g^2-g+2)": x.a / x.b0pp - slope_b0pp(g),
    }
    for i in range(1, g):
        out[f"b_{i} interpolation"] = b[i] - interpolated_b(g, i, b[1], b[g - 1])
    return out


def prym_closed_forms(g: int) -> dict[str, Fraction]:
    out = {"a": Fraction(g + 1), "b0p": Fraction(g, 6), "b0pp": Fraction(g * g - g + 2, 8),
           "b0ram": Fraction(g, 4)}
    for i in range(1, g):
        out[f"b{i}"] = Fraction((g - i) * (g + i - 1), 2)
    return out


def slopes(x: PrymDivisorClass) -> tuple[Fraction, Fraction, Fraction]:
    """(a/b0', a/b0'', a/b0^ram)"""
    for name in ("b0p", "b0pp", "b0ram"):
        if getattr(x, name) == 0:
            raise ZeroDivisionError(f"{name} is zero")
    return x.a / x.b0p, x.a / x.b0pp, x.a / x.b0ram


def castelnuovo_n(r: int) -> Fraction:
    """n = (g-1)! 2^{r(r+1)/2} (r-1) r^2 (r+1)^2 (r+2)/16 prod i!/(2i)! with g = r(r+1)/2."""
    g = prym_genus(r)
    return (factorial(g - 1) * Fraction(2) ** g * Fraction((r - 1) * r**2 * (r + 1) ** 2 * (r + 2), 16)
            * factorial_ratio_product(r))


def sigma_sum(r: int) -> Fraction:
    g = prym_genus(r)
    inner = Fraction(0)
    for i in range(1, r + 1):
        inner += (Fraction(factorial(2 * i) * factorial(2 * r - 2 * i + 1),
                           factorial(r - i) ** 2 * factorial(i) * factorial(i - 1))
                  * p_polynomial(r, i))
    return (factorial(g - 2) * Fraction(2) ** g * factorial_ratio_product(r)
            / Fraction(2) ** (2 * r - 1) * inner)


def mu_nu(r: int) -> tuple[Fraction, Fraction]:
    """Coefficients of [BN_{g-1}] and [W_{g-1}] in the pointed vanishing divisor."""
    if r < 3:
        raise ValueError("r must be >= 3")
    g = prym_genus(r)
    n = castelnuovo_n(r)
    s = sigma_sum(r)
    mu = -n / (2 * g * (g - 2)) + s / (2 * (g - 2) * (g - 3))
    nu = n / ((g - 2) * (g - 1) * g)
    return mu, nu


def weierstrass_class(g: int) -> OnePointedClass:
    """[W_{g-1}] on M_{g-1,1}, written with the Prym genus g."""
    return OnePointedClass(g - 1, Fraction(g * (g - 1), 2), Fraction(-1),
                           {i: -binomial(g - i, 2) for i in range(1, g - 1)})


def brill_noether_class(g: int) -> OnePointedClass:
    """[BN_{g-1}] on M_{g-1,1}, written with the Prym genus g."""
    delta = {0: -Fraction(g, 6)}
    delta.update({i: -Fraction(i * (g - i - 1)) for i in range(1, g - 1)})
    return OnePointedClass(g - 1, Fraction(0), Fraction(g + 2), delta)


def pointed_bn_class(r: int) -> OnePointedClass:
    g = prym_genus(r)
    mu, nu = mu_nu(r)
    return brill_noether_class(g).scaled(mu) + weierstrass_class(g).scaled(nu)


def strongly_bn_genus(r: int) -> int:
    return r * (r + 1) // 2 - 1


def strongly_bn_stated_scale(r: int) -> Fraction:
    """c = (g+1)!/(g-1) 2^{g-1} prod i!/(2i)! as displayed with the theorem."""
    g = strongly_bn_genus(r)
    return Fraction(factorial(g + 1), g - 1) * Fraction(2) ** (g - 1) * factorial_ratio_product(r)


def strongly_bn_class(r: int) -> PointedDivisorClass2:
    if r < 3:
        raise ValueError("r must be >= 3")
    g = strongly_bn_genus(r)
    x = PointedDivisorClass2(
        g=g,
        a1=Fraction(g * g + g + 2, 8),
        a2=Fraction(g * g + g + 2, 8),
        a=Fraction(g + 2),
        b0=Fraction(g + 1, 6),
        b_12={i: Fraction((g - i) * (g + i + 1), 2) for i in range(0, g)},
        b_1={i: None for i in range(1, g)},
        c_scale=strongly_bn_stated_scale(r),
    )
    if x.a1 != Fraction(g * g + g + 2, 4 * g * (g + 1)) * x.b_12[0]:
        raise InconsistentSystemError("psi coefficient does not match the test-curve ratio")
    return x


def strongly_bn_normalizations(r: int) -> dict[str, Fraction]:
    """The two candidate values of c*b_{0,{1,2}}: stated c times stated b, and n/(2g-2)."""
    from .exactnum import fp_closed_form

    g = strongly_bn_genus(r)
    x = strongly_bn_class(r)
    return {"stated": x.c_scale * x.b_12[0], "n_over_2g_minus_2": fp_closed_form(r) / (2 * g - 2)}


def point_slice_prediction(r: int, scaled_b0_12: Fraction) -> Fraction:
    """c[(2g-1)a1 + a2 - b_{0,{1,2}}] for a given value of c*b_{0,{1,2}}."""
    g = strongly_bn_genus(r)
    x = strongly_bn_class(r)
    ratio = ((2 * g - 1) * x.a1 + x.a2 - x.b_12[0]) / x.b_12[0]
    return scaled_b0_12 * ratio


def pullback_scale(r: int) -> Fraction:
    """c read off from pulling the strongly-BN class back to M_{g,1}.

    Gluing a rational tail carrying both points kills psi_1, psi_2 and sends
    lambda to lambda, so c*a must equal the lambda-coefficient of mu(BN + W).
    """
    x = strongly_bn_class(r)
    return pointed_bn_class(r).lambda_ / x.a


def resolve_normalization(r: int, engine_point_slice: Fraction) -> dict[str, Fraction | str]:
    """Decide which value of c*b_{0,{1,2}} the engine's eta_2.det supports."""
    cand = strongly_bn_normalizations(r)
    preds = {k: point_slice_prediction(r, v) for k, v in cand.items()}
    x = strongly_bn_class(r)
    matches = [k for k, v in preds.items() if v == engine_point_slice]
    return {
        "engine": engine_point_slice,
        "predicted_stated": preds["stated"],
        "predicted_n_over_2g_minus_2": preds["n_over_2g_minus_2"],
        "stated_c": x.c_scale,
        "engine_c": cand["n_over_2g_minus_2"] / x.b_12[0],
        "pullback_c": pullback_scale(r),
        "supported": matches[0] if len(matches) == 1 else "none",
    }
