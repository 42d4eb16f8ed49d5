"""Even cohomology of C^k x Pic(C) generated by eta_i, gamma_ij and theta.

Curve factors carry explicit labels (``(1, 2, 3)`` upstairs, ``(2, 3)`` after
integrating out factor 1) and the Pic factor is labelled one past the largest
curve label, so both rings share the index 4 for Pic.  Degrees are complex
degrees: every generator has degree 1.

Relations, with P the Pic label and i, j, l curve labels:

    eta_i^2 = 0                    eta_i gamma_il = 0
    gamma_ij^2 = -2g eta_i eta_j   gamma_iP^2 = -2 eta_i theta
    gamma_ij gamma_il = eta_i gamma_jl   (shared curve index i)

Two gamma factors may share only the Pic index in a normal-form monomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, NamedTuple

from .exactnum import format_rational


class SignatureMismatch(ValueError):
    pass


@dataclass(frozen=True)
class RingSignature:
    genus: int
    curve_factors: tuple[int, ...]

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        if len(self.curve_factors) not in (2, 3):
            raise ValueError("only C^2 x Pic and C^3 x Pic are modelled")
        if tuple(sorted(set(self.curve_factors))) != self.curve_factors:
            raise ValueError("curve factor labels must be sorted and distinct")

    @property
    def k(self) -> int:
        return len(self.curve_factors)

    @property
    def pic(self) -> int:
        return self.curve_factors[-1] + 1

    @property
    def dimension(self) -> int:
        return self.k + self.genus

    @classmethod
    def triple(cls, genus: int) -> "RingSignature":
        """C x C x C x Pic, curve labels 1, 2, 3."""
        return cls(genus, (1, 2, 3))

    @classmethod
    def pair(cls, genus: int) -> "RingSignature":
        """C x C x Pic, curve labels 2, 3 (factor 1 integrated out)."""
        return cls(genus, (2, 3))

    def check_index(self, i: int, allow_pic: bool = False):
        if i in self.curve_factors or (allow_pic and i == self.pic):
            return
        raise ValueError(f"index {i} is not a {'factor' if allow_pic else 'curve factor'} of {self}")


class TautMonomial(NamedTuple):
    theta: int
    etas: tuple[int, ...]
    gammas: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return self.theta + len(self.etas) + len(self.gammas)

    def __str__(self) -> str:
        parts = [f"eta{i}" for i in self.etas]
        parts += [f"gamma{i}{j}" for i, j in self.gammas]
        if self.theta == 1:
            parts.append("theta")
        elif self.theta > 1:
            parts.append(f"theta^{self.theta}")
        return "*".join(parts) if parts else "1"


UNIT = TautMonomial(0, (), ())

_FACTOR = re.compile(r"^(eta(\d)|gamma(\d)(\d)|theta(?:\^(\d+))?)$")


def parse_monomial(text: str) -> TautMonomial:
    text = text.strip()
    if text == "1":
        return UNIT
    theta, etas, gammas = 0, [], []
    for part in text.split("*"):
        m = _FACTOR.match(part.strip())
        if not m:
            raise ValueError(f"cannot parse factor {part!r}")
        if m.group(2):
            etas.append(int(m.group(2)))
        elif m.group(3):
            gammas.append(tuple(sorted((int(m.group(3)), int(m.group(4))))))
        else:
            theta += int(m.group(5) or 1)
    return TautMonomial(theta, tuple(etas), tuple(gammas))


def _reduce(theta: int, etas: list[int], gammas: list[tuple[int, int]], genus: int, pic: int):
    """Rewrite a raw product to normal form: returns (coefficient, monomial) or None for 0."""
    coef = 1
    while True:
        hit = None
        for a in range(len(gammas)):
            for b in range(a + 1, len(gammas)):
                shared = (set(gammas[a]) & set(gammas[b])) - {pic}
                if shared:
                    hit = (a, b, min(shared))
                    break
            if hit:
                break
        if hit is None:
            break
        a, b, i = hit
        ga, gb = gammas[a], gammas[b]
        del gammas[b], gammas[a]
        j = ga[0] if ga[1] == i else ga[1]
        l = gb[0] if gb[1] == i else gb[1]
        if ga == gb:
            if j == pic:
                coef *= -2
                etas.append(i)
                theta += 1
            else:
                coef *= -2 * genus
                etas += [i, j]
        else:
            etas.append(i)
            gammas.append((min(j, l), max(j, l)))
    if len(set(etas)) != len(etas):
        return None
    eta_set = set(etas)
    for x, y in gammas:
        if x in eta_set or y in eta_set:
            return None
    return coef, TautMonomial(theta, tuple(sorted(etas)), tuple(sorted(gammas)))


@lru_cache(maxsize=1 << 16)
def _monomial_product(x: TautMonomial, y: TautMonomial, genus: int, pic: int):
    return _reduce(x.theta + y.theta, list(x.etas + y.etas), list(x.gammas + y.gammas), genus, pic)


class TautClass:
    """Finite Q-linear combination of normal-form monomials.  Treat as immutable."""

    __slots__ = ("signature", "_terms")

    def __init__(self, signature: RingSignature, terms: Mapping[TautMonomial, Fraction] | None = None):
        self.signature = signature
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                clean[mono] = c
        self._terms = clean

    @classmethod
    def _raw(cls, signature, terms):
        obj = cls.__new__(cls)
        obj.signature = signature
        obj._terms = terms
        return obj

    @property
    def terms(self) -> dict[TautMonomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mono: TautMonomial | str) -> Fraction:
        if isinstance(mono, str):
            mono = parse_monomial(mono)
        return self._terms.get(mono, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degrees(self) -> set[int]:
        return {m.degree for m in self._terms}

    def degree_part(self, d: int) -> "TautClass":
        return TautClass._raw(self.signature, {m: c for m, c in self._terms.items() if m.degree == d})

    def truncate(self, degree_cap: int) -> "TautClass":
        return TautClass._raw(self.signature, {m: c for m, c in self._terms.items() if m.degree <= degree_cap})

    def constant(self) -> Fraction:
        return self._terms.get(UNIT, Fraction(0))

    def involves_theta(self) -> bool:
        return any(m.theta for m in self._terms)

    def _check(self, other: "TautClass"):
        if other.signature != self.signature:
            raise SignatureMismatch(f"{self.signature} vs {other.signature}")

    def _coerce(self, other):
        if isinstance(other, TautClass):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return scalar(self.signature, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return TautClass._raw(self.signature, out)

    __radd__ = __add__

    def __neg__(self):
        return TautClass._raw(self.signature, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TautClass":
        c = Fraction(c)
        if c == 0:
            return TautClass._raw(self.signature, {})
        return TautClass._raw(self.signature, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, TautClass):
            return multiply(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        out = one(self.signature)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = scalar(self.signature, other)
        if not isinstance(other, TautClass):
            return NotImplemented
        return self.signature == other.signature and self._terms == other._terms

    __hash__ = None

    def debug_lines(self) -> list[str]:
        """Sorted 'monomial : rational' lines, the golden-file format."""
        pairs = sorted((str(m), format_rational(c)) for m, c in self._terms.items())
        return [f"{m} : {c}" for m, c in pairs]

    def __repr__(self):
        if not self._terms:
            return "TautClass(0)"
        return "TautClass(" + " + ".join(f"({format_rational(c)})*{m}"
                                         for m, c in sorted(self._terms.items())) + ")"


def parse_debug_lines(signature: RingSignature, lines: Iterable[str]) -> TautClass:
    terms = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        mono, coef = line.split(":")
        terms[parse_monomial(mono)] = Fraction(coef.strip())
    return TautClass(signature, terms)


def scalar(signature: RingSignature, c) -> TautClass:
    return TautClass(signature, {UNIT: Fraction(c)})


def one(signature: RingSignature) -> TautClass:
    return scalar(signature, 1)


def zero(signature: RingSignature) -> TautClass:
    return TautClass(signature, {})


def eta(signature: RingSignature, i: int) -> TautClass:
    signature.check_index(i)
    return TautClass(signature, {TautMonomial(0, (i,), ()): Fraction(1)})


def theta(signature: RingSignature, power: int = 1) -> TautClass:
    return TautClass(signature, {TautMonomial(power, (), ()): Fraction(1)})


def gamma(signature: RingSignature, i: int, j: int) -> TautClass:
    signature.check_index(i, allow_pic=True)
    signature.check_index(j, allow_pic=True)
    if i == j:
        raise ValueError("gamma_ii is not a generator")
    return TautClass(signature, {TautMonomial(0, (), ((min(i, j), max(i, j)),)): Fraction(1)})


def multiply(x: TautClass, y: TautClass, degree_cap: int | None = None) -> TautClass:
    """Product in normal form; monomials of degree > degree_cap are discarded."""
    if x.signature != y.signature:
        raise SignatureMismatch(f"{x.signature} vs {y.signature}")
    sig = x.signature
    g, pic = sig.genus, sig.pic
    out: dict[TautMonomial, Fraction] = {}
    for mx, cx in x.items():
        for my, cy in y.items():
            if degree_cap is not None and mx.degree + my.degree > degree_cap:
                continue
            red = _monomial_product(mx, my, g, pic)
            if red is None:
                continue
            k, m = red
            s = out.get(m, 0) + k * cx * cy
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return TautClass._raw(sig, out)


def exp_nilpotent(x: TautClass, degree_cap: int) -> TautClass:
    """sum_n x^n / n!, truncated at degree_cap.  x must be theta-free with no constant term."""
    if x.constant() != 0:
        raise ValueError("exp_nilpotent needs a class without degree-0 part")
    if x.involves_theta():
        raise ValueError("exp_nilpotent is only used on theta-free classes")
    total = one(x.signature)
    power = one(x.signature)
    n = 0
    while True:
        n += 1
        power = multiply(power, x, degree_cap) / n
        if power.is_zero():
            return total
        total = total + power


def pushforward_factor1(x: TautClass) -> TautClass:
    """Integrate out curve factor 1: C^3 x Pic -> C^2 x Pic.

    Normal-form monomials carrying eta_1 lose it; the rest have at most a single
    odd class on factor 1 and push forward to 0.
    """
    sig = x.signature
    if sig.curve_factors != (1, 2, 3):
        raise ValueError("pushforward_factor1 expects the (1, 2, 3) signature")
    target = RingSignature.pair(sig.genus)
    out = {}
    for m, c in x.items():
        if 1 in m.etas:
            mm = TautMonomial(m.theta, tuple(e for e in m.etas if e != 1), m.gammas)
            out[mm] = out.get(mm, 0) + c
    return TautClass(target, out)


def lift(x: TautClass, signature: RingSignature) -> TautClass:
    """Pull back along the projection to a signature containing x's factors."""
    if not set(x.signature.curve_factors) <= set(signature.curve_factors) or \
            x.signature.pic != signature.pic or x.signature.genus != signature.genus:
        raise SignatureMismatch(f"cannot lift {x.signature} to {signature}")
    return TautClass(signature, x.terms)


def integrate(x: TautClass) -> Fraction:
    """Degree of the top-degree part: only eta_2 ... eta_k theta^g survives, and
    theta^g integrates to g! on Pic."""
    sig = x.signature
    if sig.k != 2:
        raise ValueError("integrate is defined on C x C x Pic")
    top = TautMonomial(sig.genus, sig.curve_factors, ())
    return x.coefficient(top) * factorial(sig.genus)


def generators(signature: RingSignature) -> list[TautClass]:
    """eta_i, gamma_ab and theta for the signature."""
    labels = list(signature.curve_factors) + [signature.pic]
    gens = [eta(signature, i) for i in signature.curve_factors]
    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            gens.append(gamma(signature, labels[a], labels[b]))
    gens.append(theta(signature))
    return gens
