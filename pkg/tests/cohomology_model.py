"""Explicit model of H^*(C^k x Pic) used as an oracle for the rewrite rules.

Each curve factor i carries odd classes x_a, y_a (a = 1..g) with
x_a y_b = delta_ab eta_i and every other product of two of them zero; Pic
carries a free exterior algebra on u_a, v_a.  Then

    gamma_ij = sum_a y_a^i x_a^j - x_a^i y_a^j
    gamma_iP = sum_a y_a^i u_a - x_a^i v_a
    theta    = sum_a u_a v_a

The overall sign of gamma is a convention; this one gives
gamma_ij gamma_il = +eta_i gamma_jl (the opposite sign gives -eta_i gamma_jl
and leaves the squares unchanged).

Nothing here shares code with the rewrite engine.
"""

from __future__ import annotations

from fractions import Fraction

PIC = "P"
# kind order inside a factor: x before y (and u before v on Pic)
_KIND = {"x": 0, "y": 1, "u": 0, "v": 1}


def _var(factor, kind, a):
    return (0 if factor != PIC else 1, factor if factor != PIC else 0, _KIND[kind], a, kind)


def _sort_sign(items):
    """Bubble sort an ordered product of odd symbols; 0 if a symbol repeats."""
    items = list(items)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
            elif items[j] == items[j + 1]:
                return 0, None
    return sign, items


class Model:
    def __init__(self, genus: int, curves: tuple[int, ...], terms=None):
        self.genus = genus
        self.curves = curves
        self.terms: dict = dict(terms or {})

    def _new(self, terms):
        return Model(self.genus, self.curves, {k: v for k, v in terms.items() if v})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return self._new(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for (oa, ea), ca in self.terms.items():
            for (ob, eb), cb in other.terms.items():
                if ea & eb:
                    continue
                red = _reduce(oa + ob, ea | eb)
                if red is None:
                    continue
                s, key = red
                out[key] = out.get(key, 0) + s * ca * cb
        return self._new(out)

    def __eq__(self, other):
        return self.terms == other.terms

    def coefficient(self, key):
        return self.terms.get(key, 0)


def _reduce(odd, etas):
    sign, items = _sort_sign(odd)
    if sign == 0:
        return None
    out = []
    etas = set(etas)
    k = 0
    while k < len(items):
        v = items[k]
        if v[0] == 1:
            out.append(v)
            k += 1
            continue
        factor = v[1]
        group = [w for w in items[k:] if w[0] == 0 and w[1] == factor]
        if factor in etas or len(group) > 2:
            return None
        if len(group) == 2:
            p, q = group
            # sorted order puts x before y
            if not (p[4] == "x" and q[4] == "y" and p[3] == q[3]):
                return None
            etas.add(factor)
        else:
            out.append(v)
        k += len(group)
    return sign, (tuple(out), frozenset(etas))


def one(genus, curves):
    return Model(genus, curves, {((), frozenset()): Fraction(1)})


def odd(genus, curves, factor, kind, a):
    return Model(genus, curves, {((_var(factor, kind, a),), frozenset()): Fraction(1)})


def eta(genus, curves, i):
    return Model(genus, curves, {((), frozenset({i})): Fraction(1)})


def theta(genus, curves):
    out = Model(genus, curves)
    for a in range(1, genus + 1):
        out = out + odd(genus, curves, PIC, "u", a) * odd(genus, curves, PIC, "v", a)
    return out


def gamma(genus, curves, i, j):
    out = Model(genus, curves)
    for a in range(1, genus + 1):
        if j == PIC:
            out = out + odd(genus, curves, i, "y", a) * odd(genus, curves, PIC, "u", a)
            out = out - odd(genus, curves, i, "x", a) * odd(genus, curves, PIC, "v", a)
        else:
            out = out + odd(genus, curves, i, "y", a) * odd(genus, curves, j, "x", a)
            out = out - odd(genus, curves, i, "x", a) * odd(genus, curves, j, "y", a)
    return out


def integral(x: Model) -> Fraction:
    """Coefficient of eta_(curves) u_1 v_1 ... u_g v_g (theta^g / g! is that product)."""
    sign, items = _sort_sign([_var(PIC, k, a) for a in range(1, x.genus + 1) for k in ("u", "v")])
    return sign * x.coefficient((tuple(items), frozenset(x.curves)))


def pushforward(x: Model, factor: int, curves: tuple[int, ...]) -> Model:
    """Integrate over one curve factor: keep eta_factor terms and drop it."""
    out = {}
    for (odd_part, etas), c in x.terms.items():
        if factor in etas and not any(v[0] == 0 and v[1] == factor for v in odd_part):
            key = (odd_part, etas - {factor})
            out[key] = out.get(key, 0) + c
    return Model(x.genus, curves, out)


def from_taut(x):
    """Image of an engine TautClass in the model."""
    sig = x.signature
    g, curves, pic = sig.genus, sig.curve_factors, sig.pic
    total = Model(g, curves)
    for mono, coef in x.items():
        term = one(g, curves)
        for _ in range(mono.theta):
            term = term * theta(g, curves)
        for i in mono.etas:
            term = term * eta(g, curves, i)
        for a, b in mono.gammas:
            term = term * gamma(g, curves, a, PIC if b == pic else b)
        total = total + term.scale(coef)
    return total
