"""Truncated power series ("jets") with exact rational coefficients.

A jet of order N stores c_0..c_N; everything from z^(N+1) on is unknown.
Binary operations truncate to the smaller order and derivatives lower the
order, so a jet never claims more precision than it actually has.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from . import poly as P
from .errors import NotOnCurve, OrderExhausted, SingularPoint, ZeroConstantTerm

__all__ = ["Jet", "jet_mul", "jet_derivative", "jet_reciprocal", "newton_branch", "linear_combination"]


class Jet:
    __slots__ = ("coeffs", "_scaled")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        if not cs:
            raise ValueError("a jet needs at least the constant coefficient")
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._scaled = None

    @classmethod
    def constant(cls, c, order: int) -> Jet:
        return cls([c], order)

    @classmethod
    def variable(cls, order: int, shift=0) -> Jet:
        """The jet of shift + z."""
        return cls([shift, 1], order) if order >= 1 else cls([shift], 0)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"Jet([{shown}{more}], order={self.order})"

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None for the zero jet."""
        return next((k for k, c in enumerate(self.coeffs) if c), None)

    def truncate(self, order: int) -> Jet:
        if order > self.order:
            raise OrderExhausted(f"cannot raise order {self.order} to {order}")
        return self if order == self.order else Jet(self.coeffs[: order + 1])

    def _pad(self, order: int) -> Jet:
        # Newton corrections are the only legitimate caller: the padded tail is
        # overwritten before anyone reads it.
        return Jet(self.coeffs, order)

    def scaled_integers(self) -> tuple[list[int], int]:
        """(numerators, common denominator) with c_k = numerators[k] / den."""
        if self._scaled is None:
            den = math.lcm(*(c.denominator for c in self.coeffs))
            self._scaled = ([c.numerator * (den // c.denominator) for c in self.coeffs], den)
        return self._scaled

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            n = min(self.order, other.order)
            return Jet(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs))
        if isinstance(other, (int, Fraction)):
            return Jet((self.coeffs[0] + other,) + self.coeffs[1:])
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, (Jet, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return Jet(c * other for c in self.coeffs)
        return NotImplemented

    __rmul__ = __mul__

    def derivative(self, times: int = 1) -> Jet:
        return jet_derivative(self, times)

    def reciprocal(self) -> Jet:
        return jet_reciprocal(self)


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated at min(order(a), order(b))."""
    n = min(a.order, b.order)
    ai, da = a.scaled_integers()
    bi, db = b.scaled_integers()
    nza = [(i, x) for i, x in enumerate(ai[: n + 1]) if x]
    nzb = [(j, y) for j, y in enumerate(bi[: n + 1]) if y]
    if len(nza) > len(nzb):
        nza, nzb = nzb, nza
    out = [0] * (n + 1)
    for i, x in nza:
        lim = n - i
        for j, y in nzb:
            if j > lim:
                break
            out[i + j] += x * y
    den = da * db
    return Jet(Fraction(c, den) for c in out)


def jet_derivative(a: Jet, times: int = 1) -> Jet:
    """Formal derivative applied `times` times; the order drops by `times`."""
    if times < 0:
        raise ValueError("times must be non-negative")
    if times == 0:
        return a
    if times > a.order:
        raise OrderExhausted(f"cannot differentiate a jet of order {a.order} {times} times")
    return Jet(a.coeffs[k + times] * math.perm(k + times, times) for k in range(a.order - times + 1))


def jet_reciprocal(a: Jet) -> Jet:
    """1/a by Newton iteration b <- b(2 - ab), doubling precision each step."""
    if a.coeffs[0] == 0:
        raise ZeroConstantTerm("reciprocal of a jet with zero constant term")
    b = Jet([1 / a.coeffs[0]])
    prec = 0
    while prec < a.order:
        prec = min(2 * prec + 1, a.order)
        bp = b._pad(prec)
        b = bp * (2 - a.truncate(prec) * bp)
    return b


def linear_combination(coeffs: Sequence, jets: Sequence[Jet]) -> Jet:
    """Σ c_i jets_i, truncated at the smallest order among the used jets."""
    used = [(c, j) for c, j in zip(coeffs, jets) if c]
    if not used:
        return Jet([0], min(j.order for j in jets))
    n = min(j.order for _, j in used)
    out = [Fraction(0)] * (n + 1)
    for c, j in used:
        for k in range(n + 1):
            x = j.coeffs[k]
            if x:
                out[k] += c * x
    return Jet(out)


# -- algebraic branches ------------------------------------------------------

def _in_y(p: P.Poly, order: int) -> list[Jet]:
    """Coefficient jets (in z) of each power of y."""
    dy = P.degree_in(p, "y")
    cols: list[list[Fraction]] = [[Fraction(0)] * (order + 1) for _ in range(dy + 1)]
    for (i, j), c in p.items():
        if i <= order:
            cols[j][i] += c
    return [Jet(c) for c in cols]


def _horner(coeffs: list[Jet], y: Jet) -> Jet:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * y + c
    return acc


def eval_along(F: P.Poly, x0, y: Jet) -> Jet:
    """The jet of F(x0 + z, y(z))."""
    G = P.shift_x(F, x0)
    if not G:
        return Jet([0], y.order)
    return _horner(_in_y(G, y.order), y)


def newton_branch(F: P.Poly, x0, y0, order: int) -> Jet:
    """The branch y(z) of F(x0 + z, y) = 0 through (x0, y0), to the given order."""
    x0, y0 = Fraction(x0), Fraction(y0)
    if P.evaluate(F, x0, y0) != 0:
        raise NotOnCurve(f"F({x0}, {y0}) = {P.evaluate(F, x0, y0)} != 0")
    Fy = P.diff(F, "y")
    if P.evaluate(Fy, x0, y0) == 0:
        raise SingularPoint(f"dF/dy vanishes at ({x0}, {y0})")
    G = _in_y(P.shift_x(F, x0), order)
    Gy = _in_y(P.shift_x(Fy, x0), order) if Fy else None
    y = Jet([y0])
    prec = 0
    while prec < order:
        prec = min(2 * prec + 1, order)
        yp = y._pad(prec)
        residual = _horner([c.truncate(prec) for c in G], yp)
        slope = _horner([c.truncate(prec) for c in Gy], yp)
        y = yp - residual * slope.reciprocal()
    return y
