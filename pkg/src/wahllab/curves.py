"""Curve presentations, local canonical bases, and section spaces.

All global geometry is reduced to jets at one base point p in the coordinate
z = x - x(p).  Holomorphic differentials are realized as f(z) dz with

* plane curves F(x, y) = 0 of degree d:  x^a y^b dx / F_y,  a + b <= d - 3
* hyperelliptic curves y^2 = h(x):       x^i dx / y,        i < g
* local data:                            the supplied jets.

Sections of ω^m are spanned by products of m canonical jets (Max Noether for
non-hyperelliptic curves), and a section of degree m(2g-2) whose jet vanishes
through z^(m(2g-2)) is zero, which is what makes finite jets trustworthy.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence, Union

from . import poly as P
from .errors import (
    BranchPointNotSupported,
    ConfigError,
    CurveError,
    DependentBasis,
    GenusTooSmall,
    HyperellipticRefused,
    InsufficientOrder,
    NotOnCurve,
    OutOfRange,
    SingularPoint,
)
from .jets import Jet, eval_along, newton_branch
from .linalg import RatMatrix, Subspace, independent_rows, rank

__all__ = [
    "PlaneCurve",
    "HyperellipticCurve",
    "LocalData",
    "CurveModel",
    "SectionSpace",
    "PointCertificate",
    "build_model",
    "default_order",
    "section_space",
    "certify_general_point",
    "load_curve_spec",
    "parse_rational",
]


@dataclass(frozen=True)
class PlaneCurve:
    polynomial: P.Poly = field(hash=False)

    @property
    def degree(self) -> int:
        return P.degree(self.polynomial)

    @property
    def genus(self) -> int:
        d = self.degree
        return (d - 1) * (d - 2) // 2


@dataclass(frozen=True)
class HyperellipticCurve:
    """y^2 = h(x) with h squarefree; `polynomial` holds h as a poly in x."""

    polynomial: P.Poly = field(hash=False)

    @property
    def genus(self) -> int:
        return (P.degree_in(self.polynomial, "x") - 1) // 2


@dataclass(frozen=True)
class LocalData:
    jets: tuple[Jet, ...]

    @property
    def genus(self) -> int:
        return len(self.jets)


CurvePresentation = Union[PlaneCurve, HyperellipticCurve, LocalData]


@dataclass(frozen=True, eq=False)
class CurveModel:
    presentation: CurvePresentation
    genus: int
    base_point: tuple[Fraction, Fraction] | None
    basis: tuple[Jet, ...]
    order: int
    labels: tuple[str, ...] = ()

    @property
    def coordinate(self) -> str:
        if self.base_point is None:
            return "z (supplied with the local data)"
        return f"z = x - ({self.base_point[0]})"

    @property
    def hyperelliptic(self) -> bool | None:
        """True/False when the presentation decides it, None for local data."""
        if isinstance(self.presentation, HyperellipticCurve):
            return True
        if isinstance(self.presentation, PlaneCurve):
            return False
        return None

    @property
    def kind(self) -> str:
        return {PlaneCurve: "plane", HyperellipticCurve: "hyperelliptic", LocalData: "local"}[
            type(self.presentation)
        ]

    def require_theorem_model(self) -> None:
        if self.hyperelliptic:
            raise HyperellipticRefused("hyperelliptic model refused for theorem checks")

    def require_order(self, needed: int, what: str) -> None:
        if self.order < needed:
            raise InsufficientOrder(f"{what} needs truncation order >= {needed}, model has {self.order}")

    @cached_property
    def _derivatives(self) -> dict:
        return {}

    def derivative(self, i: int, h: int) -> Jet:
        """f_i^(h), memoized."""
        key = (i, h)
        cache = self._derivatives
        if key not in cache:
            cache[key] = self.basis[i].derivative(h)
        return cache[key]


def default_order(g: int) -> int:
    """Order that lets every filtration level up to 6g-6 be zero-tested.

    μ_{2i}(Q) is a section of ω^(2i+2); with the balanced split
    f^(i) · f^(i) its jet is known to order N - i, which must reach
    (2i+2)(2g-2).  The worst case is 2i = 6g-6.
    """
    return (6 * g - 4) * (2 * g - 2) + 3 * g - 3


def _squarefree(h: P.Poly) -> bool:
    """gcd(h, h') is constant, by Euclid over Q on univariate coefficient lists."""
    def coeffs(p):
        d = P.degree_in(p, "x")
        return [p.get((i, 0), Fraction(0)) for i in range(d + 1)]

    def rem(a, b):
        a = a[:]
        while len(a) >= len(b) and any(a):
            c = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] -= c * bc
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        return a

    a, b = coeffs(h), coeffs(P.diff(h, "x"))
    while b:
        a, b = b, rem(a, b)
    return len(a) == 1


def build_model(pres: CurvePresentation, point: Sequence | None = None, order: int | None = None) -> CurveModel:
    """Expand the canonical basis of `pres` at `point` to truncation `order`."""
    if isinstance(pres, LocalData):
        return _build_local(pres, order)
    if point is None:
        raise ConfigError("a base point is required for plane and hyperelliptic curves")
    x0, y0 = (Fraction(c) for c in point)
    g = pres.genus
    N = default_order(g) if order is None else order
    if isinstance(pres, PlaneCurve):
        basis, labels = _plane_basis(pres, x0, y0, N)
    else:
        basis, labels = _hyperelliptic_basis(pres, x0, y0, N)
    if g < 4:
        warnings.warn(f"genus {g} < 4: theorem checks assume g >= 4", stacklevel=2)
    return CurveModel(pres, g, (x0, y0), tuple(basis), N, tuple(labels))


def _plane_basis(pres: PlaneCurve, x0, y0, N):
    F = pres.polynomial
    d = pres.degree
    if d < 5:
        raise GenusTooSmall(f"plane curve of degree {d} has genus {pres.genus}; degree >= 5 required")
    if P.evaluate(F, x0, y0) != 0:
        raise NotOnCurve(f"({x0}, {y0}) is not on the curve")
    Fx, Fy = P.diff(F, "x"), P.diff(F, "y")
    if P.evaluate(Fy, x0, y0) == 0:
        if P.evaluate(Fx, x0, y0) == 0:
            raise SingularPoint(f"({x0}, {y0}) is a singular point")
        raise BranchPointNotSupported(f"vertical tangent at ({x0}, {y0}): x - x0 is not a local coordinate")
    y = newton_branch(F, x0, y0, N)
    inv = eval_along(Fy, x0, y).reciprocal()
    x = Jet.variable(N, x0)
    xpow, ypow = [Jet.constant(1, N)], [Jet.constant(1, N)]
    for _ in range(d - 3):
        xpow.append(xpow[-1] * x)
        ypow.append(ypow[-1] * y)
    basis, labels = [], []
    for s in range(d - 2):
        for b in range(s + 1):
            a = s - b
            basis.append(xpow[a] * ypow[b] * inv)
            labels.append(f"x^{a} y^{b} dx/F_y")
    return basis, labels


def _hyperelliptic_basis(pres: HyperellipticCurve, x0, y0, N):
    h = pres.polynomial
    if any(j for (_, j) in h):
        raise ConfigError("hyperelliptic polynomial must be in x only (the curve is y^2 = h(x))")
    if not _squarefree(h):
        raise CurveError("h(x) is not squarefree: y^2 = h(x) is singular")
    if y0 * y0 != P.evaluate(h, x0, 0):
        raise NotOnCurve(f"({x0}, {y0}) does not satisfy y^2 = h(x)")
    if y0 == 0:
        raise BranchPointNotSupported(f"({x0}, 0) is a Weierstrass (branch) point")
    F = P.add({(0, 2): Fraction(1)}, P.scale(h, -1))
    y = newton_branch(F, x0, y0, N)
    inv = y.reciprocal()
    x = Jet.variable(N, x0)
    basis, labels = [], []
    xp = Jet.constant(1, N)
    for i in range(pres.genus):
        basis.append(xp * inv)
        labels.append(f"x^{i} dx/y")
        xp = xp * x
    return basis, labels


def _build_local(pres: LocalData, order):
    jets = pres.jets
    g = len(jets)
    if g == 0:
        raise ConfigError("local data needs at least one jet")
    N = min(j.order for j in jets)
    if order is not None:
        if N < order:
            raise InsufficientOrder(f"local jets have order {N} < requested {order}")
        N = order
    basis = tuple(j.truncate(N) for j in jets)
    if rank(RatMatrix((j.coeffs for j in basis), N + 1)) < g:
        raise DependentBasis("local jets are linearly dependent to their truncation order")
    if g < 4:
        warnings.warn(f"genus {g} < 4: theorem checks assume g >= 4", stacklevel=3)
    return CurveModel(pres, g, None, basis, N, tuple(f"f_{i}" for i in range(g)))


# -- section spaces ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SectionSpace:
    """Span of all weight-m products of canonical jets.

    `monomials` lists the index tuples of an independent spanning set
    (chosen by exact elimination on the first zero_test_order + 1 coefficients).
    """

    model: CurveModel
    weight: int
    monomials: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @property
    def zero_test_order(self) -> int:
        return self.weight * (2 * self.model.genus - 2)

    @property
    def expected_dim(self) -> int:
        g = self.model.genus
        return g if self.weight == 1 else (2 * self.weight - 1) * (g - 1)

    @property
    def deficient(self) -> bool:
        """True when the products span less than H^0(ω^m) would for a non-hyperelliptic curve."""
        return self.dim < self.expected_dim

    def product_jet(self, mono: Sequence[int], order: int | None = None) -> Jet:
        N = self.model.order if order is None else order
        out = self.model.basis[mono[0]].truncate(N)
        for i in mono[1:]:
            out = out * self.model.basis[i].truncate(N)
        return out

    def jets(self, order: int | None = None) -> tuple[Jet, ...]:
        return tuple(self.product_jet(m, order) for m in self.monomials)

    @cached_property
    def coords(self) -> Subspace:
        """The section space as an rref subspace of Q^(N+1)."""
        N = self.model.order
        return Subspace.span((j.coeffs for j in self.jets()), N + 1)


def section_space(model: CurveModel, m: int) -> SectionSpace:
    if m < 1:
        raise OutOfRange("weight m must be >= 1")
    T = m * (2 * model.genus - 2)
    model.require_order(T, f"sections of ω^{m}")
    monos: list[tuple[int, ...]] = [(i,) for i in range(model.genus)]
    jets = [model.basis[i].truncate(T) for i in range(model.genus)]
    for _ in range(m - 1):
        cand_monos, cand_jets = [], []
        for mono, jet in zip(monos, jets):
            for i in range(mono[-1], model.genus):
                cand_monos.append(mono + (i,))
                cand_jets.append(jet * model.basis[i].truncate(T))
        keep = independent_rows(RatMatrix((j.coeffs for j in cand_jets), T + 1))
        monos = [cand_monos[k] for k in keep]
        jets = [cand_jets[k] for k in keep]
    if m == 1 and rank(RatMatrix((j.coeffs for j in jets), T + 1)) < model.genus:
        raise DependentBasis("canonical jets are dependent at the zero-test order")
    return SectionSpace(model, m, tuple(monos))


@dataclass(frozen=True)
class PointCertificate:
    """h^0(2K - np) = 3g-3-n checks at the base point, one entry per n."""

    genus: int
    entries: tuple[tuple[int, int, int, bool], ...]  # (n, dimension, expected, holds)

    @property
    def holds(self) -> bool:
        return all(e[3] for e in self.entries)

    @property
    def depth(self) -> int:
        """Largest n such that the check holds for every n' <= n."""
        d = 0
        for n, _, _, ok in self.entries:
            if n == 0:
                continue
            if not ok:
                break
            d = n
        return d

    def admissible(self, n: int) -> bool:
        """Whether ξ_p^1..ξ_p^n are independent: n < 2g-2, or certified through n."""
        return n < 2 * self.genus - 2 or n <= self.depth


def certify_general_point(model: CurveModel, n_max: int | None = None,
                          theorem_mode: bool = False) -> PointCertificate:
    """Dimension of {s ∈ H^0(ω^2) : s vanishes to order n at p}, for n <= n_max."""
    g = model.genus
    if n_max is None:
        n_max = 3 * g - 3
    if not 0 <= n_max <= 3 * g - 3:
        raise OutOfRange(f"n_max must lie in 0..{3 * g - 3}")
    if theorem_mode:
        model.require_theorem_model()
    S = section_space(model, 2)
    T = S.zero_test_order
    H = RatMatrix((j.coeffs for j in S.jets(T)), T + 1)
    entries = []
    for n in range(0, n_max + 1):
        dim = S.dim - rank(H.columns(0, n)) if n else S.dim
        expected = 3 * g - 3 - n
        entries.append((n, dim, expected, dim == expected))
    return PointCertificate(g, tuple(entries))


# -- curve specification files -----------------------------------------------

def parse_rational(v) -> Fraction:
    """Accepts 3, "3", "-1/2", or a [num, den] pair."""
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"rational pair must be [num, den], got {v!r}")
        return Fraction(int(v[0]), int(v[1]))
    if isinstance(v, bool) or isinstance(v, float):
        raise ConfigError(f"rationals must be integers, strings or [num, den] pairs, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {v!r}") from exc


@dataclass(frozen=True)
class CurveSpec:
    presentation: CurvePresentation
    point: tuple[Fraction, Fraction] | None
    order: int | None
    source: dict


def load_curve_spec(path: str | Path) -> CurveSpec:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read curve spec {path}: {exc}") from exc
    return curve_spec_from_dict(doc)


def curve_spec_from_dict(doc: dict) -> CurveSpec:
    kind = doc.get("presentation")
    order = doc.get("order")
    if order is not None and (not isinstance(order, int) or order < 0):
        raise ConfigError("order must be a non-negative integer")
    point = None
    if doc.get("point") is not None:
        pt = doc["point"]
        if not isinstance(pt, list) or len(pt) != 2:
            raise ConfigError("point must be a list of two rationals")
        point = (parse_rational(pt[0]), parse_rational(pt[1]))
    if kind == "plane":
        pres: CurvePresentation = PlaneCurve(P.parse(_field(doc, "polynomial")))
    elif kind == "hyperelliptic":
        pres = HyperellipticCurve(P.parse(_field(doc, "polynomial")))
    elif kind == "local":
        jets = doc.get("jets")
        if not isinstance(jets, list) or not jets:
            raise ConfigError("local presentation needs a non-empty 'jets' list")
        # With an explicit order, short coefficient lists are exact polynomials
        # and are zero-padded; otherwise each list's length fixes its order.
        pres = LocalData(tuple(Jet((parse_rational(c) for c in j), order) for j in jets))
    else:
        raise ConfigError(f"presentation must be plane, hyperelliptic or local, got {kind!r}")
    if kind != "local" and point is None:
        raise ConfigError("plane and hyperelliptic specs need a point")
    return CurveSpec(pres, point, order, doc)


def _field(doc, name):
    v = doc.get(name)
    if not isinstance(v, str):
        raise ConfigError(f"curve spec field {name!r} must be a string")
    return v
