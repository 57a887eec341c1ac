"""Schiffer pairings, the band constants c_{n,m}, and the locally computable part of ρ(Q).

For β = f(z) dz^2, pairing with the k-th Schiffer variation picks out the
Taylor coefficient of z^(k-1), times the formal unit 2πi.  For Q ∈ ker μ_m the
matrix ρ(Q)(ξ^n, ξ^l) vanishes for n + l <= m + 1 and equals c_{n,m} μ_{m+2}(Q)(p)
on the anti-diagonal n + l = m + 2.  Entries beyond the band depend on global
harmonic data and are reported as Unknown rather than guessed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import CurveModel, PointCertificate, certify_general_point, section_space
from .errors import IncompleteFiltration, InternalInconsistency, OrderExhausted, OutOfRange, UncertifiedPoint
from .gauss import Filtration, Quadric, mu_eval_at_p, quadric_level
from .jets import Jet
from .linalg import RatMatrix, Subspace, intersect, solve

__all__ = [
    "TwoPiI",
    "schiffer_pairing",
    "c_constant",
    "c_constant_sum",
    "teschio_identity_check",
    "Tag",
    "RhoBand",
    "rho_band",
    "schiffer_pairing_matrix",
    "OsculatingFlag",
    "osculating_flag",
    "GeodesicReport",
    "geodesic_bound_report",
]


@dataclass(frozen=True)
class TwoPiI:
    """rational · (2πi)^exponent, with 2πi kept symbolic."""

    rational: Fraction
    exponent: int = 1

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))

    def __mul__(self, other):
        if isinstance(other, TwoPiI):
            return TwoPiI(self.rational * other.rational, self.exponent + other.exponent)
        if isinstance(other, (int, Fraction)):
            return TwoPiI(self.rational * other, self.exponent)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, TwoPiI):
            return NotImplemented
        if other.rational == 0:
            return self
        if self.rational == 0:
            return other
        if other.exponent != self.exponent:
            raise ValueError("cannot add different powers of 2πi")
        return TwoPiI(self.rational + other.rational, self.exponent)

    def __neg__(self):
        return TwoPiI(-self.rational, self.exponent)

    def __bool__(self):
        return bool(self.rational)

    def __str__(self):
        unit = {0: "", 1: "·2πi"}.get(self.exponent, f"·(2πi)^{self.exponent}")
        return f"{self.rational}{unit}"

    def to_json(self) -> dict:
        r = self.rational
        return {"value": f"{r.numerator}/{r.denominator}", "unit": "2*pi*i", "exponent": self.exponent}


def schiffer_pairing(beta: Jet, k: int) -> TwoPiI:
    """⟨f dz^2, ξ_p^k⟩ = 2πi f^(k-1)(0)/(k-1)!, i.e. 2πi times the z^(k-1) coefficient."""
    if k < 1:
        raise OutOfRange("Schiffer index must be >= 1")
    if beta.order < k - 1:
        raise OrderExhausted(f"pairing with ξ^{k} needs order {k - 1}, jet has {beta.order}")
    return TwoPiI(beta.coeffs[k - 1])


# -- constants ---------------------------------------------------------------

def _check_nm(n: int, m: int) -> None:
    if m < 0 or m % 2:
        raise OutOfRange(f"m must be even and non-negative, got {m}")
    if not 1 <= n <= m + 1:
        raise OutOfRange(f"n must lie in 1..{m + 1}, got {n}")


def c_constant_sum(n: int, m: int) -> TwoPiI:
    """2πi Σ_{k<n} (-1)^k (n-k) / (k! (m+2-k)!)."""
    _check_nm(n, m)
    s = sum(
        (Fraction((-1) ** k * (n - k), math.factorial(k) * math.factorial(m + 2 - k)) for k in range(n)),
        Fraction(0),
    )
    return TwoPiI(s)


def c_constant(n: int, m: int) -> TwoPiI:
    """Closed form 2πi (-1)^(n-1) Π_{j<=n-2}(m-j) / ((n-1)! (m+2)!)."""
    _check_nm(n, m)
    num = (-1) ** (n - 1) * math.prod(m - j for j in range(n - 1))
    value = TwoPiI(Fraction(num, math.factorial(n - 1) * math.factorial(m + 2)))
    if value != c_constant_sum(n, m):
        raise InternalInconsistency(f"closed form for c_{{{n},{m}}} disagrees with its defining sum")
    return value


def teschio_identity_check(t: int, l: int) -> bool:
    """Σ_{k<=t} (-1)^k/(k!(l-k)!) == (-1)^t Π_{k=1..t}(l-k) / (l! t!)."""
    if t < 0 or l < t + 1:
        raise OutOfRange(f"need 0 <= t and l >= t+1, got t={t}, l={l}")
    lhs = sum((Fraction((-1) ** k, math.factorial(k) * math.factorial(l - k)) for k in range(t + 1)), Fraction(0))
    rhs = Fraction((-1) ** t * math.prod(l - k for k in range(1, t + 1)), math.factorial(l) * math.factorial(t))
    return lhs == rhs


# -- the band matrix ---------------------------------------------------------

class Tag(str, enum.Enum):
    ZERO = "zero"
    BAND = "band"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class RhoBand:
    size: int
    level: int                              # m: Q ∈ ker μ_m, Q ∉ ker μ_{m+2}
    mu_value: Fraction                      # μ_{m+2}(Q)(p)
    tags: tuple[tuple[Tag, ...], ...]
    values: dict                            # (n, l) -> TwoPiI on the band, 1-based
    accidental_zero: bool                   # μ_{m+2}(Q) != 0 as a section but vanishes at p
    admissible_depth: int                   # ξ^1..ξ^d independent at p

    def tag(self, n: int, l: int) -> Tag:
        return self.tags[n - 1][l - 1]

    def value(self, n: int, l: int) -> TwoPiI | None:
        t = self.tag(n, l)
        if t is Tag.ZERO:
            return TwoPiI(0)
        if t is Tag.BAND:
            return self.values[(n, l)]
        return None


def _taylor_pair_sum(model: CurveModel, a: RatMatrix, h: int, k: int) -> Fraction:
    """Σ a_ij b_ih b_jk with b_ih the z^h Taylor coefficient of f_i."""
    f = model.basis
    g = model.genus
    return sum((a[i, j] * f[i].coeffs[h] * f[j].coeffs[k]
                for i in range(g) for j in range(g) if a[i, j]), Fraction(0))


def polar_band_entry(model: CurveModel, Q: Quadric, n: int, l: int) -> TwoPiI:
    """2πi Σ_{k<n} (n-k) Σ a_ij b_{i,n+l-k} b_jk: the z^(l-1) coefficient of the
    polar part of Φ_{n,Q}, which is all of ρ(Q)(ξ^n, ξ^l) when n + l <= m + 2."""
    a = Q.matrix
    s = sum(((n - k) * _taylor_pair_sum(model, a, n + l - k, k) for k in range(n)), Fraction(0))
    return TwoPiI(s)


def rho_band(model: CurveModel, Q, filtration: Filtration,
             certificate: PointCertificate | None = None) -> RhoBand:
    """Zero / Band / Unknown structure of ρ(Q) in the basis ξ_p^1..ξ_p^(3g-3)."""
    g = model.genus
    Q = Q if isinstance(Q, Quadric) else Quadric.from_sym_vector(Q, g)
    m = quadric_level(filtration, Q)
    size = 3 * g - 3
    cert = certificate or certify_general_point(model)
    top = min(m + 1, size)
    if not cert.admissible(top):
        raise UncertifiedPoint(
            f"band of a level-{m} quadric uses ξ^1..ξ^{top}, but they are only known "
            f"independent at this point through ξ^{max(cert.depth, 2 * g - 3)}"
        )
    mu = mu_eval_at_p(model, Q, m + 2, check=False)
    tags, values = [], {}
    for n in range(1, size + 1):
        row = []
        for l in range(1, size + 1):
            if n + l <= m + 1:
                row.append(Tag.ZERO)
            elif n + l == m + 2:
                row.append(Tag.BAND)
                values[(n, l)] = c_constant(n, m) * mu
            else:
                row.append(Tag.UNKNOWN)
        tags.append(tuple(row))
    # Re-derive every determined entry from Taylor coefficients.
    model.require_order(m + 2, "band cross-check")
    for n in range(1, size + 1):
        for l in range(1, min(size, m + 2 - n) + 1):
            direct = polar_band_entry(model, Q, n, l)
            expected = values.get((n, l), TwoPiI(0))
            if direct.rational != expected.rational:
                raise InternalInconsistency(f"ρ(Q)(ξ^{n}, ξ^{l}): {direct} from Taylor data vs {expected}")
    return RhoBand(size, m, mu, tuple(tags), values, mu == 0, max(cert.depth, 2 * g - 3))


# -- osculating flags --------------------------------------------------------

def schiffer_pairing_matrix(model: CurveModel, n: int) -> RatMatrix:
    """M[k-1][i] = ⟨σ_i, ξ^k⟩ / 2πi over the product basis σ_i of H^0(ω^2)."""
    S = section_space(model, 2)
    jets = S.jets(S.zero_test_order)
    return RatMatrix(([schiffer_pairing(h, k).rational for h in jets] for k in range(1, n + 1)), S.dim)


@dataclass(frozen=True)
class OsculatingFlag:
    n: int
    basis: tuple[tuple[int, ...], ...]      # index pairs (i, j): σ = ω_i ω_j
    annihilator: Subspace                   # coordinates of σ vanishing to order n at p
    points: tuple[tuple[Fraction, ...], ...]  # [σ_i^(k)(0)]_i for k < n; points[0] is φ_{2K}(p)
    certified: bool

    @property
    def bicanonical_point(self) -> tuple[Fraction, ...]:
        return self.points[0]


def osculating_flag(model: CurveModel, n: int, require_certified: bool = True,
                    certificate: PointCertificate | None = None) -> OsculatingFlag:
    """Sections of ω^2 vanishing to order n at p: the annihilator of ⟨ξ^1..ξ^n⟩.

    Computed as an intersection of jet subspaces (section space ∩ {z^n | jet}),
    independently of the pairing matrix.
    """
    g = model.genus
    if not 1 <= n <= 3 * g - 3:
        raise OutOfRange(f"n must lie in 1..{3 * g - 3}")
    cert = certificate or certify_general_point(model)
    certified = cert.admissible(n)
    if require_certified and not certified:
        raise UncertifiedPoint(f"ξ^1..ξ^{n} are not independent at this point (certified through {cert.depth})")
    S = section_space(model, 2)
    T = S.zero_test_order
    H = RatMatrix((j.coeffs for j in S.jets(T)), T + 1)
    V = Subspace.span(H.rows, T + 1)
    W = Subspace.span(([int(c == k) for c in range(T + 1)] for k in range(n, T + 1)), T + 1)
    Ht = H.transpose()
    coords = []
    for w in intersect(V, W).vectors():
        x = solve(Ht, w)
        if x is None:
            raise InternalInconsistency("intersection vector outside the section space")
        coords.append(x)
    ann = Subspace.span(coords, S.dim)
    points = tuple(
        tuple(row[k] * math.factorial(k) for row in H.rows) for k in range(n)
    )
    return OsculatingFlag(n, S.monomials, ann, points, certified)


# -- totally geodesic bound --------------------------------------------------

@dataclass(frozen=True)
class GeodesicReport:
    genus: int
    strict_steps: int          # n: ker μ_{2i} ⊊ ker μ_{2i-2} for all 1 <= i <= n
    bound: int                 # dim Y <= 3g-3-n
    vacuous: bool
    no_geodesic_germs: bool    # strict all the way to 6g-6
    statement: str


def geodesic_bound_report(filtration: Filtration, g: int | None = None) -> GeodesicReport:
    g = filtration.genus if g is None else g
    top = 3 * g - 3
    n = 0
    for i in range(1, top + 1):
        if 2 * i > filtration.max_level and not filtration.terminated:
            raise IncompleteFiltration(
                f"strictness at level {2 * i} is undetermined (filtration stops at {filtration.max_level})"
            )
        if not filtration.strict(2 * i):
            break
        n = i
    bound = top - n
    if n == top:
        statement = ("strict chain through ker μ_{6g-6}: no germ of a totally geodesic submanifold of A_g "
                     "generically contained in M_g passes through j(C)")
    elif n == 0:
        statement = "no strict step: the bound dim Y <= 3g-3 is vacuous"
    else:
        statement = (f"for generic p, T_j(C) Y meets <ξ_p^1..ξ_p^{n}> only in 0, "
                     f"so dim Y <= {bound} for totally geodesic germs Y through j(C)")
    return GeodesicReport(g, n, bound, n == 0, n == top, statement)
