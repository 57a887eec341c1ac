"""Even Gaussian maps on the quadrics through the canonical curve.

A quadric Q = Σ a_ij ω_i ω_j is stored as its symmetric coefficient matrix;
subspaces of quadrics live in Sym^2 coordinates q_ij (i <= j), where
a_ii = q_ii and a_ij = a_ji = q_ij / 2.

With f_i the local canonical jets, write T(h, k) = Σ a_ij f_i^(h) f_j^(k).
Q lies in ker μ_m (m even) exactly when T(h, k) ≡ 0 for all h + k <= m + 1,
and then μ_{m+2}(Q) = (-1)^k T(m+2-k, k) for every 0 <= k <= m+2.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curves import CurveModel
from .errors import (
    IncompleteFiltration,
    InsufficientOrder,
    InternalInconsistency,
    LevelUndetermined,
    NotInKernel,
    OutOfRange,
)
from .jets import Jet, linear_combination
from .linalg import RatMatrix, Subspace, left_kernel, rank_modular

__all__ = [
    "Quadric",
    "Filtration",
    "RankReport",
    "sym_pairs",
    "quadric_space",
    "product_series",
    "mu_series",
    "mu_eval_at_p",
    "kernel_filtration",
    "mu1_wedge",
    "rank_report",
    "quadric_level",
    "level_representative",
]


def sym_pairs(g: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(g) for j in range(i, g)]


@dataclass(frozen=True)
class Quadric:
    matrix: RatMatrix

    def __post_init__(self):
        a = self.matrix
        if a.nrows != a.ncols:
            raise ValueError("quadric matrix must be square")
        if any(a[i, j] != a[j, i] for i in range(a.nrows) for j in range(i)):
            raise ValueError("quadric matrix must be symmetric")

    @classmethod
    def from_sym_vector(cls, q: Sequence, g: int) -> Quadric:
        a = [[Fraction(0)] * g for _ in range(g)]
        for (i, j), c in zip(sym_pairs(g), q):
            c = Fraction(c)
            if i == j:
                a[i][i] = c
            else:
                a[i][j] = a[j][i] = c / 2
        return cls(RatMatrix(a, g))

    @property
    def genus(self) -> int:
        return self.matrix.nrows

    def sym_vector(self) -> tuple[Fraction, ...]:
        a = self.matrix
        return tuple(a[i, j] if i == j else 2 * a[i, j] for i, j in sym_pairs(self.genus))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix.rows)

    def __mul__(self, c):
        return Quadric(RatMatrix(([x * c for x in r] for r in self.matrix.rows), self.genus))

    __rmul__ = __mul__

    def __add__(self, other: Quadric):
        return Quadric(RatMatrix(
            ([x + y for x, y in zip(r, s)] for r, s in zip(self.matrix.rows, other.matrix.rows)),
            self.genus,
        ))


def _as_quadric(Q, g: int) -> Quadric:
    return Q if isinstance(Q, Quadric) else Quadric.from_sym_vector(Q, g)


def product_series(model: CurveModel, Q, h: int, k: int) -> Jet:
    """T(h, k) = Σ a_ij f_i^(h) f_j^(k), known to order N - max(h, k)."""
    Q = _as_quadric(Q, model.genus)
    a = Q.matrix
    g = model.genus
    total = None
    for j in range(g):
        col = [a[i, j] for i in range(g)]
        if not any(col):
            continue
        term = linear_combination(col, [model.derivative(i, h) for i in range(g)]) * model.derivative(j, k)
        total = term if total is None else total + term
    if total is None:
        return Jet([0], model.order - max(h, k))
    return total


def quadric_space(model: CurveModel) -> Subspace:
    """I_2 = ker(Sym^2 H^0(ω) -> H^0(ω^2)), in Sym^2 coordinates."""
    model.require_order(2 * (2 * model.genus - 2), "the quadric space")
    f = model.basis
    rows = [(f[i] * f[j]).coeffs for i, j in sym_pairs(model.genus)]
    return left_kernel(RatMatrix(rows, model.order + 1))


def _zero_test_order(model: CurveModel, weight: int) -> int:
    return weight * (2 * model.genus - 2)


def mu_series(model: CurveModel, Q, m_plus_2: int, k_choice: int | None = None,
              check: bool = True) -> Jet:
    """(-1)^k Σ a_ij f_i^(m+2-k) f_j^(k), the local expression of μ_{m+2}(Q).

    With check=True the kernel condition Q ∈ ker μ_m is verified first, via
    T(0, k) ≡ 0 for k <= m + 1 to the available order.
    """
    if m_plus_2 < 0 or m_plus_2 % 2:
        raise OutOfRange("Gaussian map index must be an even non-negative integer")
    k = m_plus_2 // 2 if k_choice is None else k_choice
    if not 0 <= k <= m_plus_2:
        raise OutOfRange(f"k_choice must lie in 0..{m_plus_2}")
    h = m_plus_2 - k
    needed = _zero_test_order(model, m_plus_2 + 2) + max(h, k)
    model.require_order(needed, f"μ_{m_plus_2} with k_choice={k}")
    if check and m_plus_2 >= 2:
        for kk in range(m_plus_2):
            if not product_series(model, Q, 0, kk).is_zero():
                raise NotInKernel(f"quadric is not in ker μ_{m_plus_2 - 2}: T(0, {kk}) != 0")
    series = product_series(model, Q, h, k)
    return -series if k % 2 else series


def mu_eval_at_p(model: CurveModel, Q, m_plus_2: int, k_choice: int | None = None,
                 check: bool = True) -> Fraction:
    """μ_{m+2}(Q)(p) in the (dz)^(m+4) trivialization."""
    return mu_series(model, Q, m_plus_2, k_choice, check).coeffs[0]


def mu1_wedge(model: CurveModel, i: int, j: int) -> Jet:
    """μ_1(ω_i ∧ ω_j) = f_i' f_j - f_j' f_i (0-based indices)."""
    g = model.genus
    if not (0 <= i < g and 0 <= j < g):
        raise OutOfRange(f"indices must lie in 0..{g - 1}")
    f = model.basis
    return model.derivative(i, 1) * f[j] - model.derivative(j, 1) * f[i]


# -- filtration --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Filtration:
    genus: int
    levels: tuple[tuple[int, Subspace], ...]
    image_ranks: dict = field(default_factory=dict)     # level -> rank of μ_level on the previous kernel
    modular_ranks: dict = field(default_factory=dict)   # level -> advisory modular rank

    @property
    def max_level(self) -> int:
        return self.levels[-1][0]

    def kernel(self, level: int) -> Subspace:
        if level % 2 or level < 0:
            raise OutOfRange("levels are even and non-negative")
        for lv, sub in self.levels:
            if lv == level:
                return sub
        if self.levels[-1][1].dim == 0:
            return self.levels[-1][1]
        raise IncompleteFiltration(f"level {level} was not computed (max {self.max_level})")

    def dim(self, level: int) -> int:
        return self.kernel(level).dim

    @property
    def dims(self) -> list[int]:
        return [s.dim for _, s in self.levels]

    def strict(self, level: int) -> bool:
        """ker μ_level ⊊ ker μ_{level-2}."""
        return self.dim(level) < self.dim(level - 2)

    @property
    def terminated(self) -> bool:
        return self.levels[-1][1].dim == 0

    @property
    def depth(self) -> int:
        """Largest n with ker μ_{2n-2} != 0."""
        n = 0
        for lv, sub in self.levels:
            if sub.dim:
                n = lv // 2 + 1
        return n


def kernel_filtration(model: CurveModel, max_level: int | None = None, theorem_mode: bool = True,
                      modular_check: bool = False, rng: random.Random | None = None) -> Filtration:
    """ker μ_0 ⊇ ker μ_2 ⊇ ... ⊇ ker μ_max_level, computed level by level.

    Each level takes the μ-images of a basis of the previous kernel and finds
    their linear relations; images are zero-tested through their full degree.
    Every new kernel vector is re-checked against T(0, L) ≡ T(0, L+1) ≡ 0.
    """
    g = model.genus
    if max_level is None:
        max_level = 6 * g - 6
    if max_level < 0 or max_level % 2:
        raise OutOfRange("max_level must be even and non-negative")
    if theorem_mode:
        model.require_theorem_model()
    rng = rng or random.Random(20240101)
    levels = [(0, quadric_space(model))]
    ranks, mod_ranks = {}, {}
    for L in range(2, max_level + 1, 2):
        prev = levels[-1][1]
        if prev.dim == 0:
            levels.append((L, prev))
            ranks[L] = 0
            continue
        quads = [Quadric.from_sym_vector(v, g) for v in prev.vectors()]
        try:
            images = [mu_series(model, Q, L, check=False) for Q in quads]
        except InsufficientOrder as exc:
            raise InsufficientOrder(f"filtration level {L}: {exc}") from exc
        M = RatMatrix((j.coeffs for j in images), images[0].order + 1)
        rel = left_kernel(M)
        ranks[L] = prev.dim - rel.dim
        if modular_check:
            mod_ranks[L] = rank_modular(M, 3, rng)
        new = Subspace.span(
            (prev.basis.vecmat(c) for c in rel.vectors()), prev.ambient_dim
        )
        for v in new.vectors():
            for kk in (L, L + 1):
                if not product_series(model, v, 0, kk).is_zero():
                    raise InternalInconsistency(f"kernel vector at level {L} fails T(0, {kk}) ≡ 0")
        if not new.is_subspace_of(prev):
            raise InternalInconsistency(f"level {L} kernel is not nested in level {L - 2}")
        levels.append((L, new))
    return Filtration(g, tuple(levels), ranks, mod_ranks)


def quadric_level(filtration: Filtration, Q) -> int:
    """Largest computed even m with Q ∈ ker μ_m."""
    q = Q.sym_vector() if isinstance(Q, Quadric) else tuple(Q)
    if not any(q):
        raise LevelUndetermined("the zero quadric lies in every kernel")
    if not filtration.kernel(0).contains(q):
        raise NotInKernel("quadric does not lie in I_2")
    level = 0
    for lv, sub in filtration.levels:
        if sub.contains(q):
            level = lv
        else:
            break
    if level == filtration.max_level:
        raise LevelUndetermined(f"quadric lies in ker μ_{level}, the deepest computed level")
    return level


def level_representative(model: CurveModel, filtration: Filtration, m: int) -> Quadric | None:
    """A quadric in ker μ_m but not in ker μ_{m+2}, preferring μ_{m+2}(Q)(p) != 0."""
    K, deeper = filtration.kernel(m), filtration.kernel(m + 2)
    candidates = [v for v in K.vectors() if not deeper.contains(v)]
    if not candidates:
        return None
    for v in candidates:
        Q = Quadric.from_sym_vector(v, model.genus)
        if mu_eval_at_p(model, Q, m + 2, check=False) != 0:
            return Q
    return Quadric.from_sym_vector(candidates[0], model.genus)


# -- rank report -------------------------------------------------------------

@dataclass(frozen=True)
class RankRow:
    l: int
    level: int                 # 6g-6-2l
    rank: int                  # rank of μ_level on ker μ_{level-2}
    rank_ok: bool
    kernel_level: int          # 6g-6-2(l+1); -2 means the whole of Sym^2
    kernel_dim: int
    kernel_ok: bool
    bound: int                 # (l+1)^2
    informative: bool          # (l+1)^2 <= (g-1)(12g-9-4l)


@dataclass(frozen=True)
class RankReport:
    genus: int
    rows: tuple[RankRow, ...]
    top_kernel_zero: bool      # ker μ_{6g-6} = 0
    informative_l_max: int     # largest l with (l+1)^2 <= (g-1)(12g-9-4l)
    threshold_radicand: int    # (g-1)(16g-9): the bound is informative for l <= 1-2g+sqrt(radicand)

    @property
    def passed(self) -> bool:
        return self.top_kernel_zero and all(r.rank_ok and r.kernel_ok for r in self.rows)


def rank_report(filtration: Filtration, g: int | None = None) -> RankReport:
    g = filtration.genus if g is None else g
    top = 6 * g - 6
    if filtration.max_level < top and not filtration.terminated:
        raise IncompleteFiltration(f"filtration stops at level {filtration.max_level} < {top}")
    sym_dim = g * (g + 1) // 2
    rows = []
    for l in range(3 * g - 2):
        level = top - 2 * l
        prev_dim = sym_dim if level == 0 else filtration.dim(level - 2)
        rk = prev_dim - filtration.dim(level)
        kl = level - 2
        kd = sym_dim if kl < 0 else filtration.dim(kl)
        bound = (l + 1) ** 2
        rows.append(RankRow(
            l, level, rk, rk <= bound, kl, kd, kd <= bound, bound,
            bound <= (g - 1) * (12 * g - 9 - 4 * l),
        ))
    l_max = max(r.l for r in rows if r.informative)
    radicand = (g - 1) * (16 * g - 9)
    if l_max != 1 - 2 * g + math.isqrt(radicand):
        raise InternalInconsistency("informative threshold disagrees with its closed form")
    return RankReport(g, tuple(rows), filtration.dim(top) == 0, l_max, radicand)
