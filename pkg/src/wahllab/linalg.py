"""Exact dense linear algebra over the rationals.

Elimination is fraction-free: each row is scaled to integers and reduced with
Bareiss' exact-division update, so intermediate entries stay bounded by minors
of the input instead of accumulating denominators.  A modular rank is offered
as a fast, probabilistic cross-check; it never decides anything on its own.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2

from .errors import DenominatorDivisiblePrime

__all__ = [
    "RatMatrix",
    "Subspace",
    "rref",
    "rank",
    "kernel",
    "left_kernel",
    "independent_rows",
    "solve",
    "intersect",
    "random_prime",
    "rank_mod_p",
    "rank_modular",
]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RatMatrix:
    """Immutable matrix of Fractions, stored row-major as nested tuples."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(_frac(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError(f"row of length {len(r)} in a matrix with {ncols} columns")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls(([int(i == j) for j in range(n)] for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"RatMatrix({self.nrows}x{self.ncols}: [{body}])"

    def transpose(self) -> RatMatrix:
        return RatMatrix(zip(*self.rows), self.nrows) if self.rows else RatMatrix((), 0)

    def columns(self, start: int, stop: int) -> RatMatrix:
        return RatMatrix((r[start:stop] for r in self.rows), stop - start)

    def stack(self, other: RatMatrix) -> RatMatrix:
        if other.ncols != self.ncols:
            raise ValueError("column mismatch")
        return RatMatrix(self.rows + other.rows, self.ncols)

    def matvec(self, v: Sequence) -> tuple[Fraction, ...]:
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.rows)

    def vecmat(self, v: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.ncols
        for c, r in zip(v, self.rows):
            if c:
                for j, x in enumerate(r):
                    if x:
                        out[j] += c * x
        return tuple(out)


def _as_matrix(m) -> RatMatrix:
    return m if isinstance(m, RatMatrix) else RatMatrix(m)


# -- integer kernels ---------------------------------------------------------

def _int_row(row: Sequence[Fraction]) -> list[int]:
    den = math.lcm(*(x.denominator for x in row)) if row else 1
    return [x.numerator * (den // x.denominator) for x in row]


def _primitive(row: list[int], pivot: int) -> list[int]:
    g = math.gcd(*row)
    if g > 1:
        row = [x // g for x in row]
    if row[pivot] < 0:
        row = [-x for x in row]
    return row


def _bareiss(rows: list[list[int]], ncols: int):
    """Fraction-free forward elimination.

    Returns (echelon rows, pivot columns, row permutation).  Rows perm[:rank]
    of the input are linearly independent and span the row space.
    """
    A = [r[:] for r in rows]
    nr = len(A)
    perm = list(range(nr))
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if A[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
            perm[r], perm[piv] = perm[piv], perm[r]
        prow = A[r]
        p = prow[c]
        for i in range(r + 1, nr):
            row = A[i]
            a = row[c]
            if a:
                row[c] = 0
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j] - a * prow[j]) // prev
            elif prev == p:
                continue
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (p * row[j]) // prev
        prev = p
        pivots.append(c)
        r += 1
    return A[:r], pivots, perm


def _back_substitute(echelon: list[list[int]], pivots: list[int]) -> list[list[int]]:
    """Clear entries above pivots, keeping every row primitive."""
    R = [_primitive(row, c) for row, c in zip(echelon, pivots)]
    for k in range(len(R) - 1, -1, -1):
        c = pivots[k]
        rk = R[k]
        pk = rk[c]
        for i in range(k):
            a = R[i][c]
            if a:
                R[i] = _primitive([pk * x - a * y for x, y in zip(R[i], rk)], pivots[i])
    return R


# -- public operations -------------------------------------------------------

def rref(m) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row-echelon form (zero rows dropped) and pivot columns."""
    m = _as_matrix(m)
    if not m.rows or m.ncols == 0:
        return RatMatrix((), m.ncols), ()
    echelon, pivots, _ = _bareiss([_int_row(r) for r in m.rows], m.ncols)
    R = _back_substitute(echelon, pivots)
    out = []
    for row, c in zip(R, pivots):
        p = row[c]
        out.append(tuple(Fraction(x, p) for x in row))
    return RatMatrix(out, m.ncols), tuple(pivots)


def rank(m) -> int:
    m = _as_matrix(m)
    if not m.rows:
        return 0
    _, pivots, _ = _bareiss([_int_row(r) for r in m.rows], m.ncols)
    return len(pivots)


def independent_rows(m) -> tuple[int, ...]:
    """Indices of a set of rows forming a basis of the row space (sorted)."""
    m = _as_matrix(m)
    if not m.rows:
        return ()
    _, pivots, perm = _bareiss([_int_row(r) for r in m.rows], m.ncols)
    return tuple(sorted(perm[: len(pivots)]))


def _nullspace_vectors(m: RatMatrix) -> list[tuple[Fraction, ...]]:
    R, pivots = rref(m)
    free = [j for j in range(m.ncols) if j not in set(pivots)]
    vecs = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for row, c in zip(R.rows, pivots):
            v[c] = -row[f]
        vecs.append(tuple(v))
    return vecs


def kernel(m) -> Subspace:
    """Right null space {v : m v = 0}."""
    m = _as_matrix(m)
    if not m.rows:
        return Subspace.full(m.ncols)
    return Subspace.span(_nullspace_vectors(m), m.ncols)


def left_kernel(m) -> Subspace:
    """{x : x m = 0}, i.e. the linear relations among the rows of m."""
    m = _as_matrix(m)
    if not m.rows:
        return Subspace.zero(0)
    return kernel(m.transpose())


def solve(a, b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution x of a x = b, or None when the system is inconsistent."""
    a = _as_matrix(a)
    aug = RatMatrix((r + (_frac(bi),) for r, bi in zip(a.rows, b)), a.ncols + 1)
    R, pivots = rref(aug)
    if pivots and pivots[-1] == a.ncols:
        return None
    x = [Fraction(0)] * a.ncols
    for row, c in zip(R.rows, pivots):
        x[c] = row[-1]
    return tuple(x)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^ambient_dim, canonically stored as an rref basis.

    Because the rref is canonical, two Subspace values compare equal exactly
    when they describe the same space.
    """

    ambient_dim: int
    basis: RatMatrix
    pivots: tuple[int, ...] = ()

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            return cls.zero(ambient_dim)
        R, pivots = rref(RatMatrix(vectors, ambient_dim))
        return cls(ambient_dim, R, pivots)

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, RatMatrix((), ambient_dim), ())

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, RatMatrix.identity(ambient_dim), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def __len__(self):
        return self.dim

    def vectors(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.basis.rows

    def reduce(self, v: Sequence) -> tuple[Fraction, ...]:
        """Remainder of v after eliminating the pivot coordinates."""
        v = [_frac(x) for x in v]
        for row, c in zip(self.basis.rows, self.pivots):
            a = v[c]
            if a:
                v = [x - a * y for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...]:
        """Coefficients of v in the rref basis (v must lie in the space)."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(_frac(v[c]) for c in self.pivots)

    def is_subspace_of(self, other: Subspace) -> bool:
        return self.ambient_dim == other.ambient_dim and all(
            other.contains(r) for r in self.basis.rows
        )

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(self.basis.rows + other.basis.rows, self.ambient_dim)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """U ∩ V, from the relations x·U + y·V = 0 between the two bases."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.ambient_dim)
    rel = left_kernel(u.basis.stack(v.basis))
    return Subspace.span((u.basis.vecmat(x[: u.dim]) for x in rel.vectors()), u.ambient_dim)


# -- modular path ------------------------------------------------------------

def random_prime(rng: random.Random, bits: int = 62) -> int:
    return int(gmpy2.next_prime(rng.getrandbits(bits) | (1 << (bits - 1))))


def rank_mod_p(m, p: int) -> int:
    """Rank of m reduced modulo the prime p."""
    m = _as_matrix(m)
    A = []
    for r in m.rows:
        row = []
        for x in r:
            if x.denominator % p == 0:
                raise DenominatorDivisiblePrime(f"denominator {x.denominator} divisible by {p}")
            row.append(x.numerator * pow(x.denominator, -1, p) % p)
        A.append(row)
    nr, nc = len(A), m.ncols
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        prow = [x * inv % p for x in A[r]]
        A[r] = prow
        for i in range(r + 1, nr):
            a = A[i][c]
            if a:
                A[i] = [(x - a * y) % p for x, y in zip(A[i], prow)]
        r += 1
    return r


def rank_modular(m, prime_count: int = 3, rng: random.Random | None = None,
                 max_retries: int = 20) -> int:
    """Maximum rank of m over prime_count random 62-bit prime fields.

    The result never exceeds the rational rank and equals it unless every
    sampled prime divides one particular nonzero minor.
    """
    if prime_count < 1:
        raise ValueError("prime_count must be at least 1")
    rng = rng or random.Random(0)
    m = _as_matrix(m)
    best = 0
    retries = 0
    done = 0
    while done < prime_count:
        p = random_prime(rng)
        try:
            best = max(best, rank_mod_p(m, p))
        except DenominatorDivisiblePrime:
            retries += 1
            if retries > max_retries:
                raise
            continue
        done += 1
    return best
