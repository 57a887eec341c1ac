"""Independent brute-force reference built directly on sympy.

Nothing here imports the package's jets, linear algebra or Gaussian-map code:
derivatives are taken with sympy.diff, kernels with sympy.Matrix.nullspace.
"""

from __future__ import annotations

import itertools
import math

import sympy as sp

z = sp.Symbol("z")


def sym_index(g):
    return [(i, j) for i in range(g) for j in range(i, g)]


def quadric_matrix(q, g):
    a = sp.zeros(g, g)
    for (i, j), c in zip(sym_index(g), q):
        if i == j:
            a[i, i] = c
        else:
            a[i, j] = a[j, i] = sp.Rational(c) / 2
    return a


def kernel_of_conditions(fs, m, terms):
    """Quadrics with Σ a_ij f_i^(h) f_j^(k) = 0 for every h + k <= m + 1.

    `fs` are polynomials in z (exact data, or Taylor polynomials); the
    condition is imposed on the coefficients of z^0..z^(terms-1), and every
    derivative product is rebuilt from scratch."""
    g = len(fs)
    pairs = sym_index(g)
    rows = []
    for h in range(m + 2):
        for k in range(m + 2 - h):
            cols = []
            for i, j in pairs:
                if i == j:
                    expr = sp.diff(fs[i], z, h) * sp.diff(fs[i], z, k)
                else:
                    expr = (sp.diff(fs[i], z, h) * sp.diff(fs[j], z, k)
                            + sp.diff(fs[j], z, h) * sp.diff(fs[i], z, k)) / 2
                coeffs = sp.Poly(sp.expand(expr), z).all_coeffs()[::-1]
                cols.append([coeffs[t] if t < len(coeffs) else 0 for t in range(terms)])
            for t in range(terms):
                rows.append([c[t] for c in cols])
    M = sp.Matrix(rows)
    return M.nullspace()


def multiplication_kernel(fs, terms):
    """I_2: quadrics with Σ a_ij f_i f_j = 0."""
    return kernel_of_conditions(fs, -1, terms)


def filtration_dims(fs, max_level, terms):
    dims = [len(multiplication_kernel(fs, terms))]
    for m in range(2, max_level + 1, 2):
        dims.append(len(kernel_of_conditions(fs, m, terms)))
    return dims


def mu_value_at_zero(fs, q, m_plus_2):
    """μ_{m+2}(Q)(p) from the definition with all derivatives on one factor."""
    g = len(fs)
    a = quadric_matrix(q, g)
    total = sum(a[i, j] * sp.diff(fs[i], z, m_plus_2) * fs[j] for i in range(g) for j in range(g))
    return sp.Rational(sp.expand(total).subs(z, 0))


def c_sum(n, m):
    return sum(sp.Rational((-1) ** k * (n - k), math.factorial(k) * math.factorial(m + 2 - k)) for k in range(n))


def rank(rows):
    return sp.Matrix(rows).rank()


def all_monomials(g, m):
    return list(itertools.combinations_with_replacement(range(g), m))
