from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

import oracle
from wahllab.curves import section_space
from wahllab.errors import (
    HyperellipticRefused,
    IncompleteFiltration,
    LevelUndetermined,
    NotInKernel,
    OutOfRange,
)
from wahllab.gauss import (
    Quadric,
    kernel_filtration,
    level_representative,
    mu1_wedge,
    mu_eval_at_p,
    mu_series,
    product_series,
    quadric_level,
    quadric_space,
    rank_report,
    sym_pairs,
)
from wahllab.linalg import RatMatrix


def test_sym_coordinates_round_trip():
    q = tuple(Fraction(k, 3) for k in range(10))
    Q = Quadric.from_sym_vector(q, 4)
    assert Q.sym_vector() == q
    assert Q.matrix[0, 1] == Q.matrix[1, 0] == Fraction(1, 6)
    assert len(sym_pairs(6)) == 21
    with pytest.raises(ValueError):
        Quadric(RatMatrix([[0, 1], [0, 0]]))


def test_quadric_space_dimensions(quintic, hyperelliptic, rnc4):
    I2 = quadric_space(quintic)
    assert I2.dim == 6
    for v in I2.vectors():
        assert product_series(quintic, v, 0, 0).is_zero()
    assert quadric_space(hyperelliptic).dim == 3
    assert quadric_space(rnc4).dim == 3


def test_quintic_filtration(quintic_filtration):
    F = quintic_filtration
    assert F.dims == [6] + [0] * 15
    assert F.max_level == 30 and F.terminated
    assert F.image_ranks[2] == 6
    assert all(F.modular_ranks[L] == r for L, r in F.image_ranks.items() if L in F.modular_ranks)
    assert F.strict(2) and not F.strict(4)
    assert F.depth == 1


def test_rank_report(quintic_filtration):
    rep = rank_report(quintic_filtration)
    assert rep.passed and rep.top_kernel_zero
    assert rep.informative_l_max == 9
    assert len(rep.rows) == 16
    last = rep.rows[-1]
    assert last.l == 15 and last.level == 0 and last.kernel_level == -2 and last.kernel_dim == 21


def test_rank_report_needs_full_chain(rnc6):
    F = kernel_filtration(rnc6, max_level=2, theorem_mode=False)
    with pytest.raises(IncompleteFiltration):
        rank_report(F)


@pytest.mark.parametrize("model_name, levels", [("quintic", (0,)), ("rnc6", (0, 2))])
def test_every_k_choice_agrees(request, model_name, levels):
    model = request.getfixturevalue(model_name)
    F = request.getfixturevalue(f"{model_name}_filtration")
    for m in levels:
        for v in F.kernel(m).vectors():
            series = [mu_series(model, v, m + 2, k) for k in range(m + 3)]
            n = min(s.order for s in series)
            assert len({s.truncate(n) for s in series}) == 1


def test_level_representative(quintic, quintic_filtration):
    Q = level_representative(quintic, quintic_filtration, 0)
    assert quadric_level(quintic_filtration, Q) == 0
    assert mu_eval_at_p(quintic, Q, 2) == Fraction(1, 25)
    assert level_representative(quintic, quintic_filtration, 2) is None


def test_quadric_level_errors(quintic, quintic_filtration):
    with pytest.raises(LevelUndetermined):
        quadric_level(quintic_filtration, [0] * 21)
    with pytest.raises(NotInKernel):
        quadric_level(quintic_filtration, [1] + [0] * 20)
    with pytest.raises(NotInKernel):
        mu_series(quintic, [1] + [0] * 20, 2)
    with pytest.raises(OutOfRange):
        mu_series(quintic, [1] + [0] * 20, 3)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_linearity_on_a_kernel_level(rnc6, rnc6_filtration, ab):
    a, b = ab
    v1, v2 = rnc6_filtration.kernel(2).vectors()[:2]
    combo = [a * x + b * y for x, y in zip(v1, v2)]
    lhs = mu_series(rnc6, combo, 4)
    rhs = mu_series(rnc6, v1, 4) * a + mu_series(rnc6, v2, 4) * b
    assert lhs == rhs


def test_rnc6_filtration_against_oracle(rnc6_filtration):
    fs = [oracle.z**i for i in range(6)]
    assert rnc6_filtration.dims[:3] == [10, 3, 0]
    assert oracle.filtration_dims(fs, 4, 12) == [10, 3, 0]


def test_mu1_wedge(rnc4):
    w = mu1_wedge(rnc4, 1, 3)
    assert w == -mu1_wedge(rnc4, 3, 1)
    # (z)' z^3 - (z^3)' z = -2 z^3
    assert w.coeffs[:5] == (0, 0, 0, -2, 0)
    assert mu1_wedge(rnc4, 2, 2).is_zero()
    with pytest.raises(OutOfRange):
        mu1_wedge(rnc4, 0, 4)


def test_hyperelliptic_filtration(hyperelliptic):
    with pytest.raises(HyperellipticRefused):
        kernel_filtration(hyperelliptic)
    F = kernel_filtration(hyperelliptic, max_level=2, theorem_mode=False)
    assert F.dim(0) == 3
    assert section_space(hyperelliptic, 2).dim == 7


def test_quintic_mu2_injective_against_oracle(quintic):
    """ker μ_2 = 0 on I_2 of the Fermat quintic, recomputed with sympy.

    Imposing the kernel conditions on finitely many Taylor coefficients can
    only enlarge the solution space, so a zero kernel here is conclusive.
    """
    degree, terms = 44, 40
    fs = [sum(sp.Rational(c.numerator, c.denominator) * oracle.z**k for k, c in enumerate(j.coeffs[: degree + 1]))
          for j in quintic.basis]
    assert len(oracle.kernel_of_conditions(fs, 2, terms)) == 0
