from __future__ import annotations

import sys
import warnings
from pathlib import Path

import pytest

from wahllab import poly as P
from wahllab.curves import HyperellipticCurve, LocalData, PlaneCurve, build_model
from wahllab.gauss import kernel_filtration
from wahllab.jets import Jet

ROOT = Path(__file__).resolve().parent.parent
CURVES = ROOT / "curves"
sys.path.insert(0, str(Path(__file__).resolve().parent))

FERMAT = "x^5 + y^5 + 1"
GENERIC = "x^5 + y^5 + x*y + 3*x^2 - 2*y^3 + y + x^4*y - 7*x^3"


def rational_normal(g: int, order: int):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_model(LocalData(tuple(Jet([0] * i + [1], order) for i in range(g))))


@pytest.fixture(scope="session")
def quintic():
    return build_model(PlaneCurve(P.parse(FERMAT)), (0, -1))


@pytest.fixture(scope="session")
def generic_quintic():
    return build_model(PlaneCurve(P.parse(GENERIC)), (0, 0))


@pytest.fixture(scope="session")
def hyperelliptic():
    return build_model(HyperellipticCurve(P.parse("x^9 + 1")), (0, 1))


@pytest.fixture(scope="session")
def rnc4():
    return rational_normal(4, 129)


@pytest.fixture(scope="session")
def rnc6():
    return rational_normal(6, 335)


@pytest.fixture(scope="session")
def quintic_filtration(quintic):
    return kernel_filtration(quintic, modular_check=True)


@pytest.fixture(scope="session")
def rnc6_filtration(rnc6):
    return kernel_filtration(rnc6, theorem_mode=False)
