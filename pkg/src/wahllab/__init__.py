"""Exact higher Gaussian (Wahl) maps of canonical curves.

Curves are reduced to jets of their canonical forms at one base point; every
rank, kernel and band value is computed over Q.
"""

from __future__ import annotations

from .curves import (
    CurveModel,
    HyperellipticCurve,
    LocalData,
    PlaneCurve,
    build_model,
    certify_general_point,
    load_curve_spec,
    section_space,
)
from .gauss import Quadric, kernel_filtration, mu_eval_at_p, mu_series, quadric_space, rank_report
from .jets import Jet
from .linalg import RatMatrix, Subspace
from .schiffer import TwoPiI, c_constant, geodesic_bound_report, osculating_flag, rho_band, schiffer_pairing

__version__ = "0.1.0"

__all__ = [
    "CurveModel", "HyperellipticCurve", "LocalData", "PlaneCurve", "build_model",
    "certify_general_point", "load_curve_spec", "section_space", "Quadric",
    "kernel_filtration", "mu_eval_at_p", "mu_series", "quadric_space", "rank_report",
    "Jet", "RatMatrix", "Subspace", "TwoPiI", "c_constant", "geodesic_bound_report",
    "osculating_flag", "rho_band", "schiffer_pairing",
]
