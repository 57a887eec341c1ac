"""Exception hierarchy.

Every error carries the CLI exit code it maps to, so the driver never has to
keep a separate lookup table in sync.
"""

from __future__ import annotations


class WahlLabError(Exception):
    exit_code = 5


class ConfigError(WahlLabError, ValueError):
    exit_code = 2


class OutOfRange(ConfigError):
    pass


class CurveError(WahlLabError, ValueError):
    """Problems with the curve or the chosen base point."""

    exit_code = 3


class NotOnCurve(CurveError):
    pass


class SingularPoint(CurveError):
    pass


class BranchPointNotSupported(CurveError):
    pass


class GenusTooSmall(CurveError):
    pass


class HyperellipticRefused(CurveError):
    pass


class UncertifiedPoint(CurveError):
    pass


class InsufficientOrder(WahlLabError):
    exit_code = 4


class OrderExhausted(InsufficientOrder):
    pass


class DependentBasis(InsufficientOrder):
    """Supplied jets are linearly dependent to their truncation order."""


class ZeroConstantTerm(WahlLabError, ZeroDivisionError):
    pass


class NotInKernel(WahlLabError, ValueError):
    pass


class LevelUndetermined(WahlLabError, ValueError):
    pass


class IncompleteFiltration(WahlLabError, ValueError):
    pass


class DenominatorDivisiblePrime(WahlLabError, ArithmeticError):
    pass


class InternalInconsistency(WahlLabError, AssertionError):
    """An invariant that mathematics guarantees was violated: always a bug."""

    exit_code = 5
