"""Evaluation options and the error taxonomy shared by all modules."""

from __future__ import annotations

from dataclasses import dataclass


class EisZerosError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(EisZerosError):
    """Evaluation requested at (or too close to) a pole."""


class NearPoleError(PoleError):
    """Evaluation refused inside the guard radius of a removable/actual pole.

    Callers wanting values near s in {0, 1/2, 1} should use the entire
    normalizations (g_constant_term, h_constant_term, h_truncation) instead.
    """


class AccuracyError(EisZerosError):
    """The requested tolerance could not be certified within the term budget."""


class BoundaryZeroError(EisZerosError):
    """A contour passes too close to a zero and nudging failed."""


class SelfCheckError(EisZerosError):
    """Two independent internal routes to the same quantity disagree."""


class RankError(EisZerosError):
    """A lattice basis is rank deficient."""


class ScaleError(EisZerosError):
    """Problem size exceeds the supported desk-scale enumeration bounds."""


@dataclass(frozen=True)
class EvalOptions:
    """Accuracy knobs threaded through every special-function evaluation.

    rel_tol   -- target relative accuracy of a single evaluation
    max_terms -- hard cap on series / quadrature terms before AccuracyError
    """

    rel_tol: float = 1e-12
    max_terms: int = 10**6

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.max_terms < 16:
            raise ValueError(f"max_terms must be >= 16, got {self.max_terms}")


DEFAULT_OPTIONS = EvalOptions()
