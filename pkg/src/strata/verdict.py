"""Tri-state verdicts for strict-inequality criteria.

Every hyperbolicity criterion in this package is a strict inequality, so a
boolean cannot represent states sitting numerically on the boundary.  A
``TriState`` carries an explicit ``BOUNDARY`` value instead.
"""

from enum import Enum


class TriState(str, Enum):
    TRUE = "true"
    FALSE = "false"
    BOUNDARY = "boundary"

    def __bool__(self):  # pragma: no cover - guard against accidental truthiness
        raise TypeError("TriState must be compared explicitly, not used as a bool")


def strict_positive(value: float, band: float) -> TriState:
    """Verdict for the strict condition ``value > 0`` with a boundary band."""
    if abs(value) <= band:
        return TriState.BOUNDARY
    return TriState.TRUE if value > 0.0 else TriState.FALSE
