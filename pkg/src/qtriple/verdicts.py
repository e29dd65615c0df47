"""Verdict records shared by all verification modules.

A verdict couples one identity instance (id + parameters) with the mode it
was checked in and the residual: an exact LaurentPoly (zero means proved at
this instance), an exact Fraction from rational sampling, or a numeric
magnitude with its precision.  `passed` is derived, never asserted: exact
modes pass iff the residual is identically zero, numeric modes iff the
magnitude is below the stated tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .laurent import LaurentPoly


@dataclass
class TerminatingVerdict:
    identity_id: str
    mode: str  # symbolic_exact | random_rational | numeric | numeric_limit | formal | window_exact
    params: Mapping[str, Any]
    residual: Any  # LaurentPoly | Fraction | numeric magnitude
    passed: bool
    tolerance: Any = None
    details: dict = field(default_factory=dict)

    @staticmethod
    def exact(identity_id, mode, params, residual, **details):
        if isinstance(residual, LaurentPoly):
            ok = residual.is_zero()
        else:
            ok = residual == 0
        return TerminatingVerdict(identity_id, mode, params, residual, ok, None, details)

    @staticmethod
    def numeric(identity_id, mode, params, magnitude, tolerance, **details):
        return TerminatingVerdict(
            identity_id, mode, params, magnitude, magnitude < tolerance, tolerance, details
        )

    def residual_str(self) -> str:
        r = self.residual
        if isinstance(r, LaurentPoly):
            return "0" if r.is_zero() else str(r)
        if isinstance(r, Fraction):
            return f"{r.numerator}/{r.denominator}" if r.denominator != 1 else str(r.numerator)
        if isinstance(r, int):
            return str(r)
        from .hp import nstr_det

        return nstr_det(r)

    def __str__(self):
        state = "PASS" if self.passed else "FAIL"
        return (
            f"[{state}] {self.identity_id} ({self.mode}) "
            f"{dict(self.params)} residual={self.residual_str()}"
        )
