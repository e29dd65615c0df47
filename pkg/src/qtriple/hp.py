"""Arbitrary-precision complex evaluation (mpmath-backed).

Numeric verification never mixes with the exact symbolic path: identities
are evaluated at explicit complex points, at an explicit binary precision
P >= 64.  All mpmath work happens inside workprec(P) blocks; ComplexHP is
the carrier type at module boundaries and refuses arithmetic between
operands of different precision (round_to converts explicitly).

Infinite Pochhammer products stop once |x q^j| falls below 2^-(P+16); the
remaining factors multiply to 1 + O(2^-(P+15)) by the geometric tail
bound, which is below the working resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf, workprec

from .errors import NumericOverflow

GUARD_BITS = 16
MIN_PREC = 64


def _require_prec(prec: int):
    if prec < MIN_PREC:
        raise ValueError(f"precision must be >= {MIN_PREC} bits, got {prec}")


def to_mpc(value, prec: int) -> mpc:
    """Convert ints, Fractions, floats, complex, or mp types at precision."""
    with workprec(prec):
        if isinstance(value, Fraction):
            return mpc(mpf(value.numerator) / mpf(value.denominator))
        if isinstance(value, complex):
            return mpc(value.real, value.imag)
        return mpc(value)


@dataclass(frozen=True)
class ComplexHP:
    """A complex number pinned to a binary precision."""

    real: object
    imag: object
    prec: int

    @staticmethod
    def make(value, prec: int) -> "ComplexHP":
        _require_prec(prec)
        v = to_mpc(value, prec)
        return ComplexHP(v.real, v.imag, prec)

    def as_mpc(self) -> mpc:
        return mpc(self.real, self.imag)

    def round_to(self, prec: int) -> "ComplexHP":
        return ComplexHP.make(self.as_mpc(), prec)

    def _binary(self, other, op) -> "ComplexHP":
        if not isinstance(other, ComplexHP):
            other = ComplexHP.make(other, self.prec)
        if other.prec != self.prec:
            raise ValueError(
                f"mixed precisions {self.prec} and {other.prec}; "
                "round_to one of them first"
            )
        with workprec(self.prec):
            return ComplexHP.make(op(self.as_mpc(), other.as_mpc()), self.prec)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y)

    def __truediv__(self, other):
        return self._binary(other, lambda x, y: x / y)

    def abs(self):
        with workprec(self.prec):
            return abs(self.as_mpc())

    def __str__(self):
        return f"({self.real} + {self.imag}j)@{self.prec}"


def poch_num(x, k: int, q, prec: int):
    """(x; q)_k numerically; k may be any integer or None for infinity."""
    _require_prec(prec)
    with workprec(prec + GUARD_BITS):
        xq = to_mpc(x, prec + GUARD_BITS)
        qq = to_mpc(q, prec + GUARD_BITS)
        if k is None:
            return _poch_inf(xq, qq, prec)
        if k >= 0:
            out = mpc(1)
            for j in range(k):
                out *= 1 - xq * qq ** j
            return out
        den = mpc(1)
        for j in range(-k):
            den *= 1 - xq * qq ** (k + j)
        if den == 0:
            raise ZeroDivisionError("negative-index Pochhammer pole")
        return 1 / den


def _poch_inf(x: mpc, q: mpc, prec: int) -> mpc:
    if abs(q) >= 1:
        raise NumericOverflow("infinite product needs |q| < 1")
    cutoff = mpf(2) ** (-(prec + GUARD_BITS))
    out = mpc(1)
    term = x
    j = 0
    while abs(term) >= cutoff:
        out *= 1 - term
        term *= q
        j += 1
        if j > 10 * (prec + GUARD_BITS):
            raise NumericOverflow("infinite product failed to converge")
    return out


def poch_multi_num(xs, k, q, prec: int):
    with workprec(prec + GUARD_BITS):
        out = mpc(1)
        for x in xs:
            out *= poch_num(x, k, q, prec)
        return out


def hyp_partial_sum_num(
    kind: str,
    upper,
    lower,
    argument,
    q,
    k_min: int,
    k_max: int,
    prec: int,
):
    """Numeric partial sum of a phi/psi series over [k_min, k_max].

    The unilateral kind divides each term by (q; q)_k as the definition
    requires; k_min must then be 0.
    """
    if kind == "unilateral_phi" and k_min != 0:
        raise ValueError("unilateral series start at k = 0")
    _require_prec(prec)
    wp = prec + GUARD_BITS
    with workprec(wp):
        zq = to_mpc(argument, wp)
        qq = to_mpc(q, wp)
        total = mpc(0)
        for k in range(k_min, k_max + 1):
            term = zq ** k
            for up in upper:
                term *= poch_num(up, k, q, prec)
            lowers = list(lower) + ([q] if kind == "unilateral_phi" else [])
            for low in lowers:
                if k >= 0:
                    term /= poch_num(low, k, q, prec)
                else:
                    # 1/(low)_k = (low*q^k; q)_{-k}: a zero factor here just
                    # kills the term (e.g. the k < 0 tail when low = q).
                    term *= poch_num(to_mpc(low, wp) * qq ** k, -k, q, prec)
            total += term
        return total


def rel_residual(lhs, rhs, prec: int):
    """|lhs - rhs| / max(|lhs|, |rhs|, 1) at working precision."""
    with workprec(prec + GUARD_BITS):
        l = to_mpc(lhs, prec + GUARD_BITS)
        r = to_mpc(rhs, prec + GUARD_BITS)
        scale = max(abs(l), abs(r), mpf(1))
        return abs(l - r) / scale


def nstr_det(x, digits: int = 8) -> str:
    """Deterministic short string for a nonnegative magnitude."""
    from mpmath import nstr

    return nstr(mpf(x), digits)
