"""Sparse multivariate Laurent polynomials over exact rationals.

A polynomial is a dict mapping monomials to nonzero rational coefficients.
A monomial is a tuple of (variable, exponent) pairs with nonzero integer
exponents (negative allowed), sorted in the fixed global variable order

    q < a < b < c < z < x1 < x2 < ... < (anything else, alphabetically)

so equal monomials always have identical keys.  The empty tuple is the
constant monomial.  Coefficients are Python ints when integral and
``fractions.Fraction`` otherwise; the two mix transparently and keeping
ints keeps the common all-integer computations fast.

The zero polynomial has an empty term dict.  All operations are exact and
return canonical values (no zero coefficients, sorted monomial keys).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import LimitUndefined

Coeff = Union[int, Fraction]
Monomial = tuple  # tuple[tuple[str, int], ...]

_FIXED_ORDER = {"q": 0, "a": 1, "b": 2, "c": 3, "z": 4}


def var_sort_key(name: str):
    """Sort key realizing the global variable order."""
    if name in _FIXED_ORDER:
        return (0, _FIXED_ORDER[name], "")
    if name.startswith("x") and name[1:].isdigit():
        return (1, int(name[1:]), "")
    return (2, 0, name)


def _norm_coeff(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator  # plain int is faster in later arithmetic
    return c


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    """Merge two sorted monomials, adding exponents."""
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i, j = 0, 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            e = e1 + e2
            if e:
                out.append((v1, e))
            i += 1
            j += 1
        elif var_sort_key(v1) < var_sort_key(v2):
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def mono_pow(m: Monomial, k: int) -> Monomial:
    if k == 0:
        return ()
    return tuple((v, e * k) for v, e in m)


class LaurentPoly:
    """Immutable-by-convention sparse Laurent polynomial."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Coeff] | None = None):
        # Trusted constructor: callers must pass canonical terms.  Use the
        # factory functions below for anything built from user input.
        self.terms = dict(terms) if terms else {}

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def const(c: Coeff) -> "LaurentPoly":
        c = _norm_coeff(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
        return LaurentPoly({(): c} if c else {})

    @staticmethod
    def var(name: str, exp: int = 1) -> "LaurentPoly":
        if exp == 0:
            return LaurentPoly({(): 1})
        return LaurentPoly({((name, exp),): 1})

    @staticmethod
    def monomial(coeff: Coeff, vars_exps: Mapping[str, int]) -> "LaurentPoly":
        coeff = _norm_coeff(coeff)
        if not coeff:
            return LaurentPoly()
        mono = tuple(
            sorted(
                ((v, e) for v, e in vars_exps.items() if e),
                key=lambda p: var_sort_key(p[0]),
            )
        )
        return LaurentPoly({mono: coeff})

    # -- predicates and views ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(): 1}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def variables(self) -> set:
        out = set()
        for mono in self.terms:
            for v, _ in mono:
                out.add(v)
        return out

    def exponent_range(self, name: str) -> tuple[int, int]:
        """(min, max) exponent of `name` over all terms; (0, 0) if absent."""
        lo, hi = 0, 0
        first = True
        for mono in self.terms:
            e = dict(mono).get(name, 0)
            if first:
                lo = hi = e
                first = False
            else:
                lo = min(lo, e)
                hi = max(hi, e)
        return (lo, hi)

    def constant_term(self) -> Coeff:
        return self.terms.get((), 0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = _norm_coeff(s)
            else:
                out.pop(mono, None)
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly()
            return LaurentPoly(
                {m: _norm_coeff(c * other) for m, c in self.terms.items()}
            )
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return LaurentPoly()
        # Iterate the smaller operand on the outside: fewer dict rebuilds.
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                mono = mono_mul(m1, m2)
                s = out.get(mono, 0) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return LaurentPoly({m: _norm_coeff(c) for m, c in out.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self.terms) == 1:  # monomial inverse is exact
                (mono, c), = self.terms.items()
                return LaurentPoly({mono_pow(mono, k): _norm_coeff(Fraction(c) ** k)})
            raise ValueError("negative power of a non-monomial LaurentPoly")
        result = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- structure ----------------------------------------------------------

    def coefficient_of(self, name: str, exp: int) -> "LaurentPoly":
        """Coefficient of name**exp, with `name` removed from the result."""
        out = {}
        for mono, c in self.terms.items():
            d = dict(mono)
            if d.pop(name, 0) != exp:
                continue
            rest = tuple(
                sorted(d.items(), key=lambda p: var_sort_key(p[0]))
            )
            out[rest] = c
        return LaurentPoly(out)

    def subs(self, bindings: Mapping[str, "LaurentPoly"]) -> "LaurentPoly":
        """Exact substitution.  Negative exponents require the binding image
        to be a single monomial (so its inverse is again a monomial)."""
        out = LaurentPoly()
        pow_cache: dict = {}
        for mono, c in self.terms.items():
            term = LaurentPoly({(): c})
            for v, e in mono:
                img = bindings.get(v)
                if img is None:
                    term = term * LaurentPoly({((v, e),): 1})
                    continue
                key = (v, e)
                p = pow_cache.get(key)
                if p is None:
                    if e >= 0:
                        p = img ** e
                    else:
                        if len(img.terms) != 1:
                            raise LimitUndefined(
                                f"negative exponent of {v} with non-monomial image"
                            )
                        (imono, ic), = img.terms.items()
                        p = LaurentPoly(
                            {mono_pow(imono, e): _norm_coeff(Fraction(ic) ** e)}
                        )
                    pow_cache[key] = p
                term = term * p
            out = out + term
        return out

    def limit_to_zero(self, name: str) -> "LaurentPoly":
        """Limit as `name` -> 0: drop positive exponents, keep exponent 0,
        raise LimitUndefined on surviving negative exponents."""
        out = {}
        for mono, c in self.terms.items():
            e = dict(mono).get(name, 0)
            if e < 0:
                raise LimitUndefined(f"limit {name}->0 of term with {name}^{e}")
            if e == 0:
                out[mono] = c
        return LaurentPoly(out)

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a point.  Values may be Fractions (exact) or any
        numeric type supporting ** with integer exponents."""
        total = None
        for mono, c in self.terms.items():
            term = Fraction(c) if isinstance(c, int) else c
            for v, e in mono:
                term = term * values[v] ** e
            total = term if total is None else total + term
        if total is None:
            return Fraction(0)
        return total

    # -- display -------------------------------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = "".join(
                f"*{v}**{e}" if e != 1 else f"*{v}" for v, e in mono
            )
            parts.append(f"{c}{factors}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


# Shared symbols used throughout the identity modules.
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly.zero()


def Q(name: str = "q") -> LaurentPoly:
    return LaurentPoly.var(name)


def xvar(i: int) -> LaurentPoly:
    """The i-th lattice variable x_i (1-based)."""
    return LaurentPoly.var(f"x{i}")


def poly_sum(items: Iterable[LaurentPoly]) -> LaurentPoly:
    acc: dict = {}
    for p in items:
        for mono, c in p.terms.items():
            s = acc.get(mono, 0) + c
            if s:
                acc[mono] = _norm_coeff(s)
            else:
                acc.pop(mono, None)
    return LaurentPoly(acc)
