"""Graded truncated Laurent series.

A TruncatedSeries is a LaurentPoly `body` together with a WeightMap (a
nonnegative integer weight per variable, default 0) and an order N: the
series is known exactly on every monomial of total weight <= N and is
silently unknown above.  All soundness bookkeeping lives here:

* add/sub reconcile orders to the minimum;
* mul propagates exactness as min(N1 + val2, N2 + val1), which reduces to
  min(N1, N2) for ordinary (nonnegative-valuation) series but stays sound
  when bodies carry negative-weight Laurent monomials;
* invert requires the minimal-weight homogeneous component to be a single
  monomial (graded invertibility) and expands the geometric series;
* substitute accepts monomial (or zero) images and preserves the order
  only when every image has the same weight as the variable it replaces —
  anything else must state its target order explicitly (the caller then
  owns the soundness argument) or is refused with WeightOverflow rather
  than mis-truncated.

`series_product` multiplies a list of exact polynomial factors and graded
inverses while threading the total valuation budget of the list, so that a
product whose individual factors have negative valuation (bilateral series
terms do) still comes out exact at the requested order: the running
product is pruned at order minus the valuation still owed by the remaining
factors, and each inverse is expanded exactly as far as the budget
requires.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import NotInvertible, WeightMapMismatch, WeightOverflow
from .laurent import Coeff, LaurentPoly, Monomial, mono_pow


class WeightMap:
    """Per-variable nonnegative integer weights; unlisted variables weigh 0."""

    __slots__ = ("weights", "_cache")

    def __init__(self, weights: Mapping[str, int] | None = None):
        w = {v: int(e) for v, e in (weights or {}).items() if e}
        if any(e < 0 for e in w.values()):
            raise ValueError("weights must be nonnegative")
        self.weights = w
        self._cache: dict = {}

    def weight_of_var(self, name: str) -> int:
        return self.weights.get(name, 0)

    def weight(self, mono: Monomial) -> int:
        w = self._cache.get(mono)
        if w is None:
            w = 0
            for v, e in mono:
                wv = self.weights.get(v, 0)
                if wv:
                    w += wv * e
            self._cache[mono] = w
        return w

    def valuation(self, poly: LaurentPoly) -> int | None:
        """Minimal total weight over the terms; None for the zero poly."""
        if not poly.terms:
            return None
        return min(self.weight(m) for m in poly.terms)

    def truncate(self, poly: LaurentPoly, order: int) -> LaurentPoly:
        return LaurentPoly(
            {m: c for m, c in poly.terms.items() if self.weight(m) <= order}
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightMap) and self.weights == other.weights

    def __hash__(self):
        return hash(frozenset(self.weights.items()))

    def __repr__(self):
        return f"WeightMap({self.weights})"


# The single grading under which every bilateral identity here is a genuine
# formal-series identity: q, a, b weigh 1; z, c and the x_i weigh 0.
DEFAULT_GRADING = WeightMap({"q": 1, "a": 1, "b": 1})


def _check_same(lhs: "TruncatedSeries", rhs: "TruncatedSeries"):
    if lhs.wmap != rhs.wmap:
        raise WeightMapMismatch(f"{lhs.wmap} vs {rhs.wmap}")


class TruncatedSeries:
    """A Laurent series known exactly on all monomials of weight <= order."""

    __slots__ = ("body", "wmap", "order")

    def __init__(self, body: LaurentPoly, wmap: WeightMap, order: int):
        if order < 0:
            raise WeightOverflow(f"series order fell below zero ({order})")
        self.body = wmap.truncate(body, order)
        self.wmap = wmap
        self.order = order

    # -- construction ------------------------------------------------------

    @staticmethod
    def one(wmap: WeightMap, order: int) -> "TruncatedSeries":
        return TruncatedSeries(LaurentPoly.const(1), wmap, order)

    @staticmethod
    def of(poly: LaurentPoly, wmap: WeightMap, order: int) -> "TruncatedSeries":
        return TruncatedSeries(poly, wmap, order)

    # -- views ---------------------------------------------------------------

    def valuation(self) -> int | None:
        """Exact valuation when the body is nonzero; None when nothing is
        known to be nonzero (the true valuation then exceeds the order)."""
        return self.wmap.valuation(self.body)

    def _val_lower_bound(self) -> int:
        v = self.valuation()
        return self.order + 1 if v is None else v

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.wmap == other.wmap
            and self.order == other.order
            and self.body == other.body
        )

    def eq_through_common_order(self, other: "TruncatedSeries") -> bool:
        _check_same(self, other)
        n = min(self.order, other.order)
        return self.wmap.truncate(self.body - other.body, n).is_zero()

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = TruncatedSeries.of(
                other if isinstance(other, LaurentPoly) else LaurentPoly.const(other),
                self.wmap,
                self.order,
            )
        _check_same(self, other)
        n = min(self.order, other.order)
        return TruncatedSeries(self.body + other.body, self.wmap, n)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self.body, self.wmap, self.order)

    def __sub__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = TruncatedSeries.of(
                other if isinstance(other, LaurentPoly) else LaurentPoly.const(other),
                self.wmap,
                self.order,
            )
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.body * other, self.wmap, self.order)
        if isinstance(other, LaurentPoly):
            # Exact polynomial factor: exactness shifts by its valuation.
            v = self.wmap.valuation(other)
            if v is None:
                return TruncatedSeries(LaurentPoly.zero(), self.wmap, self.order)
            return TruncatedSeries(self.body * other, self.wmap, self.order + v)
        _check_same(self, other)
        n = min(
            self.order + other._val_lower_bound(),
            other.order + self._val_lower_bound(),
        )
        return TruncatedSeries(self.body * other.body, self.wmap, n)

    __rmul__ = __mul__

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise WeightOverflow(
                f"cannot extend exactness from order {self.order} to {order}"
            )
        return TruncatedSeries(self.body, self.wmap, order)

    def leading(self) -> tuple[Monomial, Coeff, int]:
        """(monomial, coeff, weight) of the minimal-weight component when it
        is a single monomial; raises NotInvertible otherwise."""
        v = self.valuation()
        if v is None:
            raise NotInvertible("zero (to this order) series has no leading term")
        lead = [(m, c) for m, c in self.body.terms.items() if self.wmap.weight(m) == v]
        if len(lead) != 1:
            raise NotInvertible(
                f"minimal-weight component has {len(lead)} monomials at weight {v}"
            )
        mono, coeff = lead[0]
        return mono, coeff, v

    def invert(self) -> "TruncatedSeries":
        """Graded inverse.  Exact through order N - 2*max(v, 0) where v is
        the valuation (v = 0 in every use in this package)."""
        mono, coeff, v = self.leading()
        new_order = self.order - 2 * max(v, 0)
        if new_order < 0:
            raise WeightOverflow(
                f"inverse of valuation-{v} series exact only below order 0"
            )
        lead_inv = LaurentPoly({mono_pow(mono, -1): Fraction(1) / Fraction(coeff)})
        # self = lead * (1 + u) with val(u) >= 1.
        u = (self.body - LaurentPoly({mono: coeff})) * lead_inv
        m_order = new_order + v  # the geometric part must be exact through here
        u = self.wmap.truncate(u, m_order)
        acc = LaurentPoly.const(1)
        power = LaurentPoly.const(1)
        sign = 1
        for _ in range(m_order):
            power = self.wmap.truncate(power * u, m_order)
            if power.is_zero():
                break
            sign = -sign
            acc = acc + (power if sign > 0 else -power)
        return TruncatedSeries(acc * lead_inv, self.wmap, new_order)

    # -- structural operations ---------------------------------------------------

    def coefficient_of(self, name: str, exp: int) -> "TruncatedSeries":
        """The coefficient series of name**exp (variable removed).  Order
        shifts by the weight the extracted power carried (zero for the
        weight-0 variables this is used on)."""
        shift = self.wmap.weight_of_var(name) * exp
        return TruncatedSeries(
            self.body.coefficient_of(name, exp), self.wmap, self.order - shift
        )

    def substitute(
        self,
        bindings: Mapping[str, LaurentPoly],
        new_order: int | None = None,
    ) -> "TruncatedSeries":
        """Substitute monomial (or zero) images for variables.

        A zero image is always order-sound: it only removes monomials, and
        every surviving monomial keeps its weight."""
        for v, img in bindings.items():
            if img.is_zero():
                continue
            if len(img.terms) != 1:
                raise WeightOverflow(
                    f"series substitution requires monomial images ({v} is not)"
                )
            (imono,) = img.terms
            if (
                self.wmap.weight(imono) != self.wmap.weight_of_var(v)
                and new_order is None
            ):
                raise WeightOverflow(
                    f"image of {v} changes weight "
                    f"{self.wmap.weight_of_var(v)} -> {self.wmap.weight(imono)}; "
                    "pass new_order explicitly"
                )
        order = self.order if new_order is None else new_order
        return TruncatedSeries(self.body.subs(bindings), self.wmap, order)

    def __str__(self):
        return f"{self.body} + O(weight {self.order + 1})"

    def __repr__(self):
        return f"TruncatedSeries({self.body!r}, order={self.order})"


class Inv:
    """Marker wrapping a graded-invertible exact polynomial factor for
    series_product; the product machinery inverts it exactly as far as the
    valuation budget of the whole factor list demands."""

    __slots__ = ("poly",)

    def __init__(self, poly: LaurentPoly):
        self.poly = poly


Factor = Union[LaurentPoly, Inv]


def series_product(
    factors: Sequence[Factor], wmap: WeightMap, order: int
) -> TruncatedSeries:
    """Exact truncated product of polynomial factors and graded inverses.

    Soundness: let v_i be the true valuation of factor i (for an inverse,
    minus the valuation of the wrapped polynomial — exact because graded
    invertibility forces a monomial leading term) and V = sum v_i.  Each
    inverse is expanded through order - (V - v_i), and after each step the
    running product is pruned at order - (valuation owed by the remaining
    factors).  Induction gives a product exact through `order`; a total
    valuation above `order` short-circuits to zero.
    """
    vals = []
    for f in factors:
        if isinstance(f, Inv):
            v = wmap.valuation(f.poly)
            if v is None:
                raise NotInvertible("cannot invert the zero polynomial")
            vals.append(-v)
        else:
            v = wmap.valuation(f)
            if v is None:
                return TruncatedSeries(LaurentPoly.zero(), wmap, order)
            vals.append(v)
    total = sum(vals)
    if total > order:
        return TruncatedSeries(LaurentPoly.zero(), wmap, order)

    suffix = [0] * (len(factors) + 1)
    for i in range(len(factors) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + vals[i]

    body = LaurentPoly.const(1)
    for i, f in enumerate(factors):
        bound = order - suffix[i + 1]
        if isinstance(f, Inv):
            dval = -vals[i]
            # Exact through the budgeted order, but never below the
            # inverse's own leading monomial.
            needed = max(order - (total - vals[i]), vals[i])
            src = TruncatedSeries(f.poly, wmap, needed + 2 * max(dval, 0))
            body = body * src.invert().body
        else:
            body = body * f
        body = wmap.truncate(body, bound)
    return TruncatedSeries(body, wmap, order)


def poly_product_truncated(
    factors: Iterable[LaurentPoly], wmap: WeightMap, order: int
) -> TruncatedSeries:
    """series_product specialized to exact polynomial factors."""
    return series_product(list(factors), wmap, order)
