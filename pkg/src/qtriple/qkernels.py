"""q-Pochhammer symbols, q-binomial coefficients, the q-exponential
expansion, and generic unilateral/bilateral hypergeometric partial sums —
all as exact graded series.

A Pochhammer (x; q)_k is represented as a list of elementary factors
(1 - x*q^j), plain for products and Inv-wrapped for the graded inverses a
negative index introduces.  Returning the factor list (poch_factors) rather
than only the multiplied-out series lets bilateral-term code assemble one
global product whose truncation budget spans all factors at once; poch()
is the standalone product.

Infinite products materialize only the factors that can touch weights up
to the requested order.  The cutoff accounts for the factors' own negative
valuations (S = sum of negative factor valuations): factor j is dropped
only when val(x*q^j) > order - S, so dropping it provably cannot change
any monomial of weight <= order.  This needs the base monomial to carry
positive weight; otherwise the product is not a graded series and is
refused.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInvertible, WeightOverflow
from .laurent import LaurentPoly, ONE
from .series import Factor, Inv, TruncatedSeries, WeightMap, series_product

QMONO = LaurentPoly.var("q")

INF = None  # sentinel accepted anywhere an index k may be "infinity"


def binom2(k: int) -> int:
    """Binomial coefficient C(k, 2) = k*(k-1)/2, valid for any integer k."""
    return k * (k - 1) // 2


def _scaled(x: LaurentPoly, base: LaurentPoly, j: int) -> LaurentPoly:
    return x * base ** j


def poch_factors(
    x: LaurentPoly,
    k: int | None,
    wmap: WeightMap,
    order: int,
    base: LaurentPoly = QMONO,
) -> list[Factor]:
    """Elementary factors of (x; base)_k, exact through `order` in the
    context of the product they will join (pass the contextual order:
    global order minus the valuation of all other factors)."""
    if x.is_zero():
        return []
    if k is not None:
        if k >= 0:
            return [ONE - _scaled(x, base, j) for j in range(k)]
        # (x)_k = 1 / (x*base^k; base)_{-k}
        return [Inv(ONE - _scaled(x, base, k + j)) for j in range(-k)]
    # Infinite product.
    vx = wmap.valuation(x)
    if vx is None:
        return []
    vb = wmap.valuation(base)
    if len(base.terms) != 1 or vb is None or vb <= 0:
        if vx > order:
            return []
        raise WeightOverflow(
            "infinite Pochhammer needs a positively-weighted monomial base"
        )
    s_neg = 0
    j = 0
    while vx + j * vb < 0:
        s_neg += vx + j * vb
        j += 1
    factors = []
    j = 0
    while vx + j * vb <= order - s_neg:
        factors.append(ONE - _scaled(x, base, j))
        j += 1
    return factors


def poch_poly(x: LaurentPoly, k: int, base: LaurentPoly = QMONO) -> LaurentPoly:
    """(x; base)_k for k >= 0 as an exact (untruncated) Laurent polynomial."""
    if k < 0:
        raise ValueError("poch_poly needs k >= 0; negative indices invert")
    out = ONE
    for j in range(k):
        out = out * (ONE - _scaled(x, base, j))
    return out


def poch(
    x: LaurentPoly,
    k: int | None,
    wmap: WeightMap,
    order: int,
    base: LaurentPoly = QMONO,
) -> TruncatedSeries:
    """(x; base)_k as a truncated series, exact through `order`.

    k >= 0 gives the finite product prod_{j<k} (1 - x*base^j); k < 0 the
    graded inverse 1/(x*base^k; base)_{-k}; k = None the infinite product.
    """
    return series_product(poch_factors(x, k, wmap, order, base), wmap, order)


def inf_neg_budget(
    x: LaurentPoly, wmap: WeightMap, base: LaurentPoly = QMONO
) -> int:
    """Sum of the negative factor valuations of (x; base)_inf (<= 0)."""
    vx = wmap.valuation(x)
    vb = wmap.valuation(base)
    if vx is None or vx >= 0:
        return 0
    if vb is None or vb <= 0:
        return 0
    s = 0
    j = 0
    while vx + j * vb < 0:
        s += vx + j * vb
        j += 1
    return s


def poch_multi(
    args: list[LaurentPoly],
    k: int | None,
    wmap: WeightMap,
    order: int,
    base: LaurentPoly = QMONO,
) -> TruncatedSeries:
    """(a_1, ..., a_m; base)_k = prod_i (a_i; base)_k.

    For k = infinity each argument's materialization cutoff is widened by
    the negative-valuation budget of the *other* arguments, so mixing
    arguments with negative-weight content stays sound.
    """
    factors: list[Factor] = []
    if k is None:
        budgets = [inf_neg_budget(x, wmap, base) for x in args]
        total_budget = sum(budgets)
        for x, own in zip(args, budgets):
            factors.extend(
                poch_factors(x, None, wmap, order - (total_budget - own), base)
            )
    else:
        for x in args:
            factors.extend(poch_factors(x, k, wmap, order, base))
    return series_product(factors, wmap, order)


def invert_factors(factors: list[Factor]) -> list[Factor]:
    """Factors of the reciprocal product."""
    return [Inv(f) if isinstance(f, LaurentPoly) else f.poly for f in factors]


def graded_product_with_inf(
    prefactors: list[Factor],
    inf_args: list[LaurentPoly],
    wmap: WeightMap,
    order: int,
    base: LaurentPoly = QMONO,
) -> TruncatedSeries:
    """prod(prefactors) * prod_i (inf_args[i]; base)_inf, exact through
    `order`.  Each infinite product is materialized against the order
    shifted by the valuations of everything else in the product (the
    finite prefactors and the other infinite products' negative budgets),
    which is what makes bilateral summands with negative-weight content
    come out exact."""
    pref_val = 0
    for f in prefactors:
        v = wmap.valuation(f.poly) if isinstance(f, Inv) else wmap.valuation(f)
        if v is None:
            if isinstance(f, Inv):
                raise NotInvertible("cannot invert the zero polynomial")
            return TruncatedSeries(LaurentPoly.zero(), wmap, order)
        pref_val += -v if isinstance(f, Inv) else v
    budgets = [inf_neg_budget(x, wmap, base) for x in inf_args]
    total_budget = sum(budgets)
    factors: list[Factor] = list(prefactors)
    for x, own in zip(inf_args, budgets):
        ctx_order = order - pref_val - (total_budget - own)
        factors.extend(poch_factors(x, None, wmap, ctx_order, base))
    return series_product(factors, wmap, order)


_QBINOM_CACHE: dict = {(0, 0): LaurentPoly.const(1)}


def q_binom(n: int, k: int) -> LaurentPoly:
    """Gaussian binomial coefficient as an exact polynomial in q.

    Computed by the q-Pascal recurrence; equals
    (q;q)_n / ((q;q)_k (q;q)_{n-k}) (the quotient form is the test oracle).
    Zero for k < 0 or k > n.
    """
    if k < 0 or k > n:
        return LaurentPoly.zero()
    got = _QBINOM_CACHE.get((n, k))
    if got is None:
        got = q_binom(n - 1, k - 1) + LaurentPoly.var("q", k) * q_binom(n - 1, k)
        _QBINOM_CACHE[(n, k)] = got
    return got


def q_exp_expansion(
    x: LaurentPoly, wmap: WeightMap, order: int
) -> TruncatedSeries:
    """Partial sum of sum_j (-1)^j q^(C(j,2)) x^j / (q;q)_j, which equals
    (x; q)_inf through the order.  Requires val(x) >= 1 so the j-sum
    truncates."""
    if x.is_zero():
        return TruncatedSeries.one(wmap, order)
    vx = wmap.valuation(x)
    wq = wmap.weight_of_var("q")
    if vx is None or vx < 1:
        raise WeightOverflow("q-exponential expansion needs val(x) >= 1")
    total = TruncatedSeries(LaurentPoly.zero(), wmap, order)
    j = 0
    while j * vx + binom2(j) * wq <= order:
        sign = 1 if j % 2 == 0 else -1
        head = LaurentPoly.monomial(sign, {"q": binom2(j)})
        factors: list[Factor] = [head, x ** j]
        factors += [Inv(ONE - LaurentPoly.var("q", t)) for t in range(1, j + 1)]
        total = total + series_product(factors, wmap, order)
        j += 1
    return total


@dataclass(frozen=True)
class HypSpec:
    """Parameters of an s-phi-(s-1) (unilateral) or s-psi-s (bilateral)
    basic hypergeometric series.  Upper/lower entries are the Pochhammer
    arguments; `argument` is the series variable."""

    kind: str  # "unilateral_phi" | "bilateral_psi"
    upper: tuple
    lower: tuple
    argument: LaurentPoly

    def __post_init__(self):
        if self.kind == "unilateral_phi":
            if len(self.upper) != len(self.lower) + 1:
                raise ValueError("phi series needs one more upper parameter")
        elif self.kind == "bilateral_psi":
            if len(self.upper) != len(self.lower):
                raise ValueError("psi series needs equal parameter counts")
        else:
            raise ValueError(f"unknown series kind {self.kind!r}")


def hyp_term_factors(
    spec: HypSpec, k: int, wmap: WeightMap, order: int
) -> list[Factor]:
    """Factor list of the k-th summand (argument power included)."""
    factors: list[Factor] = []
    if k >= 0:
        factors.append(spec.argument ** k)
    else:
        if len(spec.argument.terms) != 1:
            raise NotInvertible("negative index needs a monomial argument")
        factors.append(spec.argument ** k)
    for up in spec.upper:
        factors.extend(poch_factors(up, k, wmap, order))
    lowers = list(spec.lower)
    if spec.kind == "unilateral_phi":
        lowers.append(QMONO)
    for low in lowers:
        factors.extend(invert_factors(poch_factors(low, k, wmap, order)))
    return factors


def hyp_partial_sum(
    spec: HypSpec, k_min: int, k_max: int, wmap: WeightMap, order: int
) -> TruncatedSeries:
    """Exact truncated partial sum over the window [k_min, k_max]."""
    if spec.kind == "unilateral_phi" and k_min != 0:
        raise ValueError("unilateral series start at k = 0")
    total = TruncatedSeries(LaurentPoly.zero(), wmap, order)
    for k in range(k_min, k_max + 1):
        total = total + series_product(
            hyp_term_factors(spec, k, wmap, order), wmap, order
        )
    return total


def poch_eval(x: Fraction, k: int, q: Fraction):
    """(x; q)_k at an exact rational point.  Raises ZeroDivisionError on a
    pole of a negative-index Pochhammer (callers treat that as PoleHit)."""
    if k >= 0:
        out = Fraction(1)
        for j in range(k):
            out *= 1 - x * q ** j
        return out
    den = Fraction(1)
    for j in range(-k):
        den *= 1 - x * q ** (k + j)
    return 1 / den


def poch_multi_eval(xs, k: int, q: Fraction):
    out = Fraction(1)
    for x in xs:
        out *= poch_eval(x, k, q)
    return out
