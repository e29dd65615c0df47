"""Truncated-series tests: truncation, graded inversion, substitution,
and the valuation-budgeted factor products."""

import random
from fractions import Fraction

import pytest

from qtriple.errors import NotInvertible, WeightMapMismatch, WeightOverflow
from qtriple.laurent import LaurentPoly
from qtriple.series import (
    DEFAULT_GRADING,
    Inv,
    TruncatedSeries,
    WeightMap,
    series_product,
)

q = LaurentPoly.var("q")
a = LaurentPoly.var("a")
b = LaurentPoly.var("b")
z = LaurentPoly.var("z")
one = LaurentPoly.const(1)

WQ = WeightMap({"q": 1})
WAB = WeightMap({"a": 1, "b": 1})


def geometric(var_poly, wmap, order):
    acc = LaurentPoly.const(1)
    p = LaurentPoly.const(1)
    for _ in range(order):
        p = wmap.truncate(p * var_poly, order)
        if p.is_zero():
            break
        acc = acc + p
    return TruncatedSeries(acc, wmap, order)


def test_invert_geometric():
    s = TruncatedSeries(one - q, WQ, 3)
    assert s.invert() == geometric(q, WQ, 3)


def test_invert_two_variable_geometric():
    s = TruncatedSeries(one - a - b, WAB, 2)
    expected = TruncatedSeries(one + (a + b) + (a + b) ** 2, WAB, 2)
    assert s.invert() == expected


def test_mul_truncates():
    lhs = TruncatedSeries(one + q, WQ, 1)
    rhs = TruncatedSeries(one - q, WQ, 1)
    assert (lhs * rhs).body == one  # q^2 truncated away


def test_mul_agrees_with_poly_mul_then_truncate():
    rng = random.Random(42)
    for _ in range(200):
        f = _random_series_poly(rng)
        g = _random_series_poly(rng)
        n = rng.randint(0, 6)
        sf = TruncatedSeries(f, DEFAULT_GRADING, n)
        sg = TruncatedSeries(g, DEFAULT_GRADING, n)
        prod = sf * sg
        direct = DEFAULT_GRADING.truncate(
            DEFAULT_GRADING.truncate(f, n) * DEFAULT_GRADING.truncate(g, n),
            prod.order,
        )
        assert DEFAULT_GRADING.truncate(prod.body, n) == DEFAULT_GRADING.truncate(
            direct, n
        )


def _random_series_poly(rng, vars=("q", "a", "b", "z")):
    out = LaurentPoly.zero()
    for _ in range(rng.randint(1, 5)):
        mono = {}
        for v in vars:
            if rng.random() < 0.5:
                # keep weighted variables nonnegative so valuations stay >= 0
                lo = 0 if v in ("q", "a", "b") else -2
                mono[v] = rng.randint(lo, 3)
        out = out + LaurentPoly.monomial(Fraction(rng.randint(-5, 5)), mono)
    return out


def test_invert_then_mul_is_identity():
    rng = random.Random(17)
    for _ in range(100):
        body = one + _random_positive_val_poly(rng)
        n = rng.randint(0, 8)
        s = TruncatedSeries(body, DEFAULT_GRADING, n)
        prod = s * s.invert()
        assert prod.body == one


def _random_positive_val_poly(rng):
    out = LaurentPoly.zero()
    for _ in range(rng.randint(1, 4)):
        mono = {"q": rng.randint(0, 2)}
        v = rng.choice(("a", "b"))
        mono[v] = rng.randint(1, 2)
        out = out + LaurentPoly.monomial(rng.randint(-3, 3), mono)
    return out


def test_invert_requires_monomial_leading_component():
    # 1 - a/q has two weight-0 monomials under w(q)=w(a)=1
    wab_q = WeightMap({"q": 1, "a": 1})
    s = TruncatedSeries(one - a * q ** -1, wab_q, 3)
    with pytest.raises(NotInvertible):
        s.invert()
    # ... but is invertible when only a is weighted
    wa = WeightMap({"a": 1})
    inv = TruncatedSeries(one - a * q ** -1, wa, 3).invert()
    expected = sum(
        (LaurentPoly.monomial(1, {"a": j, "q": -j}) for j in range(4)),
        LaurentPoly.zero(),
    )
    assert inv.body == expected


def test_invert_with_monomial_valuation():
    # a*(1 - q) has leading monomial a at weight 1: inverse val -1.
    wmap = WeightMap({"q": 1, "a": 1})
    s = TruncatedSeries(a * (one - q), wmap, 6)
    inv = s.invert()
    assert inv.order == 4
    prod = DEFAULT_GRADING.truncate(inv.body * (a * (one - q)), inv.order)
    assert wmap.truncate(prod - one, 4).is_zero()


def test_weight_map_mismatch_raises():
    s1 = TruncatedSeries(one, WQ, 2)
    s2 = TruncatedSeries(one, WAB, 2)
    with pytest.raises(WeightMapMismatch):
        _ = s1 + s2


def test_orders_reconcile_to_minimum():
    s1 = TruncatedSeries(one + q, WQ, 5)
    s2 = TruncatedSeries(one + q ** 2, WQ, 3)
    assert (s1 + s2).order == 3
    assert (s1 * s2).order == 3


def test_substitute_weight_preserving():
    s = TruncatedSeries(a * z + b, DEFAULT_GRADING, 4)
    out = s.substitute({"a": b * z, "b": a * z, "z": z ** -1})
    assert out.body == b + a * z
    assert out.order == 4


def test_substitute_weight_changing_is_refused():
    s = TruncatedSeries(one + a, DEFAULT_GRADING, 4)
    with pytest.raises(WeightOverflow):
        s.substitute({"a": z})  # weight 1 -> 0 silently would be unsound
    # explicit new_order is accepted (caller owns the argument)
    out = s.substitute({"a": z}, new_order=0)
    assert out.body == one + z


def test_substitute_commutes_with_add_and_mul():
    rng = random.Random(3)
    bindings = {"a": b * z, "z": z ** -1}
    for _ in range(100):
        f = TruncatedSeries(_random_series_poly(rng), DEFAULT_GRADING, 5)
        g = TruncatedSeries(_random_series_poly(rng), DEFAULT_GRADING, 5)
        lhs = (f + g).substitute(bindings)
        rhs = f.substitute(bindings) + g.substitute(bindings)
        assert lhs == rhs
        lhs = (f * g).substitute(bindings)
        rhs = f.substitute(bindings) * g.substitute(bindings)
        assert lhs.eq_through_common_order(rhs)


def test_coefficient_of_weight_zero_variable():
    body = one - z * (one + q) + LaurentPoly.monomial(1, {"z": 2, "q": 1})
    s = TruncatedSeries(body, DEFAULT_GRADING, 6)
    cz2 = s.coefficient_of("z", 2)
    assert cz2.body == q and cz2.order == 6


def test_series_product_matches_bruteforce_with_negative_valuations():
    # Factors like those of a bilateral term: a big positive monomial
    # prefactor, then factors whose low terms have negative weight.
    wmap = DEFAULT_GRADING
    order = 6
    rng = random.Random(8)
    for k in range(2, 6):
        pref = LaurentPoly.monomial(1, {"q": k * (k - 1) // 2, "z": k})
        factors = [pref]
        for j in range(0, order + k):
            factors.append(
                one - LaurentPoly.monomial(1, {"a": 1, "q": 1 - k + j})
                - LaurentPoly.monomial(1, {"b": 1, "q": 1 + j})
            )
        got = series_product(factors, wmap, order)
        # brute force: exact product, then truncate
        exact = LaurentPoly.const(1)
        for f in factors:
            exact = exact * f
        assert got.body == wmap.truncate(exact, order)
        assert got.order == order


def test_series_product_with_inverses():
    wmap = DEFAULT_GRADING
    order = 8
    factors = [one - a * z, Inv(one - b), Inv(one - a - b), one + q]
    got = series_product(factors, wmap, order)
    # multiply back by the inverted factors: should recover the polynomial part
    back = got * (one - b) * (one - a - b)
    want = TruncatedSeries((one - a * z) * (one + q), wmap, order)
    assert back.eq_through_common_order(want)


def test_series_product_total_valuation_above_order_is_zero():
    wmap = DEFAULT_GRADING
    factors = [a ** 5, b ** 5]
    got = series_product(factors, wmap, 6)
    assert got.is_zero() and got.order == 6
