"""Pochhammer/q-binomial kernels against brute-force oracles."""

import random
from fractions import Fraction

import pytest
from mpmath import mpf, workprec

from qtriple.errors import WeightOverflow
from qtriple.hp import hyp_partial_sum_num, poch_multi_num, poch_num
from qtriple.laurent import LaurentPoly
from qtriple.qkernels import (
    HypSpec,
    binom2,
    hyp_partial_sum,
    poch,
    poch_multi,
    q_binom,
    q_exp_expansion,
)
from qtriple.series import DEFAULT_GRADING, TruncatedSeries, WeightMap

q = LaurentPoly.var("q")
a = LaurentPoly.var("a")
b = LaurentPoly.var("b")
z = LaurentPoly.var("z")
one = LaurentPoly.const(1)

WA = WeightMap({"a": 1})
WQ = WeightMap({"q": 1})


def qq_poch_poly(n):
    """(q; q)_n as an exact polynomial (brute force)."""
    out = one
    for j in range(n):
        out = out * (one - LaurentPoly.var("q", j + 1))
    return out


def test_poch_empty_product():
    s = poch(a, 0, DEFAULT_GRADING, 5)
    assert s.body == one


def test_poch_finite_definition():
    s = poch(a, 2, DEFAULT_GRADING, 8)
    assert s.body == (one - a) * (one - a * q)


def test_poch_negative_one_geometric():
    s = poch(a, -1, WA, 3)
    expected = sum(
        (LaurentPoly.monomial(1, {"a": j, "q": -j}) for j in range(4)),
        LaurentPoly.zero(),
    )
    assert s.body == expected


def test_poch_functional_equation():
    # (x)_{k+1} = (x)_k * (1 - x q^k) for k in [-8, 8], random monomial x.
    # Grading w(a)=1 keeps every factor graded-invertible whatever the
    # q-exponent (negative indices invert factors 1 - x q^j).
    rng = random.Random(314)
    for _ in range(20):
        x = LaurentPoly.monomial(
            rng.randint(1, 3), {"a": rng.randint(1, 2), "q": rng.randint(-3, 3)}
        )
        for k in range(-8, 9):
            lhs = poch(x, k + 1, WA, 8)
            step = one - x * q ** k
            rhs = poch(x, k, WA, 8) * step
            assert lhs.eq_through_common_order(rhs)


def test_poch_inf_quotient_equals_finite():
    # (x)_inf / (x q^k)_inf = (x)_k for k in [-5, 5].  The infinite
    # products need q weighted, and graded soundness of the shifted
    # factors needs val(x q^k) >= 1, hence the q^6 floor.
    rng = random.Random(2718)
    for _ in range(10):
        x = LaurentPoly.monomial(1, {"a": 1, "q": 6 + rng.randint(0, 2)})
        for k in range(-5, 6):
            n = 8
            num = poch(x, None, DEFAULT_GRADING, n)
            den = poch(x * q ** k, None, DEFAULT_GRADING, n)
            lhs = num * den.invert()
            rhs = poch(x, k, DEFAULT_GRADING, n)
            assert lhs.eq_through_common_order(rhs)


def test_poch_multi_basics():
    assert poch_multi([a, b], 1, DEFAULT_GRADING, 6).body == (one - a) * (one - b)
    assert poch_multi([], 7, DEFAULT_GRADING, 6).body == one


def test_poch_multi_triple_product_factors():
    # (q, z, q/z)_inf at order 5 against the brute-force materialized product.
    wmap = DEFAULT_GRADING
    order = 5
    got = poch_multi([q, z, q * z ** -1], None, wmap, order)
    exact = one
    for j in range(order + 2):
        for arg in (q, z, q * z ** -1):
            f = one - arg * q ** j
            exact = exact * f
    assert got.body == wmap.truncate(exact, order)


def test_q_binom_oracle_and_values():
    # multiply-back oracle: [n k] (q)_k (q)_{n-k} == (q)_n
    for n in range(0, 9):
        for k in range(0, n + 1):
            assert q_binom(n, k) * qq_poch_poly(k) * qq_poch_poly(n - k) == qq_poch_poly(n)
    assert q_binom(2, 1) == one + q
    assert q_binom(4, 2) == one + q + 2 * q ** 2 + q ** 3 + q ** 4
    for n in range(6):
        assert q_binom(n, 0) == one
    assert q_binom(3, -1).is_zero() and q_binom(3, 4).is_zero()


def test_q_binom_symmetry_and_pascal():
    for n in range(1, 13):
        for k in range(0, n + 1):
            assert q_binom(n, k) == q_binom(n, n - k)
            assert q_binom(n, k) == q_binom(n - 1, k - 1) + q ** k * q_binom(n - 1, k)


def test_q_exp_expansion_examples():
    wz = WeightMap({"q": 1, "z": 1})
    s = q_exp_expansion(z, wz, 2)
    assert s.body == one - z - z * q
    assert q_exp_expansion(LaurentPoly.zero(), DEFAULT_GRADING, 4).body == one
    with pytest.raises(WeightOverflow):
        q_exp_expansion(z, DEFAULT_GRADING, 4)  # z weighs 0 there


def test_q_exp_expansion_matches_poch():
    rng = random.Random(41)
    for _ in range(20):
        x = LaurentPoly.monomial(
            rng.randint(1, 2),
            {"a": rng.randint(1, 2), "q": rng.randint(0, 3), "z": rng.randint(-1, 1)},
        )
        n = rng.randint(0, 8)
        assert q_exp_expansion(x, DEFAULT_GRADING, n) == poch(x, None, DEFAULT_GRADING, n)


def test_phi10_terminating_case():
    # 1-phi-0 with upper q^{-n}, n=1: partial sum over [0, 1] equals (z/q; q)_1.
    spec = HypSpec("unilateral_phi", (q ** -1,), (), z)
    got = hyp_partial_sum(spec, 0, 1, DEFAULT_GRADING, 6)
    assert got.body == one - z * q ** -1


def test_empty_window_is_zero():
    spec = HypSpec("bilateral_psi", (a,), (b,), z)
    got = hyp_partial_sum(spec, 3, 2, DEFAULT_GRADING, 6)
    assert got.is_zero()


def test_1psi1_numeric_partial_sum_matches_product_side():
    # Ramanujan summation at a=2, b=0.1, z=0.5, q=0.5: window [-40, 40]
    # against the infinite-product side, both at 256 bits.
    prec = 256
    aa, bb, zz, qq = 2, mpf("0.1"), mpf("0.5"), mpf("0.5")
    lhs = hyp_partial_sum_num("bilateral_psi", [aa], [bb], zz, qq, -40, 40, prec)
    num = poch_multi_num([qq, bb / aa, aa * zz, qq / (aa * zz)], None, qq, prec)
    den = poch_multi_num([bb, qq / aa, zz, bb / (aa * zz)], None, qq, prec)
    with workprec(prec):
        residual = abs(lhs - num / den)
    assert residual < mpf(10) ** -30


def test_poch_num_finite_matches_exact():
    prec = 64
    with workprec(prec):
        got = poch_num(Fraction(1, 3), 3, Fraction(1, 2), prec)
        want = (1 - Fraction(1, 3)) * (1 - Fraction(1, 6)) * (1 - Fraction(1, 12))
        assert abs(got - float(want)) < 1e-15
