"""Ring-level tests for the sparse Laurent polynomial kernel."""

import random
from fractions import Fraction

import pytest

from qtriple.errors import LimitUndefined
from qtriple.laurent import LaurentPoly, poly_sum

q = LaurentPoly.var("q")
a = LaurentPoly.var("a")
b = LaurentPoly.var("b")
z = LaurentPoly.var("z")
x1 = LaurentPoly.var("x1")
x2 = LaurentPoly.var("x2")
one = LaurentPoly.const(1)


def random_poly(rng, nterms=4, vars=("q", "a", "z"), span=3):
    terms = LaurentPoly.zero()
    for _ in range(rng.randint(0, nterms)):
        mono = {v: rng.randint(-span, span) for v in vars if rng.random() < 0.6}
        coeff = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        terms = terms + LaurentPoly.monomial(coeff, mono)
    return terms


def test_product_expansion():
    # (1-z)(1-zq) = 1 - z - zq + z^2 q
    lhs = (one - z) * (one - z * q)
    rhs = (
        one
        - z
        - z * q
        + LaurentPoly.monomial(1, {"z": 2, "q": 1})
    )
    assert lhs == rhs


def test_additive_inverse_gives_empty_map():
    p = random_poly(random.Random(7))
    assert (p + (-p)).terms == {}


def test_binomial_square():
    lhs = (x1 - x2) ** 2
    rhs = x1 * x1 - 2 * (x1 * x2) + x2 * x2
    assert lhs == rhs


def test_negative_exponents_are_exact():
    p = LaurentPoly.monomial(1, {"z": -2, "q": 3})
    assert p * LaurentPoly.monomial(1, {"z": 2, "q": -3}) == one


def test_monomial_negative_power():
    m = LaurentPoly.monomial(Fraction(2, 3), {"q": 2})
    assert m ** -1 == LaurentPoly.monomial(Fraction(3, 2), {"q": -2})
    assert m ** -1 * m == one


def test_ring_axioms_randomized():
    # Associativity/commutativity/distributivity on >= 10^3 random sparse
    # operand triples, exact.
    rng = random.Random(20240)
    for _ in range(1000):
        p = random_poly(rng)
        r = random_poly(rng)
        s = random_poly(rng)
        assert (p + r) + s == p + (r + s)
        assert p + r == r + p
        assert (p * r) * s == p * (r * s)
        assert p * r == r * p
        assert p * (r + s) == p * r + p * s


def test_pow_matches_repeated_multiplication():
    rng = random.Random(99)
    for _ in range(50):
        p = random_poly(rng, nterms=3)
        acc = one
        for k in range(5):
            assert p ** k == acc
            acc = acc * p


def test_subs_exponent_shift():
    # z -> z/q applied to z*q gives z
    p = z * q
    out = p.subs({"z": LaurentPoly.monomial(1, {"z": 1, "q": -1})})
    assert out == z


def test_subs_simultaneous():
    # a -> bz, b -> az, z -> 1/z applied to a*z gives b
    p = a * z
    out = p.subs(
        {
            "a": b * z,
            "b": a * z,
            "z": LaurentPoly.monomial(1, {"z": -1}),
        }
    )
    assert out == b


def test_subs_zero_image():
    c = LaurentPoly.var("c")
    p = one + c * a
    assert p.subs({"c": LaurentPoly.zero()}) == one


def test_subs_commutes_with_arithmetic():
    rng = random.Random(5)
    bindings = {
        "a": b * z,
        "q": LaurentPoly.monomial(1, {"q": 1, "z": 1}),
    }
    for _ in range(100):
        p = random_poly(rng, vars=("q", "a", "b"), span=2)
        r = random_poly(rng, vars=("q", "a", "b"), span=2)
        assert (p + r).subs(bindings) == p.subs(bindings) + r.subs(bindings)
        assert (p * r).subs(bindings) == p.subs(bindings) * r.subs(bindings)


def test_coefficient_of_reads_off_terms():
    # 1 - z(1+q) + z^2 q: coefficient of z^2 is q
    p = one - z * (one + q) + LaurentPoly.monomial(1, {"z": 2, "q": 1})
    assert p.coefficient_of("z", 2) == q
    assert p.coefficient_of("z", 1) == -(one + q)
    # absent variable, nonzero exponent -> 0
    assert q.coefficient_of("z", 3) == LaurentPoly.zero()
    # absent variable, exponent 0 -> the poly itself
    assert q.coefficient_of("z", 0) == q


def test_limit_to_zero():
    c = LaurentPoly.var("c")
    p = one + c * a
    assert p.limit_to_zero("c") == one
    with pytest.raises(LimitUndefined):
        (c ** -1).limit_to_zero("c")


def test_evaluate_exact():
    p = (one - z) * (one - z * q)
    val = p.evaluate({"z": Fraction(1, 2), "q": Fraction(1, 3)})
    assert val == Fraction(1, 2) * (1 - Fraction(1, 6))


def test_poly_sum_matches_fold():
    rng = random.Random(11)
    polys = [random_poly(rng) for _ in range(20)]
    acc = LaurentPoly.zero()
    for p in polys:
        acc = acc + p
    assert poly_sum(polys) == acc
