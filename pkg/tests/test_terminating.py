"""Terminating summations: symbolic residuals and sampled exact equality."""

from fractions import Fraction

import pytest

from qtriple.laurent import LaurentPoly, ONE
from qtriple.qkernels import poch_poly
from qtriple.terminating import (
    limit_qrothe_to_qabel,
    numeric_limit_q_to_1,
    ps_lhs,
    ps_rhs,
    ps_window1_lhs,
    ps_window1_rhs,
    ps_window2_lhs,
    ps_window2_rhs,
    q_abel_rothe_term,
    q_abel_term,
    verify_classical,
    verify_pfaff_saalschutz,
    verify_q_abel,
    verify_q_abel_rothe,
    verify_q_binomial,
)

q = LaurentPoly.var("q")
c = LaurentPoly.var("c")
z = LaurentPoly.var("z")


def test_q_binomial_small_cases():
    assert verify_q_binomial(0).passed
    # n = 2 by hand: 1 - (1+q) z + q z^2 == (z; q)_2
    lhs = (
        ONE
        - (ONE + q) * z
        + LaurentPoly.monomial(1, {"q": 1, "z": 2})
    )
    assert lhs == poch_poly(z, 2)
    assert verify_q_binomial(2).passed
    assert verify_q_binomial(10).passed


def test_q_abel_rothe_n1_hand_expansion():
    # k=0 summand is 1 - c(a+b); k=1 summand is -c(1-a-b); total (c)_1.
    a = LaurentPoly.var("a")
    b = LaurentPoly.var("b")
    assert q_abel_rothe_term(1, 0) == ONE - c * (a + b)
    assert q_abel_rothe_term(1, 1) == -c * (ONE - a - b)
    assert q_abel_rothe_term(1, 0) + q_abel_rothe_term(1, 1) == ONE - c


@pytest.mark.parametrize("n", range(0, 11))
def test_q_abel_rothe_exact(n):
    assert verify_q_abel_rothe(n).passed


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("spec", ["b_zero", "a_zero"])
def test_q_abel_rothe_specializations(n, spec):
    v = verify_q_abel_rothe(n, spec)
    assert v.passed and v.details["cv_termwise_residual_zero"]


def test_q_abel_n1_hand_expansion():
    a = LaurentPoly.var("a")
    b = LaurentPoly.var("b")
    assert q_abel_term(1, 0) == ONE - a - b
    assert q_abel_term(1, 1) == a + b


@pytest.mark.parametrize("n", range(0, 9))
def test_q_abel_exact(n):
    assert verify_q_abel(n).passed


@pytest.mark.parametrize("n", [0, 1, 5])
def test_limit_qrothe_to_qabel(n):
    assert limit_qrothe_to_qabel(n).passed


def test_pfaff_saalschutz_point_cases():
    pt = {"a": Fraction(2), "b": Fraction(3), "c": Fraction(5), "q": Fraction(1, 2)}
    # n = 0: both sides 1 at any point
    assert ps_lhs(0, pt) == 1 and ps_rhs(0, pt) == 1
    # n = 1 at the named point: exact equality of two rationals
    assert ps_lhs(1, pt) == ps_rhs(1, pt)


def test_pfaff_saalschutz_sampled():
    v = verify_pfaff_saalschutz(4, trials=100, seed=11)
    assert v.passed and v.residual == 0 and v.details["points"] == 100


def test_ps_window_chain_exact_at_generic_point():
    pt = {
        "a": Fraction(3, 7),
        "b": Fraction(5, 11),
        "c": Fraction(7, 13),
        "q": Fraction(2, 5),
    }
    for n in range(0, 4):
        assert ps_window1_lhs(n, pt) == ps_window1_rhs(n, pt)
        assert ps_window2_lhs(n, pt) == ps_window2_rhs(n, pt)


def test_classical_rothe_and_abel():
    v = verify_classical("rothe", 5, trials=50, seed=5)
    assert v.passed and v.residual == 0
    assert v.details["chu_vandermonde_b0_residual_zero"]
    assert v.details["symbolic_residual_zero"]
    v = verify_classical("abel", 5, trials=50, seed=5)
    assert v.passed and v.details["symbolic_residual_zero"]


def test_classical_abel_n1_by_hand():
    # A*1*1 + C at n = 1: sum is A + C.
    from qtriple.terminating import abel_term_frac

    A, B, C = Fraction(3), Fraction(7), Fraction(2)
    assert abel_term_frac(A, B, C, 1, 0) + abel_term_frac(A, B, C, 1, 1) == A + C


def test_numeric_limits_q_to_1():
    v = numeric_limit_q_to_1("abel_from_q", 2, (1, Fraction(1, 3), 2))
    assert v.passed and v.residual < 1e-4
    v = numeric_limit_q_to_1("rothe_from_q", 3, (2, Fraction(1, 2), 1))
    assert v.passed
    # n = 0 is exact for every q
    v = numeric_limit_q_to_1("abel_from_q", 0, (1, Fraction(1, 3), 2))
    assert v.passed and v.residual == 0
