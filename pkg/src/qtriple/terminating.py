"""Exact verification of the terminating summations.

Pure polynomial identities (the terminating q-binomial theorem, the
q-Abel-Rothe and q-Abel sums, Abel's convolution) are expanded fully
symbolically as Laurent polynomials: the residual of every instance is the
zero polynomial or the verdict fails.  Identities with free parameters in
Pochhammer denominators (q-Pfaff-Saalschutz and its shifted window forms,
Rothe's convolution) are checked by exact rational evaluation at seeded
random points instead — with coordinates drawn from a grid of more than
10^6 values per variable, a nonzero residual of the degrees occurring here
survives 100 independent points with probability well under 10^-4
(Schwartz-Zippel), and every accepted point is an exact Fraction identity.

The k = 0 summand of the q-Abel-Rothe sum contains (aq + bq)_{-1}, i.e.
1/(1 - a - b), against the explicit (1 - a - b) prefactor; the two are
cancelled symbolically, so every stored summand is a genuine Laurent
polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from mpmath import mp, mpf, workprec

from .errors import NonConvergence, PoleHit
from .laurent import LaurentPoly, ONE
from .qkernels import binom2, poch_eval, poch_poly, q_binom
from .rng import draw_fraction, draw_q, make_rng
from .verdicts import TerminatingVerdict

q = LaurentPoly.var("q")
a = LaurentPoly.var("a")
b = LaurentPoly.var("b")
c = LaurentPoly.var("c")
z = LaurentPoly.var("z")

MAX_REDRAWS = 50


# ---------------------------------------------------------------------------
# terminating q-binomial theorem


def q_binomial_term(n: int, k: int) -> LaurentPoly:
    sign = 1 if k % 2 == 0 else -1
    return q_binom(n, k) * LaurentPoly.monomial(sign, {"q": binom2(k), "z": k})


def verify_q_binomial(n: int) -> TerminatingVerdict:
    """sum_k [n,k]_q (-1)^k q^C(k,2) z^k == (z; q)_n, exactly in q and z."""
    lhs = LaurentPoly.zero()
    for k in range(n + 1):
        lhs = lhs + q_binomial_term(n, k)
    residual = lhs - poch_poly(z, n)
    return TerminatingVerdict.exact("qbin", "symbolic_exact", {"n": n}, residual)


# ---------------------------------------------------------------------------
# q-Abel-Rothe summation and its specializations


def q_abel_rothe_term(n: int, k: int) -> LaurentPoly:
    """k-th summand of the q-Abel-Rothe sum for (c; q)_n, the k = 0 pole
    cancelled against the (1 - a - b) prefactor."""
    if k == 0:
        return poch_poly(c * (a + b), n)
    shifted = a * q ** (1 - k) + b * q
    sign = 1 if k % 2 == 0 else -1
    return (
        q_binom(n, k)
        * (ONE - a - b)
        * poch_poly(shifted, k - 1)
        * poch_poly(c * (a + b * q ** k), n - k)
        * LaurentPoly.monomial(sign, {"q": binom2(k), "c": k})
    )


def q_abel_term(n: int, k: int) -> LaurentPoly:
    """k-th summand of the q-Abel sum for 1, the k = 0 factor
    (a+b)(a+b)^-1 cancelled."""
    head = (a + b) * (a + b * q ** k) ** (k - 1) if k else ONE
    return q_binom(n, k) * head * poch_poly(a + b * q ** k, n - k)


def _cv_series_form_term(n: int, k: int) -> LaurentPoly:
    """Series form of the q-Chu-Vandermonde summation that the a = 0
    specialization reduces to, with parameters (b, cb):
    [n,k]_q (b)_k (cb q^k)_{n-k} (-1)^k q^C(k,2) c^k."""
    sign = 1 if k % 2 == 0 else -1
    return (
        q_binom(n, k)
        * poch_poly(b, k)
        * poch_poly(c * b * q ** k, n - k)
        * LaurentPoly.monomial(sign, {"q": binom2(k), "c": k})
    )


def _cv_convolution_form_term(n: int, k: int) -> LaurentPoly:
    """Convolution form of q-Chu-Vandermonde that the b = 0 specialization
    reduces to, with parameters (1/a, ca):
    [n,k]_q (1/a)_k (ca)_{n-k} (ac)^k; the sum is (c)_n."""
    return (
        q_binom(n, k)
        * poch_poly(LaurentPoly.monomial(1, {"a": -1}), k)
        * poch_poly(c * a, n - k)
        * LaurentPoly.monomial(1, {"a": k, "c": k})
    )


def verify_q_abel_rothe(n: int, specialization: str = "none") -> TerminatingVerdict:
    """Residual of the q-Abel-Rothe sum against (c; q)_n; for b = 0 / a = 0
    the specialized summands are additionally matched term-by-term against
    the corresponding q-Chu-Vandermonde form."""
    if specialization == "none":
        total = LaurentPoly.zero()
        for k in range(n + 1):
            total = total + q_abel_rothe_term(n, k)
        residual = total - poch_poly(c, n)
        return TerminatingVerdict.exact(
            "qabelrothe", "symbolic_exact", {"n": n}, residual
        )

    if specialization == "b_zero":
        killed, cv_term = "b", _cv_convolution_form_term
    elif specialization == "a_zero":
        killed, cv_term = "a", _cv_series_form_term
    else:
        raise ValueError(f"unknown specialization {specialization!r}")

    zero_img = {killed: LaurentPoly.zero()}
    total = LaurentPoly.zero()
    term_residual = LaurentPoly.zero()
    for k in range(n + 1):
        spec_term = q_abel_rothe_term(n, k).subs(zero_img)
        total = total + spec_term
        term_residual = term_residual + (spec_term - cv_term(n, k))
    residual = total - poch_poly(c, n)
    verdict = TerminatingVerdict.exact(
        "qabelrothe",
        "symbolic_exact",
        {"n": n, "specialization": specialization},
        residual,
        cv_termwise_residual_zero=term_residual.is_zero(),
    )
    verdict.passed = verdict.passed and term_residual.is_zero()
    return verdict


def verify_q_abel(n: int) -> TerminatingVerdict:
    total = LaurentPoly.zero()
    for k in range(n + 1):
        total = total + q_abel_term(n, k)
    residual = total - ONE
    return TerminatingVerdict.exact("qabel", "symbolic_exact", {"n": n}, residual)


def limit_qrothe_to_qabel(n: int) -> TerminatingVerdict:
    """Replays the degeneration a -> a/c, b -> b/c, c -> 0 term by term:
    each q-Abel-Rothe summand has a finite symbolic limit that must equal
    the matching q-Abel summand."""
    bindings = {
        "a": LaurentPoly.monomial(1, {"a": 1, "c": -1}),
        "b": LaurentPoly.monomial(1, {"b": 1, "c": -1}),
    }
    residual = LaurentPoly.zero()
    for k in range(n + 1):
        substituted = q_abel_rothe_term(n, k).subs(bindings)
        limited = substituted.limit_to_zero("c")  # raises LimitUndefined on bugs
        residual = residual + (limited - q_abel_term(n, k))
    return TerminatingVerdict.exact(
        "qabel_limit", "symbolic_exact", {"n": n}, residual
    )


# ---------------------------------------------------------------------------
# q-Pfaff-Saalschutz summation (rational: randomized exact evaluation)


def _draw_ps_point(rng):
    return {
        "a": draw_fraction(rng),
        "b": draw_fraction(rng),
        "c": draw_fraction(rng),
        "q": draw_q(rng),
    }


def ps_lhs(n: int, pt) -> Fraction:
    av, bv, cv, qv = pt["a"], pt["b"], pt["c"], pt["q"]
    d = av * bv * qv ** (1 - n) / cv
    total = Fraction(0)
    for k in range(n + 1):
        num = poch_eval(av, k, qv) * poch_eval(bv, k, qv) * poch_eval(qv ** -n, k, qv)
        den = poch_eval(qv, k, qv) * poch_eval(cv, k, qv) * poch_eval(d, k, qv)
        total += num / den * qv ** k
    return total


def ps_rhs(n: int, pt) -> Fraction:
    av, bv, cv, qv = pt["a"], pt["b"], pt["c"], pt["q"]
    num = poch_eval(cv / av, n, qv) * poch_eval(cv / bv, n, qv)
    den = poch_eval(cv, n, qv) * poch_eval(cv / (av * bv), n, qv)
    return num / den


def ps_window1_lhs(n: int, pt) -> Fraction:
    """Recentered window sum with numerator parameters (aq^n, bq^n, q^-n)."""
    av, bv, cv, qv = pt["a"], pt["b"], pt["c"], pt["q"]
    d = av * bv * qv ** (1 - n) / cv
    total = Fraction(0)
    for k in range(-n, n + 1):
        num = (
            poch_eval(av * qv ** n, k, qv)
            * poch_eval(bv * qv ** n, k, qv)
            * poch_eval(qv ** -n, k, qv)
        )
        den = (
            poch_eval(qv ** (1 + n), k, qv)
            * poch_eval(cv * qv ** n, k, qv)
            * poch_eval(d, k, qv)
        )
        total += num / den * qv ** k
    return total


def ps_window1_rhs(n: int, pt) -> Fraction:
    av, bv, cv, qv = pt["a"], pt["b"], pt["c"], pt["q"]
    num = (
        poch_eval(cv / av, 2 * n, qv)
        * poch_eval(cv / bv, 2 * n, qv)
        * poch_eval(qv, n, qv)
        * poch_eval(cv, n, qv)
        * poch_eval(av * bv * qv ** (1 - 2 * n) / cv, n, qv)
    )
    den = (
        poch_eval(cv, 2 * n, qv)
        * poch_eval(cv / (av * bv), 2 * n, qv)
        * poch_eval(av, n, qv)
        * poch_eval(bv, n, qv)
        * poch_eval(qv ** (-2 * n), n, qv)
    )
    return num / den * qv ** -n


def ps_window2_lhs(n: int, pt) -> Fraction:
    """The substituted window sum (a -> aq^-n, c -> cq^-n applied to the
    recentered sum): numerator parameters (a, bq^n, q^-n)."""
    av, bv, cv, qv = pt["a"], pt["b"], pt["c"], pt["q"]
    d = av * bv * qv ** (1 - n) / cv
    total = Fraction(0)
    for k in range(-n, n + 1):
        num = (
            poch_eval(av, k, qv)
            * poch_eval(bv * qv ** n, k, qv)
            * poch_eval(qv ** -n, k, qv)
        )
        den = (
            poch_eval(qv ** (1 + n), k, qv)
            * poch_eval(cv, k, qv)
            * poch_eval(d, k, qv)
        )
        total += num / den * qv ** k
    return total


def ps_window2_rhs(n: int, pt) -> Fraction:
    av, bv, cv, qv = pt["a"], pt["b"], pt["c"], pt["q"]
    num = (
        poch_eval(cv / av, 2 * n, qv)
        * poch_eval(cv / bv, n, qv)
        * poch_eval(bv * qv / cv, n, qv)
        * poch_eval(qv, n, qv) ** 2
    )
    den = (
        poch_eval(qv, 2 * n, qv)
        * poch_eval(cv, n, qv)
        * poch_eval(qv / av, n, qv)
        * poch_eval(bv, n, qv)
        * poch_eval(cv / (av * bv), n, qv)
    )
    return num / den


def _sample_exact(identity_id, n, trials, seed, pairs, extra_params=None):
    """Evaluate (lhs, rhs) pairs at `trials` random points, redrawing on
    poles; residual is the worst |lhs - rhs| seen (exact)."""
    rng = make_rng(seed, identity_id, n)
    worst = Fraction(0)
    points = 0
    redraws = 0
    while points < trials:
        pt = _draw_ps_point(rng)
        try:
            for lhs_fn, rhs_fn in pairs:
                diff = abs(lhs_fn(n, pt) - rhs_fn(n, pt))
                worst = max(worst, diff)
        except ZeroDivisionError:
            redraws += 1
            if redraws > MAX_REDRAWS * trials:
                raise PoleHit(f"{identity_id}: pole redraw budget exhausted")
            continue
        points += 1
    params = {"n": n, "trials": trials, "seed": seed}
    if extra_params:
        params.update(extra_params)
    return TerminatingVerdict.exact(
        identity_id, "random_rational", params, worst, points=points, redraws=redraws
    )


def verify_pfaff_saalschutz(n: int, trials: int = 100, seed: int = 0) -> TerminatingVerdict:
    """q-Pfaff-Saalschutz and the substituted window sum of its
    bilateralization chain, exactly at seeded rational points."""
    return _sample_exact(
        "pfaff_saalschutz",
        n,
        trials,
        seed,
        [(ps_lhs, ps_rhs), (ps_window2_lhs, ps_window2_rhs)],
    )


# ---------------------------------------------------------------------------
# classical limits: Rothe and Abel convolutions


def binom_frac(x: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= x - i
    return out / factorial(k)


def binom_poly(x: LaurentPoly, k: int) -> LaurentPoly:
    out = ONE
    for i in range(k):
        out = out * (x - i)
    return out * Fraction(1, factorial(k))


def rothe_prefactor_frac(av: Fraction, bv: Fraction, k: int) -> Fraction:
    """A/(A+Bk) * binom(A+Bk, k) with the prefactor cancelled: a genuine
    polynomial in A and B."""
    if k == 0:
        return Fraction(1)
    out = av
    for i in range(1, k):
        out *= av + bv * k - i
    return out / factorial(k)


def rothe_term_frac(av, bv, cv, n, k) -> Fraction:
    return rothe_prefactor_frac(av, bv, k) * binom_frac(cv - bv * k, n - k)


def abel_term_frac(av, bv, cv, n, k) -> Fraction:
    head = av * (av + bv * k) ** (k - 1) if k else Fraction(1)
    coeff = Fraction(factorial(n), factorial(k) * factorial(n - k))
    return coeff * head * (cv - bv * k) ** (n - k)


def verify_classical(identity: str, n: int, trials: int = 50, seed: int = 0) -> TerminatingVerdict:
    """Rothe's / Abel's convolution at exact random rational (A, B, C),
    plus (cheaply) the full symbolic expansion and the B = 0 reduction to
    Chu-Vandermonde."""
    if identity not in ("rothe", "abel"):
        raise ValueError("identity must be 'rothe' or 'abel'")
    rng = make_rng(seed, "classical", identity, n)
    worst = Fraction(0)
    for _ in range(trials):
        av, bv, cv = (draw_fraction(rng, span=10 ** 6, den=97) for _ in range(3))
        if identity == "rothe":
            total = sum(rothe_term_frac(av, bv, cv, n, k) for k in range(n + 1))
            worst = max(worst, abs(total - binom_frac(av + cv, n)))
        else:
            total = sum(abel_term_frac(av, bv, cv, n, k) for k in range(n + 1))
            worst = max(worst, abs(total - (av + cv) ** n))

    # B = 0 degeneration: plain Chu-Vandermonde, symbolically.
    A_, B_, C_ = (LaurentPoly.var(v) for v in ("A", "B", "C"))
    cv_residual = LaurentPoly.zero()
    for k in range(n + 1):
        cv_residual = cv_residual + binom_poly(A_, k) * binom_poly(C_, n - k)
    cv_residual = cv_residual - binom_poly(A_ + C_, n)

    # Full symbolic expansion (both identities are polynomial in A, B, C
    # once the Rothe prefactor is cancelled).
    symbolic = LaurentPoly.zero()
    for k in range(n + 1):
        if identity == "rothe":
            pref = _rothe_prefactor_poly(A_, B_, k)
            symbolic = symbolic + pref * binom_poly(C_ - B_ * k, n - k)
        else:
            head = A_ * (A_ + B_ * k) ** (k - 1) if k else ONE
            coeff = Fraction(factorial(n), factorial(k) * factorial(n - k))
            symbolic = symbolic + coeff * head * (C_ - B_ * k) ** (n - k)
    target = binom_poly(A_ + C_, n) if identity == "rothe" else (A_ + C_) ** n
    sym_residual = symbolic - target

    verdict = TerminatingVerdict.exact(
        identity,
        "random_rational",
        {"n": n, "trials": trials, "seed": seed},
        worst,
        chu_vandermonde_b0_residual_zero=cv_residual.is_zero(),
        symbolic_residual_zero=sym_residual.is_zero(),
    )
    verdict.passed = verdict.passed and cv_residual.is_zero() and sym_residual.is_zero()
    return verdict


def _rothe_prefactor_poly(A_: LaurentPoly, B_: LaurentPoly, k: int) -> LaurentPoly:
    if k == 0:
        return ONE
    out = A_
    for i in range(1, k):
        out = out * (A_ + B_ * k - i)
    return out * Fraction(1, factorial(k))


# ---------------------------------------------------------------------------
# numeric q -> 1 limits


def _qside_rothe_terms(n, Av, Bv, Cv, qv):
    """Terms of the q-Abel-Rothe sum divided by (q; q)_n under the Rothe
    substitutions a = q^A - B, b = B, c = q^(-A-C)."""
    av = qv ** Av - Bv
    bv = Bv
    cv = qv ** (-Av - Cv)
    qn = _poch_num_real(qv, qv, n)
    out = []
    for k in range(n + 1):
        if k == 0:
            t = _poch_num_real(cv * (av + bv), qv, n)
        else:
            shifted = av * qv ** (1 - k) + bv * qv
            t = (
                q_binom(n, k).evaluate({"q": qv})
                * (1 - av - bv)
                * _poch_num_real(shifted, qv, k - 1)
                * _poch_num_real(cv * (av + bv * qv ** k), qv, n - k)
                * (-1) ** k
                * qv ** binom2(k)
                * cv ** k
            )
        out.append(t / qn)
    lhs = _poch_num_real(cv, qv, n) / qn
    return lhs, out


def _poch_num_real(x, qv, k):
    out = x * 0 + 1
    for j in range(k):
        out *= 1 - x * qv ** j
    return out


def _qside_abel_terms(n, Av, Bv, Cv, qv):
    av = Av / (Av + Cv) + Bv / ((Av + Cv) * (1 - qv))
    bv = -Bv / ((Av + Cv) * (1 - qv))
    out = []
    for k in range(n + 1):
        if k == 0:
            t = _poch_num_real(av + bv, qv, n)
        else:
            t = (
                q_binom(n, k).evaluate({"q": qv})
                * (av + bv)
                * (av + bv * qv ** k) ** (k - 1)
                * _poch_num_real(av + bv * qv ** k, qv, n - k)
            )
        out.append(t)
    return out


def numeric_limit_q_to_1(
    identity: str,
    n: int,
    point,
    j_max: int = 20,
    prec: int = 128,
    tol: Fraction | float = 1e-4,
) -> TerminatingVerdict:
    """Checks that the q-deformed terms converge to the classical terms
    along q_j = 1 - 2^-j (termwise maximum error, monotone over the last
    three iterates, final below tol)."""
    if identity not in ("rothe_from_q", "abel_from_q"):
        raise ValueError("identity must be 'rothe_from_q' or 'abel_from_q'")
    Av, Bv, Cv = (Fraction(v) for v in point)
    errors = []
    with workprec(prec):
        for j in range(4, j_max + 1):
            qv = 1 - mpf(2) ** -j
            Af, Bf, Cf = (mpf(v.numerator) / mpf(v.denominator) for v in (Av, Bv, Cv))
            if identity == "rothe_from_q":
                sign = (-1) ** n
                lhs_q, terms_q = _qside_rothe_terms(n, Af, Bf, Cf, qv)
                classical = [
                    rothe_term_frac(Av, Bv, Cv, n, k) for k in range(n + 1)
                ]
                target = binom_frac(Av + Cv, n)
                err = abs(sign * lhs_q - mpf(target.numerator) / mpf(target.denominator))
                for tq, tc in zip(terms_q, classical):
                    err = max(err, abs(sign * tq - mpf(tc.numerator) / mpf(tc.denominator)))
            else:
                scale = (Af + Cf) ** n
                terms_q = _qside_abel_terms(n, Af, Bf, Cf, qv)
                classical = [abel_term_frac(Av, Bv, Cv, n, k) for k in range(n + 1)]
                err = abs(sum(terms_q) - 1)
                for tq, tc in zip(terms_q, classical):
                    err = max(err, abs(scale * tq - mpf(tc.numerator) / mpf(tc.denominator)))
            errors.append(err)
    final = errors[-1]
    # Non-increasing admits the exactly-zero trivial cases (n = 0).
    monotone = all(
        errors[i] >= errors[i + 1] for i in range(len(errors) - 3, len(errors) - 1)
    )
    if not monotone:
        raise NonConvergence(f"{identity}: errors not decreasing near q -> 1")
    return TerminatingVerdict.numeric(
        identity,
        "numeric_limit",
        {"n": n, "point": [str(v) for v in (Av, Bv, Cv)], "j_max": j_max},
        final,
        mpf(float(tol)),
        errors_tail=[float(e) for e in errors[-3:]],
    )
