"""The Abel-Rothe type bilateral extensions of the triple product identity:
the one-variable bilateral identity and its reversed companion, their
interderivation, the coefficient-extraction expansion, and Lambert's
classical series as the q -> 1 shadow.

Formal grading.  The bilateral sums are formal power series over q once
q, a, b all carry weight 1 and z stays weight 0 (a Laurent variable whose
coefficients are graded series).  Under that bigrading the summand at
index k has valuation >= |k| - 1: positive-k terms carry it through the
polynomial prod_j (a + b q^k - q^j), negative-k terms through
prod_j (z(a q^m + b) - q^(1+j)).  That bound makes the window |k| <= N + 1
complete for truncation order N, and a five-step stabilization certificate
is run on top of it.  The choice of this coefficient ring (rather than any
other completion making the bilateral sums converge) is a design decision
of this workbench, documented here deliberately: the identities are
verified per z-coefficient inside it.

Summands are computed in two independent ways:

* route "direct" expands (a q^(1-k) + b q)_inf and (z(a + b q^k))_inf
  straight from their factor products, keeping the negative-weight
  monomials those factors carry at intermediate stages (the valuation
  budget of series_product makes that exact);
* route "split" uses the positive-valuation closed forms that the
  convergence proof's two splitting identities give after the sign and
  q-power prefactors cancel.

The two routes are compared termwise (the splitting identities are also
verified standalone on their proof domains), and the formal residual check
defaults to the direct route so it never rides on the rewriting it is
meant to certify.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from mpmath import exp as mp_exp, mpf, workprec

from .errors import RegionViolation, Unstable
from .hp import poch_num, rel_residual, to_mpc
from .laurent import LaurentPoly, ONE
from .qkernels import (
    binom2,
    graded_product_with_inf,
    inf_neg_budget,
    poch,
    poch_factors,
    poch_multi,
    poch_poly,
)
from .series import DEFAULT_GRADING, Inv, TruncatedSeries, WeightMap, series_product
from .verdicts import TerminatingVerdict

q = LaurentPoly.var("q")
a = LaurentPoly.var("a")
b = LaurentPoly.var("b")
z = LaurentPoly.var("z")


@dataclass
class BilateralTerm:
    """One summand of a bilateral identity with its exact valuation."""

    k: int
    value: TruncatedSeries
    min_weight: int | None  # None when the term vanishes at this order

    @staticmethod
    def of(k: int, value: TruncatedSeries) -> "BilateralTerm":
        return BilateralTerm(k, value, value.valuation())


# ---------------------------------------------------------------------------
# summands of the bilateral identity and its reversal


def _rgj_inf_args(k: int) -> list[LaurentPoly]:
    return [a * q ** (1 - k) + b * q, z * (a + b * q ** k)]


def rgj_term(k: int, order: int, route: str = "direct") -> BilateralTerm:
    """Summand (aq^(1-k)+bq)_inf (z(a+bq^k))_inf (-1)^k q^C(k,2) z^k."""
    wmap = DEFAULT_GRADING
    sign = 1 if k % 2 == 0 else -1
    if route == "direct":
        pref = LaurentPoly.monomial(sign, {"q": binom2(k), "z": k})
        value = graded_product_with_inf([pref], _rgj_inf_args(k), wmap, order)
    elif route == "split":
        if k >= 0:
            # prod_j (a + bq^k - q^j) * (aq + bq^(1+k))_inf * (z(a+bq^k))_inf * z^k
            pk = ONE
            for j in range(k):
                pk = pk * (a + b * q ** k - q ** j)
            pref = pk * LaurentPoly.monomial(1, {"z": k})
            value = graded_product_with_inf(
                [pref], [a * q + b * q ** (1 + k), z * (a + b * q ** k)], wmap, order
            )
        else:
            m = -k
            rm = ONE
            for j in range(m):
                rm = rm * (z * (a * q ** m + b) - q ** (1 + j))
            pref = rm * LaurentPoly.monomial(1, {"z": -m})
            value = graded_product_with_inf(
                [pref], [a * q ** (1 + m) + b * q, z * (a * q ** m + b)], wmap, order
            )
    else:
        raise ValueError(f"unknown route {route!r}")
    return BilateralTerm.of(k, value)


def _rgjc_inf_args(k: int) -> list[LaurentPoly]:
    return [a * q ** -k + b, z * q * (a + b * q ** k)]


def rgjc_term(k: int, order: int, route: str = "direct") -> BilateralTerm:
    """Summand (aq^-k+b)_inf (zq(a+bq^k))_inf (-1)^k q^C(k+1,2) z^k of the
    reversed identity."""
    wmap = DEFAULT_GRADING
    sign = 1 if k % 2 == 0 else -1
    if route == "direct":
        pref = LaurentPoly.monomial(sign, {"q": binom2(k + 1), "z": k})
        value = graded_product_with_inf([pref], _rgjc_inf_args(k), wmap, order)
    elif route == "split":
        if k >= 0:
            pk = ONE
            for j in range(k):
                pk = pk * (a + b * q ** k - q ** (1 + j))
            pref = pk * LaurentPoly.monomial(1, {"z": k})
            value = graded_product_with_inf(
                [pref], [a + b * q ** (1 + k), z * q * (a + b * q ** k)], wmap, order
            )
        else:
            m = -k
            rm = ONE
            for j in range(m):
                rm = rm * (z * q * (a * q ** m + b) - q ** (1 + j))
            pref = rm * LaurentPoly.monomial(1, {"z": -m, "q": -m})
            value = graded_product_with_inf(
                [pref], [a * q ** m + b, z * q * (a * q ** m + b)], wmap, order
            )
    else:
        raise ValueError(f"unknown route {route!r}")
    return BilateralTerm.of(k, value)


def rgj_lhs(order: int) -> TruncatedSeries:
    """(q, z, q/z)_inf / (1 - b)."""
    wmap = DEFAULT_GRADING
    return graded_product_with_inf(
        [Inv(ONE - b)], [q, z, q * z ** -1], wmap, order
    )


def rgjc_lhs(order: int) -> TruncatedSeries:
    """(q, zq, 1/z)_inf / (1 - az)."""
    wmap = DEFAULT_GRADING
    return graded_product_with_inf(
        [Inv(ONE - a * z)], [q, z * q, z ** -1], wmap, order
    )


def _formal_bilateral_check(
    name: str,
    term_fn,
    lhs_fn,
    order: int,
    route: str,
    stabilize_margin: int = 5,
) -> TerminatingVerdict:
    """Window |k| <= order + 1 from the valuation bound, residual at the
    order, termwise valuation assertions, and the stabilization margin."""
    wmap = DEFAULT_GRADING
    window = order + 1
    total = TruncatedSeries(LaurentPoly.zero(), wmap, order)
    min_weights = {}
    for k in range(-window, window + 1):
        term = term_fn(k, order, route)
        if term.min_weight is not None and term.min_weight < abs(k) - 1:
            raise Unstable(
                f"{name}: term k={k} has valuation {term.min_weight} < |k|-1"
            )
        min_weights[k] = term.min_weight
        total = total + term.value
    for k in range(window + 1, window + stabilize_margin + 1):
        for kk in (k, -k):
            extra = term_fn(kk, order, route)
            if not extra.value.is_zero():
                raise Unstable(
                    f"{name}: window {window} unstable, term k={kk} is nonzero",
                    extra.value.body.sorted_terms()[0][0],
                )
    residual = wmap.truncate(lhs_fn(order).body - total.body, order)
    return TerminatingVerdict.exact(
        name,
        "formal",
        {"order": order, "route": route},
        residual,
        window=window,
        stabilize_margin=stabilize_margin,
        term_valuations_ok=True,
    )


def verify_rgj(
    mode: str,
    order: int = 12,
    route: str = "direct",
    av=None,
    bv=None,
    zv=None,
    qv=Fraction(1, 2),
    prec: int = 128,
    tol=None,
    n: int = 3,
    trials: int = 5,
    seed: int = 0,
) -> TerminatingVerdict:
    """The bilateral Abel-Rothe extension of the triple product identity:
    (q,z,q/z)_inf/(1-b) = sum_k (aq^(1-k)+bq)_inf (z(a+bq^k))_inf
    (-1)^k q^C(k,2) z^k, in the requested mode."""
    if mode == "formal":
        return _formal_bilateral_check("rgj", rgj_term, rgj_lhs, order, route)
    if mode == "numeric":
        return _rgj_numeric("rgj", av, bv, zv, qv, prec, tol)
    if mode == "window_exact":
        return _qar_window_points(n, trials, seed)
    raise ValueError(f"unknown mode {mode!r}")


def verify_rgjc(
    mode: str,
    order: int = 12,
    route: str = "direct",
    av=None,
    bv=None,
    zv=None,
    qv=Fraction(1, 2),
    prec: int = 128,
    tol=None,
    n: int = 3,
    trials: int = 5,
    seed: int = 0,
) -> TerminatingVerdict:
    """The reversed companion identity:
    (q,zq,1/z)_inf/(1-az) = sum_k (aq^-k+b)_inf (zq(a+bq^k))_inf
    (-1)^k q^C(k+1,2) z^k."""
    if mode == "formal":
        return _formal_bilateral_check("rgjc", rgjc_term, rgjc_lhs, order, route)
    if mode == "numeric":
        return _rgjc_numeric(av, bv, zv, qv, prec, tol)
    if mode == "window_exact":
        return _qar_window_points(n, trials, seed)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# numeric modes


def _require_region(av, bv, zv, prec):
    am, bm, zm = (to_mpc(v, prec) for v in (av, bv, zv))
    if not max(abs(am * zm), abs(bm)) < 1:
        raise RegionViolation(
            f"needs max(|az|, |b|) < 1, got {max(abs(am*zm), abs(bm))}"
        )
    return am, bm, zm


def _rgj_term_num(k, am, bm, zm, qm, prec):
    return (
        poch_num(am * qm ** (1 - k) + bm * qm, None, qm, prec)
        * poch_num(zm * (am + bm * qm ** k), None, qm, prec)
        * (-1) ** k
        * qm ** binom2(k)
        * zm ** k
    )


def _rgjc_term_num(k, am, bm, zm, qm, prec):
    return (
        poch_num(am * qm ** -k + bm, None, qm, prec)
        * poch_num(zm * qm * (am + bm * qm ** k), None, qm, prec)
        * (-1) ** k
        * qm ** binom2(k + 1)
        * zm ** k
    )


def _adaptive_bilateral_sum(term_fn, tol, prec, start: int = 8, step: int = 8):
    window = start
    prev = sum(term_fn(k) for k in range(-window, window + 1))
    while True:
        window += step
        cur = prev
        for k in range(window - step + 1, window + 1):
            cur += term_fn(k) + term_fn(-k)
        if abs(cur - prev) < tol / 4:
            return cur, window
        prev = cur
        if window > 100 * step:
            raise Unstable("bilateral numeric window growth exhausted")


def _rgj_numeric(name, av, bv, zv, qv, prec, tol) -> TerminatingVerdict:
    if tol is None:
        tol = mpf(10) ** -20
    with workprec(prec + 16):
        am, bm, zm = _require_region(av, bv, zv, prec + 16)
        qm = to_mpc(qv, prec + 16)
        total, window = _adaptive_bilateral_sum(
            lambda k: _rgj_term_num(k, am, bm, zm, qm, prec), tol, prec
        )
        lhs = (
            poch_num(qm, None, qm, prec)
            * poch_num(zm, None, qm, prec)
            * poch_num(qm / zm, None, qm, prec)
            / (1 - bm)
        )
        residual = rel_residual(lhs, total, prec)
    return TerminatingVerdict.numeric(
        name,
        "numeric",
        {"a": str(av), "b": str(bv), "z": str(zv), "q": str(qv), "prec": prec},
        residual,
        tol,
        window=window,
    )


def _rgjc_numeric(av, bv, zv, qv, prec, tol) -> TerminatingVerdict:
    if tol is None:
        tol = mpf(10) ** -20
    with workprec(prec + 16):
        am, bm, zm = _require_region(av, bv, zv, prec + 16)
        qm = to_mpc(qv, prec + 16)
        total, window = _adaptive_bilateral_sum(
            lambda k: _rgjc_term_num(k, am, bm, zm, qm, prec), tol, prec
        )
        lhs = (
            poch_num(qm, None, qm, prec)
            * poch_num(zm * qm, None, qm, prec)
            * poch_num(1 / zm, None, qm, prec)
            / (1 - am * zm)
        )
        residual = rel_residual(lhs, total, prec)
    return TerminatingVerdict.numeric(
        "rgjc",
        "numeric",
        {"a": str(av), "b": str(bv), "z": str(zv), "q": str(qv), "prec": prec},
        residual,
        tol,
        window=window,
    )


def _qar_window_points(n, trials, seed) -> TerminatingVerdict:
    """The finite proof window identity at exact random rational points
    (the uncleared rational-function form)."""
    from .qkernels import poch_eval
    from .rng import draw_fraction, draw_q, make_rng

    rng = make_rng(seed, "qar_window_points", n)
    worst = Fraction(0)
    points = 0
    redraws = 0
    while points < trials:
        av, bv, cv = (draw_fraction(rng, den=97) for _ in range(3))
        qv = draw_q(rng)
        try:
            lhs = (
                poch_eval(cv, n, qv)
                * poch_eval(qv / cv, n, qv)
                / (1 - av * qv ** n - bv)
            )
            total = Fraction(0)
            for k in range(-n, n + 1):
                from .qkernels import q_binom

                term = (
                    q_binom(2 * n, n + k).evaluate({"q": qv})
                    * poch_eval(av * qv ** (1 - k) + bv * qv, n + k - 1, qv)
                    * poch_eval(cv * (av + bv * qv ** k), n - k, qv)
                    * (-1) ** k
                    * qv ** binom2(k)
                    * cv ** k
                )
                total += term
        except ZeroDivisionError:
            redraws += 1
            if redraws > 50 * trials:
                from .errors import PoleHit

                raise PoleHit("window point sampling exhausted")
            continue
        worst = max(worst, abs(lhs - total))
        points += 1
    return TerminatingVerdict.exact(
        "rgj",
        "window_exact",
        {"n": n, "trials": trials, "seed": seed},
        worst,
        redraws=redraws,
    )


# ---------------------------------------------------------------------------
# reversal equivalence and the a = b = 0 collapse


def reversal_equivalence(order: int) -> TerminatingVerdict:
    """Index flip k -> -k plus a -> bz, b -> az, z -> 1/z maps each summand
    of the bilateral identity onto the summand of its companion, term by
    term across the full window."""
    bindings = {"a": b * z, "b": a * z, "z": z ** -1}
    residual = LaurentPoly.zero()
    wmap = DEFAULT_GRADING
    for k in range(-order, order + 1):
        mapped = rgj_term(-k, order, "direct").value.substitute(bindings)
        target = rgjc_term(k, order, "direct").value
        residual = residual + wmap.truncate(mapped.body - target.body, order)
    return TerminatingVerdict.exact(
        "rgj_reversal", "formal", {"order": order}, residual
    )


def collapse_to_jtpi(order: int) -> TerminatingVerdict:
    """a = b = 0 reduces both bilateral identities to the triple product
    identity coefficient-for-coefficient."""
    from .bilateral import jtpi_product, jtpi_sum_poly, jtpi_term

    wmap = DEFAULT_GRADING
    kill = {"a": LaurentPoly.zero(), "b": LaurentPoly.zero()}
    window = order + 1
    residual = LaurentPoly.zero()
    for k in range(-window, window + 1):
        t45 = rgj_term(k, order, "direct").value.substitute(kill)
        residual = residual + (t45.body - wmap.truncate(jtpi_term(k), order))
        # reversed identity: summand at a=b=0 is (-1)^k q^C(k+1,2) z^k and the
        # whole sum matches the triple product at argument z q under z -> zq.
        t46 = rgjc_term(k, order, "direct").value.substitute(kill)
        expect = LaurentPoly.monomial(
            1 if k % 2 == 0 else -1, {"q": binom2(k + 1), "z": k}
        )
        residual = residual + (t46.body - wmap.truncate(expect, order))
    lhs45 = rgj_lhs(order).substitute(kill).body - jtpi_product(order).body
    residual = residual + wmap.truncate(lhs45, order)
    return TerminatingVerdict.exact(
        "rgj_jtpi_collapse", "formal", {"order": order}, wmap.truncate(residual, order)
    )


# ---------------------------------------------------------------------------
# the two splitting identities from the convergence proof


def splitting_positive(k: int, order: int) -> TerminatingVerdict:
    """(aq^(1-k)+bq)_inf == (-1)^k q^-C(k,2) (a+bq^k)^k (1/(a+bq^k))_k
    (aq+bq^(1+k))_inf on its proof domain k >= 0."""
    if k < 0:
        raise ValueError("positive-part splitting identity needs k >= 0")
    wmap = DEFAULT_GRADING
    lhs = poch(a * q ** (1 - k) + b * q, None, wmap, order)
    sign = 1 if k % 2 == 0 else -1
    pk = ONE
    for j in range(k):
        pk = pk * (a + b * q ** k - q ** j)
    rhs = graded_product_with_inf(
        [pk * LaurentPoly.monomial(sign, {"q": -binom2(k)})],
        [a * q + b * q ** (1 + k)],
        wmap,
        order,
    )
    residual = wmap.truncate(lhs.body - rhs.body, min(lhs.order, rhs.order))
    return TerminatingVerdict.exact(
        "rgj_split_pos", "formal", {"k": k, "order": order}, residual
    )


def splitting_negative(k: int, order: int) -> TerminatingVerdict:
    """(z(a+bq^k))_inf == (-1)^k q^-C(k,2) z^-k (aq^-k+b)^-k
    (q/(z(aq^-k+b)))_{-k} (z(aq^-k+b))_inf on its proof domain k <= 0."""
    if k > 0:
        raise ValueError("negative-part splitting identity needs k <= 0")
    wmap = DEFAULT_GRADING
    m = -k
    lhs = poch(z * (a + b * q ** k), None, wmap, order)
    sign = 1 if k % 2 == 0 else -1
    rm = ONE
    for j in range(m):
        rm = rm * (z * (a * q ** m + b) - q ** (1 + j))
    rhs = graded_product_with_inf(
        [rm * LaurentPoly.monomial(sign, {"q": -binom2(k), "z": -m})],
        [z * (a * q ** m + b)],
        wmap,
        order,
    )
    residual = wmap.truncate(lhs.body - rhs.body, min(lhs.order, rhs.order))
    return TerminatingVerdict.exact(
        "rgj_split_neg", "formal", {"k": k, "order": order}, residual
    )


# ---------------------------------------------------------------------------
# coefficient extraction: 1/(1-b) = sum_j (aq^j+b)^j/(q)_j (aq^(1+j)+bq)_inf


def extrc_term(j: int, wmap: WeightMap, order: int) -> TruncatedSeries:
    head: list = [(a * q ** j + b) ** j]
    head += [Inv(ONE - LaurentPoly.var("q", t)) for t in range(1, j + 1)]
    budget = inf_neg_budget(a * q ** (1 + j) + b * q, wmap)
    factors = head + poch_factors(a * q ** (1 + j) + b * q, None, wmap, order - j - budget)
    return series_product(factors, wmap, order)


def extract_extrc(order: int = 10, replay_n: int = 3) -> TerminatingVerdict:
    """Verifies the expansion directly at the truncation order, plus a
    replay of its derivation from the bilateral identity: extract the
    z^n coefficient, divide by (-1)^n q^C(n,2), shift a -> a q^n, and match
    the expansion's summands term by term (n at 0..replay_n)."""
    wmap = DEFAULT_GRADING
    total = TruncatedSeries(LaurentPoly.zero(), wmap, order)
    j = 0
    while j <= order:  # summand valuation >= j
        total = total + extrc_term(j, wmap, order)
        j += 1
    lhs = series_product([Inv(ONE - b)], wmap, order)
    residual = wmap.truncate(lhs.body - total.body, order)

    # a = 0 specialization: sum_j b^j/(q)_j * (bq)_inf = 1/(1-b).
    kill_a = {"a": LaurentPoly.zero()}
    a0_residual = wmap.truncate(
        lhs.body - sum((extrc_term(j, wmap, order).substitute(kill_a).body
                        for j in range(order + 1)), LaurentPoly.zero()),
        order,
    )

    replay_ok = all(_extrc_replay(n, order) for n in range(replay_n + 1))
    verdict = TerminatingVerdict.exact(
        "extrc",
        "formal",
        {"order": order},
        residual,
        a0_specialization_residual_zero=a0_residual.is_zero(),
        replay_through_n=replay_n,
        replay_ok=replay_ok,
    )
    verdict.passed = verdict.passed and a0_residual.is_zero() and replay_ok
    return verdict


def _extrc_replay(n: int, order: int) -> bool:
    """One extraction instance: coefficient of z^n across the bilateral
    identity, normalized and shifted, must reproduce the expansion."""
    wmap = DEFAULT_GRADING
    work = order + binom2(n) + n  # normalization spends this much exactness
    lhs45 = rgj_lhs(work)
    window = work + 1
    coeff_lhs = lhs45.coefficient_of("z", n)
    coeff_rhs = TruncatedSeries(LaurentPoly.zero(), wmap, work)
    for k in range(-window, n + 1):  # z-degree of term k is >= k
        coeff_rhs = coeff_rhs + rgj_term(k, work, "direct").value.coefficient_of("z", n)
    norm = LaurentPoly.monomial(1 if n % 2 == 0 else -1, {"q": -binom2(n)})
    shifted_lhs = (coeff_lhs * norm).substitute(
        {"a": LaurentPoly.monomial(1, {"a": 1, "q": n})}, new_order=order
    )
    shifted_rhs = (coeff_rhs * norm).substitute(
        {"a": LaurentPoly.monomial(1, {"a": 1, "q": n})}, new_order=order
    )
    # shifted lhs must equal 1/(1-b); shifted rhs must match the
    # expansion's partial sums.
    target = series_product([Inv(ONE - b)], wmap, order)
    expansion = TruncatedSeries(LaurentPoly.zero(), wmap, order)
    for j in range(order + 1):
        expansion = expansion + extrc_term(j, wmap, order)
    ok_lhs = wmap.truncate(shifted_lhs.body - target.body, order).is_zero()
    ok_rhs = wmap.truncate(shifted_rhs.body - expansion.body, order).is_zero()
    return ok_lhs and ok_rhs


# ---------------------------------------------------------------------------
# Lambert's formula


def numeric_lambert(
    A, B, Z, j_max: int = 60, prec: int = 128, tol=None, bridge: bool = True
) -> TerminatingVerdict:
    """e^(AZ)/(1-BZ) = sum_j (A+Bj)^j Z^j e^(-BZj)/j!, valid for
    |BZe^(1-BZ)| < 1; optionally the q -> 1 bridge from the coefficient
    expansion with a = -BZ, b = (1-q^A+B)Z."""
    if tol is None:
        tol = mpf(10) ** -12
    with workprec(prec + 16):
        Am, Bm, Zm = (to_mpc(v, prec + 16) for v in (A, B, Z))
        gauge = abs(Bm * Zm * mp_exp(1 - Bm * Zm))
        if gauge >= 1:
            raise RegionViolation(f"needs |BZe^(1-BZ)| < 1, got {gauge}")
        total = 0
        for j in range(j_max + 1):
            total += (
                (Am + Bm * j) ** j
                * Zm ** j
                * mp_exp(-Bm * Zm * j)
                / factorial(j)
            )
        lhs = mp_exp(Am * Zm) / (1 - Bm * Zm)
        residual = rel_residual(lhs, total, prec)
        details = {}
        if bridge:
            details["bridge_errors"] = [
                float(_lambert_bridge_error(Am, Bm, Zm, jj, j_max, prec))
                for jj in (8, 12, 16)
            ]
    verdict = TerminatingVerdict.numeric(
        "lambert",
        "numeric",
        {"A": str(A), "B": str(B), "Z": str(Z), "j_max": j_max, "prec": prec},
        residual,
        tol,
        **details,
    )
    if bridge:
        errs = details["bridge_errors"]
        verdict.passed = verdict.passed and errs[-1] < 1e-3 and errs[0] >= errs[-1]
    return verdict


def _lambert_bridge_error(Am, Bm, Zm, j_exp: int, j_max: int, prec: int):
    """Distance between the q-expansion's partial sum at q = 1 - 2^-j_exp
    (with a = -BZ, b = (1 - q^A + B)Z) and its classical limit."""
    qm = 1 - mpf(2) ** -j_exp
    am = -Bm * Zm
    bm = (1 - qm ** Am + Bm) * Zm
    total = 0
    for j in range(j_max + 1):
        qpoch = 1
        for t in range(1, j + 1):
            qpoch *= 1 - qm ** t
        total += (
            (am * qm ** j + bm) ** j
            / qpoch
            * poch_num(am * qm ** (1 + j) + bm * qm, None, qm, prec)
        )
    classical = 0
    for j in range(j_max + 1):
        classical += (
            (Am + Bm * j) ** j * Zm ** j * mp_exp(-(Am + Bm * j) * Zm) / factorial(j)
        )
    return abs(total - classical)
