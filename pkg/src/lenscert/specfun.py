"""Certified special functions.

Half-integer gamma values are exact rationals times a power of sqrt(pi);
hypergeometric series carry explicit geometric tail bounds, with terminating
parameter patterns summed exactly in rational arithmetic.  The Appell F1
evaluation follows the iterated-series reduction; the c = a+1 pattern (the
only one the energy formulas produce) collapses to the separable double sum
a * sum P_m Q_n / (a+m+n), which is evaluated with per-row tail bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import oracle
from .bigfloat import (
    BigFloat,
    ZERO,
    ONE,
    bf_cmp,
    bf_to_fraction,
    bf_two_power,
    rup,
    rup_add,
    rup_div,
    rup_mul,
    rup_mul_rat,
)
from .ball import (
    Ball,
    ball_add,
    ball_div,
    ball_mul,
    ball_mul_rat,
    ball_pow_int,
    ball_round,
    ball_sub,
    ball_widen,
    asin_ball,
    certainly_positive,
    pi_ball,
    pow_rational,
    sqrt_ball,
)
from .errors import DivergentParameters, DomainViolation, InvalidC, PrecisionExhausted

__all__ = [
    "HalfGamma",
    "gamma_half",
    "gamma_half_product",
    "unit_ball_volume",
    "SeriesTail",
    "gauss_2f1",
    "gauss_2f1_detailed",
    "ClosedForm2F1",
    "closed_form_recursion",
    "eval_closed_form",
    "appell_f1",
    "appell_f1_quadrature",
    "incomplete_beta",
]


# ---------------------------------------------------------------------------
# exact gamma at half-integer arguments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfGamma:
    """Value q * sqrt(pi)**s with q rational and s in {0, 1}."""

    q: Fraction
    s: int


def gamma_half(two_x: int) -> HalfGamma:
    """Gamma(two_x / 2) for two_x >= 1, exactly."""
    if two_x < 1:
        raise ValueError("argument must be a positive half-integer")
    if two_x % 2 == 0:
        m = two_x // 2
        return HalfGamma(Fraction(math.factorial(m - 1)), 0)
    m = (two_x - 1) // 2
    q = Fraction(math.factorial(2 * m), 4**m * math.factorial(m))
    return HalfGamma(q, 1)


def gamma_half_product(num_two_xs, den_two_xs, extra_sqrt_pi: int = 0):
    """Exact (rational, sqrt_pi_power) for prod Gamma(n_i/2) / prod Gamma(d_j/2).

    The returned power counts net factors of sqrt(pi) (plus extra_sqrt_pi).
    """
    q = Fraction(1)
    s = extra_sqrt_pi
    for t in num_two_xs:
        g = gamma_half(t)
        q *= g.q
        s += g.s
    for t in den_two_xs:
        g = gamma_half(t)
        q /= g.q
        s -= g.s
    return q, s


def sqrt_pi_power_ball(q: Fraction, s: int, prec: int) -> Ball:
    """Enclosure of q * sqrt(pi)**s (s any integer)."""
    w = prec + 8
    out = Ball.from_fraction(q, w)
    if s:
        p = ball_pow_int(pi_ball(w), abs(s) // 2, w)
        if abs(s) % 2:
            p = ball_mul(p, sqrt_ball(pi_ball(w), w), w)
        out = ball_mul(out, p, w) if s > 0 else ball_div(out, p, w)
    return ball_round(out, prec)


def unit_ball_volume(m: int, prec: int) -> Ball:
    """Volume of the unit ball in R**m: pi**(m/2) / Gamma(m/2 + 1)."""
    if m < 1:
        raise ValueError("dimension must be positive")
    g = gamma_half(m + 2)
    # for odd m the explicit sqrt(pi) of Gamma cancels one half-power of pi
    w = prec + 8
    out = ball_mul_rat(ball_pow_int(pi_ball(w), m // 2, w), g.q.denominator, g.q.numerator, w)
    return ball_round(out, prec)


# ---------------------------------------------------------------------------
# Gauss 2F1 with certified tails
# ---------------------------------------------------------------------------


@dataclass
class SeriesTail:
    """Truncation record: tail >= |last_term| * q / (1 - q)."""

    n_terms: int
    ratio: Fraction
    last_term: BigFloat
    tail: BigFloat


def _fr_ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _is_nonpos_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


def _ratio_threshold(a: Fraction, b: Fraction, c: Fraction) -> int:
    """Smallest N with |(a+m)(b+m) / ((c+m)(1+m))| <= 1 for all m >= N."""
    t = a + b - c - 1
    if t > 0:
        raise DivergentParameters("term-ratio bound unavailable: a+b > c+1")
    if t == 0:
        if c - a * b < 0:
            raise DivergentParameters("term-ratio bound unavailable")
        n_lin = 0
    else:
        n_lin = max(0, _fr_ceil((a * b - c) / (c + 1 - a - b)))
    n = max(
        n_lin,
        _fr_ceil(-a) if a < 0 else 0,
        _fr_ceil(-b) if b < 0 else 0,
        _fr_ceil(-c) + 1 if c < 0 else 0,
    )
    return n


def _default_tol(prec: int) -> BigFloat:
    return bf_two_power(-prec - 12)


def _terminating_order(a: Fraction, b: Fraction) -> int | None:
    orders = [int(-p) for p in (a, b) if _is_nonpos_int(p)]
    if not orders:
        return None
    return min(orders)


def gauss_2f1_detailed(
    a, b, c, z: Ball, prec: int, tol: BigFloat | None = None
) -> tuple[Ball, SeriesTail | None]:
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if _is_nonpos_int(c):
        raise InvalidC("c must not be a non-positive integer")
    tol = tol or _default_tol(prec)
    w = prec + 8

    order = _terminating_order(a, b)
    if order is not None:
        if z.is_exact():
            # dyadic midpoint: the whole sum is an exact rational
            zf = bf_to_fraction(z.mid)
            coef = Fraction(1)
            total = Fraction(1)
            zp = Fraction(1)
            for m in range(order):
                coef *= (a + m) * (b + m) / ((c + m) * (m + 1))
                zp *= zf
                total += coef * zp
            return Ball.from_fraction(total, prec), None
        term = Ball.from_int(1, w)
        total = term
        for m in range(order):
            ratio = (a + m) * (b + m) / ((c + m) * (m + 1))
            term = ball_mul(ball_mul_rat(term, ratio.numerator, ratio.denominator, w), z, w)
            total = ball_add(total, term, w)
        return ball_round(total, prec), None

    zsup = Fraction(bf_to_fraction(z.mag_sup()))
    if zsup >= 1:
        raise DivergentParameters("|z| must be certainly below 1")
    n1 = _ratio_threshold(a, b, c)
    tail_factor = zsup / (1 - zsup)
    term = Ball.from_int(1, w)
    total = term
    m = 0
    budget = n1 + 64 * (prec + 16) + 256
    while True:
        ratio = (a + m) * (b + m) / ((c + m) * (m + 1))
        term = ball_mul(ball_mul_rat(term, ratio.numerator, ratio.denominator, w), z, w)
        total = ball_add(total, term, w)
        m += 1
        if m >= n1:
            mag = term.mag_sup()
            tail = rup_mul_rat(mag, tail_factor.numerator, tail_factor.denominator)
            if bf_cmp(tail, tol) <= 0:
                total = ball_widen(total, tail)
                return ball_round(total, prec), SeriesTail(m + 1, zsup, mag, tail)
        if m > budget:
            raise PrecisionExhausted("2F1 series did not reach its tail tolerance")


def gauss_2f1(a, b, c, z: Ball, prec: int, tol: BigFloat | None = None) -> Ball:
    return gauss_2f1_detailed(a, b, c, z, prec, tol)[0]


# ---------------------------------------------------------------------------
# exact closed forms for 2F1(1/2, m/2; 3/2; z), m odd <= 1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedForm2F1:
    """sqrt(1-z) * P(z) + c * arcsin(sqrt(z)) / sqrt(z), P rational."""

    coeffs: tuple[Fraction, ...]  # P, ascending degree
    c: Fraction


def closed_form_recursion(m: int) -> ClosedForm2F1:
    """Exact (P, c) for 2F1(1/2, m/2; 3/2; z) built by lowering b from 1/2."""
    if m % 2 == 0 or m > 1:
        raise ValueError("m must be odd and at most 1")
    coeffs: list[Fraction] = []
    c = Fraction(1)
    b = Fraction(1, 2)
    while 2 * b > m:
        # P_new = (z(1-z)P' + (3/2 - b - z)P + c/2) / (3/2 - b)
        new = [Fraction(0)] * (len(coeffs) + 2)
        for i, p in enumerate(coeffs):
            if i >= 1:
                new[i] += i * p       # z P'
                new[i + 1] -= i * p   # -z^2 P'
            new[i] += (Fraction(3, 2) - b) * p
            new[i + 1] -= p           # -z P
        new[0] += c / 2
        denom = Fraction(3, 2) - b
        coeffs = [x / denom for x in new]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        c = c * (1 - b) / denom
        b -= 1
    return ClosedForm2F1(tuple(coeffs), c)


def eval_closed_form(cf: ClosedForm2F1, z: Ball, prec: int) -> Ball:
    w = prec + 8
    pz = Ball.from_int(0, w)
    for coeff in reversed(cf.coeffs):
        pz = ball_add(ball_mul(pz, z, w), Ball.from_fraction(coeff, w), w)
    one = Ball.from_int(1, w)
    out = ball_mul(sqrt_ball(ball_sub(one, z, w), w), pz, w)
    sz = sqrt_ball(z, w)
    arc = ball_div(asin_ball(sz, w), sz, w)
    out = ball_add(out, ball_mul_rat(arc, cf.c.numerator, cf.c.denominator, w), w)
    return ball_round(out, prec)


# ---------------------------------------------------------------------------
# Appell F1
# ---------------------------------------------------------------------------


def _pochhammer_series_threshold(b: Fraction, xsup: Fraction) -> tuple[int, Fraction]:
    """(N, q): for m >= N, |(b+m)/(m+1)| * xsup <= q < 1 for sum (b)_m x^m / m!."""
    if xsup >= 1:
        raise DivergentParameters("|x| must be certainly below 1")
    if b <= 1:
        return (max(0, _fr_ceil(-b)), xsup)
    q = (1 + xsup) / 2
    # (b+m)/(m+1) decreases in m for b > 1; find the first admissible m
    n = max(0, _fr_ceil((b * xsup - q) / (q - xsup)))
    while (b + n) * xsup > (n + 1) * q:
        n += 1
    return n, q


def _pochhammer_series(
    b: Fraction, x: Ball, w: int, tol: BigFloat
) -> tuple[list[Ball], BigFloat, BigFloat]:
    """Terms P_m = (b)_m x^m / m! as balls.

    Returns (terms, tail, abs_sum) where tail bounds sum of |P_m| beyond the
    list and abs_sum bounds sum of |P_m| over the whole series.
    """
    if _is_nonpos_int(b):
        order = int(-b)
        terms = [Ball.from_int(1, w)]
        for m in range(order):
            ratio = Fraction(b + m, m + 1)
            terms.append(ball_mul(ball_mul_rat(terms[-1], ratio.numerator, ratio.denominator, w), x, w))
        abs_sum = ZERO
        for t in terms:
            abs_sum = rup_add(abs_sum, t.mag_sup())
        return terms, ZERO, abs_sum
    xsup = Fraction(bf_to_fraction(x.mag_sup()))
    n1, q = _pochhammer_series_threshold(b, xsup)
    tf = q / (1 - q)
    terms = [Ball.from_int(1, w)]
    abs_sum = rup(ONE)
    m = 0
    budget = n1 + 64 * w + 256
    while True:
        ratio = Fraction(b + m, m + 1)
        terms.append(ball_mul(ball_mul_rat(terms[-1], ratio.numerator, ratio.denominator, w), x, w))
        m += 1
        mag = terms[-1].mag_sup()
        abs_sum = rup_add(abs_sum, mag)
        if m >= n1:
            tail = rup_mul_rat(mag, tf.numerator, tf.denominator)
            if bf_cmp(tail, tol) <= 0:
                return terms, tail, rup_add(abs_sum, tail)
        if m > budget:
            raise PrecisionExhausted("series did not reach its tail tolerance")


def _abs_pochhammer_bound(b: Fraction, tsup: Fraction, w: int) -> BigFloat:
    """Upper bound for sum_m |(b)_m| / m! * tsup^m; the sum is finite for
    non-positive integer b, otherwise tsup < 1 is required."""
    if _is_nonpos_int(b):
        order = int(-b)
        total = Fraction(1)
        coef = Fraction(1)
        tp = Fraction(1)
        for m in range(order):
            coef *= abs(Fraction(b + m, m + 1))
            tp *= tsup
            total += coef * tp
        return rup(Ball.from_fraction(total, w).mag_sup())
    if tsup >= 1:
        raise DivergentParameters("bound requires |t| < 1")
    if b > 0:
        raise DivergentParameters("uniform bound implemented for b <= 0 only")
    m0 = _fr_ceil(-b)
    total = Fraction(1)
    coef = Fraction(1)
    tp = Fraction(1)
    for m in range(m0 + 1):
        coef *= abs(Fraction(b + m, m + 1))
        tp *= tsup
        total += coef * tp
    # beyond m0+1 every factor |(b+m)/(m+1)| <= 1, geometric in tsup
    total += coef * tp * tsup / (1 - tsup)
    return rup(Ball.from_fraction(total, w).mag_sup())


def appell_f1(a, b1, b2, c, x: Ball, y: Ball, prec: int, tol: BigFloat | None = None) -> Ball:
    """First Appell function F1(a; b1, b2; c; x, y).

    Arguments must lie certainly inside the unit disc, except that a
    direction whose b-parameter is a non-positive integer terminates and
    places no constraint on its argument.
    """
    a, b1, b2, c = Fraction(a), Fraction(b1), Fraction(b2), Fraction(c)
    if _is_nonpos_int(c):
        raise InvalidC("c must not be a non-positive integer")
    xsup = Fraction(bf_to_fraction(x.mag_sup()))
    ysup = Fraction(bf_to_fraction(y.mag_sup()))
    if xsup >= 1 and not _is_nonpos_int(b1):
        raise DomainViolation("F1 x-argument must lie certainly inside the unit disc")
    if ysup >= 1 and not _is_nonpos_int(b2):
        raise DomainViolation("F1 y-argument must lie certainly inside the unit disc")
    tol = tol or _default_tol(prec)
    w = prec + 8

    if c == a + 1 and a > 0 and xsup < 1:
        return _appell_f1_separable(a, b1, b2, x, y, w, prec, tol)
    return _appell_f1_iterated(a, b1, b2, c, x, y, w, prec, tol)


def _appell_f1_separable(a, b1, b2, x, y, w, prec, tol) -> Ball:
    """F1(a, b1, b2, a+1; x, y) = a * sum_{m,n} P_m Q_n / (a+m+n)."""
    tol_q = rup_mul_rat(tol, 1, 16)
    q_terms, q_tail, q_abs = _pochhammer_series(b2, y, w, tol_q)
    # choose the x-series tolerance against the y-side mass
    denom = q_abs if q_abs.sign else ONE
    tol_p = rup_mul_rat(rup_div(tol, denom), 1, 16)
    p_terms, p_tail, _ = _pochhammer_series(b1, x, w, tol_p)

    # suffix[n] bounds sum of |Q_i| for i >= n (including the off-list tail)
    nq = len(q_terms)
    suffix = [q_tail] * (nq + 1)
    for n in range(nq - 1, -1, -1):
        suffix[n] = rup_add(suffix[n + 1], q_terms[n].mag_sup())

    total = Ball.from_int(0, w)
    slack = rup_mul(p_tail, q_abs) if p_tail.sign else ZERO
    row_tol = rup_mul_rat(tol, 1, 4 * len(p_terms))
    for m, pm in enumerate(p_terms):
        pmag = pm.mag_sup()
        n = 0
        while n < nq:
            # a/(a+m+n) <= 1, so the rest of this row is below pmag*suffix[n]
            if n and bf_cmp(rup_mul(pmag, suffix[n]), row_tol) <= 0:
                break
            qn = q_terms[n]
            af = Fraction(a, a + m + n)
            total = ball_add(
                total, ball_mul_rat(ball_mul(pm, qn, w), af.numerator, af.denominator, w), w
            )
            n += 1
        slack = rup_add(slack, rup_mul(pmag, suffix[n]))
    total = ball_widen(total, slack)
    return ball_round(total, prec)


def _appell_f1_iterated(a, b1, b2, c, x, y, w, prec, tol) -> Ball:
    """Literal iterated reduction: sum_n [(a)_n (b2)_n / ((c)_n n!)] y^n 2F1(a+n, b1; c+n; x)."""
    ysup = Fraction(bf_to_fraction(y.mag_sup()))
    inner_tol = rup_mul_rat(tol, 1, 64)
    total = Ball.from_int(0, w)
    coef = Ball.from_int(1, w)
    if _is_nonpos_int(b2):
        order = int(-b2)
        for n in range(order + 1):
            inner = gauss_2f1(a + n, b1, c + n, x, w, inner_tol)
            total = ball_add(total, ball_mul(coef, inner, w), w)
            ratio = (a + n) * (b2 + n) / ((c + n) * (n + 1))
            coef = ball_mul(ball_mul_rat(coef, ratio.numerator, ratio.denominator, w), y, w)
        return ball_round(total, prec)
    if not (c >= a and a > 0):
        raise DivergentParameters("iterated F1 tail bound needs c >= a > 0")
    if b1 > 0 and not _is_nonpos_int(b1):
        raise DivergentParameters("uniform inner bound implemented for b1 <= 0")
    xsup = Fraction(bf_to_fraction(x.mag_sup()))
    u_bound = _abs_pochhammer_bound(b1, xsup, w)
    n1 = _ratio_threshold(a, b2, c)
    tf = ysup / (1 - ysup)
    n = 0
    budget = n1 + 64 * w + 256
    while True:
        inner = gauss_2f1(a + n, b1, c + n, x, w, inner_tol)
        total = ball_add(total, ball_mul(coef, inner, w), w)
        ratio = (a + n) * (b2 + n) / ((c + n) * (n + 1))
        coef = ball_mul(ball_mul_rat(coef, ratio.numerator, ratio.denominator, w), y, w)
        n += 1
        if n >= n1:
            tail = rup_mul(
                rup_mul_rat(coef.mag_sup(), tf.numerator, tf.denominator), u_bound
            )
            outer_next = rup_mul(coef.mag_sup(), u_bound)
            tail = rup_add(tail, outer_next)
            if bf_cmp(tail, tol) <= 0:
                total = ball_widen(total, tail)
                return ball_round(total, prec)
        if n > budget:
            raise PrecisionExhausted("F1 outer series did not converge")


def appell_f1_quadrature(
    a,
    b1,
    b2,
    c,
    x: Ball,
    y: Ball,
    prec: int,
    target_width: BigFloat | None = None,
    budget: int = 200_000,
) -> Ball:
    """F1 via the Euler-type integral a-la Picard; cross-check path.

    Needs c - a a positive integer and a >= 1 so the integrand
    t^(a-1) (1-t)^(c-a-1) (1-x t)^(-b1) (1-y t)^(-b2) is smooth on [0, 1].
    """
    a, b1, b2, c = Fraction(a), Fraction(b1), Fraction(b2), Fraction(c)
    diff = c - a
    if diff.denominator != 1 or diff < 1:
        raise DomainViolation("quadrature path requires c - a a positive integer")
    if a < 1:
        raise DomainViolation("quadrature path requires a >= 1")
    xsup = Fraction(bf_to_fraction(x.mag_sup()))
    ysup = Fraction(bf_to_fraction(y.mag_sup()))
    if xsup >= 1 or ysup >= 1:
        raise DomainViolation("F1 arguments must lie certainly inside the unit disc")
    w = prec + 8
    if target_width is None:
        # cross-check-oracle scale; tight widths come from the series path
        target_width = bf_two_power(-20)
    integrand = oracle.picard_integrand(a, b1, b2, int(diff), x, y, w)
    task = oracle.QuadratureTask(
        integrand=integrand,
        lower=Ball.from_int(0, w),
        upper=Ball.from_int(1, w),
        prec=w,
    )
    integral = oracle.verified_integral(task, target_width, budget)
    # Gamma(c) / (Gamma(a) Gamma(c-a)) = (a)_(c-a) / Gamma(c-a), both exact here
    rising = Fraction(1)
    for i in range(int(diff)):
        rising *= a + i
    factor = rising / math.factorial(int(diff) - 1)
    out = ball_mul_rat(integral, factor.numerator, factor.denominator, w)
    return ball_round(out, prec)


# ---------------------------------------------------------------------------
# incomplete beta
# ---------------------------------------------------------------------------


def incomplete_beta(z: Ball, a, b, prec: int) -> Ball:
    """B(z; a, b) = z^a / a * 2F1(a, 1-b; a+1; z) for a > 0, z in (0, 1]."""
    a, b = Fraction(a), Fraction(b)
    if a <= 0:
        raise DomainViolation("incomplete beta requires a > 0")
    w = prec + 8
    if z.is_exact() and bf_to_fraction(z.mid) == 1:
        # complete beta via exact half-integer gamma values
        if (2 * a).denominator != 1 or (2 * b).denominator != 1 or b <= 0:
            raise DomainViolation("complete beta implemented for positive half-integers")
        q, s = gamma_half_product(
            [int(2 * a), int(2 * b)], [int(2 * a + 2 * b)]
        )
        return sqrt_pi_power_ball(q, s, prec)
    if not certainly_positive(z):
        raise DomainViolation("z must be certainly positive")
    zsup = Fraction(bf_to_fraction(z.mag_sup()))
    if zsup >= 1:
        raise DomainViolation("z must be certainly below 1")
    za = pow_rational(z, a.numerator, a.denominator, w)
    f = gauss_2f1(a, 1 - b, a + 1, z, w)
    inv_a = Fraction(1) / a
    out = ball_mul_rat(ball_mul(za, f, w), inv_a.numerator, inv_a.denominator, w)
    return ball_round(out, prec)
