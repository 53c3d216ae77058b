"""Independent evaluation paths used to cross-check the primary pipeline.

Contains verified 1-D quadrature (interval-sum and midpoint-with-derivative
schemes), the exact cosine-power recursion for the lens quantities, the
polynomial evaluation of the competitor energy for odd index pairs, and exact
arithmetic in the field Q(sqrt2, sqrt3) for the balanced odd case.

Normalization rule for the exact balanced-case field elements: the numerator
and denominator of M(k,k) are each scaled by the least positive rational that
turns all four coordinates into coprime integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

from .bigfloat import (
    BigFloat,
    ONE,
    ZERO,
    bf_add_exact,
    bf_cmp,
    bf_from_float,
    bf_from_fraction,
    bf_from_int,
    bf_msb_exp,
    bf_neg,
    bf_round,
    bf_shift,
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
    ball_from_endpoints,
    ball_mul,
    ball_mul_rat,
    ball_pow_int,
    ball_round,
    ball_sub,
    ball_widen,
    cos_ball,
    pow_rational,
    sin_ball,
    sqrt_ball,
)
from .errors import DomainViolation, QuadratureBudgetExceeded

__all__ = [
    "Integrand",
    "Scheme",
    "QuadratureTask",
    "verified_integral",
    "verified_integrals",
    "polynomial_integrand",
    "cos_power_integrand",
    "sqrt_power_integrand",
    "arc_profile_integrand",
    "picard_integrand",
    "LensExact",
    "lens_exact_wallis",
    "lambda_plane_exact_ball",
    "QSqrt23",
    "SimonsExact",
    "exact_simons_m",
    "polynomial_m_value",
]


# ---------------------------------------------------------------------------
# verified quadrature
# ---------------------------------------------------------------------------


class Scheme(Enum):
    INTERVAL_SUM = "IntervalSum"
    MIDPOINT_DERIVATIVE = "MidpointDerivative"


@dataclass
class Integrand:
    """Evaluable descriptor; eval/deriv map an argument ball to value balls."""

    label: str
    eval_point: Callable[[Ball], tuple[Ball, ...]]
    eval_deriv: Optional[Callable[[Ball], tuple[Ball, ...]]] = None
    arity: int = 1


@dataclass
class QuadratureTask:
    integrand: Integrand
    lower: Ball
    upper: Ball
    scheme: Scheme = Scheme.MIDPOINT_DERIVATIVE
    subdivisions: int = 32
    prec: int = 64


def _as_bigfloat(width) -> BigFloat:
    if isinstance(width, BigFloat):
        return width
    return bf_from_float(float(width))


def verified_integral(task: QuadratureTask, target_width, budget: int = 100_000) -> Ball:
    out = verified_integrals(task, target_width, budget)
    if len(out) != 1:
        raise ValueError("verified_integral needs an arity-1 integrand")
    return out[0]


def verified_integrals(task: QuadratureTask, target_width, budget: int = 100_000) -> tuple[Ball, ...]:
    """Enclosures of the integral(s) of a (possibly vector) integrand."""
    w = task.prec
    target = _as_bigfloat(target_width)
    f = task.integrand
    k = f.arity
    a0, b0 = task.lower.mid, task.upper.mid
    if bf_cmp(a0, b0) > 0:
        raise ValueError("integration endpoints out of order")
    total_len = bf_add_exact(b0, bf_neg(a0))

    evals = 0
    slop = [ZERO] * k

    # endpoint balls: the integral over the uncertain sliver is bounded by
    # radius times the integrand magnitude there
    for endp in (task.lower, task.upper):
        if endp.rad.sign:
            vals = f.eval_point(endp)
            evals += 1
            for i in range(k):
                slop[i] = rup_add(slop[i], rup_mul(endp.rad, vals[i].mag_sup()))

    if total_len.sign == 0:
        return tuple(Ball(ZERO, slop[i], w) for i in range(k))

    # initial uniform grid
    n0 = max(1, task.subdivisions)
    points = [a0]
    for j in range(1, n0):
        points.append(_bf_fraction_point(a0, total_len, j, n0, w))
    points.append(b0)
    stack = [(points[j], points[j + 1]) for j in range(n0 - 1, -1, -1)]

    acc = [Ball.from_int(0, w) for _ in range(k)]
    # below this length bisection cannot shrink the enclosure further
    min_len = bf_two_power(bf_msb_exp(total_len) - w + 16)
    use_deriv = task.scheme is Scheme.MIDPOINT_DERIVATIVE and f.eval_deriv is not None

    while stack:
        u, v = stack.pop()
        seg = bf_add_exact(v, bf_neg(u))
        if seg.sign <= 0:
            continue
        piece, cost = _piece_enclosure(f, u, v, seg, w, use_deriv)
        evals += cost
        if evals > budget:
            raise QuadratureBudgetExceeded(
                "quadrature budget exhausted on %s" % task.integrand.label
            )
        share = _piece_share(target, seg, total_len)
        too_wide = any(bf_cmp(p.width(), share) > 0 for p in piece)
        if too_wide and bf_cmp(seg, min_len) > 0:
            mid = _bf_midpoint(u, v, w)
            if bf_cmp(u, mid) < 0 and bf_cmp(mid, v) < 0:
                stack.append((mid, v))
                stack.append((u, mid))
                continue
        for i in range(k):
            acc[i] = ball_add(acc[i], piece[i], w)

    return tuple(ball_widen(acc[i], slop[i]) for i in range(k))


def _bf_fraction_point(a0: BigFloat, total: BigFloat, j: int, n: int, w: int) -> BigFloat:
    frac = bf_to_fraction(total) * Fraction(j, n) + bf_to_fraction(a0)
    out, _ = bf_from_fraction(frac, w)
    return out


def _bf_midpoint(u: BigFloat, v: BigFloat, w: int) -> BigFloat:
    s = bf_shift(bf_add_exact(u, v), -1)
    out, _ = bf_round(s.sign, s.man, s.exp, w)
    return out


def _piece_share(target: BigFloat, seg: BigFloat, total_len: BigFloat) -> BigFloat:
    # target * seg / total_len, approximately (efficiency knob, not soundness)
    return rup_div(rup_mul(rup(target), rup(seg)), total_len)


def _piece_enclosure(f: Integrand, u: BigFloat, v: BigFloat, seg: BigFloat, w: int, use_deriv: bool):
    k = f.arity
    seg_ball = Ball.point(seg, w)
    hull = ball_from_endpoints(u, v, w)
    if not use_deriv:
        vals = f.eval_point(hull)
        return [ball_mul(vals[i], seg_ball, w) for i in range(k)], 1
    m = _bf_midpoint(u, v, w)
    if not (bf_cmp(u, m) <= 0 and bf_cmp(m, v) <= 0):
        vals = f.eval_point(hull)
        return [ball_mul(vals[i], seg_ball, w) for i in range(k)], 1
    fm = f.eval_point(Ball.point(m, w))
    fd = f.eval_deriv(hull)
    dv = bf_add_exact(v, bf_neg(m))
    du = bf_add_exact(m, bf_neg(u))
    dv2 = bf_round(1, dv.man * dv.man, 2 * dv.exp, w)[0] if dv.sign else ZERO
    du2 = bf_round(1, du.man * du.man, 2 * du.exp, w)[0] if du.sign else ZERO
    # I1 = integral of (t - m) dt, exact up to rounding; I2 bounds integral |t - m|
    i1 = Ball.point(bf_shift(bf_add_exact(dv2, bf_neg(du2)), -1), w)
    i2 = rup(bf_shift(rup_add(rup(dv2), rup(du2)), -1))
    out = []
    for i in range(k):
        base = ball_mul(fm[i], seg_ball, w)
        centered = Ball.point(fd[i].mid, w)
        base = ball_add(base, ball_mul(centered, i1, w), w)
        base = ball_widen(base, rup_mul(fd[i].rad, i2))
        out.append(base)
    return out, 2


# ---------------------------------------------------------------------------
# integrand factories
# ---------------------------------------------------------------------------


def polynomial_integrand(coeffs) -> Integrand:
    """sum coeffs[i] * t**i with rational coefficients."""
    cs = [Fraction(c) for c in coeffs]
    ds = [i * cs[i] for i in range(1, len(cs))]

    def _horner(values, t: Ball) -> Ball:
        w = t.prec
        out = Ball.from_int(0, w)
        for c in reversed(values):
            out = ball_add(ball_mul(out, t, w), Ball.from_fraction(c, w), w)
        return out

    def _eval(t: Ball):
        return (_horner(cs, t),)

    def _deriv(t: Ball):
        if not ds:
            return (Ball.from_int(0, t.prec),)
        return (_horner(ds, t),)

    return Integrand(
        label="polynomial(deg=%d)" % (len(cs) - 1),
        eval_point=_eval,
        eval_deriv=_deriv,
    )


def cos_power_integrand(m: int, scale=1) -> Integrand:
    """scale * cos(t)**m."""
    sc = Fraction(scale)

    def _eval(t: Ball):
        w = t.prec
        c = cos_ball(t, w)
        return (ball_mul_rat(ball_pow_int(c, m, w), sc.numerator, sc.denominator, w),)

    def _deriv(t: Ball):
        w = t.prec
        c = cos_ball(t, w)
        s = sin_ball(t, w)
        out = ball_mul(ball_pow_int(c, m - 1, w), s, w)
        return (ball_mul_rat(out, -m * sc.numerator, sc.denominator, w),)

    return Integrand(
        label="cos^%d" % m,
        eval_point=_eval,
        eval_deriv=_deriv if m >= 1 else None,
    )


def _pow_half_touching(s: Ball, p: int, w: int) -> Ball:
    """(s)**(p/2) for p >= 1 when s may graze zero from above.

    Acts as the interval extension over s intersected with [0, inf).
    """
    lo, hi = s.inf(), s.sup()
    if hi.sign < 0:
        raise DomainViolation("negative base in half-integer power")
    if hi.sign == 0:
        return Ball.from_int(0, w)
    hi_pow = pow_rational(Ball.point(hi, w), p, 2, w)
    if lo.sign <= 0:
        return ball_from_endpoints(ZERO, hi_pow.sup(), w)
    lo_pow = pow_rational(Ball.point(lo, w), p, 2, w)
    return ball_from_endpoints(lo_pow.inf(), hi_pow.sup(), w)


def sqrt_power_integrand(p: int) -> Integrand:
    """(1 - t**2)**(p/2) for odd p >= 1 over t in [-1, 1]."""

    def _base(t: Ball) -> Ball:
        w = t.prec
        return ball_sub(Ball.from_int(1, w), ball_mul(t, t, w), w)

    def _eval(t: Ball):
        return (_pow_half_touching(_base(t), p, t.prec),)

    def _deriv(t: Ball):
        w = t.prec
        out = ball_mul(t, _pow_half_touching(_base(t), p - 2, w), w)
        return (ball_mul_rat(out, -p, 1, w),)

    return Integrand(
        label="(1-t^2)^(%d/2)" % p,
        eval_point=_eval,
        eval_deriv=_deriv if p >= 3 else None,
    )


def arc_profile_integrand(radius: Ball, offset: Ball, k: int, exponents: tuple[int, ...]) -> Integrand:
    """(radius*sin t - offset)**k * cos(t)**j for each j in exponents.

    The trig-substituted competitor integrands; all components share one
    sin/cos evaluation per node.
    """

    def _eval(t: Ball):
        w = t.prec
        s = sin_ball(t, w)
        c = cos_ball(t, w)
        base = ball_sub(ball_mul(radius, s, w), offset, w)
        bk = ball_pow_int(base, k, w)
        return tuple(ball_mul(bk, ball_pow_int(c, j, w), w) for j in exponents)

    def _deriv(t: Ball):
        w = t.prec
        s = sin_ball(t, w)
        c = cos_ball(t, w)
        base = ball_sub(ball_mul(radius, s, w), offset, w)
        bk = ball_pow_int(base, k, w)
        bk1 = ball_pow_int(base, k - 1, w) if k >= 1 else Ball.from_int(0, w)
        rc = ball_mul(radius, c, w)
        out = []
        for j in exponents:
            cj = ball_pow_int(c, j, w)
            term1 = ball_mul_rat(ball_mul(ball_mul(rc, bk1, w), cj, w), k, 1, w)
            if j >= 1:
                cj1 = ball_pow_int(c, j - 1, w)
                term2 = ball_mul_rat(ball_mul(ball_mul(cj1, s, w), bk, w), j, 1, w)
                out.append(ball_sub(term1, term2, w))
            else:
                out.append(term1)
        return tuple(out)

    return Integrand(
        label="arc-profile k=%d exps=%s" % (k, list(exponents)),
        eval_point=_eval,
        eval_deriv=_deriv,
        arity=len(exponents),
    )


def arc_profile_quadrature(
    radius: Ball,
    offset: Ball,
    kk: int,
    exponents: tuple[int, ...],
    lower: Ball,
    upper: Ball,
    w: int,
    target_width: BigFloat,
    budget: int = 400_000,
    n_start: int = 64,
) -> tuple[Ball, ...]:
    """Uniform midpoint quadrature of (radius sin t - offset)^kk cos(t)^j.

    Node trig values come from the angle-addition recurrence (one certified
    sin/cos series per pass instead of per node), and the midpoint-rule error
    is bounded once per pass by a global bound on the second derivative, so
    each node costs a handful of ball multiplications.  The node count
    doubles until the width target is met or the budget runs out.
    """
    a0, b0 = lower.mid, upper.mid
    total_len = bf_add_exact(b0, bf_neg(a0))
    if total_len.sign < 0:
        raise ValueError("integration endpoints out of order")
    arity = len(exponents)

    slop = [ZERO] * arity
    probe = arc_profile_integrand(radius, offset, kk, exponents)
    for endp in (lower, upper):
        if endp.rad.sign:
            vals = probe.eval_point(endp)
            for i in range(arity):
                slop[i] = rup_add(slop[i], rup_mul(endp.rad, vals[i].mag_sup()))
    if total_len.sign == 0:
        return tuple(Ball(ZERO, slop[i], w) for i in range(arity))

    # on the arc range radius*sin(t) - offset stays within [0, radius - offset]
    bmax = ball_sub(radius, offset, w).mag_sup()
    d6_bounds = [_arc_derivative_bound(radius, bmax, kk, j, 6) for j in exponents]

    length_fr = bf_to_fraction(total_len)
    n = n_start
    spent = 0
    while True:
        spent += 3 * n
        if spent > budget:
            raise QuadratureBudgetExceeded("arc quadrature budget exhausted")
        out = _arc_gauss3_pass(radius, offset, kk, exponents, a0, length_fr, n, w, d6_bounds)
        if all(bf_cmp(b.width(), target_width) <= 0 for b in out):
            return tuple(ball_widen(out[i], slop[i]) for i in range(arity))
        if spent + 6 * n > budget:
            # cannot afford the next pass; report the soundly-widened result
            return tuple(ball_widen(out[i], slop[i]) for i in range(arity))
        n *= 2


def _arc_derivative_bound(radius: Ball, bmax: BigFloat, kk: int, j: int, order: int) -> BigFloat:
    """Upper bound for |d^order/dt^order (radius sin t - offset)^kk cos^j t|
    on a range where 0 <= radius*sin(t) - offset <= bmax.

    Differentiates the term algebra K * b^p * cos^q * sin^r symbolically
    (b' = R cos, cos' = -sin, sin' = cos), tracking |K| magnitudes and using
    |b| <= bmax, |sin|,|cos| <= 1.  Exponents of cos/sin never go negative
    because the lowering paths carry factors q resp. r.  Summing absolute
    values keeps this an overestimate of the true derivative magnitude.
    """
    terms = {(kk, j, 0): Fraction(1)}  # (p, q, r) -> coefficient in powers of R
    rpow = {(kk, j, 0): 0}
    for _ in range(order):
        new: dict = {}
        new_r: dict = {}
        for (p, q, r), coef in terms.items():
            ri = rpow[(p, q, r)]
            for key, c2, r2 in (
                ((p - 1, q + 1, r), coef * p, ri + 1),
                ((p, q - 1, r + 1), -coef * q, ri),
                ((p, q + 1, r - 1), coef * r, ri),
            ):
                if c2 == 0:
                    continue
                if key in new:
                    # coefficients of equal (p,q,r) always share the R power
                    new[key] += c2
                else:
                    new[key] = c2
                    new_r[key] = r2
        terms, rpow = new, new_r
    rmag = rup(radius.mag_sup())
    bmax = rup(bmax)
    bpows = [rup(ONE)]
    for _ in range(kk + order):
        bpows.append(rup_mul(bpows[-1], bmax))
    rpows = [rup(ONE)]
    for _ in range(order):
        rpows.append(rup_mul(rpows[-1], rmag))
    total = ZERO
    for (p, q, r), coef in terms.items():
        mag = rup_mul_rat(rup_mul(bpows[max(p, 0)], rpows[rpow[(p, q, r)]]), abs(coef.numerator), coef.denominator)
        mag = rup_mul(mag, _trig_product_bound(q, r))
        total = rup_add(total, mag)
    return total


def _trig_product_bound(q: int, r: int) -> BigFloat:
    """Upper bound for max |cos^q t sin^r t| = sqrt(q^q r^r / (q+r)^(q+r))."""
    if q <= 0 or r <= 0:
        return rup(ONE)
    m2 = Fraction(q**q * r**r, (q + r) ** (q + r))
    # upper bound of the square root of an exact rational
    scale = 1 << 40
    num = m2.numerator * scale * scale
    root = math.isqrt(num // m2.denominator) + 1
    return rup(bf_shift(bf_from_int(root), -40))


def _arc_gauss3_pass(radius, offset, kk, exponents, a0, length_fr, n, w, d6_bounds):
    """Three-point Gauss-Legendre on n uniform pieces.

    Node trig values advance by the angle-addition recurrence with two
    alternating exact-step enclosures; per-piece remainder is
    |f^(6)| * piece_len^7 / 2016000.
    """
    delta = Ball.from_fraction(length_fr / n, w)
    # nodes at midpoint and midpoint -/+ sqrt(3/5)/2 * delta; weights 5/9, 8/9, 5/9
    gamma = sqrt_ball(Ball.from_fraction(Fraction(3, 5), w), w)
    off_in = ball_mul(ball_mul_rat(delta, 1, 2, w), gamma, w)
    step_out = ball_sub(delta, ball_mul_rat(off_in, 2, 1, w), w)  # across pieces
    first = ball_sub(ball_mul_rat(delta, 1, 2, w), off_in, w)

    theta = ball_add(Ball.point(a0, w), first, w)
    s = sin_ball(theta, w)
    c = cos_ball(theta, w)
    s_in, c_in = sin_ball(off_in, w), cos_ball(off_in, w)
    s_out, c_out = sin_ball(step_out, w), cos_ball(step_out, w)

    jmax = max(exponents)
    arity = len(exponents)
    acc_mid = [Ball.from_int(0, w) for _ in range(arity)]
    acc_side = [Ball.from_int(0, w) for _ in range(arity)]
    for i in range(3 * n):
        base = ball_sub(ball_mul(radius, s, w), offset, w)
        bk = ball_pow_int(base, kk, w)
        cpow = [Ball.from_int(1, w)]
        for _ in range(jmax):
            cpow.append(ball_mul(cpow[-1], c, w))
        acc = acc_mid if i % 3 == 1 else acc_side
        for idx, j in enumerate(exponents):
            acc[idx] = ball_add(acc[idx], ball_mul(bk, cpow[j], w), w)
        if i + 1 < 3 * n:
            sd, cd = (s_out, c_out) if i % 3 == 2 else (s_in, c_in)
            s, c = (
                ball_add(ball_mul(s, cd, w), ball_mul(c, sd, w), w),
                ball_sub(ball_mul(c, cd, w), ball_mul(s, sd, w), w),
            )
    dsup = delta.mag_sup()
    d2 = rup_mul(dsup, dsup)
    d7 = rup_mul(rup_mul(rup_mul(d2, d2), d2), dsup)
    out = []
    for idx in range(arity):
        total = ball_add(
            ball_mul_rat(ball_mul(acc_side[idx], delta, w), 5, 18, w),
            ball_mul_rat(ball_mul(acc_mid[idx], delta, w), 4, 9, w),
            w,
        )
        err = rup_mul_rat(rup_mul(d6_bounds[idx], d7), n, 2016000)
        out.append(ball_widen(total, err))
    return out


def picard_integrand(a: Fraction, b1: Fraction, b2: Fraction, diff: int, x: Ball, y: Ball, w: int) -> Integrand:
    """t^(a-1) (1-t)^(diff-1) (1-x t)^(-b1) (1-y t)^(-b2)."""
    a1 = a - 1
    a1_int = a1.denominator == 1 and a1 >= 0
    nb1, nb2 = -b1, -b2

    def _powers(t: Ball):
        w_ = t.prec
        one = Ball.from_int(1, w_)
        g3 = pow_rational(ball_sub(one, ball_mul(x, t, w_), w_), nb1.numerator, nb1.denominator, w_)
        g4 = pow_rational(ball_sub(one, ball_mul(y, t, w_), w_), nb2.numerator, nb2.denominator, w_)
        return one, g3, g4

    def _eval(t: Ball):
        w_ = t.prec
        one, g3, g4 = _powers(t)
        if a1_int:
            g1 = ball_pow_int(t, int(a1), w_)
        else:
            g1 = _pow_frac_touching(t, a1, w_)
        out = ball_mul(g1, ball_mul(g3, g4, w_), w_)
        if diff > 1:
            out = ball_mul(out, ball_pow_int(ball_sub(one, t, w_), diff - 1, w_), w_)
        return (out,)

    def _deriv(t: Ball):
        w_ = t.prec
        one, g3, g4 = _powers(t)
        ia = int(a1)
        g1 = ball_pow_int(t, ia, w_)
        g2 = ball_pow_int(ball_sub(one, t, w_), diff - 1, w_)
        g34 = ball_mul(g3, g4, w_)
        total = Ball.from_int(0, w_)
        if ia >= 1:
            total = ball_mul_rat(ball_mul(ball_mul(ball_pow_int(t, ia - 1, w_), g2, w_), g34, w_), ia, 1, w_)
        if diff - 1 >= 1:
            t2 = ball_mul_rat(
                ball_mul(ball_mul(g1, ball_pow_int(ball_sub(one, t, w_), diff - 2, w_), w_), g34, w_),
                diff - 1, 1, w_,
            )
            total = ball_sub(total, t2, w_)
        # d/dt (1-xt)^(-b1) = b1 x (1-xt)^(-b1-1)
        e3 = nb1 - 1
        g3p = pow_rational(ball_sub(one, ball_mul(x, t, w_), w_), e3.numerator, e3.denominator, w_)
        term3 = ball_mul(ball_mul(ball_mul(g1, g2, w_), g4, w_), ball_mul(x, g3p, w_), w_)
        total = ball_add(total, ball_mul_rat(term3, b1.numerator, b1.denominator, w_), w_)
        e4 = nb2 - 1
        g4p = pow_rational(ball_sub(one, ball_mul(y, t, w_), w_), e4.numerator, e4.denominator, w_)
        term4 = ball_mul(ball_mul(ball_mul(g1, g2, w_), g3, w_), ball_mul(y, g4p, w_), w_)
        total = ball_add(total, ball_mul_rat(term4, b2.numerator, b2.denominator, w_), w_)
        return (total,)

    return Integrand(
        label="picard a=%s b1=%s b2=%s" % (a, b1, b2),
        eval_point=_eval,
        eval_deriv=_deriv if a1_int else None,
    )


def _pow_frac_touching(s: Ball, e: Fraction, w: int) -> Ball:
    """s**e for e > 0 when s may graze zero from above."""
    lo = s.inf()
    if lo.sign > 0:
        return pow_rational(s, e.numerator, e.denominator, w)
    hi = s.sup()
    if hi.sign < 0:
        raise DomainViolation("negative base in fractional power")
    if hi.sign == 0:
        return Ball.from_int(0, w)
    hi_pow = pow_rational(Ball.point(hi, w), e.numerator, e.denominator, w)
    return ball_from_endpoints(ZERO, hi_pow.sup(), w)


# ---------------------------------------------------------------------------
# exact lens quantities through the cosine-power recursion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LensExact:
    """Exact value a + b*sqrt(3) + c*pi."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __add__(self, other: "LensExact") -> "LensExact":
        return LensExact(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: "LensExact") -> "LensExact":
        return LensExact(self.a - other.a, self.b - other.b, self.c - other.c)

    def scale(self, f) -> "LensExact":
        f = Fraction(f)
        return LensExact(self.a * f, self.b * f, self.c * f)

    def to_ball(self, prec: int) -> Ball:
        from .ball import pi_ball

        w = prec + 8
        out = Ball.from_fraction(self.a, w)
        if self.b:
            s3 = sqrt_ball(Ball.from_int(3, w), w)
            out = ball_add(out, ball_mul_rat(s3, self.b.numerator, self.b.denominator, w), w)
        if self.c:
            out = ball_add(out, ball_mul_rat(pi_ball(w), self.c.numerator, self.c.denominator, w), w)
        return ball_round(out, prec)


def _cos_power_integrals(n_max: int) -> list[LensExact]:
    """I_m = integral of cos(t)**m over [pi/6, pi/2], m = 0..n_max, exact."""
    out = [LensExact(Fraction(0), Fraction(0), Fraction(1, 3)), LensExact(Fraction(1, 2), Fraction(0), Fraction(0))]
    for m in range(2, n_max + 1):
        prev = out[m - 2].scale(Fraction(m - 1, m))
        t = (m - 1) // 2
        mag = Fraction(3, 4) ** t
        if (m - 1) % 2 == 0:
            bnd = LensExact(mag / (2 * m), Fraction(0), Fraction(0))
        else:
            bnd = LensExact(Fraction(0), mag / (4 * m), Fraction(0))
        out.append(prev - bnd)
    return out


def lens_exact_wallis(n: int) -> tuple[LensExact, LensExact]:
    """Exact (cap_area / omega_{n-1}, lens_volume / omega_{n-1})."""
    if n < 3:
        raise ValueError("dimension must be at least 3")
    table = _cos_power_integrals(n)
    cap = table[n - 2].scale(n - 1)
    vol = table[n].scale(2)
    return cap, vol


def _sqrt3_half_power(e: int) -> LensExact:
    """(sqrt(3)/2)**e as an exact element."""
    mag = Fraction(3, 4) ** (e // 2)
    if e % 2 == 0:
        return LensExact(mag, Fraction(0), Fraction(0))
    return LensExact(Fraction(0), mag / 2, Fraction(0))


def lambda_plane_exact_ball(n: int, prec: int) -> Ball:
    """Renormalized lens energy assembled from the exact cosine-power parts."""
    from .specfun import unit_ball_volume

    w = prec + 16
    cap, vol = lens_exact_wallis(n)
    num = cap.scale(2) - _sqrt3_half_power(n - 1)
    omega = unit_ball_volume(n - 1, w)
    out = ball_mul(num.to_ball(w), pow_rational(omega, 1, n, w), w)
    out = ball_div(out, pow_rational(vol.to_ball(w), n - 1, n, w), w)
    return ball_round(out, prec)


# ---------------------------------------------------------------------------
# exact arithmetic in Q(sqrt2, sqrt3)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QSqrt23:
    """a + b*sqrt2 + c*sqrt3 + d*sqrt6 with rational coordinates."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    @classmethod
    def from_rational(cls, x) -> "QSqrt23":
        return cls(Fraction(x), Fraction(0), Fraction(0), Fraction(0))

    def __add__(self, other):
        other = _lift_q23(other)
        return QSqrt23(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_lift_q23(other))

    def __rsub__(self, other):
        return _lift_q23(other) + (-self)

    def __neg__(self):
        return QSqrt23(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        o = _lift_q23(other)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return QSqrt23(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conj_sqrt2(self):
        return QSqrt23(self.a, -self.b, self.c, -self.d)

    def conj_sqrt3(self):
        return QSqrt23(self.a, self.b, -self.c, -self.d)

    def inverse(self) -> "QSqrt23":
        y = self * self.conj_sqrt2()      # lands in Q(sqrt3)
        norm = y * y.conj_sqrt3()          # rational
        if norm.b or norm.c or norm.d or norm.a == 0:
            raise ZeroDivisionError("element is zero or norm computation failed")
        return self.conj_sqrt2() * y.conj_sqrt3() * QSqrt23.from_rational(1 / norm.a)

    def __truediv__(self, other):
        return self * _lift_q23(other).inverse()

    def __rtruediv__(self, other):
        return _lift_q23(other) * self.inverse()

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def to_ball(self, prec: int) -> Ball:
        w = prec + 8
        out = Ball.from_fraction(self.a, w)
        for coeff, base in ((self.b, 2), (self.c, 3), (self.d, 6)):
            if coeff:
                root = sqrt_ball(Ball.from_int(base, w), w)
                out = ball_add(out, ball_mul_rat(root, coeff.numerator, coeff.denominator, w), w)
        return ball_round(out, prec)


def _lift_q23(x) -> QSqrt23:
    if isinstance(x, QSqrt23):
        return x
    return QSqrt23.from_rational(Fraction(x))


def _normalize_q23(x: QSqrt23) -> tuple[QSqrt23, Fraction]:
    """Scale to coprime integer coordinates; returns (element, scale used)."""
    denom_lcm = 1
    for co in (x.a, x.b, x.c, x.d):
        denom_lcm = denom_lcm * co.denominator // math.gcd(denom_lcm, co.denominator)
    nums = [int(co * denom_lcm) for co in (x.a, x.b, x.c, x.d)]
    g = 0
    for v in nums:
        g = math.gcd(g, abs(v))
    if g == 0:
        return x, Fraction(1)
    scale = Fraction(denom_lcm, g)
    return QSqrt23(*(Fraction(v // g) for v in nums)), scale


# ---------------------------------------------------------------------------
# polynomial competitor-energy paths
# ---------------------------------------------------------------------------


def _binomial_arc_sum(rad_pows, off_pows, lead_pow: int, half: int, other_deg: int, lo_pows, up_pows):
    """sum_j C(half,j)(-1)^j radius^(lead_pow-2j) sum_i C(2j,i) offset^(2j-i)
    * (upper^(deg+i+1) - lower^(deg+i+1)) / (deg+i+1)

    Works for any commutative value type supporting +,-,* and rational
    scaling via multiplication; the *_pows arguments are precomputed power
    tables of the respective constants and endpoints.
    """
    total = None
    for j in range(half + 1):
        inner = None
        for i in range(2 * j + 1):
            e = other_deg + i + 1
            diff = up_pows[e] - lo_pows[e]
            piece = diff * Fraction(math.comb(2 * j, i), e)
            piece = piece * off_pows[2 * j - i]
            inner = piece if inner is None else inner + piece
        inner = inner * Fraction((-1) ** j * math.comb(half, j))
        piece = inner * rad_pows[lead_pow - 2 * j]
        total = piece if total is None else total + piece
    return total


def _power_table_balls(x: Ball, n: int, w: int) -> list[Ball]:
    out = [Ball.from_int(1, w)]
    for _ in range(n):
        out.append(ball_mul(out[-1], x, w))
    return out


def _power_table_q23(x: QSqrt23, n: int) -> list[QSqrt23]:
    out = [QSqrt23.from_rational(1)]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def polynomial_m_value(k: int, l: int, prec: int):
    """Competitor energy for odd k, l via exact binomial expansion.

    The integrands are polynomials, so only the geometric constants carry
    enclosure radii; all coefficients are exact rationals.
    """
    from . import geom

    if k % 2 == 0 or l % 2 == 0:
        raise DomainViolation("polynomial path requires both indices odd")
    consts = geom.lawson_constants(k, l, prec + 16)
    w = prec + 16
    deg = k + l + 4
    rho_p = _power_table_balls(consts.rho, deg, w)
    d_p = _power_table_balls(consts.d, deg, w)
    r_p = _power_table_balls(consts.r, deg, w)
    h_p = _power_table_balls(consts.h, deg, w)
    lam_p = _power_table_balls(consts.lambda_, deg, w)
    rd = ball_sub(consts.rho, consts.d, w)
    rh = ball_sub(consts.r, consts.h, w)
    rd_p = _power_table_balls(rd, deg, w)
    rh_p = _power_table_balls(rh, deg, w)
    one_p = [Ball.from_int(1, w)] * (deg + 1)

    s1v = _binomial_arc_sum(rho_p, d_p, l + 1, (l + 1) // 2, k, lam_p, rd_p)
    s1p = _binomial_arc_sum(rho_p, d_p, l - 1, (l - 1) // 2, k, lam_p, rd_p)
    s2v = _binomial_arc_sum(r_p, h_p, k + 1, (k + 1) // 2, l, one_p, rh_p)
    s2p = _binomial_arc_sum(r_p, h_p, k - 1, (k - 1) // 2, l, one_p, rh_p)
    return geom.assemble_competitor(
        consts, s1v, s2v, s1p, s2p, prec, geom.EnergyPath.POLYNOMIAL_EXACT
    )


@dataclass(frozen=True)
class SimonsExact:
    """Exact balanced-case competitor energy data for odd k (n = 2k + 2)."""

    k: int
    num: QSqrt23
    den: QSqrt23
    num_scale: Fraction
    den_scale: Fraction
    assembled: Ball


def exact_simons_m(k: int, prec: int = 128) -> SimonsExact:
    """M(k,k) for odd k, exactly in Q(sqrt2, sqrt3) up to the outer radicals.

    num/den are the scaled coprime-integer field elements (see the module
    docstring for the normalization rule); `assembled` applies the outer
    rational powers and the sqrt(pi)/volume prefactors to the raw elements.
    """
    from .specfun import unit_ball_volume

    if k % 2 == 0 or k < 1:
        raise DomainViolation("balanced exact path requires odd k")
    n = 2 * k + 2
    r = QSqrt23(Fraction(0), Fraction(1), Fraction(0), Fraction(1))  # sqrt2 + sqrt6
    h = QSqrt23(Fraction(1), Fraction(0), Fraction(1), Fraction(0))  # 1 + sqrt3
    deg = 2 * k + 4
    r_pows = _power_table_q23(r, deg)
    h_pows = _power_table_q23(h, deg)
    rh_pows = _power_table_q23(r - h, deg)
    one_pows = [QSqrt23.from_rational(1)] * (deg + 1)

    s_p = _binomial_arc_sum(r_pows, h_pows, k, (k - 1) // 2, k, one_pows, rh_pows)
    s_v = _binomial_arc_sum(r_pows, h_pows, k + 1, (k + 1) // 2, k, one_pows, rh_pows)

    sqrt2 = QSqrt23(Fraction(0), Fraction(1), Fraction(0), Fraction(0))
    num_raw = s_p * Fraction(2 * (k + 1) ** 2) - sqrt2 * Fraction((k + 1) ** 2, 2 * k + 1)
    den_raw = QSqrt23.from_rational(1) + s_v * Fraction(2 * (k + 1))

    num, num_scale = _normalize_q23(num_raw)
    den, den_scale = _normalize_q23(den_raw)

    w = prec + 16
    omega = unit_ball_volume(k + 1, w)
    m = ball_mul(pow_rational(ball_mul(omega, omega, w), 1, n, w), num_raw.to_ball(w), w)
    m = ball_div(m, pow_rational(den_raw.to_ball(w), n - 1, n, w), w)
    return SimonsExact(k, num, den, num_scale, den_scale, ball_round(m, prec))
