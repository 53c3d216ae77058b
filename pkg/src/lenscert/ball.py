"""Midpoint-radius ball arithmetic with guaranteed enclosure semantics.

Every operation returns a Ball that contains {f(x, y) : x in a, y in b}.
Midpoints are rounded to the working precision and the exact rounding error
is absorbed into the radius, so soundness never relies on directed hardware
rounding.  Elementary functions run an argument-reduced Taylor series whose
truncation remainder is bounded explicitly and added to the radius.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from math import gcd

from .bigfloat import (
    BigFloat,
    ZERO,
    ONE,
    RADIUS_PREC,
    bf_abs,
    bf_add,
    bf_add_exact,
    bf_cmp,
    bf_div,
    bf_from_fraction,
    bf_from_int,
    bf_mul,
    bf_mul_rat,
    bf_msb_exp,
    bf_neg,
    bf_round,
    bf_shift,
    bf_sqrt,
    bf_to_float,
    bf_to_fraction,
    bf_two_power,
    rdown,
    rup,
    rup_add,
    rup_div,
    rup_mul,
    rup_mul_rat,
)
from .errors import DivisionByIntervalContainingZero, DomainViolation, NonPositiveBase

__all__ = [
    "Ball",
    "TriBool",
    "ball_add",
    "ball_sub",
    "ball_neg",
    "ball_mul",
    "ball_mul_rat",
    "ball_div",
    "ball_pow_int",
    "ball_round",
    "ball_hull",
    "ball_widen",
    "ball_from_endpoints",
    "certainly_less",
    "certainly_positive",
    "intersects",
    "pi_ball",
    "ln2_ball",
    "sqrt_ball",
    "exp_ball",
    "log_ball",
    "atan_ball",
    "asin_ball",
    "sin_ball",
    "cos_ball",
    "tan_ball",
    "sec_ball",
    "pow_rational",
    "constants_and_elementary",
    "ball_to_str",
    "ball_from_str",
]


class TriBool(Enum):
    CERTAINLY_TRUE = "CertainlyTrue"
    CERTAINLY_FALSE = "CertainlyFalse"
    UNKNOWN = "Unknown"


class Ball:
    """Certified enclosure mid +/- rad at a working precision (bits)."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid: BigFloat, rad: BigFloat, prec: int):
        if rad.sign < 0:
            raise ValueError("negative radius")
        self.mid = mid
        self.rad = rad
        self.prec = prec

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_int(cls, n: int, prec: int) -> "Ball":
        return cls(bf_from_int(n), ZERO, prec)

    @classmethod
    def from_fraction(cls, fr, prec: int) -> "Ball":
        mid, err = bf_from_fraction(Fraction(fr), prec)
        return cls(mid, rup(err), prec)

    @classmethod
    def point(cls, mid: BigFloat, prec: int) -> "Ball":
        return cls(mid, ZERO, prec)

    # -- exact queries -----------------------------------------------------

    def sup(self) -> BigFloat:
        return bf_add_exact(self.mid, self.rad)

    def inf(self) -> BigFloat:
        return bf_add_exact(self.mid, bf_neg(self.rad))

    def mag_sup(self) -> BigFloat:
        """Upper bound for |x| over the ball."""
        return rup_add(rup(bf_abs(self.mid)), self.rad)

    def mag_inf(self) -> BigFloat:
        """Lower bound for |x| over the ball (0 if the ball straddles 0)."""
        c = bf_add_exact(bf_abs(self.mid), bf_neg(self.rad))
        if c.sign <= 0:
            return ZERO
        return rdown(c)

    def width(self) -> BigFloat:
        return bf_shift(self.rad, 1)

    def contains_fraction(self, fr) -> bool:
        fr = Fraction(fr)
        return abs(fr - bf_to_fraction(self.mid)) <= bf_to_fraction(self.rad)

    def contains_ball(self, other: "Ball") -> bool:
        return (
            bf_cmp(self.inf(), other.inf()) <= 0
            and bf_cmp(other.sup(), self.sup()) <= 0
        )

    def contains_zero(self) -> bool:
        return self.contains_fraction(0)

    def is_exact(self) -> bool:
        return self.rad.sign == 0

    def float_mid(self) -> float:
        return bf_to_float(self.mid)

    def float_rad(self) -> float:
        return bf_to_float(self.rad)

    def __repr__(self):
        return "Ball(%s)" % ball_to_str(self, max_digits=12)

    # -- operator sugar (scalars lift exactly / with tracked error) --------

    def _lift(self, other) -> "Ball":
        if isinstance(other, Ball):
            return other
        if isinstance(other, int):
            return Ball.from_int(other, self.prec)
        if isinstance(other, Fraction):
            return Ball.from_fraction(other, self.prec)
        raise TypeError("cannot mix Ball with %r" % type(other))

    def __add__(self, other):
        return ball_add(self, self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ball_sub(self, self._lift(other))

    def __rsub__(self, other):
        return ball_sub(self._lift(other), self)

    def __mul__(self, other):
        if isinstance(other, int):
            return ball_mul_rat(self, other, 1)
        if isinstance(other, Fraction):
            return ball_mul_rat(self, other.numerator, other.denominator)
        return ball_mul(self, self._lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            return ball_mul_rat(self, 1 if other > 0 else -1, abs(other))
        if isinstance(other, Fraction):
            return ball_mul_rat(self, other.denominator if other > 0 else -other.denominator, abs(other.numerator))
        return ball_div(self, self._lift(other))

    def __rtruediv__(self, other):
        return ball_div(self._lift(other), self)

    def __neg__(self):
        return ball_neg(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("use pow_rational for non-integer exponents")
        return ball_pow_int(self, n)


# ---------------------------------------------------------------------------
# core arithmetic
# ---------------------------------------------------------------------------


def ball_add(a: Ball, b: Ball, prec: int | None = None) -> Ball:
    prec = prec or max(a.prec, b.prec)
    mid, err = bf_add(a.mid, b.mid, prec)
    return Ball(mid, rup_add(rup_add(a.rad, b.rad), err), prec)


def ball_neg(a: Ball) -> Ball:
    return Ball(bf_neg(a.mid), a.rad, a.prec)


def ball_sub(a: Ball, b: Ball, prec: int | None = None) -> Ball:
    return ball_add(a, ball_neg(b), prec)


def ball_mul(a: Ball, b: Ball, prec: int | None = None) -> Ball:
    prec = prec or max(a.prec, b.prec)
    mid, err = bf_mul(a.mid, b.mid, prec)
    rad = err
    if b.rad.sign:
        rad = rup_add(rad, rup_mul(rup(bf_abs(a.mid)), b.rad))
    if a.rad.sign:
        rad = rup_add(rad, rup_mul(rup(bf_abs(b.mid)), a.rad))
        if b.rad.sign:
            rad = rup_add(rad, rup_mul(a.rad, b.rad))
    return Ball(mid, rad, prec)


def ball_mul_rat(a: Ball, p: int, q: int, prec: int | None = None) -> Ball:
    """a * p/q for integers p, q with q > 0."""
    prec = prec or a.prec
    if q <= 0:
        raise ValueError("q must be positive")
    mid, err = bf_mul_rat(a.mid, p, q, prec)
    rad = err
    if a.rad.sign:
        rad = rup_add(rad, rup_mul_rat(a.rad, abs(p), q))
    return Ball(mid, rad, prec)


def ball_div(a: Ball, b: Ball, prec: int | None = None) -> Ball:
    prec = prec or max(a.prec, b.prec)
    denom_low = bf_add_exact(bf_abs(b.mid), bf_neg(b.rad))
    if denom_low.sign <= 0:
        raise DivisionByIntervalContainingZero(
            "divisor ball contains zero: %s" % ball_to_str(b, max_digits=8)
        )
    mid, err = bf_div(a.mid, b.mid, prec)
    rad = err
    if a.rad.sign or b.rad.sign:
        t = rup_add(rup(bf_abs(mid)), rup(err))
        num = rup_add(a.rad, rup_mul(t, b.rad))
        rad = rup_add(err, rup_div(num, denom_low))
    return Ball(mid, rad, prec)


def ball_pow_int(a: Ball, n: int, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    if n < 0:
        return ball_div(Ball.from_int(1, prec), ball_pow_int(a, -n, prec), prec)
    result = Ball.from_int(1, prec)
    base = a
    while n:
        if n & 1:
            result = ball_mul(result, base, prec)
        n >>= 1
        if n:
            base = ball_mul(base, base, prec)
    return result


def ball_round(a: Ball, prec: int) -> Ball:
    """Re-round to a (typically lower) precision, widening as needed."""
    mid, err = bf_round(a.mid.sign, a.mid.man, a.mid.exp, prec)
    return Ball(mid, rup_add(a.rad, err), prec)


def ball_widen(a: Ball, extra: BigFloat) -> Ball:
    if extra.sign < 0:
        raise ValueError("widening must be nonnegative")
    return Ball(a.mid, rup_add(a.rad, extra), a.prec)


def ball_hull(a: Ball, b: Ball, prec: int | None = None) -> Ball:
    prec = prec or max(a.prec, b.prec)
    lo_a, lo_b = a.inf(), b.inf()
    hi_a, hi_b = a.sup(), b.sup()
    lo = lo_a if bf_cmp(lo_a, lo_b) <= 0 else lo_b
    hi = hi_a if bf_cmp(hi_a, hi_b) >= 0 else hi_b
    return ball_from_endpoints(lo, hi, prec)


def ball_from_endpoints(lo: BigFloat, hi: BigFloat, prec: int) -> Ball:
    if bf_cmp(lo, hi) > 0:
        raise ValueError("endpoints out of order")
    center = bf_shift(bf_add_exact(lo, hi), -1)
    half = bf_shift(bf_add_exact(hi, bf_neg(lo)), -1)
    mid, err = bf_round(center.sign, center.man, center.exp, prec)
    return Ball(mid, rup_add(rup(half), err), prec)


# ---------------------------------------------------------------------------
# comparison predicates
# ---------------------------------------------------------------------------


def certainly_less(a: Ball, b: Ball) -> TriBool:
    if bf_cmp(a.sup(), b.inf()) < 0:
        return TriBool.CERTAINLY_TRUE
    if bf_cmp(a.inf(), b.sup()) > 0:
        return TriBool.CERTAINLY_FALSE
    return TriBool.UNKNOWN


def certainly_positive(a: Ball) -> bool:
    return a.inf().sign > 0


def intersects(a: Ball, b: Ball) -> bool:
    d = bf_abs(bf_add_exact(a.mid, bf_neg(b.mid)))
    return bf_cmp(d, bf_add_exact(a.rad, b.rad)) <= 0


# ---------------------------------------------------------------------------
# certified constants
# ---------------------------------------------------------------------------

_PI_CACHE: dict[tuple[int, str], Ball] = {}
_LN2_CACHE: dict[int, Ball] = {}


def _atan_recip_scaled(m: int, w: int) -> tuple[int, int]:
    """(value, err_units): |atan(1/m)*2**w - value| <= err_units."""
    scale = 1 << w
    power = m
    m2 = m * m
    acc = 0
    terms = 0
    j = 0
    while True:
        t = scale // (power * (2 * j + 1))
        if t == 0:
            break
        acc += t if (j & 1) == 0 else -t
        terms += 1
        power *= m2
        j += 1
    # each computed term truncated toward zero (<=1 unit each); the omitted
    # alternating tail is below the first omitted term, itself < 1 unit
    return acc, terms + 1


def pi_ball(prec: int, formula: str = "machin") -> Ball:
    """Enclosure of pi.

    'machin' uses 16*atan(1/5) - 4*atan(1/239); 'gauss' uses the independent
    48*atan(1/18) + 32*atan(1/57) - 20*atan(1/239) as a cross-check path.
    """
    key = (prec, formula)
    cached = _PI_CACHE.get(key)
    if cached is not None:
        return cached
    w = prec + 16
    if formula == "machin":
        parts = ((16, 5), (-4, 239))
    elif formula == "gauss":
        parts = ((48, 18), (32, 57), (-20, 239))
    else:
        raise ValueError("unknown pi formula %r" % formula)
    acc = 0
    err_units = 0
    for coeff, m in parts:
        v, e = _atan_recip_scaled(m, w)
        acc += coeff * v
        err_units += abs(coeff) * e
    mid, rnd = bf_round(1, acc, -w, prec)
    rad = rup_add(rup(bf_shift(bf_from_int(err_units), -w)), rnd)
    out = Ball(mid, rad, prec)
    _PI_CACHE[key] = out
    return out


def ln2_ball(prec: int) -> Ball:
    cached = _LN2_CACHE.get(prec)
    if cached is not None:
        return cached
    w = prec + 16
    scale = 1 << w
    power = 3
    acc = 0
    terms = 0
    j = 0
    while True:
        t = scale // (power * (2 * j + 1))
        if t == 0:
            break
        acc += t
        terms += 1
        power *= 9
        j += 1
    acc *= 2
    # truncations (2 units each after doubling) plus the geometric tail (<2)
    err_units = 2 * terms + 2
    mid, rnd = bf_round(1, acc, -w, prec)
    out = Ball(mid, rup_add(rup(bf_shift(bf_from_int(err_units), -w)), rnd), prec)
    _LN2_CACHE[prec] = out
    return out


# ---------------------------------------------------------------------------
# elementary functions
# ---------------------------------------------------------------------------


def _tol(prec: int) -> BigFloat:
    return bf_two_power(-prec - 8)


def sqrt_ball(a: Ball, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    lo = a.inf()
    if lo.sign < 0:
        raise DomainViolation("sqrt of a ball reaching below zero")
    hi = a.sup()
    lo_r, lo_e = bf_sqrt(lo, prec + 4)
    hi_r, hi_e = bf_sqrt(hi, prec + 4)
    out = ball_from_endpoints(
        bf_add_exact(lo_r, bf_neg(lo_e)), bf_add_exact(hi_r, hi_e), prec
    )
    return out


def _exp_thin(x: BigFloat, prec: int) -> Ball:
    w = prec + 16
    if x.sign == 0:
        return Ball.from_int(1, prec)
    fx = bf_to_float(x)
    if abs(fx) > 1 << 40:
        raise DomainViolation("exp argument out of supported range")
    k = int(round(fx * 1.4426950408889634))
    t = Ball.point(x, w)
    if k:
        t = ball_sub(t, ball_mul_rat(ln2_ball(w), k, 1), w)
    if bf_cmp(t.mag_sup(), BigFloat(1, 3, -2)) > 0:
        raise DomainViolation("exp argument reduction failed")
    # |t| <= 3/4; sum exp(t) with factorial tail bound
    tol = _tol(prec)
    term = Ball.from_int(1, w)
    total = term
    j = 0
    while True:
        j += 1
        term = ball_mul_rat(ball_mul(term, t, w), 1, j, w)
        total = ball_add(total, term, w)
        m = term.mag_sup()
        if bf_cmp(m, tol) <= 0 and j >= 2:
            # ratio |t|/(j+1) <= 1/2 from here on, so tail <= 2*|term|
            tail = rup_add(bf_shift(m, 1), ZERO)
            total = ball_widen(total, tail)
            break
        if j > 4 * w:
            raise DomainViolation("exp series failed to converge")
    result = Ball(bf_shift(total.mid, k), bf_shift(total.rad, k), w)
    return ball_round(result, prec)


def exp_ball(a: Ball, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    if a.rad.sign == 0:
        return _exp_thin(a.mid, prec)
    return ball_hull(_exp_thin(a.inf(), prec), _exp_thin(a.sup(), prec), prec)


def _log_thin(x: BigFloat, prec: int) -> Ball:
    if x.sign <= 0:
        raise DomainViolation("log of a nonpositive value")
    w = prec + 16
    s = bf_msb_exp(x)  # x in [2**(s-1), 2**s)
    y = bf_shift(x, -s)  # y in [1/2, 1)
    if bf_cmp(y, BigFloat(1, 3, -2)) < 0:  # y < 3/4: renormalize to [1, 1.5)
        y = bf_shift(y, 1)
        s -= 1
    yb = Ball.point(y, w)
    u = ball_div(ball_sub(yb, Ball.from_int(1, w), w), ball_add(yb, Ball.from_int(1, w), w), w)
    # |u| <= 1/5; ln(y) = 2 * sum u^(2j+1)/(2j+1)
    u2 = ball_mul(u, u, w)
    u2_sup = u2.mag_sup()
    if bf_cmp(u2_sup, BigFloat(1, 1, -1)) >= 0:
        raise DomainViolation("log argument reduction failed")
    term = u
    total = ball_mul_rat(u, 1, 1, w)
    j = 0
    tol = _tol(prec)
    while True:
        j += 1
        term = ball_mul(term, u2, w)
        contrib = ball_mul_rat(term, 1, 2 * j + 1, w)
        total = ball_add(total, contrib, w)
        m = contrib.mag_sup()
        if bf_cmp(m, tol) <= 0:
            # geometric tail with ratio u2 (< 1/20)
            tail = rup_div(rup_mul(m, u2_sup), bf_add_exact(ONE, bf_neg(u2_sup)))
            total = ball_widen(total, tail)
            break
        if j > 4 * w:
            raise DomainViolation("log series failed to converge")
    total = ball_mul_rat(total, 2, 1, w)
    if s:
        total = ball_add(total, ball_mul_rat(ln2_ball(w), s, 1, w), w)
    return ball_round(total, prec)


def log_ball(a: Ball, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    lo = a.inf()
    if lo.sign <= 0:
        raise DomainViolation("log of a ball reaching below zero")
    if a.rad.sign == 0:
        return _log_thin(a.mid, prec)
    return ball_hull(_log_thin(lo, prec), _log_thin(a.sup(), prec), prec)


def _atan_core(b: Ball, prec: int) -> Ball:
    """atan for 0 <= b <= 1 (after two argument halvings the series is fast)."""
    w = prec + 16
    one = Ball.from_int(1, w)
    for _ in range(2):
        denom = ball_add(one, sqrt_ball(ball_add(one, ball_mul(b, b, w), w), w), w)
        b = ball_div(b, denom, w)
    # |b| <= 0.2; alternating series with remainder <= first omitted term
    b2 = ball_mul(b, b, w)
    term = b
    total = b
    j = 0
    tol = _tol(prec)
    while True:
        j += 1
        term = ball_neg(ball_mul(term, b2, w))
        contrib = ball_mul_rat(term, 1, 2 * j + 1, w)
        m = contrib.mag_sup()
        if bf_cmp(m, tol) <= 0:
            total = ball_widen(total, m)
            break
        total = ball_add(total, contrib, w)
        if j > 4 * w:
            raise DomainViolation("atan series failed to converge")
    return ball_mul_rat(total, 4, 1, w)


def _atan_thin(x: BigFloat, prec: int) -> Ball:
    w = prec + 16
    if x.sign == 0:
        return Ball.from_int(0, prec)
    ax = bf_abs(x)
    if bf_cmp(ax, ONE) > 0:
        inv = ball_div(Ball.from_int(1, w), Ball.point(ax, w), w)
        res = ball_sub(bf_half_pi(w), _atan_core(inv, w), w)
    else:
        res = _atan_core(Ball.point(ax, w), w)
    if x.sign < 0:
        res = ball_neg(res)
    return ball_round(res, prec)


def bf_half_pi(prec: int) -> Ball:
    p = pi_ball(prec)
    return Ball(bf_shift(p.mid, -1), bf_shift(p.rad, -1), prec)


def atan_ball(a: Ball, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    if a.rad.sign == 0:
        return _atan_thin(a.mid, prec)
    return ball_hull(_atan_thin(a.inf(), prec), _atan_thin(a.sup(), prec), prec)


def asin_ball(a: Ball, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    w = prec + 8
    one = Ball.from_int(1, w)
    inner = ball_sub(one, ball_mul(a, a, w), w)
    if not certainly_positive(inner):
        raise DomainViolation("asin argument must lie certainly inside (-1, 1)")
    return ball_round(atan_ball(ball_div(a, sqrt_ball(inner, w), w), w), prec)


def _sin_cos_thin(x: BigFloat, prec: int, want_sin: bool) -> Ball:
    w = prec + 16
    ax = bf_abs(x)
    if bf_cmp(ax, bf_from_int(8)) > 0:
        raise DomainViolation("sin/cos argument out of supported range (|x| <= 8)")
    xb = Ball.point(x, w)
    x2 = ball_mul(xb, xb, w)
    x2_sup = x2.mag_sup()
    if want_sin:
        term = xb
        base = 1
    else:
        term = Ball.from_int(1, w)
        base = 0
    total = term
    j = 0
    tol = _tol(prec)
    while True:
        j += 1
        d1 = base + 2 * j - 1
        d2 = base + 2 * j
        term = ball_neg(ball_mul_rat(ball_mul(term, x2, w), 1, d1 * d2, w))
        m = term.mag_sup()
        ratio_den = (base + 2 * j + 1) * (base + 2 * j + 2)
        if bf_cmp(m, tol) <= 0 and bf_cmp(x2_sup, bf_from_int(ratio_den // 2)) < 0:
            # next-term magnitudes decrease from here; alternating tail bound
            total = ball_widen(total, m)
            break
        total = ball_add(total, term, w)
        if j > 4 * w:
            raise DomainViolation("sin/cos series failed to converge")
    return ball_round(total, prec)


def sin_ball(a: Ball, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    out = _sin_cos_thin(a.mid, prec, want_sin=True)
    # |sin'| <= 1, widen by the argument radius
    return ball_widen(out, a.rad)


def cos_ball(a: Ball, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    out = _sin_cos_thin(a.mid, prec, want_sin=False)
    return ball_widen(out, a.rad)


def tan_ball(a: Ball, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    c = cos_ball(a, prec + 8)
    if c.contains_zero():
        raise DomainViolation("tan argument too close to a pole")
    return ball_round(ball_div(sin_ball(a, prec + 8), c, prec + 8), prec)


def sec_ball(a: Ball, prec: int | None = None) -> Ball:
    prec = prec or a.prec
    c = cos_ball(a, prec + 8)
    if c.contains_zero():
        raise DomainViolation("sec argument too close to a pole")
    return ball_round(ball_div(Ball.from_int(1, prec + 8), c, prec + 8), prec)


def pow_rational(a: Ball, p: int, q: int, prec: int | None = None) -> Ball:
    """a**(p/q) for a certainly positive ball; q > 0."""
    prec = prec or a.prec
    if q <= 0:
        raise ValueError("q must be positive")
    g = gcd(abs(p), q)
    if g > 1:
        p //= g
        q //= g
    if p == 0:
        return Ball.from_int(1, prec)
    if not certainly_positive(a):
        raise NonPositiveBase("pow_rational base must be certainly positive")
    if q == 1:
        return ball_pow_int(a, p, prec)
    if q == 2:
        # x**(p/2) is monotone on x > 0: evaluate at the endpoints
        w = prec + 8
        lo_b = sqrt_ball(ball_pow_int(Ball.point(a.inf(), w), abs(p), w), w)
        hi_b = sqrt_ball(ball_pow_int(Ball.point(a.sup(), w), abs(p), w), w)
        out = ball_from_endpoints(lo_b.inf(), hi_b.sup(), w)
        if p < 0:
            out = ball_div(Ball.from_int(1, w), out, w)
        return ball_round(out, prec)
    w = prec + 16
    out = exp_ball(ball_mul_rat(log_ball(a, w), p, q, w), w)
    return ball_round(out, prec)


def constants_and_elementary(kind: str, a: Ball | None = None, *, prec: int) -> Ball:
    """Single entry point over the certified constants and elementary kernels."""
    if kind == "pi":
        return pi_ball(prec)
    if a is None:
        raise ValueError("%s requires an argument ball" % kind)
    table = {
        "sqrt": sqrt_ball,
        "arcsin": asin_ball,
        "arctan": atan_ball,
        "tan": tan_ball,
        "sec": sec_ball,
        "exp": exp_ball,
        "log": log_ball,
    }
    if kind not in table:
        raise ValueError("unknown elementary kind %r" % kind)
    return table[kind](a, prec)


# ---------------------------------------------------------------------------
# decimal serialization:  "<mid> +/- <rad>", parsing widens, never narrows
# ---------------------------------------------------------------------------


def _floor_log10(x: Fraction) -> int:
    if x <= 0:
        raise ValueError("log10 of nonpositive value")
    # estimate from binary magnitude, then correct exactly
    num, den = x.numerator, x.denominator
    e = int((num.bit_length() - den.bit_length()) * 0.30103) - 1
    while 10 ** (e + 1) <= num / Fraction(den):
        e += 1
    while Fraction(10) ** e > x:
        e -= 1
    return e


def _format_decimal(q: int, e10: int) -> str:
    """Scientific string for q * 10**e10 with q an integer."""
    s = str(abs(q))
    exp = e10 + len(s) - 1
    digits = s[0] + ("." + s[1:] if len(s) > 1 else "")
    sign = "-" if q < 0 else ""
    return "%s%se%+d" % (sign, digits, exp)


def ball_to_str(b: Ball, max_digits: int | None = None) -> str:
    mid_fr = bf_to_fraction(b.mid)
    rad_fr = bf_to_fraction(b.rad)
    if mid_fr == 0:
        mid_str = "0"
        delta = Fraction(0)
    else:
        e10 = _floor_log10(abs(mid_fr))
        if rad_fr > 0:
            # print down to roughly rad/8 so the widening stays marginal
            digits = e10 - _floor_log10(rad_fr / 8) + 1
            digits = max(1, digits)
        else:
            digits = int(b.prec * 0.30103) + 2
        if max_digits is not None:
            digits = min(digits, max_digits)
        shift = digits - 1 - e10
        scaled = mid_fr * Fraction(10) ** shift
        q = int(scaled + Fraction(1, 2)) if scaled >= 0 else -int(-scaled + Fraction(1, 2))
        mid_str = _format_decimal(q, -shift)
        delta = abs(mid_fr - q * Fraction(10) ** (-shift))
    total = rad_fr + delta
    if total == 0:
        rad_str = "0"
    else:
        er = _floor_log10(total)
        scale = Fraction(10) ** (1 - er)
        qr = total * scale
        qr_int = qr.numerator // qr.denominator + (1 if qr.numerator % qr.denominator else 0)
        rad_str = _format_decimal(qr_int, er - 1)
    return "%s +/- %s" % (mid_str, rad_str)


def _parse_decimal(s: str) -> Fraction:
    s = s.strip()
    if "e" in s:
        mant, _, ex = s.partition("e")
        return Fraction(mant) * Fraction(10) ** int(ex)
    return Fraction(s)


def ball_from_str(s: str, prec: int) -> Ball:
    mid_part, sep, rad_part = s.partition("+/-")
    if not sep:
        raise ValueError("missing '+/-' separator in %r" % s)
    mid_fr = _parse_decimal(mid_part)
    rad_fr = _parse_decimal(rad_part)
    if rad_fr < 0:
        raise ValueError("negative radius in %r" % s)
    mid, err = bf_from_fraction(mid_fr, prec)
    rad_bf, rad_err = bf_from_fraction(rad_fr, RADIUS_PREC + 4)
    rad = rup_add(rup_add(rup(rad_bf), rup(rad_err)), err)
    return Ball(mid, rad, prec)
