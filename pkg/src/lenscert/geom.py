"""Lens and Lawson-competitor energy functionals.

The renormalized lens energy is assembled from half-integer gamma values and
two Gauss hypergeometric evaluations at z = 1/4; the competitor energy comes
from the arc construction whose circular-arc constants are produced here and
whose integrals are evaluated on three independent routes (special function,
verified quadrature, exact polynomial expansion for odd index pairs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import oracle, specfun
from .bigfloat import BigFloat, bf_cmp, bf_from_float, bf_to_float
from .ball import (
    Ball,
    TriBool,
    atan_ball,
    ball_add,
    ball_div,
    ball_mul,
    ball_mul_rat,
    ball_neg,
    ball_pow_int,
    ball_round,
    ball_sub,
    certainly_less,
    certainly_positive,
    cos_ball,
    pi_ball,
    pow_rational,
    sin_ball,
    sqrt_ball,
)
from .errors import (
    InvalidGeometry,
    NoValidPair,
    PrecisionExhausted,
    QuadratureBudgetExceeded,
)

__all__ = [
    "LensQuantities",
    "lens_quantities",
    "LawsonConstants",
    "lawson_constants",
    "EnergyPath",
    "CompetitorEnergy",
    "competitor_energy_specfun",
    "competitor_energy_quadrature",
    "assemble_competitor",
    "lambda_lawson_upper",
    "default_pairs",
    "table_pairs",
    "plot_pair",
    "all_pairs",
]


# ---------------------------------------------------------------------------
# lens quantities
# ---------------------------------------------------------------------------


@dataclass
class LensQuantities:
    n: int
    cap_area: Ball
    lens_volume: Ball
    disc_term: Ball
    lambda_plane: Ball
    prec: int


def lens_quantities(n: int, prec: int) -> LensQuantities:
    """Certified spherical-cap area, lens volume, and renormalized energy."""
    if n < 3:
        raise ValueError("dimension must be at least 3")
    w = prec + 16
    omega = specfun.unit_ball_volume(n - 1, w)
    quarter = Ball.from_fraction(Fraction(1, 4), w)

    q1, s1 = specfun.gamma_half_product([n - 1], [n], extra_sqrt_pi=1)
    g1 = specfun.sqrt_pi_power_ball(q1, s1, w)
    f1 = specfun.gauss_2f1(Fraction(1, 2), Fraction(3 - n, 2), Fraction(3, 2), quarter, w)
    cap = ball_mul_rat(ball_mul(omega, ball_sub(g1, f1, w), w), n - 1, 2, w)

    q2, s2 = specfun.gamma_half_product([n + 1], [n + 2], extra_sqrt_pi=1)
    g2 = specfun.sqrt_pi_power_ball(q2, s2, w)
    f2 = specfun.gauss_2f1(Fraction(1, 2), Fraction(1 - n, 2), Fraction(3, 2), quarter, w)
    vol = ball_mul(omega, ball_sub(g2, f2, w), w)

    t = (n - 1) // 2
    mag = Fraction(3, 4) ** t
    if (n - 1) % 2 == 0:
        disc = ball_mul_rat(omega, mag.numerator, mag.denominator, w)
    else:
        s3 = sqrt_ball(Ball.from_int(3, w), w)
        half_mag = mag / 2
        disc = ball_mul_rat(ball_mul(omega, s3, w), half_mag.numerator, half_mag.denominator, w)

    numerator = ball_sub(ball_mul_rat(cap, 2, 1, w), disc, w)
    lam = ball_div(numerator, pow_rational(vol, n - 1, n, w), w)
    out = LensQuantities(
        n,
        ball_round(cap, prec),
        ball_round(vol, prec),
        ball_round(disc, prec),
        ball_round(lam, prec),
        prec,
    )
    for b in (out.cap_area, out.lens_volume, out.disc_term, out.lambda_plane):
        if not certainly_positive(b):
            raise PrecisionExhausted("lens quantity not certainly positive at %d bits" % prec)
    return out


# ---------------------------------------------------------------------------
# competitor construction constants
# ---------------------------------------------------------------------------


@dataclass
class LawsonConstants:
    k: int
    l: int
    lambda_: Ball
    theta: Ball
    h: Ball
    r: Ball
    d: Ball
    rho: Ball
    prec: int


def lawson_constants(k: int, l: int, prec: int) -> LawsonConstants:
    """Arc constants of the competitor slice; raises InvalidGeometry when the
    construction degenerates (index ratio outside (1/3, 3))."""
    if k < 1 or l < 1:
        raise InvalidGeometry("indices must be positive")
    w = prec + 16
    lam = sqrt_ball(Ball.from_fraction(Fraction(k, l), w), w)
    theta = atan_ball(lam, w)
    pi = pi_ball(w)
    one = Ball.from_int(1, w)

    angle_u = ball_add(ball_mul_rat(pi, 1, 6, w), theta, w)  # pi/6 + theta
    cos_u = cos_ball(angle_u, w)
    if not certainly_positive(cos_u):
        raise InvalidGeometry("(%d,%d): outer arc angle reaches pi/2" % (k, l))
    tan_u = ball_div(sin_ball(angle_u, w), cos_u, w)
    sec_u = ball_div(one, cos_u, w)
    d = ball_sub(tan_u, lam, w)
    rho = sec_u

    if k == l:
        # theta = pi/4 exactly, both arcs coincide up to reflection
        h, r = d, rho
    else:
        angle_v = ball_sub(ball_mul_rat(pi, 2, 3, w), theta, w)  # 2*pi/3 - theta
        cos_v = cos_ball(angle_v, w)
        if not certainly_positive(cos_v):
            raise InvalidGeometry("(%d,%d): inner arc angle reaches pi/2" % (k, l))
        tan_v = ball_div(sin_ball(angle_v, w), cos_v, w)
        sec_v = ball_div(one, cos_v, w)
        h = ball_sub(ball_mul(lam, tan_v, w), one, w)
        r = ball_mul(lam, sec_v, w)

    checks = [
        ("r > 0", certainly_positive(r)),
        ("rho > 0", certainly_positive(rho)),
        ("h > 0", certainly_positive(h)),
        ("d > 0", certainly_positive(d)),
        (
            "lambda < rho - d",
            certainly_less(lam, ball_sub(rho, d, w)) is TriBool.CERTAINLY_TRUE,
        ),
        (
            "1 < r - h",
            certainly_less(one, ball_sub(r, h, w)) is TriBool.CERTAINLY_TRUE,
        ),
    ]
    for name, ok in checks:
        if not ok:
            raise InvalidGeometry("(%d,%d): validity gate failed: %s" % (k, l, name))

    return LawsonConstants(
        k,
        l,
        ball_round(lam, prec + 8),
        ball_round(theta, prec + 8),
        ball_round(h, prec + 8),
        ball_round(r, prec + 8),
        ball_round(d, prec + 8),
        ball_round(rho, prec + 8),
        prec,
    )


# ---------------------------------------------------------------------------
# competitor energy
# ---------------------------------------------------------------------------


class EnergyPath(Enum):
    SPECIAL_FUNCTION = "SpecialFunction"
    QUADRATURE = "Quadrature"
    POLYNOMIAL_EXACT = "PolynomialExact"


@dataclass
class CompetitorEnergy:
    k: int
    l: int
    volume: Ball
    perimeter: Ball
    cone_disc: Ball
    m_value: Ball
    path: EnergyPath
    prec: int


def assemble_competitor(
    consts: LawsonConstants,
    s1v: Ball,
    s2v: Ball,
    s1p: Ball,
    s2p: Ball,
    prec: int,
    path: EnergyPath,
) -> CompetitorEnergy:
    """Common final assembly from the four arc integrals.

    s1v/s1p are the u-arc integrals (without the leading rho of the
    perimeter form), s2v/s2p the v-arc ones.
    """
    k, l = consts.k, consts.l
    n = k + l + 2
    w = prec + 16
    wk = specfun.unit_ball_volume(k + 1, w)
    wl = specfun.unit_ball_volume(l + 1, w)
    ww = ball_mul(wk, wl, w)

    lam_k1 = ball_pow_int(consts.lambda_, k + 1, w)
    inner_vol = ball_add(
        lam_k1,
        ball_add(ball_mul_rat(s1v, k + 1, 1, w), ball_mul_rat(s2v, l + 1, 1, w), w),
        w,
    )
    volume = ball_mul(ww, inner_vol, w)

    inner_per = ball_add(ball_mul(consts.rho, s1p, w), ball_mul(consts.r, s2p, w), w)
    perimeter = ball_mul_rat(ball_mul(ww, inner_per, w), (k + 1) * (l + 1), 1, w)

    cone_fr = Fraction(k**k * (k + l), l ** (k + 1))
    cone_root = sqrt_ball(Ball.from_fraction(cone_fr, w), w)
    cone = ball_mul_rat(ball_mul(ww, cone_root, w), (k + 1) * (l + 1), k + l + 1, w)

    m = ball_div(ball_sub(perimeter, cone, w), pow_rational(volume, n - 1, n, w), w)
    return CompetitorEnergy(
        k,
        l,
        ball_round(volume, prec),
        ball_round(perimeter, prec),
        ball_round(cone, prec),
        ball_round(m, prec),
        path,
        prec,
    )


def competitor_energy_specfun(k: int, l: int, prec: int) -> CompetitorEnergy:
    """Competitor energy through the special-function representation.

    Each arc integral is recentered at its corner before applying the
    Euler-type integral identity, which keeps every hypergeometric series
    sign-stable; the textbook two-term composition (see
    competitor_energy_terms_ad) is mathematically identical but cancels
    catastrophically as the indices grow.
    """
    consts = lawson_constants(k, l, prec)
    w = prec + 16
    lam, rho, d, r, h = consts.lambda_, consts.rho, consts.d, consts.r, consts.h
    one = Ball.from_int(1, w)

    s1v = _arc_shifted(k, l + 1, rho, d, lam, w)
    s1p = _arc_shifted(k, l - 1, rho, d, lam, w)
    if k == l:
        s2v, s2p = s1v, s1p
    else:
        s2v = _arc_shifted(l, k + 1, r, h, one, w)
        s2p = _arc_shifted(l, k - 1, r, h, one, w)
    return assemble_competitor(consts, s1v, s2v, s1p, s2p, prec, EnergyPath.SPECIAL_FUNCTION)


def _arc_shifted(kk: int, e2: int, radius: Ball, offset: Ball, corner: Ball, w: int) -> Ball:
    """integral of u^kk (radius^2 - (u+offset)^2)^(e2/2) from `corner` to
    radius - offset, via the corner-centered Appell representation:

        L^(e+1) corner^kk D^e F1(1, -kk, -e; e+2; -L/corner, -L/D) / (e+1)

    with L = radius - offset - corner, D = radius + offset + corner, e = e2/2.
    All series terms are nonnegative, so no precision is lost to cancellation.
    """
    e = Fraction(e2, 2)
    length = ball_sub(ball_sub(radius, offset, w), corner, w)
    dsum = ball_add(ball_add(radius, offset, w), corner, w)
    x = ball_neg(ball_div(length, corner, w))
    y = ball_neg(ball_div(length, dsum, w))
    f1 = specfun.appell_f1(Fraction(1), Fraction(-kk), -e, e + 2, x, y, w)
    if e2 % 2 == 0:
        lpow = ball_pow_int(length, e2 // 2 + 1, w)
        dpow = ball_pow_int(dsum, e2 // 2, w)
    else:
        lpow = pow_rational(length, e2 + 2, 2, w)
        dpow = pow_rational(dsum, e2, 2, w)
    out = ball_mul(ball_mul(lpow, dpow, w), ball_mul(ball_pow_int(corner, kk, w), f1, w), w)
    ef = e + 1
    return ball_mul_rat(out, ef.denominator, ef.numerator, w)


def competitor_energy_terms_ad(k: int, l: int, prec: int) -> CompetitorEnergy:
    """Competitor energy through the two-term (difference) composition of the
    Euler and Appell identities; agrees with competitor_energy_specfun but
    loses roughly 2(k+l) bits to cancellation, so it serves as a cross-check
    for small index pairs only."""
    consts = lawson_constants(k, l, prec)
    w = prec + 16
    lam, rho, d, r, h = consts.lambda_, consts.rho, consts.d, consts.r, consts.h

    rho_md = ball_sub(rho, d, w)
    rho_pd = ball_add(rho, d, w)
    x_a = ball_div(lam, rho_md, w)
    y_a = ball_neg(ball_div(lam, rho_pd, w))
    z_a = ball_neg(ball_div(rho_md, rho_pd, w))
    lam_k1 = ball_pow_int(lam, k + 1, w)

    s1v = _arc_terms_ad(k, l, rho, d, rho_md, z_a, x_a, y_a, lam_k1, w, volume_form=True)
    s1p = _arc_terms_ad(k, l, rho, d, rho_md, z_a, x_a, y_a, lam_k1, w, volume_form=False)

    if k == l:
        s2v, s2p = s1v, s1p
    else:
        r_mh = ball_sub(r, h, w)
        r_ph = ball_add(r, h, w)
        one = Ball.from_int(1, w)
        x_b = ball_div(one, r_mh, w)
        y_b = ball_neg(ball_div(one, r_ph, w))
        z_b = ball_neg(ball_div(r_mh, r_ph, w))
        s2v = _arc_terms_ad(l, k, r, h, r_mh, z_b, x_b, y_b, one, w, volume_form=True)
        s2p = _arc_terms_ad(l, k, r, h, r_mh, z_b, x_b, y_b, one, w, volume_form=False)

    return assemble_competitor(consts, s1v, s2v, s1p, s2p, prec, EnergyPath.SPECIAL_FUNCTION)


def _arc_terms_ad(k, l, radius, offset, rad_m_off, z, x, y, corner_pow, w, volume_form):
    """One arc integral via the Euler/Appell representation.

    With exponent e = (l+1)/2 (volume) or (l-1)/2 (perimeter):
      integral = (radius^2 - offset^2)^e * [g * (radius-offset)^(k+1) * 2F1 -
                  corner_pow * F1] / (k+1)
    """
    if volume_form:
        e2 = l + 1
        gq, gs = specfun.gamma_half_product([2 * k + 4, l + 3], [2 * k + l + 5])
        f_a, f_b, f_c = Fraction(-(l + 1), 2), Fraction(k + 1), Fraction(l + 1, 2) + k + 2
    else:
        e2 = l - 1
        gq, gs = specfun.gamma_half_product([2 * k + 4, l + 1], [2 * k + l + 3])
        f_a, f_b, f_c = Fraction(1 - l, 2), Fraction(k + 1), Fraction(l - 1, 2) + k + 2
    if gs != 0:
        raise AssertionError("gamma prefactor must be rational")

    f21 = specfun.gauss_2f1(f_a, f_b, f_c, z, w)
    term1 = ball_mul_rat(
        ball_mul(ball_pow_int(rad_m_off, k + 1, w), f21, w), gq.numerator, gq.denominator, w
    )
    f1 = specfun.appell_f1(Fraction(k + 1), f_a, f_a, Fraction(k + 2), x, y, w)
    term2 = ball_mul(corner_pow, f1, w)
    bracket = ball_sub(term1, term2, w)

    sq = ball_sub(ball_mul(radius, radius, w), ball_mul(offset, offset, w), w)
    if e2 % 2 == 0:
        power = ball_pow_int(sq, e2 // 2, w)
    else:
        power = pow_rational(sq, e2, 2, w)
    return ball_mul_rat(ball_mul(power, bracket, w), 1, k + 1, w)


def competitor_energy_quadrature(
    k: int,
    l: int,
    prec: int,
    budget: int = 400_000,
    target_width=1e-7,
) -> CompetitorEnergy:
    """Competitor energy through verified quadrature of the arc integrals,
    after the smoothing substitutions u + d = rho sin(phi), v + h = r sin(phi)."""
    consts = lawson_constants(k, l, prec)
    w = prec + 16

    # measured-feedback loop: run at a trial tolerance, tighten by the
    # observed overshoot of the assembled m-value width; the working
    # precision tracks the demanded width so recurrence noise stays below it
    pref = max(
        bf_to_float(consts.rho.mag_sup()) ** (l + 2),
        bf_to_float(consts.r.mag_sup()) ** (k + 2),
    ) * (k + 2) * (l + 2)
    share = max(float(target_width) / pref, 1e-200)
    for _ in range(8):
        ws = max(w, int(-math.log2(share)) + 64)
        pi = pi_ball(ws)
        half_pi = ball_mul_rat(pi, 1, 2, ws)
        angle_u = ball_add(ball_mul_rat(pi, 1, 6, ws), consts.theta, ws)
        angle_v = ball_sub(ball_mul_rat(pi, 2, 3, ws), consts.theta, ws)
        share_bf = bf_from_float(share)
        j1p, j1v = oracle.arc_profile_quadrature(
            consts.rho, consts.d, k, (l, l + 2), angle_u, half_pi, ws, share_bf, budget
        )
        if k == l:
            j2p, j2v = j1p, j1v
        else:
            j2p, j2v = oracle.arc_profile_quadrature(
                consts.r, consts.h, l, (k, k + 2), angle_v, half_pi, ws, share_bf, budget
            )
        s1v = ball_mul(ball_pow_int(consts.rho, l + 2, ws), j1v, ws)
        s1p = ball_mul(ball_pow_int(consts.rho, l, ws), j1p, ws)
        s2v = ball_mul(ball_pow_int(consts.r, k + 2, ws), j2v, ws)
        s2p = ball_mul(ball_pow_int(consts.r, k, ws), j2p, ws)
        out = assemble_competitor(consts, s1v, s2v, s1p, s2p, prec, EnergyPath.QUADRATURE)
        achieved = bf_to_float(out.m_value.width())
        if achieved <= float(target_width):
            return out
        share = share * float(target_width) / achieved / 4
    raise QuadratureBudgetExceeded(
        "quadrature m-value width %.2e misses target %.2e at pair (%d,%d)"
        % (achieved, float(target_width), k, l)
    )


# ---------------------------------------------------------------------------
# pair selection and the upper bound over pairs
# ---------------------------------------------------------------------------


def _valid_ratio(k: int, l: int) -> bool:
    return 3 * k > l and k < 3 * l


def default_pairs(n: int) -> list[tuple[int, int]]:
    """Central pairs: even n -> (k,k) plus (k-1,k+1) from n >= 8; odd -> (k-1,k)."""
    if n < 4:
        raise NoValidPair("no competitor pairs below dimension 4")
    if n % 2 == 0:
        k = n // 2 - 1
        pairs = [(k, k)]
        if n >= 8:
            pairs.append((k - 1, k + 1))
        return pairs
    k = (n - 1) // 2
    return [(k - 1, k)]


def table_pairs(n: int) -> list[tuple[int, int]]:
    """Rows of the reference table: the odd-odd companion appears only when
    the central index is even."""
    if n % 2 == 0:
        k = n // 2 - 1
        pairs = [(k, k)]
        if k % 2 == 0 and k >= 2:
            pairs.append((k - 1, k + 1))
        return pairs
    return default_pairs(n)


def plot_pair(n: int) -> tuple[int, int]:
    if n < 4:
        raise NoValidPair("no competitor pairs below dimension 4")
    if n % 2 == 0:
        k = n // 2 - 1
        return (k, k)
    return ((n - 3) // 2, (n - 1) // 2)


def all_pairs(n: int) -> list[tuple[int, int]]:
    if n < 4:
        raise NoValidPair("no competitor pairs below dimension 4")
    return [(k, n - 2 - k) for k in range(1, n - 2) if _valid_ratio(k, n - 2 - k)]


def lambda_lawson_upper(
    n: int, pairs="default", prec: int = 128
) -> tuple[CompetitorEnergy, list[CompetitorEnergy]]:
    """Certified upper bound for the cone-competitor energy at dimension n:
    the minimum (by upper endpoint) of m-values over the requested pairs."""
    if n < 4:
        raise NoValidPair("no competitor pairs below dimension 4")
    if pairs == "default":
        candidates = default_pairs(n)
        skip_invalid = False
    elif pairs == "all":
        candidates = all_pairs(n)
        skip_invalid = True
    else:
        candidates = list(pairs)
        skip_invalid = False
    results = []
    for k, l in candidates:
        if k + l + 2 != n:
            raise ValueError("pair (%d,%d) does not match dimension %d" % (k, l, n))
        try:
            results.append(competitor_energy_specfun(k, l, prec))
        except InvalidGeometry:
            if not skip_invalid:
                raise
    if not results:
        raise NoValidPair("no geometrically valid pair at dimension %d" % n)
    best = results[0]
    for cand in results[1:]:
        if bf_cmp(cand.m_value.sup(), best.m_value.sup()) < 0:
            best = cand
    return best, results
