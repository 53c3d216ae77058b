import math
import random
from fractions import Fraction

import pytest

from lenscert import specfun
from lenscert.ball import (
    Ball,
    ball_div,
    ball_mul,
    ball_mul_rat,
    asin_ball,
    intersects,
    pi_ball,
    sqrt_ball,
)
from lenscert.bigfloat import bf_cmp, bf_to_fraction, bf_two_power
from lenscert.errors import DivergentParameters, DomainViolation, InvalidC


def poch(a: Fraction, m: int) -> Fraction:
    out = Fraction(1)
    for i in range(m):
        out *= a + i
    return out


class TestGammaHalf:
    def test_base_cases(self):
        assert specfun.gamma_half(1) == specfun.HalfGamma(Fraction(1), 1)  # sqrt(pi)
        assert specfun.gamma_half(2) == specfun.HalfGamma(Fraction(1), 0)

    def test_known_values(self):
        assert specfun.gamma_half(7) == specfun.HalfGamma(Fraction(15, 8), 1)
        assert specfun.gamma_half(10) == specfun.HalfGamma(Fraction(24), 0)
        assert specfun.gamma_half(9) == specfun.HalfGamma(Fraction(105, 16), 1)

    def test_recursion_exact(self):
        for two_x in range(1, 40):
            g = specfun.gamma_half(two_x)
            g_up = specfun.gamma_half(two_x + 2)
            assert g_up.q == g.q * Fraction(two_x, 2)
            assert g_up.s == g.s


class TestUnitBallVolume:
    def test_low_dimensions(self):
        assert specfun.unit_ball_volume(1, 64).contains_fraction(2)
        assert intersects(specfun.unit_ball_volume(2, 96), pi_ball(96))

    def test_omega7(self):
        w7 = specfun.unit_ball_volume(7, 128)
        ref = ball_mul_rat(
            ball_mul(pi_ball(128), ball_mul(pi_ball(128), pi_ball(128))), 16, 105
        )
        assert intersects(w7, ref)

    def test_recurrence(self):
        """omega_m = (2 pi / m) omega_(m-2) for m = 3..40"""
        prec = 96
        for m in range(3, 41):
            lhs = specfun.unit_ball_volume(m, prec)
            rhs = ball_mul_rat(
                ball_mul(pi_ball(prec), specfun.unit_ball_volume(m - 2, prec)), 2, m
            )
            assert intersects(lhs, rhs)


class TestGauss2F1:
    def test_empty_series(self):
        z = Ball.from_fraction(Fraction(1, 3), 64)
        out = specfun.gauss_2f1(Fraction(1, 2), 0, Fraction(3, 2), z, 64)
        assert out.is_exact() and out.contains_fraction(1)

    def test_arcsin_identity_quarter(self):
        z = Ball.from_fraction(Fraction(1, 4), 128)
        f = specfun.gauss_2f1(Fraction(1, 2), Fraction(1, 2), Fraction(3, 2), z, 128)
        assert intersects(ball_mul_rat(f, 3, 1), pi_ball(128))

    def test_arcsin_identity_random(self):
        rng = random.Random(10)
        prec = 96
        for _ in range(100):
            zf = Fraction(rng.randint(1, 900), 1000)
            z = Ball.from_fraction(zf, prec)
            f = specfun.gauss_2f1(Fraction(1, 2), Fraction(1, 2), Fraction(3, 2), z, prec)
            sz = sqrt_ball(z, prec)
            oracle = ball_div(asin_ball(sz, prec), sz, prec)
            assert intersects(f, oracle)

    def test_n8_closed_form_value(self):
        """2F1(1/2,-5/2;3/2;1/4) = 9 sqrt3/32 + 5 pi/48"""
        prec = 128
        z = Ball.from_fraction(Fraction(1, 4), prec)
        f = specfun.gauss_2f1(Fraction(1, 2), Fraction(-5, 2), Fraction(3, 2), z, prec)
        ref = ball_mul_rat(sqrt_ball(Ball.from_int(3, prec)), 9, 32) + ball_mul_rat(
            pi_ball(prec), 5, 48
        )
        assert intersects(f, ref)
        assert abs(f.float_mid() - 0.8143885) < 1e-7

    def test_terminating_is_exact_rational(self):
        z = Ball.from_fraction(Fraction(1, 4), 96)
        f = specfun.gauss_2f1(Fraction(1, 2), Fraction(-2, 1), Fraction(3, 2), z, 96)
        # exact rational sum: 1 + (1/2)(-2)/(3/2) z + ((1/2)(3/2)(-2)(-1)/((3/2)(5/2) 2)) z^2
        expected = (
            1
            + Fraction(1, 2) * -2 / Fraction(3, 2) * Fraction(1, 4)
            + poch(Fraction(1, 2), 2) * poch(-2, 2) / poch(Fraction(3, 2), 2) / 2 * Fraction(1, 16)
        )
        assert f.contains_fraction(expected)
        assert bf_cmp(f.width(), bf_two_power(-90)) <= 0

    def test_invalid_c(self):
        z = Ball.from_fraction(Fraction(1, 4), 64)
        with pytest.raises(InvalidC):
            specfun.gauss_2f1(Fraction(1, 2), Fraction(1, 2), Fraction(-1), z, 64)

    def test_divergent_z(self):
        z = Ball.from_fraction(Fraction(5, 4), 64)
        with pytest.raises(DivergentParameters):
            specfun.gauss_2f1(Fraction(1, 2), Fraction(1, 2), Fraction(3, 2), z, 64)

    def test_tail_bound_validity(self):
        """a tighter-tolerance evaluation lands inside the coarse enclosure"""
        z = Ball.from_fraction(Fraction(1, 4), 128)
        for b_num in (-5, -9, -13):
            a, b, c = Fraction(1, 2), Fraction(b_num, 2), Fraction(3, 2)
            coarse, tail = specfun.gauss_2f1_detailed(a, b, c, z, 128, tol=bf_two_power(-40))
            fine, _ = specfun.gauss_2f1_detailed(a, b, c, z, 128, tol=bf_two_power(-100))
            assert tail is not None
            assert coarse.contains_ball(fine)
            # stored tail bound satisfies its defining inequality
            ratio = tail.ratio
            bound = bf_to_fraction(tail.last_term) * ratio / (1 - ratio)
            assert bf_to_fraction(tail.tail) >= bound


class TestClosedFormRecursion:
    def test_base(self):
        cf = specfun.closed_form_recursion(1)
        assert cf.coeffs == () and cf.c == 1

    def test_m_minus5(self):
        cf = specfun.closed_form_recursion(-5)
        assert list(cf.coeffs) == [Fraction(11, 16), Fraction(-13, 24), Fraction(1, 6)]
        assert cf.c == Fraction(5, 16)

    def test_m_minus7(self):
        cf = specfun.closed_form_recursion(-7)
        assert list(cf.coeffs) == [
            Fraction(93, 128),
            Fraction(-163, 192),
            Fraction(25, 48),
            Fraction(-1, 8),
        ]
        assert cf.c == Fraction(35, 128)

    @pytest.mark.parametrize("zf", [Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)])
    def test_recursion_vs_series(self, zf):
        prec = 96
        z = Ball.from_fraction(zf, prec)
        for m in range(-1, -42, -2):
            cf = specfun.closed_form_recursion(m)
            lhs = specfun.eval_closed_form(cf, z, prec)
            rhs = specfun.gauss_2f1(Fraction(1, 2), Fraction(m, 2), Fraction(3, 2), z, prec)
            assert intersects(lhs, rhs)


class TestAppellF1:
    def test_trivial_zero_bs(self):
        x = Ball.from_fraction(Fraction(1, 3), 64)
        y = Ball.from_fraction(Fraction(-1, 5), 64)
        out = specfun.appell_f1(2, 0, 0, 3, x, y, 64)
        assert out.contains_fraction(1)

    def test_y_zero_reduces_to_2f1(self):
        prec = 96
        x = Ball.from_fraction(Fraction(1, 3), prec)
        zero = Ball.from_int(0, prec)
        f1 = specfun.appell_f1(4, Fraction(-5, 2), Fraction(-5, 2), 5, x, zero, prec)
        f21 = specfun.gauss_2f1(4, Fraction(-5, 2), 5, x, prec)
        assert intersects(f1, f21)
        # widths comparable: within a factor of 32
        assert bf_to_fraction(f1.width()) <= 32 * bf_to_fraction(f21.width()) + Fraction(1, 2**80)

    def test_terminating_exact_double_sum(self):
        prec = 96
        x = Ball.from_fraction(Fraction(1, 3), prec)
        y = Ball.from_fraction(Fraction(-1, 5), prec)
        out = specfun.appell_f1(4, -2, -2, 5, x, y, prec)
        exact = Fraction(0)
        for m in range(3):
            for n in range(3):
                exact += (
                    poch(Fraction(4), m + n)
                    * poch(Fraction(-2), m)
                    * poch(Fraction(-2), n)
                    / poch(Fraction(5), m + n)
                    / (math.factorial(m) * math.factorial(n))
                    * Fraction(1, 3) ** m
                    * Fraction(-1, 5) ** n
                )
        assert out.contains_fraction(exact)

    def test_separable_vs_iterated(self):
        """the c = a+1 fast path agrees with the literal iterated reduction"""
        prec = 96
        x = Ball.from_fraction(Fraction(7, 10), prec)
        y = Ball.from_fraction(Fraction(-3, 20), prec)
        a, b1, b2, c = Fraction(4), Fraction(-5, 2), Fraction(-5, 2), Fraction(5)
        fast = specfun._appell_f1_separable(a, b1, b2, x, y, prec + 8, prec, bf_two_power(-70))
        slow = specfun._appell_f1_iterated(a, b1, b2, c, x, y, prec + 8, prec, bf_two_power(-70))
        assert intersects(fast, slow)

    def test_domain_checks(self):
        big = Ball.from_fraction(Fraction(3, 2), 64)
        small = Ball.from_fraction(Fraction(1, 5), 64)
        with pytest.raises(DomainViolation):
            specfun.appell_f1(2, Fraction(1, 2), Fraction(1, 2), 3, big, small, 64)
        # a terminating direction tolerates arguments beyond the unit disc
        out = specfun.appell_f1(2, -3, Fraction(-1, 2), 3, big, small, 64)
        assert out.mid.sign != 0


class TestAppellQuadrature:
    def test_matches_series_on_competitor_arguments(self):
        prec = 80
        x = Ball.from_fraction(Fraction(8837, 10000), prec)
        y = Ball.from_fraction(Fraction(-1516, 10000), prec)
        a, b, c = Fraction(4), Fraction(-2), Fraction(5)
        series = specfun.appell_f1(a, b, b, c, x, y, prec)
        quad = specfun.appell_f1_quadrature(a, b, b, c, x, y, prec, target_width=1e-5)
        assert intersects(series, quad)

    def test_terminating_case_exact_sum(self):
        prec = 80
        x = Ball.from_fraction(Fraction(1, 3), prec)
        y = Ball.from_fraction(Fraction(-1, 5), prec)
        quad = specfun.appell_f1_quadrature(4, -2, -2, 5, x, y, prec, target_width=1e-5)
        series = specfun.appell_f1(4, -2, -2, 5, x, y, prec)
        assert intersects(quad, series)

    def test_y_zero_euler_reduction(self):
        prec = 80
        x = Ball.from_fraction(Fraction(2, 5), prec)
        zero = Ball.from_int(0, prec)
        quad = specfun.appell_f1_quadrature(3, Fraction(-3, 2), Fraction(-3, 2), 4, x, zero, prec, target_width=1e-5)
        f21 = specfun.gauss_2f1(3, Fraction(-3, 2), 4, x, prec)
        assert intersects(quad, f21)

    def test_dual_path_on_competitor_parameter_sets(self):
        """series and integral evaluations intersect on the F1 argument sets
        the two-term competitor composition produces, for n up to 24"""
        from lenscert import geom
        from lenscert.ball import ball_add, ball_div, ball_neg, ball_sub

        prec = 72
        for n in range(8, 25):
            for k, l in geom.default_pairs(n):
                c = geom.lawson_constants(k, l, prec)
                x = ball_div(c.lambda_, ball_sub(c.rho, c.d))
                y = ball_neg(ball_div(c.lambda_, ball_add(c.rho, c.d)))
                params = [(Fraction(k + 1), Fraction(-(l + 1), 2), Fraction(k + 2))]
                if n <= 14:
                    params.append((Fraction(k + 1), Fraction(1 - l, 2), Fraction(k + 2)))
                for a, b, cc in params:
                    series = specfun.appell_f1(a, b, b, cc, x, y, prec)
                    quad = specfun.appell_f1_quadrature(
                        a, b, b, cc, x, y, prec, target_width=1e-4, budget=400_000
                    )
                    assert intersects(series, quad), (n, k, l, b)


class TestIncompleteBeta:
    def test_complete_beta_half_integers(self):
        prec = 96
        one = Ball.from_int(1, prec)
        out = specfun.incomplete_beta(one, Fraction(1, 2), Fraction(9, 2), prec)
        # B(1/2, 9/2) = Gamma(1/2) Gamma(9/2) / Gamma(5) = 105 pi / 384
        assert intersects(out, ball_mul_rat(pi_ball(prec), 105, 384))

    def test_limit_toward_zero(self):
        prec = 64
        for e in (6, 12, 20):
            z = Ball.from_fraction(Fraction(1, 10**e), prec)
            out = specfun.incomplete_beta(z, Fraction(1, 2), Fraction(9, 2), prec)
            assert bf_to_fraction(out.mag_sup()) < Fraction(1, 10 ** (e // 2 - 1))

    def test_against_quadrature(self):
        """B(1/4; 1/2, 9/2) versus cos-power quadrature after s = sin^2"""
        from lenscert import oracle

        prec = 96
        z = Ball.from_fraction(Fraction(1, 4), prec)
        beta = specfun.incomplete_beta(z, Fraction(1, 2), Fraction(9, 2), prec)
        task = oracle.QuadratureTask(
            oracle.cos_power_integrand(8, 2),
            Ball.from_int(0, prec),
            ball_mul_rat(pi_ball(prec), 1, 6),
            prec=prec,
        )
        quad = oracle.verified_integral(task, 1e-7, budget=200_000)
        assert intersects(beta, quad)

    def test_rejects_bad_parameters(self):
        z = Ball.from_fraction(Fraction(1, 4), 64)
        with pytest.raises(DomainViolation):
            specfun.incomplete_beta(z, Fraction(-1, 2), Fraction(1, 2), 64)
