import random
from fractions import Fraction

import pytest

from lenscert import geom, oracle, specfun
from lenscert.ball import (
    Ball,
    ball_mul,
    ball_mul_rat,
    ball_widen,
    intersects,
    sqrt_ball,
)
from lenscert.bigfloat import bf_cmp, bf_two_power
from lenscert.errors import DomainViolation, QuadratureBudgetExceeded


def rand_poly(rng, max_deg=6):
    deg = rng.randint(0, max_deg)
    return [
        Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(deg + 1)
    ]


def poly_antiderivative_value(coeffs, a: Fraction, b: Fraction) -> Fraction:
    total = Fraction(0)
    for i, c in enumerate(coeffs):
        total += c * (b ** (i + 1) - a ** (i + 1)) / (i + 1)
    return total


class TestVerifiedIntegral:
    def test_linear(self):
        task = oracle.QuadratureTask(
            oracle.polynomial_integrand([0, 1]),
            Ball.from_int(0, 64),
            Ball.from_int(1, 64),
            prec=64,
        )
        out = oracle.verified_integral(task, 1e-10)
        assert out.contains_fraction(Fraction(1, 2))

    def test_soundness_random_polynomials(self):
        """exact antiderivative lies in the enclosure on 50 random integrands"""
        rng = random.Random(314)
        for i in range(50):
            coeffs = rand_poly(rng)
            a = Fraction(rng.randint(-4, 2))
            b = a + Fraction(rng.randint(1, 5))
            scheme = (
                oracle.Scheme.MIDPOINT_DERIVATIVE if i % 2 else oracle.Scheme.INTERVAL_SUM
            )
            task = oracle.QuadratureTask(
                oracle.polynomial_integrand(coeffs),
                Ball.from_fraction(a, 64),
                Ball.from_fraction(b, 64),
                prec=64,
                subdivisions=16,
                scheme=scheme,
            )
            # fixed-grid pass: soundness is the property under test here
            out = oracle.verified_integral(task, 1e300, budget=100_000)
            assert out.contains_fraction(poly_antiderivative_value(coeffs, a, b))

    def test_refinement_narrows(self):
        """doubling the subdivisions never widens the enclosure (above the
        rounding-noise floor, where degenerate integrands already sit)"""
        rng = random.Random(99)
        floor = bf_two_power(-40)
        for _ in range(50):
            coeffs = rand_poly(rng, max_deg=4)
            kwargs = dict(
                lower=Ball.from_int(0, 64),
                upper=Ball.from_int(2, 64),
                prec=64,
                scheme=oracle.Scheme.INTERVAL_SUM,
            )
            integ = oracle.polynomial_integrand(coeffs)
            wide = oracle.verified_integrals(
                oracle.QuadratureTask(integ, subdivisions=16, **kwargs),
                1e300,
                budget=10_000,
            )[0]
            narrow = oracle.verified_integrals(
                oracle.QuadratureTask(integ, subdivisions=32, **kwargs),
                1e300,
                budget=10_000,
            )[0]
            assert intersects(wide, narrow)
            assert (
                bf_cmp(narrow.width(), wide.width()) <= 0
                or bf_cmp(narrow.width(), floor) <= 0
            )

    def test_budget_exceeded(self):
        task = oracle.QuadratureTask(
            oracle.polynomial_integrand([0, 0, 1]),
            Ball.from_int(0, 64),
            Ball.from_int(1, 64),
            prec=64,
            subdivisions=64,
        )
        with pytest.raises(QuadratureBudgetExceeded):
            oracle.verified_integral(task, 1e-30, budget=100)

    def test_ball_endpoints_absorbed(self):
        lower = ball_widen(Ball.from_int(0, 64), bf_two_power(-10))
        task = oracle.QuadratureTask(
            oracle.polynomial_integrand([1]), lower, Ball.from_int(1, 64), prec=64
        )
        out = oracle.verified_integral(task, 1e-8)
        assert out.contains_fraction(1)
        assert bf_cmp(out.width(), bf_two_power(-11)) >= 0  # endpoint slop retained

    def test_lens_cap_integrand_dual_path(self):
        """integral of (1-t^2)^(5/2) over [1/2, 1] meets the lens cap value"""
        prec = 96
        task = oracle.QuadratureTask(
            oracle.sqrt_power_integrand(5),
            Ball.from_fraction(Fraction(1, 2), prec),
            Ball.from_int(1, prec),
            prec=prec,
        )
        quad = oracle.verified_integral(task, 1e-6, budget=300_000)
        lq = geom.lens_quantities(8, 128)
        cap_integral = lq.cap_area / ball_mul_rat(specfun.unit_ball_volume(7, 128), 7, 1)
        assert intersects(quad, cap_integral)


class TestArcProfileQuadrature:
    def test_matches_polynomial_path(self):
        prec = 64
        q = geom.competitor_energy_quadrature(3, 3, prec, target_width=1e-6)
        p = oracle.polynomial_m_value(3, 3, 128)
        assert intersects(q.m_value, p.m_value)

    def test_budget_raises(self):
        with pytest.raises(QuadratureBudgetExceeded):
            geom.competitor_energy_quadrature(5, 7, 64, budget=40, target_width=1e-9)


class TestLensExactWallis:
    def test_n3_pure_rational(self):
        cap, vol = oracle.lens_exact_wallis(3)
        assert vol == oracle.LensExact(Fraction(5, 12), Fraction(0), Fraction(0))
        assert cap.b == 0 and cap.c == 0

    def test_n8_exact_volume(self):
        cap, vol = oracle.lens_exact_wallis(8)
        assert vol.c == Fraction(560, 3072)
        assert vol.b == Fraction(-837, 3072)
        assert vol.a == 0

    def test_odd_dimensions_have_no_radicals(self):
        for n in range(3, 41, 2):
            cap, vol = oracle.lens_exact_wallis(n)
            assert cap.b == cap.c == 0
            assert vol.b == vol.c == 0

    @pytest.mark.parametrize("n", list(range(3, 41)))
    def test_matches_lens_quantities(self, n):
        prec = 96
        cap, vol = oracle.lens_exact_wallis(n)
        lq = geom.lens_quantities(n, prec)
        omega = specfun.unit_ball_volume(n - 1, prec)
        assert intersects(ball_mul(cap.to_ball(prec), omega), lq.cap_area)
        assert intersects(ball_mul(vol.to_ball(prec), omega), lq.lens_volume)

    def test_lambda_exact_ball(self):
        for n in (8, 9, 12, 15):
            exact = oracle.lambda_plane_exact_ball(n, 128)
            general = geom.lens_quantities(n, 128).lambda_plane
            assert intersects(exact, general)


class TestQSqrt23:
    def test_multiplication_table(self):
        s2 = oracle.QSqrt23(Fraction(0), Fraction(1), Fraction(0), Fraction(0))
        s3 = oracle.QSqrt23(Fraction(0), Fraction(0), Fraction(1), Fraction(0))
        s6 = s2 * s3
        assert s6 == oracle.QSqrt23(Fraction(0), Fraction(0), Fraction(0), Fraction(1))
        assert s2 * s2 == oracle.QSqrt23.from_rational(2)
        assert s3 * s3 == oracle.QSqrt23.from_rational(3)
        assert s6 * s6 == oracle.QSqrt23.from_rational(6)

    def test_division_round_trip_random(self):
        rng = random.Random(2718)
        count = 0
        while count < 200:
            x = oracle.QSqrt23(
                *(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4))
            )
            if x.is_zero():
                continue
            count += 1
            assert x * x.inverse() == oracle.QSqrt23.from_rational(1)
            y = oracle.QSqrt23.from_rational(Fraction(3, 7)) + x
            if not y.is_zero():
                assert (x / y) * y == x

    def test_embedding_encloses_exact_value(self):
        x = oracle.QSqrt23(Fraction(1, 3), Fraction(-2), Fraction(1, 7), Fraction(5, 11))
        b = x.to_ball(128)
        # compare against an independent high-precision composition
        prec = 192
        ref = (
            Ball.from_fraction(Fraction(1, 3), prec)
            + ball_mul_rat(sqrt_ball(Ball.from_int(2, prec)), -2, 1)
            + ball_mul_rat(sqrt_ball(Ball.from_int(3, prec)), 1, 7)
            + ball_mul_rat(sqrt_ball(Ball.from_int(6, prec)), 5, 11)
        )
        assert intersects(b, ref)


class TestPolynomialMValue:
    def test_rejects_even_indices(self):
        with pytest.raises(DomainViolation):
            oracle.polynomial_m_value(2, 4, 96)

    @pytest.mark.parametrize(
        "k,l,expect",
        [(3, 3, "6.81857964"), (5, 5, "9.26851974"), (5, 7, "10.33488774")],
    )
    def test_reference_values(self, k, l, expect):
        from lenscert.certify import certified_decimal

        en = oracle.polynomial_m_value(k, l, 128)
        assert certified_decimal(en.m_value, 8) == expect

    def test_intersects_specfun_all_odd_pairs(self):
        for s in range(6, 19, 2):
            for k in range(1, s, 2):
                l = s - k
                if l % 2 == 0 or not (3 * k > l and k < 3 * l):
                    continue
                p = oracle.polynomial_m_value(k, l, 128)
                f = geom.competitor_energy_specfun(k, l, 128)
                assert intersects(p.m_value, f.m_value), (k, l)


class TestExactSimons:
    def test_published_integers_k3(self):
        ex = oracle.exact_simons_m(3)
        assert ex.num == oracle.QSqrt23(
            Fraction(-699776), Fraction(494843), Fraction(-404096), Fraction(285740)
        )
        assert ex.den == oracle.QSqrt23(
            Fraction(913063), Fraction(-645632), Fraction(527138), Fraction(-372736)
        )
        assert ex.num_scale == Fraction(105, 16)
        assert ex.den_scale == Fraction(105, 8)

    def test_assembled_value_k3(self):
        from lenscert.certify import certified_decimal

        ex = oracle.exact_simons_m(3)
        assert certified_decimal(ex.assembled, 8) == "6.81857964"

    def test_zero_field_error_before_embedding(self):
        """the field pipeline is exact: scaled elements have denominator one"""
        for k in (1, 3, 5):
            ex = oracle.exact_simons_m(k)
            for coord in (ex.num.a, ex.num.b, ex.num.c, ex.num.d):
                assert coord.denominator == 1
            for coord in (ex.den.a, ex.den.b, ex.den.c, ex.den.d):
                assert coord.denominator == 1

    def test_matches_polynomial_path(self):
        for k in (1, 3, 5, 7):
            ex = oracle.exact_simons_m(k, 128)
            p = oracle.polynomial_m_value(k, k, 128)
            assert intersects(ex.assembled, p.m_value)

    def test_k1_below_lens_energy(self):
        from lenscert.ball import TriBool, certainly_less

        ex = oracle.exact_simons_m(1, 128)
        lam4 = geom.lens_quantities(4, 128).lambda_plane
        assert certainly_less(ex.assembled, lam4) is TriBool.CERTAINLY_TRUE

    def test_rejects_even_k(self):
        with pytest.raises(DomainViolation):
            oracle.exact_simons_m(2)
