import cmath
import math

import mpmath as mp
import pytest
from scipy.integrate import quad

from halfline.specfun import beta, cpow, gen_binomial, lngamma

mp.mp.dps = 40


class TestLngamma:
    def test_gamma_one(self):
        assert lngamma(1.0) == 0.0

    def test_gamma_half(self):
        assert abs(lngamma(0.5) - 0.5 * math.log(math.pi)) < 1e-15

    def test_thirteen_thirds_frozen(self):
        # high-precision oracle value of ln Gamma(13/3)
        assert abs(lngamma(13 / 3) - 2.2257610954245779) < 1e-13 * 2.23

    @pytest.mark.parametrize("x", [0.1, 0.37, 1.5, 2.0, 4.25, 11.0, 50.0, 171.0])
    def test_against_mpmath(self, x):
        ref = float(mp.loggamma(mp.mpf(x)))
        assert abs(lngamma(x) - ref) <= 1e-13 * max(1.0, abs(ref))

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            lngamma(x)


class TestBeta:
    def test_ones(self):
        assert abs(beta(1.0, 1.0) - 1.0) < 1e-15

    def test_halves(self):
        assert abs(beta(0.5, 0.5) - math.pi) < 1e-13

    def test_quadrature_oracle(self):
        # B(1/2, 1+1/3) = int_0^1 t^(-1/2) (1-t)^(1/3) dt, regularized
        # at both ends: t = s^2 below 1/2, 1-t = w^3 above
        lo, e1 = quad(lambda s: 2.0 * (1.0 - s * s) ** (1 / 3),
                      0.0, math.sqrt(0.5), epsabs=1e-12)
        hi, e2 = quad(lambda w: 3.0 * w**3 / math.sqrt(1.0 - w**3),
                      0.0, 0.5 ** (1 / 3), epsabs=1e-12)
        assert e1 + e2 < 1e-9
        assert abs(beta(0.5, 1 + 1 / 3) - (lo + hi)) < 1e-10

    @pytest.mark.parametrize("x,y", [(0.3, 1.7), (2.5, 0.25), (5.0, 5.0)])
    def test_symmetry(self, x, y):
        assert beta(x, y) == pytest.approx(beta(y, x), rel=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            beta(0.0, 1.0)
        with pytest.raises(ValueError):
            beta(1.0, -2.0)


class TestGenBinomial:
    def test_examples(self):
        assert gen_binomial(0.5, 0) == 1.0
        assert gen_binomial(0.5, 2) == pytest.approx(-1 / 8, abs=1e-16)
        assert gen_binomial(0.5, 3) == pytest.approx(1 / 16, abs=1e-16)

    @pytest.mark.parametrize("n", [0, 1, 3, 7, 12])
    def test_matches_integer_binomial(self, n):
        for k in range(n + 1):
            assert gen_binomial(float(n), k) == pytest.approx(
                math.comb(n, k), rel=1e-13
            )

    def test_negative_k(self):
        with pytest.raises(ValueError):
            gen_binomial(0.5, -1)


class TestCpow:
    def test_examples(self):
        assert cpow(4, 0.5) == pytest.approx(2.0, abs=1e-15)
        assert cpow(-1, 0.5) == pytest.approx(1j, abs=1e-15)
        z = cpow(1 + 1j, 1 / 2 + 1 / 3)
        assert abs(z) == pytest.approx(2 ** (5 / 12), rel=1e-14)
        assert cmath.phase(z) == pytest.approx(5 * math.pi / 24, abs=1e-14)

    def test_identity_exact(self):
        for z in (3.7 - 0.2j, -1.5 + 2j, 0.25j):
            assert cpow(z, 1.0) == z

    def test_positive_real_stays_real(self):
        w = cpow(2.25, 1.75)
        assert w.imag == 0.0 and w.real > 0.0

    def test_negative_real_takes_plus_pi(self):
        # arg(-4) = +pi by convention, even with a negative-zero imag part
        assert cpow(complex(-4.0, -0.0), 0.5) == pytest.approx(2j, abs=1e-15)

    @pytest.mark.parametrize("z", [2.0 + 1j, -0.5 + 0.8j, 3.0 - 2.5j, 0.1 + 0.1j])
    @pytest.mark.parametrize("s1,s2", [(0.5, 0.25), (1 / 3, 0.4), (-0.2, 0.7)])
    def test_exponent_addition(self, z, s1, s2):
        # valid while the combined argument stays inside (-pi, pi]
        if abs(cmath.phase(z) * (s1 + s2)) < math.pi:
            assert cpow(z, s1) * cpow(z, s2) == pytest.approx(
                cpow(z, s1 + s2), rel=1e-13
            )

    def test_zero_base(self):
        assert cpow(0, 2.0) == 0j
        with pytest.raises(ValueError):
            cpow(0, -1.0)
        with pytest.raises(ValueError):
            cpow(0, 0.0)
