import cmath
import math

import numpy as np
import pytest

from halfline.asym import (
    BoundaryCondition,
    En0,
    K_closed,
    K_mj,
    K_quad,
    L_quad,
    L_series,
    N_asym,
    build_e,
    build_model,
    counting_residual,
    d_j,
    depth,
    eval_asym_E,
)
from halfline.combin import PotentialSpec, b_jk, nu
from halfline.errors import BranchCrossingError, HypothesisViolationError
from halfline.specfun import beta, gen_binomial

DIRICHLET = BoundaryCondition(1, 0)
ROBIN = BoundaryCondition(1, 1)


def zero_potential(m):
    return PotentialSpec(m, (0,) * (m - 1))


class TestBoundaryCondition:
    def test_offsets(self):
        assert DIRICHLET.offset() == -0.25
        assert ROBIN.offset() == 0.25
        assert BoundaryCondition(0, 1).offset() == 0.25

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            BoundaryCondition(0, 0)


class TestKClosed:
    def test_tabulated_values(self):
        assert K_closed(4, 1, 1) == pytest.approx(-0.5, abs=1e-15)
        assert K_closed(4, 3, 1) == pytest.approx(0.5 * math.log(2), abs=1e-15)
        assert K_closed(4, 3, 2) == pytest.approx((math.log(2) - 1) / 2, abs=1e-15)
        assert K_closed(3, 2, 1) == pytest.approx(-beta(2 / 3, 5 / 6), rel=1e-14)

    def test_j_zero(self):
        for m in range(3, 9):
            assert K_closed(m, 0, 0) == pytest.approx(
                beta(0.5, 1 + 1 / m) / (2 * math.cos(math.pi / m)), rel=1e-14
            )

    def test_range_errors(self):
        for m, j, k in [(3, 3, 1), (3, 1, 0), (4, 4, 1), (5, 4, 2), (4, 2, 3)]:
            with pytest.raises(ValueError):
                K_closed(m, j, k)


class TestKQuad:
    @pytest.mark.parametrize(
        "m,j,k", [(4, 1, 1), (3, 0, 0), (6, 4, 2), (5, 3, 2), (4, 3, 1)]
    )
    def test_matches_closed_form(self, m, j, k):
        assert abs(K_quad(m, j, k) - K_closed(m, j, k)) <= 1e-9

    def test_value_m411(self):
        assert K_quad(4, 1, 1) == pytest.approx(-0.5, abs=1e-9)


class TestKmj:
    def test_j0_m3(self):
        p = zero_potential(3)
        # cos(pi/3) = 1/2 cancels the denominator
        assert K_mj(p, 0) == pytest.approx(beta(0.5, 4 / 3), rel=1e-14)

    @pytest.mark.parametrize("m", [3, 4, 6, 7])
    def test_j1_minus_a1_over_m(self, m):
        a = [0.0] * (m - 1)
        a[0] = 2.5 - 1.25j
        p = PotentialSpec(m, a)
        assert K_mj(p, 1) == pytest.approx(-(2.5 - 1.25j) / m, rel=1e-14)

    def test_j2_term_by_term_quadrature(self):
        p = PotentialSpec(5, (1, 1, 0, 0))
        ref = b_jk(p, 2, 1) * K_quad(5, 2, 1) + b_jk(p, 2, 2) * K_quad(5, 2, 2)
        assert K_mj(p, 2) == pytest.approx(ref, rel=1e-9)

    def test_real_for_real_a(self):
        for m in (3, 4, 5, 8):
            rng = np.random.default_rng(m)
            p = PotentialSpec(m, tuple(rng.normal(size=m - 1)))
            for j in range(depth(m) + 1):
                assert K_mj(p, j).imag == 0.0
                assert d_j(p, j).imag == 0.0
            assert all(e.imag == 0.0 for e in build_e(p, depth(m)))


class TestDj:
    def test_j0_cosine_cancels(self):
        for m in (3, 5, 6):
            p = zero_potential(m)
            assert d_j(p, 0) == pytest.approx(beta(0.5, 1 + 1 / m) / 2, rel=1e-14)

    def test_zero_potential_vanishes(self):
        for m in (3, 4, 7):
            p = zero_potential(m)
            for j in range(1, depth(m) + 1):
                assert d_j(p, j) == 0

    def test_even_m_closing_term(self):
        p = PotentialSpec(4, (1, 1, 1))
        assert d_j(p, 3) == pytest.approx(-(5 / 16) * math.pi / 4, rel=1e-14)


class TestEn0:
    def test_frozen_regression(self):
        # m = 3, Dirichlet-type offset, n = 10 (40-digit oracle:
        # 74.72029557838547447964421)
        assert En0(10, 3, DIRICHLET) == pytest.approx(
            74.72029557838547, rel=1e-13
        )

    @pytest.mark.parametrize("m", range(3, 13))
    def test_beta_gamma_identity(self, m):
        p = zero_potential(m)
        d0 = d_j(p, 0).real
        for n, bc in [(1, DIRICHLET), (7, ROBIN), (250, DIRICHLET)]:
            ref = ((n + bc.offset()) * math.pi / d0) ** (2 * m / (m + 2))
            assert En0(n, m, bc) == pytest.approx(ref, rel=1e-12)

    def test_ratio_tends_to_one(self):
        r1 = En0(101, 3, DIRICHLET) / En0(100, 3, DIRICHLET)
        r2 = En0(10001, 3, DIRICHLET) / En0(10000, 3, DIRICHLET)
        assert abs(r2 - 1) < abs(r1 - 1) < 0.02

    def test_domain(self):
        with pytest.raises(ValueError):
            En0(0, 3, DIRICHLET)


class TestBuildE:
    def test_zero_potential(self):
        for m in (3, 4, 7):
            assert all(v == 0 for v in build_e(zero_potential(m), depth(m)))

    def test_first_order(self):
        p = PotentialSpec(3, (1.0, 0.0))
        e = build_e(p, 1)
        assert e[0] == pytest.approx(-(6 / 5) * d_j(p, 1) / d_j(p, 0), rel=1e-14)

    def test_hand_unrolled_m4(self):
        p = PotentialSpec(4, (1, 0, 0))
        d0, d1, d2 = (d_j(p, j) for j in range(3))
        e1 = -(8 / 6) * d1 / d0
        e2 = -(8 / 6) * (
            d2 / d0
            + gen_binomial(3 / 4, 2) * e1**2
            + (d1 / d0) * gen_binomial(1 / 2, 1) * e1
        )
        got = build_e(p, 2)
        assert got[0] == pytest.approx(e1, rel=1e-14)
        assert got[1] == pytest.approx(e2, rel=1e-13)

    def test_depth_range(self):
        with pytest.raises(ValueError):
            build_e(zero_potential(4), 4)
        with pytest.raises(ValueError):
            build_e(zero_potential(4), 0)


class TestEvalAsym:
    def test_zero_potential_is_en0(self):
        m = 5
        model = build_model(zero_potential(m), DIRICHLET)
        for n in (1, 12, 99):
            assert eval_asym_E(model, n) == En0(n, m, DIRICHLET)

    def test_truncation_difference(self):
        p = PotentialSpec(4, (1.0, -0.5, 0.25))
        model = build_model(p, DIRICHLET)
        n = 60
        base = En0(n, 4, DIRICHLET)
        partial = base + model.e[1] * base ** (1 - 1 / 4)
        full2 = partial + model.e[2] * base ** (1 - 2 / 4)
        # depth-1 vs depth-2 differ by exactly the j = 2 term
        assert eval_asym_E(model, n) - full2 == pytest.approx(
            model.e[3] * base ** (1 - 3 / 4), rel=1e-12
        )
        assert full2 - partial == pytest.approx(
            model.e[2] * base ** (1 - 2 / 4), rel=1e-12
        )


class TestCountingResidual:
    def test_inverse_pair_zero_potential(self):
        model = build_model(zero_potential(3), DIRICHLET)
        for n in (3, 25, 400):
            cv = counting_residual(model, En0(n, 3, DIRICHLET))
            assert cv == pytest.approx(n - 0.25, abs=1e-9)

    @pytest.mark.parametrize(
        "m,a",
        [
            (3, (1.0, 0.0)),
            (4, (0.5, 1.0, -0.2)),
            (5, (1.0, -2.0, 0.5, 0.0)),
            (3, (0.4 + 0.2j, 0.1)),
        ],
    )
    def test_self_consistency_decreasing(self, m, a):
        model = build_model(PotentialSpec(m, a), DIRICHLET)
        resid = [
            abs(counting_residual(model, eval_asym_E(model, n)) - (n - 0.25))
            for n in (50, 100, 200)
        ]
        assert resid[0] > resid[1] > resid[2]

    def test_analytic_derivative(self):
        p = PotentialSpec(4, (0.5, 1.0, -0.2))
        model = build_model(p, DIRICHLET)
        E = 180.0 + 14.0j
        m = 4
        exact = sum(
            dj * (0.5 + (1 - j) / m) * E ** (-0.5 + (1 - j) / m)
            for j, dj in enumerate(model.d)
        ) / math.pi
        h = 1e-4 * abs(E)
        fd = (
            counting_residual(model, E + h) - counting_residual(model, E - h)
        ) / (2 * h)
        assert fd == pytest.approx(exact, rel=1e-6)

    def test_zero_energy_rejected(self):
        model = build_model(zero_potential(3), DIRICHLET)
        with pytest.raises(ValueError):
            counting_residual(model, 0)


class TestNAsym:
    def test_zero_potential_closed_form(self):
        model = build_model(zero_potential(3), DIRICHLET)
        t = 321.0
        assert N_asym(model, t) == pytest.approx(
            model.d[0].real * t ** (0.5 + 1 / 3) / math.pi, rel=1e-13
        )

    def test_hypothesis_guard(self):
        model = build_model(PotentialSpec(3, (1j, 0)), DIRICHLET)
        with pytest.raises(HypothesisViolationError):
            N_asym(model, 10.0)

    def test_positive_t_required(self):
        model = build_model(zero_potential(3), DIRICHLET)
        with pytest.raises(ValueError):
            N_asym(model, -1.0)


class TestLSeries:
    def test_zero_potential(self):
        p = zero_potential(5)
        lam = 40.0 + 3.0j
        assert L_series(p, lam) == pytest.approx(
            K_mj(p, 0) * lam ** (0.5 + 1 / 5), rel=1e-14
        )

    def test_odd_m_has_no_log(self):
        p = PotentialSpec(5, (1.0, -2.0, 0.5, 0.0))
        lam = 55.0
        assert L_series(p, lam, with_log=True) == L_series(p, lam, with_log=False)

    def test_even_m_log_term(self):
        p = PotentialSpec(4, (1, 1, 1))
        lam = 200.0
        diff = L_series(p, lam, with_log=True) - L_series(p, lam, with_log=False)
        assert diff == pytest.approx(-nu(p) / 4 * cmath.log(lam), rel=1e-13)

    def test_cut_rejected(self):
        with pytest.raises(ValueError):
            L_series(zero_potential(3), -4.0)


class TestLQuad:
    def test_equals_k0_at_unit_lambda(self):
        assert L_quad(zero_potential(3), 1.0) == pytest.approx(
            K_closed(3, 0, 0), abs=1e-8
        )

    @pytest.mark.parametrize("lam", [1.0, 10.0, 100.0])
    def test_zero_potential_scaling(self, lam):
        p = zero_potential(3)
        ref = K_closed(3, 0, 0) * lam ** (0.5 + 1 / 3)
        assert L_quad(p, lam) == pytest.approx(ref, abs=1e-7 * max(1.0, ref))

    def test_series_error_rate_even_m(self):
        p = PotentialSpec(4, (1, 1, 1))
        d1 = abs(L_quad(p, 1e2) - L_series(p, 1e2))
        d2 = abs(L_quad(p, 1e4) - L_series(p, 1e4))
        # two decades at O(lambda^(-1/m)): factor 10^(2/4)
        assert d1 / d2 == pytest.approx(10 ** 0.5, rel=0.25)

    def test_complex_lambda(self):
        p = PotentialSpec(3, (0.5, 0.2))
        lam = 80.0 + 60.0j
        got = L_quad(p, lam)
        ref = L_series(p, lam)
        assert abs(got - ref) < 0.2  # truncated tail only

    def test_branch_crossing_detected(self):
        # t^3 - 10 t^2 + 1 dives through zero on [0, 10]
        p = PotentialSpec(3, (-10.0, 0.0))
        with pytest.raises(BranchCrossingError):
            L_quad(p, 1.0)

    def test_cut_rejected(self):
        with pytest.raises(ValueError):
            L_quad(zero_potential(3), -1.0)


class TestLinearityStructure:
    """d_j and e_j are affine in a_j and bit-independent of higher a."""

    @pytest.mark.parametrize("m", [4, 5])
    def test_second_difference_and_independence(self, m):
        base = [0.4 * i - 0.3 for i in range(1, m)]
        for j in range(1, depth(m) + 1):
            dd, ee = [], []
            for t in (0.0, 0.7, 1.4):
                a = list(base)
                if j <= m - 1:
                    a[j - 1] = t
                p = PotentialSpec(m, a)
                dd.append(d_j(p, j))
                ee.append(build_e(p, j)[j - 1])
            assert abs(dd[2] - 2 * dd[1] + dd[0]) <= 1e-12
            assert abs(ee[2] - 2 * ee[1] + ee[0]) <= 1e-12
            assert abs(dd[2] - dd[1]) > 1e-8  # nonconstant
            # bit-identity under perturbing higher coefficients
            a_hi = list(base)
            for ell in range(j + 1, m):
                a_hi[ell - 1] += 9.0
            pa, pb = PotentialSpec(m, base), PotentialSpec(m, a_hi)
            assert d_j(pa, j) == d_j(pb, j)
            assert build_e(pa, j)[j - 1] == build_e(pb, j)[j - 1]
