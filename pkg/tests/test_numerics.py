"""Numerics: special functions, nested sums, series engines, extrapolation."""

import math
import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from zetatel.errors import DivergentIndex, DivergentSeries, PoleError
from zetatel.hyperterm import parse_term
from zetatel.numerics import (ExactPiMultiple, MZVIndex, SumConfig, as_mpf,
                              bernoulli, coupled_double_sum, gamma_value,
                              hyperterm_series_sum, interpolated_nested_sum,
                              polygamma, stuffle_expand, zeta_value)

F = Fraction
CFG = SumConfig(N=60_000, richardson_levels=3, precision_bits=160)


def nested(exps, kind="zeta", r=0, cfg=CFG):
    return interpolated_nested_sum(MZVIndex.make(exps, kind=kind, r=F(r)), cfg)[0]


def bernoulli_oracle(k):
    """Independent full recurrence over all indices (Akiyama-Tanigawa)."""
    A = [F(0)] * (k + 1)
    for m in range(k + 1):
        A[m] = F(1, m + 1)
        for j in range(m, 0, -1):
            A[j - 1] = j * (A[j - 1] - A[j])
    return -A[0] if k == 1 else A[0]


def zeta3_euler_maclaurin(prec):
    """Independent zeta(3) with an explicit remainder bound."""
    with mp.workprec(prec + 30):
        N = 80
        s = sum(mpf(1) / mpf(k) ** 3 for k in range(1, N))
        s += mpf(1) / (2 * mpf(N) ** 3) + mpf(1) / (2 * mpf(N) ** 2)
        term = mpf(0)
        for j in range(1, 20):
            b = bernoulli_oracle(2 * j)
            c = mpf(b.numerator) / b.denominator
            fall = mpf(1)
            for i in range(2 * j - 1):
                fall *= (3 + i)
            term = c / math.factorial(2 * j) * fall / mpf(N) ** (2 * j + 2)
            s += term
            if abs(term) < mpf(2) ** (-prec - 10):
                break
        return +s


class TestBernoulli:
    def test_base_cases(self):
        assert bernoulli(0) == 1
        assert bernoulli(2) == F(1, 6)
        assert bernoulli(4) == F(-1, 30)

    def test_odd_vanishes(self):
        assert bernoulli(3) == 0 and bernoulli(11) == 0

    def test_b12_against_independent_recurrence(self):
        assert bernoulli(12) == bernoulli_oracle(12) == F(-691, 2730)

    def test_b12_against_zeta12(self):
        # zeta(12) = 691 pi^12 / 638512875
        z12 = zeta_value(12)
        assert isinstance(z12, ExactPiMultiple)
        assert z12.coeff == F(691, 638512875)


class TestZeta:
    def test_even_exact(self):
        assert zeta_value(2).coeff == F(1, 6)
        assert zeta_value(4).coeff == F(1, 90)

    def test_zero_convention(self):
        z0 = zeta_value(0)
        assert z0.coeff == F(-1, 2) and z0.power == 0

    def test_pole(self):
        with pytest.raises(PoleError):
            zeta_value(1)

    def test_alternating(self):
        zb = zeta_value(2, sign=-1)
        assert zb.coeff == F(-1, 12)
        with mp.workprec(170):
            zb1 = zeta_value(1, sign=-1, precision_bits=160)
            assert abs(zb1 + mp.log(2)) < mpf(2) ** -150

    def test_zeta3_against_euler_maclaurin_oracle(self):
        v = zeta_value(3, precision_bits=160)
        oracle = zeta3_euler_maclaurin(120)
        with mp.workprec(170):
            assert abs(v - oracle) < mpf(2) ** -115
            assert mp.nstr(v, 17) == "1.2020569031595943"


class TestPolygamma:
    def test_psi_one(self):
        with mp.workprec(170):
            assert abs(polygamma(0, 1, 160) + mp.euler) < mpf(2) ** -150

    def test_psi_half_gauss_oracle(self):
        # Gauss digamma at rational argument 1/2: -euler - 2 log 2
        with mp.workprec(170):
            oracle = -mp.euler - 2 * mp.log(2)
            assert abs(polygamma(0, F(1, 2), 160) - oracle) < mpf(2) ** -150

    def test_functional_equation(self):
        z = F(3, 10)
        with mp.workprec(170):
            lhs = polygamma(0, z + 1, 160) - polygamma(0, z, 160)
            assert abs(lhs - mpf(10) / 3) < mpf(2) ** -150

    def test_reflection_random_points(self):
        rng = random.Random(9)
        with mp.workprec(170):
            for _ in range(20):
                z = F(rng.randint(1, 99), 100)
                lhs = (polygamma(0, 1 - z, 160) - polygamma(0, z, 160)
                       - mp.pi * mp.cot(mp.pi * mpf(z.numerator) / z.denominator))
                assert abs(lhs) < 16 * mpf(2) ** -160

    def test_pole(self):
        with pytest.raises(PoleError):
            polygamma(0, 0, 64)
        with pytest.raises(PoleError):
            polygamma(2, -3, 64)


class TestGamma:
    def test_recurrence(self):
        z = F(7, 10)
        with mp.workprec(170):
            assert abs(gamma_value(z + 1, 160)
                       - mpf(7) / 10 * gamma_value(z, 160)) < mpf(2) ** -150

    def test_half_squared_is_pi(self):
        with mp.workprec(170):
            assert abs(gamma_value(F(1, 2), 160) ** 2 - mp.pi) < mpf(2) ** -150


class TestIndexValidation:
    def test_divergent_zeta_tail(self):
        with pytest.raises(DivergentIndex):
            MZVIndex.make([2, 1])

    def test_divergent_t_tail(self):
        with pytest.raises(DivergentIndex):
            MZVIndex.make([2, 1], kind="t")

    def test_alternating_t_rejected(self):
        with pytest.raises(DivergentIndex):
            MZVIndex.make([-2, 2], kind="t")

    def test_alternating_one_tail_allowed(self):
        idx = MZVIndex.make([-1])
        assert idx.entries == ((1, -1),)


class TestNestedSums:
    def test_t2(self):
        with mp.workprec(170):
            assert abs(nested([2], kind="t") - mp.pi ** 2 / 8) < mpf(10) ** -14

    def test_star_22_bernoulli_formula(self):
        # (-1)^n 2 (2^(2n+1)-1) B_{2n+2} pi^(2n+2) / (2n+2)! at n = 1
        with mp.workprec(170):
            target = 7 * mp.pi ** 4 / 360
            assert abs(nested([2, 2], r=1) - target) < mpf(10) ** -12

    def test_interpolated_stuffle_product(self):
        # zeta^(1/2)(2) zeta^(1/2)(3) = zeta^(1/2)(2,3) + zeta^(1/2)(3,2)
        with mp.workprec(170):
            lhs = (mp.pi ** 2 / 6) * mp.zeta(3)
            rhs = nested([2, 3], r=F(1, 2)) + nested([3, 2], r=F(1, 2))
            assert abs(lhs - rhs) < mpf(10) ** -10

    def test_expansion_terms(self):
        idx = MZVIndex.make([2, 1, 3], r=F(1, 2))
        terms = stuffle_expand(idx)
        assert len(terms) == 4
        rendered = sorted(i.render() for _, i in terms)
        assert rendered == ["zeta^(0)(2,1,3)", "zeta^(0)(2,4)",
                            "zeta^(0)(3,3)", "zeta^(0)(6)"]

    def test_depth_one_expansion(self):
        idx = MZVIndex.make([3], r=F(1, 2))
        assert stuffle_expand(idx) == [(F(1), MZVIndex.make([3]))]

    def test_r_zero_only_identity_survives(self):
        idx = MZVIndex.make([2, 3], r=0)
        terms = stuffle_expand(idx)
        assert len(terms) == 1 and terms[0][1].entries == ((2, 1), (3, 1))

    @pytest.mark.parametrize("r", [F(0), F(1, 2), F(1)])
    def test_direct_agrees_with_expansion(self, r):
        # depth <= 3, weight <= 8 indices, both evaluation routes
        cases = [[2, 3], [1, 2, 3], [3, 1, 2], [-2, 1, 3], [2, 2, 4]]
        for exps in cases:
            idx = MZVIndex.make(exps, r=r)
            direct = interpolated_nested_sum(idx, CFG)[0]
            total = mpf(0)
            with mp.workprec(170):
                for coeff, cls in stuffle_expand(idx):
                    val = interpolated_nested_sum(cls, CFG)[0]
                    total += mpf(coeff.numerator) / coeff.denominator * val
                assert abs(direct - total) < mpf(10) ** -10

    def test_richardson_doubling_stability(self):
        idx = MZVIndex.make([1, 2], r=1)
        v1, e1 = interpolated_nested_sum(idx, SumConfig(N=40_000, richardson_levels=3,
                                                        precision_bits=160))
        v2, e2 = interpolated_nested_sum(idx, SumConfig(N=80_000, richardson_levels=3,
                                                        precision_bits=160))
        assert abs(v1 - v2) <= e1 + e2
        with mp.workprec(170):
            assert abs(v2 - 2 * mp.zeta(3)) < mpf(10) ** -14


class TestSeriesSum:
    def test_geometric(self):
        v, _ = hyperterm_series_sum(parse_term("(1/2)^k"), "k", {}, CFG)
        with mp.workprec(170):
            assert abs(v - 2) < mpf(2) ** -150

    def test_divergent_rejected(self):
        with pytest.raises(DivergentSeries):
            hyperterm_series_sum(parse_term("3^k"), "k", {}, CFG)
        with pytest.raises(DivergentSeries):
            hyperterm_series_sum(parse_term("Gamma(n)/Gamma(n+1)"), "n", {}, CFG)

    def test_generating_series_point(self):
        term = parse_term("y^3 * Poch(1+x,n) / (Poch(1-x,n) * (n+1-x) * ((n+1)^2-y^2))")
        v, err = hyperterm_series_sum(term, "n", {"x": F(1, 3), "y": F(1, 4)}, CFG)
        with mp.workprec(180):
            xv, yv = mpf(1) / 3, mpf(1) / 4
            closed = (yv / (2 * xv)
                      + mp.pi ** 2 * xv * yv ** 2
                      * (1 - mp.cot(mp.pi * xv) * mp.cot(mp.pi * yv))
                      * mp.csc(mp.pi * xv) * mp.tan(mp.pi * (xv + yv))
                      * mp.gamma(1 + xv + yv)
                      / (2 * (xv + yv) * mp.gamma(1 + xv) ** 2 * mp.gamma(1 - xv + yv)))
            assert abs(v - closed) < mpf(10) ** -12


class TestCoupledDoubleSum:
    def test_value_at_origin(self):
        outer = parse_term("Gamma(1/2+n+x) / ((n+1/2)*Gamma(3/2+n-x))")
        inner = parse_term("Gamma(m+1/2-x) / ((m+1/2)*Gamma(3/2+m+x))")
        cfg = SumConfig(N=200_000, richardson_levels=3, precision_bits=160)
        v, err = coupled_double_sum(outer, inner, F(0), cfg)
        with mp.workprec(170):
            assert abs(v - mp.pi ** 4 / 24) < mpf(10) ** -14

    def test_divergent_parameter_rejected(self):
        outer = parse_term("Gamma(1/2+n+x) / ((n+1/2)*Gamma(3/2+n-x))")
        inner = parse_term("Gamma(m+1/2-x) / ((m+1/2)*Gamma(3/2+m+x))")
        with pytest.raises(DivergentSeries):
            coupled_double_sum(outer, inner, F(3, 4), CFG)
