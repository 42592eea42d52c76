"""Term model: parsing, shift quotients, growth exponents, evaluation."""

import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from zetatel.errors import ParseError, PoleError, UnsupportedGrowth
from zetatel.hyperterm import HyperTerm, LinForm, parse_term
from zetatel.polys import MultiPoly, RatFunc

F = Fraction
n = MultiPoly.var("n")
x = MultiPoly.var("x")
y = MultiPoly.var("y")

WORKHORSE = "y^3 * Poch(1+x,n) / (Poch(1-x,n) * (n+1-x) * ((n+1)^2-y^2))"


class TestParse:
    def test_workhorse_structure(self):
        t = parse_term(WORKHORSE)
        assert len(t.gamma_factors) == 4
        assert t.is_rational() is False

    def test_gamma_ratio_collapses(self):
        t = parse_term("Gamma(x+1)/Gamma(x)")
        assert t.is_rational()
        assert t.as_ratfunc() == RatFunc.var("x")

    def test_nonlinear_poch_rejected(self):
        with pytest.raises(ParseError):
            parse_term("Poch(n^2, n)")

    def test_nonlinear_gamma_rejected(self):
        with pytest.raises(ParseError):
            parse_term("Gamma(n*x)")

    def test_fractional_variable_coefficient_rejected(self):
        with pytest.raises(ParseError):
            parse_term("Gamma(n/2)")

    def test_sum_of_unlike_terms_rejected(self):
        with pytest.raises(ParseError):
            parse_term("Gamma(n) + 2^n")

    def test_symbolic_exponent_needs_constant_base(self):
        with pytest.raises(ParseError):
            parse_term("n^n")

    def test_round_trip_is_identity(self):
        for text in (WORKHORSE, "2^n*n", "(-1)^k/(k+1)",
                     "Poch(3/2,m)^3*Poch(5/2,m)/(Poch(1,m)*Poch(2,m)^3)"):
            t = parse_term(text)
            assert parse_term(t.render()) == t

    def test_sum_with_rational_ratio_allowed(self):
        a = parse_term("Poch(1/2,m)/Poch(2,m)")
        b = parse_term("Poch(3/2,m)/Poch(1,m)")
        s = a + b
        assert (s / b).is_rational()


class TestShiftQuotient:
    def test_poch_ratio(self):
        t = parse_term("Poch(1+x,n)/Poch(1-x,n)")
        assert t.shift_quotient("n") == RatFunc(n + 1 + x, n + 1 - x)

    def test_workhorse_quotient(self):
        # oracle: evaluate both sides numerically at random rational points
        t = parse_term(WORKHORSE)
        q = t.shift_quotient("n")
        expected = RatFunc((n + 1 + x) * ((n + 1) ** 2 - y * y),
                           (n + 2 - x) * ((n + 2) ** 2 - y * y))
        assert q == expected
        rng = random.Random(3)
        for _ in range(5):
            pt = {"x": F(rng.randint(1, 9), 10), "y": F(rng.randint(1, 9), 11),
                  "n": F(rng.randint(0, 6))}
            lhs = t.eval_numeric({**pt, "n": pt["n"] + 1}, 170)
            rhs = t.eval_numeric(pt, 170)
            qv = q.eval_frac(pt)
            with mp.workprec(170):
                assert abs(lhs - rhs * mpf(qv.numerator) / qv.denominator) \
                    < abs(lhs) * mpf(2) ** -150

    def test_exponential(self):
        t = parse_term("2^n*n")
        assert t.shift_quotient("n") == RatFunc(2 * (n + 1), n)

    def test_consistency_random_terms(self):
        rng = random.Random(5)
        for _ in range(20):
            a = rng.randint(1, 3)
            b = rng.randint(1, 4)
            t = parse_term("Poch(%d/2,k)/(Poch(%d,k))" % (2 * a - 1, b))
            q = t.shift_quotient("k")
            pt = {"k": F(rng.randint(0, 8))}
            va = t.eval_exact({**pt, "k": pt["k"] + 1})
            vb = t.eval_exact(pt)
            assert va is not None and vb is not None
            assert va == vb * q.eval_frac(pt)


class TestAsymptotics:
    def test_gamma_ratio_exponent(self):
        r, p = parse_term("Poch(1+x,n)/Poch(1-x,n)").term_asymptotics("n")
        assert r == 1 and p == LinForm({"x": 2})

    def test_constant_term(self):
        r, p = parse_term("5").term_asymptotics("n")
        assert r == 1 and p == LinForm()

    def test_workhorse(self):
        r, p = parse_term(WORKHORSE).term_asymptotics("n")
        assert r == 1 and p == LinForm({"x": 2}, -3)

    def test_numeric_slope_oracle(self):
        # log-slope of |F| between n = 10^3 and 10^5 approximates the exponent
        t = parse_term(WORKHORSE)
        pt = {"x": F(1, 3), "y": F(1, 5)}
        _, p = t.term_asymptotics("n")
        expo = p.eval(pt)
        with mp.workprec(120):
            v1 = t.eval_numeric({**pt, "n": 10 ** 3}, 120)
            v2 = t.eval_numeric({**pt, "n": 10 ** 5}, 120)
            slope = (mp.log(abs(v2)) - mp.log(abs(v1))) / (mp.log(10 ** 5) - mp.log(10 ** 3))
            assert abs(slope - mpf(expo.numerator) / expo.denominator) < 0.01

    def test_unbalanced_growth_rejected(self):
        with pytest.raises(UnsupportedGrowth):
            parse_term("Gamma(n)").term_asymptotics("n")

    def test_geometric_ratio(self):
        r, p = parse_term("3^k/(k+1)").term_asymptotics("k")
        assert r == 3 and p == LinForm({}, -1)


class TestEvaluation:
    def test_pochhammer_half(self):
        v = parse_term("Poch(1/2, m)").eval_numeric({"m": 3}, 128)
        with mp.workprec(140):
            assert abs(v - mpf(15) / 8) < mpf(2) ** -120

    def test_gamma_half_vs_sqrt_pi(self):
        # oracle: the library pi constant and a square root, independent of
        # the Gamma evaluation path
        v = parse_term("Gamma(1/2)").eval_numeric({}, 200)
        with mp.workprec(220):
            assert abs(v - mp.sqrt(mp.pi)) < mpf(2) ** -190

    def test_exact_product_oracle(self):
        t = parse_term(WORKHORSE)
        got = t.eval_exact({"x": F(1, 3), "y": F(1, 5), "n": 2})
        xx, yy = F(1, 3), F(1, 5)
        manual = (yy ** 3 * (1 + xx) * (2 + xx)
                  / ((1 - xx) * (2 - xx) * (3 - xx) * (9 - yy * yy)))
        assert got == manual
        num = t.eval_numeric({"x": F(1, 3), "y": F(1, 5), "n": 2}, 128)
        with mp.workprec(140):
            assert abs(num - mpf(manual.numerator) / manual.denominator) < mpf(2) ** -120

    def test_pole_reported(self):
        t = parse_term("Gamma(n-3)")
        with pytest.raises(PoleError):
            t.eval_numeric({"n": 2}, 64)

    def test_reciprocal_pole_is_zero(self):
        t = parse_term("1/Gamma(n-3)")
        assert t.eval_numeric({"n": 2}, 64) == 0

    def test_prefactor_pole(self):
        t = parse_term("1/(n-1)")
        with pytest.raises(PoleError):
            t.eval_numeric({"n": 1}, 64)


class TestRegistryTermStrings:
    def test_parse_render_parse_identity(self):
        from zetatel.registry import ALL_TERM_STRINGS
        assert len(ALL_TERM_STRINGS) >= 16
        for text in ALL_TERM_STRINGS:
            t = parse_term(text)
            assert parse_term(t.render()) == t
