"""Closed-form expression trees and exact zeta polynomials."""

from fractions import Fraction

import pytest
from mpmath import mp, mpf

from zetatel.closedform import ZetaPoly, parse_closed_form
from zetatel.errors import ParseError, PoleError

F = Fraction


class TestParseEval:
    def test_arithmetic(self):
        e = parse_closed_form("(1+2)*4 - 5/2")
        assert e.eval({}, 64) == mpf(19) / 2

    def test_constants(self):
        e = parse_closed_form("pi^2/6 + euler - log2")
        with mp.workprec(170):
            ref = mp.pi ** 2 / 6 + mp.euler - mp.log(2)
            assert abs(e.eval({}, 160) - ref) < mpf(2) ** -150

    def test_psi_two_argument(self):
        e = parse_closed_form("psi(1, 1/2+x)")
        with mp.workprec(170):
            ref = mp.psi(1, mpf(1) / 2 + mpf(1) / 5)
            assert abs(e.eval({"x": F(1, 5)}, 160) - ref) < mpf(2) ** -140

    def test_zeta_calls(self):
        e = parse_closed_form("zeta(4) + zetabar(2) + tval(4)")
        with mp.workprec(170):
            ref = (mp.pi ** 4 / 90 - mp.pi ** 2 / 12
                   + (1 - mpf(2) ** -4) * mp.pi ** 4 / 90)
            assert abs(e.eval({}, 160) - ref) < mpf(2) ** -140

    def test_unknown_function(self):
        with pytest.raises(ParseError):
            parse_closed_form("sinh(x)")

    def test_render_round_trip_on_registry_forms(self):
        from zetatel.registry import ALL_CLOSED_FORM_STRINGS
        assert len(ALL_CLOSED_FORM_STRINGS) >= 10
        for text in ALL_CLOSED_FORM_STRINGS:
            e = parse_closed_form(text)
            again = parse_closed_form(e.render())
            assert again.render() == e.render()
            # spot equality at a safe positive point
            pt = {"x": F(1, 7), "y": F(1, 9)}
            assert e.eval(pt, 128) == again.eval(pt, 128)


class TestPoles:
    def test_tan_pole_named(self):
        e = parse_closed_form("tan(pi*y)")
        with pytest.raises(PoleError) as err:
            e.eval({"y": F(1, 2)}, 64)
        assert "tan" in str(err.value)

    def test_cot_and_csc_poles(self):
        with pytest.raises(PoleError):
            parse_closed_form("cot(pi*x)").eval({"x": F(3)}, 64)
        with pytest.raises(PoleError):
            parse_closed_form("csc(pi*x)").eval({"x": F(0)}, 64)

    def test_division_pole(self):
        with pytest.raises(PoleError):
            parse_closed_form("1/(x-1)").eval({"x": F(1)}, 64)

    def test_gamma_pole(self):
        with pytest.raises(PoleError):
            parse_closed_form("Gamma(x)").eval({"x": F(-2)}, 64)

    def test_near_pole_is_fine(self):
        v = parse_closed_form("tan(pi*y)").eval({"y": F(49, 100)}, 128)
        with mp.workprec(140):
            assert abs(v - mp.tan(mp.pi * mpf(49) / 100)) < mpf(2) ** -110


class TestZetaPoly:
    def test_even_zeta_exact(self):
        zp = ZetaPoly.zeta(4)
        assert zp.terms == {(4, ()): F(1, 90)}

    def test_odd_symbolic(self):
        zp = ZetaPoly.zeta(5)
        assert zp.terms == {(0, (5,)): F(1)}

    def test_div_zeta2(self):
        zp = ZetaPoly.zeta(2).scale(6).div_zeta2()
        assert zp.terms == {(0, ()): F(6)}

    def test_div_zeta2_requires_pi_square(self):
        with pytest.raises(ValueError):
            ZetaPoly.zeta(3).div_zeta2()

    def test_numeric_value(self):
        zp = ZetaPoly.zeta(4).scale(F(7, 2)) + ZetaPoly.zeta(3)
        with mp.workprec(170):
            ref = mpf(7) / 2 * mp.pi ** 4 / 90 + mp.zeta(3)
            assert abs(zp.to_mpf(160) - ref) < mpf(2) ** -150

    def test_special_atom_resolver(self):
        zp = ZetaPoly().add(F(2), 0, (("mzv", (3, 5)),))
        got = zp.to_mpf(128, lambda atom, prec: mpf(10))
        assert got == 20

    def test_render(self):
        zp = ZetaPoly().add(F(-2, 45), 4, (3, 3, 3))
        assert "pi^4" in zp.render() and "zeta(3)" in zp.render()
