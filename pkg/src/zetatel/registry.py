"""Built-in identity registry and the verification engine.

Each record captures one machine-checkable identity: a telescoping
certificate (verified by exact rational arithmetic), a recurrence (operator
re-derived and compared in canonical form, then checked numerically through
the boundary evaluator), a closed form (series against expression at fixed
rational sample points), or a value/rewrite (both sides evaluated
numerically).  Sample points and tolerances are frozen in the records so
every run is reproducible.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpf

from .closedform import ZetaPoly, parse_closed_form
from .errors import NotFound
from .hyperterm import HyperTerm, parse_term
from .numerics import (MZVIndex, SumConfig, as_mpf, bernoulli,
                       coupled_double_sum, interpolated_nested_sum,
                       hyperterm_series_sum, prefix_g_values,
                       extrapolate_power_law, zeta_value)
from .polys import RatFunc
from .telescope import (Certificate, ShiftOperator, TelescopeResult,
                        boundary_term, gosper, parse_operator,
                        verify_certificate, verify_prefix_sum, wz_check,
                        zeilberger, zeilberger_prefix_sum)

F = Fraction

# -- stored text payloads -------------------------------------------------

TERM_22 = ("y^3 * Poch(1+x,n) / (Poch(1-x,n) * (n+1-x) * ((n+1)^2-y^2))")
CERT_CT_X = "(-1-n+x)*(1+n-y)*(1+n+y)/(2*x)"
OP_CT_X = "x*(1+x)*S_x - (x-y)*(x+y)"
CERT_CT_Y = "(1+n-x)*(1+y)^2*(-1-n+y)*(1+2*y)/(2*y*(y-n))"
OP_CT_Y = "-y^2*(1-x+y)*S_y + (1+y)^2*(x+y)"

TERM_32 = ("(y^2-1)*(x-y)^2/((x+y)^2-1) * Poch(1,m)*Poch(1-x+y,m)*Poch(1+x-y,m)"
           " / (Poch(2,m)*Poch(2-x-y,m)*Poch(2+x+y,m))")
OP_32 = "S_x - 1"
TERM_32_H = ("Gamma(l-x)*Gamma(l+x)*Gamma(l+1)^2"
             " / (Gamma(1-x)*Gamma(1+x)*Gamma(l)^2*Gamma(l+1-y)*Gamma(l+1+y)*l^3)")

TERM_33 = ("Gamma(k+x-y+1/2)*Gamma(k-x+y+1/2)"
           " / ((2*k+1)*Gamma(k-x-y+3/2)*Gamma(k+x+y+3/2))")
OP_33 = "((x+1)^2-y^2)*S_x + (y^2-x^2)"

TERM_41 = ("y^2*(4*m+3)*(4*x^2-1)*(y^2-1)*(4*m^2+6*m-4*x^2+3)"
           " / (8*(m+1)*(2*m+1)*(x^2-1)*(4*y^2-1)*((2*m+1)^2-4*x^2)*((m+1)^2-y^2))"
           " * Poch(3/2-x,m)*Poch(3/2+x,m)*Poch(2-y,m)*Poch(2+y,m)"
           " / (Poch(2-x,m)*Poch(2+x,m)*Poch(3/2-y,m)*Poch(3/2+y,m))")
TERM_41_EVEN = ("-(4*x^2-1)*y^2/(8*(x^2-1)*(4*y^2-1))"
                " * Poch(1,m)^2*Poch(3/2-x,m)*Poch(3/2+x,m)*Poch(1-y,m)*Poch(1+y,m)"
                " / (Poch(2,m)*Poch(2-x,m)*Poch(2+x,m)*Poch(3/2-y,m)*Poch(3/2+y,m)*Gamma(m+1))")
TERM_41_ODD = ("-y^2/(4*y^2-1)"
               " * Poch(1/2,m)*Poch(1,m)*Poch(1/2-x,m)*Poch(1/2+x,m)*Poch(1-y,m)*Poch(1+y,m)"
               " / (Poch(3/2,m)*Poch(1-x,m)*Poch(1+x,m)*Poch(3/2-y,m)*Poch(3/2+y,m)*Gamma(m+1))")
CERT_WZ1 = ("-((m+1)*(2*m+1)*(m-x+1)*((2*m+1)^2-4*y^2))"
            " / ((4*m+3)*x*(2*m-2*x-1)*(4*m^2+6*m-4*x^2+3))"
            " * ( (4*m^2+2*m-4*x^2-8*x-9)/((x+1)^2-y^2)"
            "   + (2*m^2+4*m^2*x+2*m*x+m-5*x-8*y^2-4*x*y^2-1)/((x^2-y^2)*((x+1)^2-y^2)) )")
CERT_WZ2 = ("((m+1)*(2*m+1)*(m-x+1)*(m+x+1)*(2*m-2*y+1))"
            " / ((4*m+3)*y*(4*m^2+6*m-4*x^2+3))"
            " * ( (4*m^2+2*m-4*x^2+4*y+3)/((x^2-(y+1)^2)*(m-y))"
            "   - (4*y^2+4*m*y+4*y+2*m+1)/((x^2-y^2)*(x^2-(y+1)^2)) )")
TERM_A = ("-3*(4*m+3)*(4*m^2+6*m+3) / (256*(m+1/2)*(m+1)*(m+3/2)*(2*m+1)^3)"
          " * Poch(3/2,m)^3*Poch(5/2,m) / (Poch(1,m)*Poch(2,m)^3)")

TERM_5_OUTER = "Gamma(1/2+n+x) / ((n+1/2)*Gamma(3/2+n-x))"
TERM_5_INNER = "Gamma(m+1/2-x) / ((m+1/2)*Gamma(3/2+m+x))"
OP_5 = "(x+2)^3*S_x^2 - 2*(x+1)^3*S_x + x^3"
# derived operator-valued certificate entries (coefficient of S_x^0, S_x^1)
CERT_5_0 = ("(4*n^4*x^2-8*n^3*x^3+4*n^2*x^4+14*n^4*x-30*n^3*x^2-2*n^2*x^3"
            "+18*n*x^4+4*n^4-15*n^3*x-33*n^2*x^2+25*n*x^3+8*x^4-2*n^3"
            "-75/2*n^2*x-9/2*n*x^2+12*x^3-9*n^2-77/4*n*x+2*x^2-11/2*n-3*x-1)"
            "/(8*n*x^2-8*x^3+16*n*x-28*x^2+6*n-30*x-9)")
CERT_5_1 = ("(-2*n^4*x+4*n^3*x^2-2*n^2*x^3-4*n^4+11*n^3*x-2*n^2*x^2-9*n*x^3"
            "+6*n^3+9/2*n^2*x-26*n*x^2-4*x^3+5*n^2-99/4*n*x-12*x^2-15/2*n"
            "-12*x-4)/(4*n*x-4*x^2+6*n-12*x-9)")

CF_31 = ("y/(2*x) + pi^2*x*y^2*(1 - cot(pi*x)*cot(pi*y))*csc(pi*x)*tan(pi*(x+y))"
         "*Gamma(1+x+y) / (2*(x+y)*Gamma(1+x)^2*Gamma(1-x+y))")
INHOM_31 = "(2*y^3+3*y^2+y)/2"
CF_32 = ("(y^2-1)/(4*x*y)*((x-y)^2/(x+y) - (x-y)*csc(pi*(x+y))*sin(pi*(x-y)))"
         " + (y^2-1)*(2*psi(1+x+y)"
         " - csc(pi*(x+y))*sin(pi*(x+y))*(psi(1+2*x)+psi(1+2*y))"
         " - csc(pi*(x+y))*sin(pi*(x-y))*(psi(1+x)-psi(1+2*x)-psi(1+y)+psi(1+2*y)))")
CF_32_0 = "(y^2-1)*(2*euler - 1/y + pi*cot(pi*y) + 2*psi(1+y))/2"
RHS_32 = ("(y^2-1)*( 1/(4*x) + 1/(4*(x+1)) - 1/(x+y) - 1/(1+x+y) + 1/(1+2*x)"
          " + csc(pi*(x+y))*sin(pi*(x-y))/(4*x*(1+x)*(1+2*x)) )")
CF_33 = ("sin(pi*x)*sin(pi*y)/(2*x*y*(x+y))"
         " + cos(pi*(x-y))*(psi(1+x)-psi(1+y))/(x^2-y^2)"
         " - 2*cos(pi*x)*cos(pi*y)*(psi(1+2*x)-psi(1+2*y))/(x^2-y^2)")
INHOM_33 = "((8*x^2+8*x+1)*cos(pi*(x+y)) - cos(pi*(x-y)))/(4*x*(x+1)*(2*x+1))"
CF_41 = ("psi(1+x+y)/8 + psi(1+x-y)/8 - psi(1+x)/4 + psi(1+y)/4 - psi(1+2*y)/2"
         " + 1/(8*x) - euler/4 + pi*tan(pi*y)/8"
         " + (cot(pi*x)*tan(pi*y) - 1)/(16*(x-y))"
         " - (cot(pi*x)*tan(pi*y) + 1)/(16*(x+y))"
         " + cot(pi*x)*tan(pi*y)*(psi(1+x+y) - psi(1+x-y))/8")
CF_5 = ("(euler + 2*log2 + psi(1/2+x))/(2*x^3) - psi(1, 1/2+x)/(4*x^2)"
        " + 3*pi^2/(8*x^2) - pi*tan(pi*x)/(2*x^3) + pi^2*tan(pi*x)^2/(4*x^2)")
BOUNDARY_5 = "-4*(2*x^2+4*x+1)/((2*x+1)^2*(2*x+3)^2)"

ALL_TERM_STRINGS = [
    TERM_22, CERT_CT_X, CERT_CT_Y, TERM_32, TERM_32_H, TERM_33, TERM_41,
    TERM_41_EVEN, TERM_41_ODD, CERT_WZ1, CERT_WZ2, TERM_A, TERM_5_OUTER,
    TERM_5_INNER, CERT_5_0, CERT_5_1,
]
ALL_CLOSED_FORM_STRINGS = [
    CF_31, INHOM_31, CF_32, CF_32_0, RHS_32, CF_33, INHOM_33, CF_41, CF_5,
    BOUNDARY_5,
]


@dataclass
class IdentityRecord:
    id: str
    kind: str  # RECURRENCE | CERTIFICATE | CLOSED_FORM | VALUE | REWRITE
    note: str
    payload: Dict[str, object]
    sample_points: List[Dict[str, Fraction]] = field(default_factory=list)
    tolerance: float = 1e-10
    config: SumConfig = field(default_factory=lambda: SumConfig(
        N=120_000, richardson_levels=3, precision_bits=192))


@dataclass
class VerificationReport:
    id: str
    status: str  # PASS | FAIL | SKIP
    deltas: List[str] = field(default_factory=list)
    worst: str = ""
    config: Dict[str, object] = field(default_factory=dict)
    ms: int = 0
    detail: str = ""

    def as_dict(self, timings: bool = False) -> Dict[str, object]:
        out = {"id": self.id, "status": self.status, "deltas": self.deltas,
               "worst": self.worst, "config": self.config, "detail": self.detail}
        if timings:
            out["ms"] = self.ms
        return out


def _pt(**kw) -> Dict[str, Fraction]:
    return {k: Fraction(v) for k, v in kw.items()}


def _star(exps: Sequence[int]) -> MZVIndex:
    return MZVIndex.make(list(exps), kind="zeta", r=1)


def _half(exps: Sequence[int]) -> MZVIndex:
    return MZVIndex.make(list(exps), kind="zeta", r=F(1, 2))


def _thalf(exps: Sequence[int]) -> MZVIndex:
    return MZVIndex.make(list(exps), kind="t", r=F(1, 2))


# -- zeta-polynomial right sides -------------------------------------------


def _tw(c: int) -> Fraction:
    """Real value of (2i)^(c+1) for odd c."""
    return F(2) ** (c + 1) * F(-1) ** ((c + 1) // 2)


def _comp_w2(total: int):
    for a in range(total + 1):
        for b in range(total - a + 1):
            rem = total - a - b
            if rem % 2 == 0:
                yield a, b, rem // 2


def zp_cor42_head(n: int) -> ZetaPoly:
    """zeta^(1/2)({bar 2}^n, 3) as an exact zeta polynomial."""
    coef = 2 * F(-1, 2) ** n
    if n % 2 == 0:
        coef += F(-1, 2) * F(1, 8) ** n
    else:
        coef += -F(-1) ** ((n - 1) // 2) / F(2) ** (2 * n + 1)
    out = ZetaPoly.zeta(2 * n + 3).scale(coef)
    s = ZetaPoly()
    for a, b, c in _comp_w2(n + 1):
        q = F(-1) ** (a + c) * (1 - F(2) ** (2 * a)) / F(2) ** (3 * a + 3 * b + 4 * c)
        if q == 0:
            continue
        s.add(q * _zec(2 * a) * _zec(2 * b), 2 * a + 2 * b, (4 * c + 3,))
    return out + s.scale(F(8, 3)).div_zeta2()


def zp_cor42_tail(n: int) -> ZetaPoly:
    """zeta^(1/2)(3, {bar 2}^n) as an exact zeta polynomial."""
    out = ZetaPoly()
    if n % 2 == 0:
        out = out + ZetaPoly.zeta(2 * n + 3).scale(-F(-1) ** (n // 2) / F(2) ** (2 * n + 1))
    s = ZetaPoly()
    for a in range(n + 2):
        for b in range(n + 2 - a):
            c = n + 1 - a - b
            q = F(-1) ** a * (1 - F(2) ** (2 * a)) / F(8) ** n
            if q == 0:
                continue
            w = (F(2) if c % 2 == 0 else _tw(c)) - 8 * F(4) ** c
            s.add(q * w * _zec(2 * a) * _zec(2 * b), 2 * a + 2 * b, (2 * c + 3,))
    return out + s.scale(F(1, 6)).div_zeta2()


def _zec(k: int) -> Fraction:
    from .numerics import zeta_even_coeff
    return zeta_even_coeff(k)


def _muneta_sum(total: int) -> ZetaPoly:
    s = ZetaPoly()
    for a, b, c in _comp_w2(total):
        q = F(-1) ** (a + c) * (1 - F(2) ** (2 * a)) / F(4) ** (a + b + c)
        if q == 0:
            continue
        s.add(q * _zec(2 * a) * _zec(2 * b), 2 * a + 2 * b, (4 * c + 3,))
    return s.scale(F(8, 3)).div_zeta2()


def _phi_sum(total: int, n: int) -> ZetaPoly:
    s = ZetaPoly()
    for a in range(total + 1):
        for b in range(total - a + 1):
            c = total - a - b
            q = F(-1) ** a * (1 - F(2) ** (2 * a)) / F(16) ** n
            if q == 0:
                continue
            w = (F(2) if c % 2 == 0 else _tw(c)) - 8 * F(4) ** c
            s.add(q * w * _zec(2 * a) * _zec(2 * b), 2 * a + 2 * b, (2 * c + 3,))
    return s


def zp_cor43(family: int, n: int) -> ZetaPoly:
    """The four star families with repeating (1,3) blocks."""
    if family == 1:   # ({1,3}^n, 1, 2)
        return ZetaPoly.zeta(4 * n + 3).scale(4 - F(16) ** -n) + _muneta_sum(2 * n + 1)
    if family == 2:   # (2, {1,3}^n, 1, 2)
        return (ZetaPoly.zeta(4 * n + 5).scale(4 + F(1, 2) * F(-4) ** -n)
                + _muneta_sum(2 * n + 2).scale(-1))
    if family == 3:   # (1, 2, {1,3}^n)
        return (ZetaPoly.zeta(4 * n + 3).scale(-F(-4) ** -n)
                + _phi_sum(2 * n + 1, n).scale(F(1, 3)).div_zeta2())
    if family == 4:   # (2, 3, {1,3}^n)
        return _phi_sum(2 * n + 2, n).scale(-F(1, 12)).div_zeta2()
    raise ValueError(family)


def zp_muneta_3_13(n: int) -> ZetaPoly:
    """star value (3, {1,3}^n) as a zeta polynomial."""
    return _muneta_sum(2 * n + 1).scale(-1)


def zp_star_1_13(n: int) -> ZetaPoly:
    """star value (1, {1,3}^(n+1)) as a zeta polynomial."""
    return (ZetaPoly.zeta(4 * n + 5).scale(F(-1, 2) * F(-4) ** -n)
            + _muneta_sum(2 * n + 2))


def zp_cor45(n: int) -> ZetaPoly:
    out = ZetaPoly()
    s1 = ZetaPoly()
    T = 2 * n + 2
    for a in range(T + 1):
        for b in range(T - a + 1):
            for d_ in range((T - a - b) // 2 + 1):
                rem = T - a - b - 2 * d_
                if rem % 2 or rem < 2:
                    continue
                j = rem // 2
                q = (F(-1) ** (b + d_) * (2 - F(-4) ** -j) * (1 - F(4) ** a)
                     / F(2) ** (2 * a + 2 * b + 2 * d_))
                if q == 0:
                    continue
                s1.add(q * _zec(2 * a) * _zec(2 * b), 2 * a + 2 * b,
                       (4 * d_ + 3, 4 * j + 1))
    out = out + s1.scale(F(16, 3)).div_zeta2()
    s2 = ZetaPoly()
    T = 2 * n + 1
    for a in range(T + 1):
        for b in range(T - a + 1):
            for d_ in range((T - a - b) // 2 + 1):
                rem = T - a - b - 2 * d_
                if rem % 2:
                    continue
                j = rem // 2
                q = (F(-1) ** (b + d_) * (4 - F(4) ** (-2 * j)) * (1 - F(4) ** a)
                     / F(2) ** (2 * a + 2 * b + 2 * d_))
                if q == 0:
                    continue
                s2.add(q * _zec(2 * a) * _zec(2 * b), 2 * a + 2 * b,
                       (4 * d_ + 3, 4 * j + 3))
    out = out + s2.scale(F(-8, 3)).div_zeta2()
    for j in range(1, n + 1):
        k = n + 1 - j
        if k < 1:
            continue
        q = (2 - F(-4) ** -j) * (2 - F(-4) ** -k)
        out.add(-2 * q, 0, (4 * j + 1, 4 * k + 1))
    for j in range(0, n + 1):
        k = n - j
        q = (4 - F(4) ** (-2 * j)) * (4 - F(4) ** (-2 * k)) + F(-4) ** (-j - k)
        out.add(q / 2, 0, (4 * j + 3, 4 * k + 3))
    return out


def zp_31val() -> ZetaPoly:
    out = ZetaPoly()
    out.add(F(-2, 45), 4, (3, 3, 3))
    out.add(F(20), 0, (7, 3, 3))
    out.add(F(16), 0, (5, 5, 3))
    out.add(F(-17, 31185), 10, (3,))
    out.add(F(-1, 180), 8, (5,))
    out.add(F(-4, 63), 6, (7,))
    out.add(F(-28, 45), 4, (9,))
    out.add(F(198), 0, (13,))
    return out


def zp_z35() -> ZetaPoly:
    out = ZetaPoly()
    out.add(F(-27, 40), 0, (("mzv", (3, 5)),))
    out.add(F(1, 16), 2, (3, 3))
    out.add(F(-9, 4), 0, (5, 3))
    out.add(F(1769, 10368000), 8)
    return out


def zp_zs2n(n: int) -> ZetaPoly:
    import math
    B = bernoulli(2 * n + 2)
    coeff = F((-1) ** n * 2 * (2 ** (2 * n + 1) - 1)) * B / math.factorial(2 * n + 2)
    return ZetaPoly().add(coeff, 2 * n + 2)


# -- registry construction ----------------------------------------------------


def _build_registry() -> Dict[str, IdentityRecord]:
    records: List[IdentityRecord] = []
    big = SumConfig(N=10 ** 6, richardson_levels=3, precision_bits=192)
    mid = SumConfig(N=120_000, richardson_levels=3, precision_bits=192)

    records.append(IdentityRecord(
        "I-CT-X", "CERTIFICATE",
        "order-1 telescoper in x for the odd-zeta generating term",
        {"term": TERM_22, "sum_var": "n", "param_var": "x",
         "operator": OP_CT_X, "certificate": CERT_CT_X},
        tolerance=0.0, config=mid))
    records.append(IdentityRecord(
        "I-CT-Y", "CERTIFICATE",
        "order-1 telescoper in y for the odd-zeta generating term",
        {"term": TERM_22, "sum_var": "n", "param_var": "y",
         "operator": OP_CT_Y, "certificate": CERT_CT_Y},
        tolerance=0.0, config=mid))
    records.append(IdentityRecord(
        "I-31-REC", "RECURRENCE",
        "inhomogeneous recurrence in y for the double generating function",
        {"term": TERM_22, "sum_var": "n", "param_var": "y",
         "operator": OP_CT_Y, "inhom": INHOM_31},
        sample_points=[_pt(x=F(1, 5), y=F(1, 4)), _pt(x=F(1, 7), y=F(1, 3)),
                       _pt(x=F(2, 7), y=F(1, 5))],
        tolerance=1e-10, config=mid))
    records.append(IdentityRecord(
        "I-31-CF", "CLOSED_FORM",
        "trigonometric-Gamma closed form of the two-variable generating function",
        {"term": TERM_22, "sum_var": "n", "closed_form": CF_31},
        sample_points=[_pt(x=F(1, 3), y=F(1, 4)), _pt(x=F(1, 5), y=F(1, 3)),
                       _pt(x=F(1, 7), y=F(2, 7))],
        tolerance=1e-12, config=big))
    records.append(IdentityRecord(
        "I-31-VAL", "VALUE",
        "depth-9 star value with five unit entries against its zeta polynomial",
        {"index": ([1] * 5 + [2] * 4, "zeta", "1"), "zp": ("31val",)},
        tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-TWO-ONE-A", "REWRITE",
        "two-one rewrite between leading-ones star values and half values",
        {"cases": [([1] * m + [2] * (n + 1), 2 ** m, [1] * (m - 1) + [2 * n + 3])
                   for m in (1, 2, 3) for n in (0, 1, 2)]},
        tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-ZS2N", "VALUE",
        "all-twos star values: Bernoulli form and alternating-half form",
        {"range": 4}, tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-32-REC", "RECURRENCE",
        "first-order shift in x for the balanced 4F3-type series",
        {"term": TERM_32, "sum_var": "m", "param_var": "x",
         "operator": OP_32, "rhs": RHS_32},
        sample_points=[_pt(x=F(1, 5), y=F(1, 7)), _pt(x=F(1, 3), y=F(1, 8)),
                       _pt(x=F(1, 7), y=F(1, 9))],
        tolerance=1e-10, config=mid))
    records.append(IdentityRecord(
        "I-32-CF", "CLOSED_FORM",
        "digamma closed form of the shifted 4F3-type series",
        {"term": TERM_32, "sum_var": "m", "closed_form": CF_32},
        sample_points=[_pt(x=F(1, 5), y=F(1, 7)), _pt(x=F(1, 3), y=F(1, 8)),
                       _pt(x=F(2, 7), y=F(1, 6))],
        tolerance=1e-12, config=big))
    records.append(IdentityRecord(
        "I-32-CF0", "CLOSED_FORM",
        "value of the shifted series on the first-parameter axis",
        {"term": TERM_32, "sum_var": "m", "closed_form": CF_32_0, "fix": {"x": "0"}},
        sample_points=[_pt(x=F(0), y=F(1, 3)), _pt(x=F(0), y=F(1, 4)),
                       _pt(x=F(0), y=F(2, 5))],
        tolerance=1e-12, config=big))
    records.append(IdentityRecord(
        "I-32-H", "REWRITE",
        "change of variables between the direct and shifted generating functions",
        {"hterm": TERM_32_H, "fterm": TERM_32},
        sample_points=[_pt(X=F(1, 5), Y=F(1, 7)), _pt(X=F(1, 4), Y=F(1, 9)),
                       _pt(X=F(1, 3), Y=F(1, 11))],
        tolerance=1e-10, config=mid))
    records.append(IdentityRecord(
        "I-33-REC", "RECURRENCE",
        "first-order shift in x for the odd-denominator generating function",
        {"term": TERM_33, "sum_var": "k", "param_var": "x",
         "operator": OP_33, "inhom": INHOM_33},
        sample_points=[_pt(x=F(1, 5), y=F(1, 7)), _pt(x=F(1, 3), y=F(1, 8)),
                       _pt(x=F(2, 7), y=F(1, 9))],
        tolerance=1e-10, config=mid))
    records.append(IdentityRecord(
        "I-33-CF", "CLOSED_FORM",
        "digamma closed form of the odd-denominator generating function",
        {"term": TERM_33, "sum_var": "k", "closed_form": CF_33,
         "prefactor": "2*cos(pi*(x-y))"},
        sample_points=[_pt(x=F(1, 5), y=F(1, 7)), _pt(x=F(1, 3), y=F(1, 8)),
                       _pt(x=F(2, 7), y=F(1, 9))],
        tolerance=1e-12, config=big))
    records.append(IdentityRecord(
        "I-41-CF", "CLOSED_FORM",
        "digamma-trigonometric evaluation of the combined 6F5 summand",
        {"term": TERM_41, "sum_var": "m", "closed_form": CF_41,
         "even": TERM_41_EVEN, "odd": TERM_41_ODD},
        sample_points=[_pt(x=F(1, 5), y=F(1, 7)), _pt(x=F(1, 7), y=F(1, 9)),
                       _pt(x=F(2, 7), y=F(1, 5))],
        tolerance=1e-12, config=big))
    records.append(IdentityRecord(
        "I-41-WZ1", "CERTIFICATE",
        "pair certificate for the x-difference of the combined summand",
        {"term": TERM_41, "diff_var": "x", "tele_var": "m", "certificate": CERT_WZ1},
        tolerance=0.0, config=mid))
    records.append(IdentityRecord(
        "I-41-WZ2", "CERTIFICATE",
        "pair certificate for the y-difference of the combined summand",
        {"term": TERM_41, "diff_var": "y", "tele_var": "m", "certificate": CERT_WZ2},
        tolerance=0.0, config=mid))
    records.append(IdentityRecord(
        "I-41-GOSPER", "VALUE",
        "telescoping witness for the residue series at the double-pole point",
        {"term": TERM_A, "sum_var": "m",
         "value": "1/pi^2 - 1/4", "slipped": "-1/4 - 1/pi^2"},
        tolerance=1e-10, config=mid))
    records.append(IdentityRecord(
        "I-COR42", "VALUE",
        "half values with alternating-two runs against zeta polynomials",
        {"range": 5}, tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-TWO-ONE-B", "REWRITE",
        "two-one rewrites linking the (1,3)-block star families to half values",
        {"range": 3}, tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-COR43", "VALUE",
        "the four (1,3)-block star families against zeta polynomials",
        {"range": 3}, tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-COR45", "VALUE",
        "double-capped (1,3)-block star family and its half-value square identity",
        {"range": 3}, tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-CYCLIC", "REWRITE",
        "cyclic-sum style relation between two capped star families",
        {"range": 3}, tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-DRAMATIC", "REWRITE",
        "sum of two star families collapsing to a single alternating zeta",
        {"range": 3}, tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-Z35", "VALUE",
        "weight-8 half value with a depth-2 irreducible on the right side",
        {}, tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-5-OP", "CERTIFICATE",
        "order-2 operator with operator-valued certificate for the prefix-sum sequence",
        {"outer": TERM_5_OUTER, "inner": TERM_5_INNER, "sum_var": "n",
         "inner_var": "m", "param_var": "x", "operator": OP_5,
         "certificate0": CERT_5_0, "certificate1": CERT_5_1},
        tolerance=0.0, config=mid))
    records.append(IdentityRecord(
        "I-5-INHOM", "VALUE",
        "boundary value of the order-2 telescoping at negative parameters",
        {"outer": TERM_5_OUTER, "inner": TERM_5_INNER,
         "certificate0": CERT_5_0, "certificate1": CERT_5_1,
         "boundary": BOUNDARY_5},
        sample_points=[_pt(x=F(-3)), _pt(x=F(-4)), _pt(x=F(-10, 3))],
        tolerance=1e-10, config=mid))
    records.append(IdentityRecord(
        "I-5-CF", "CLOSED_FORM",
        "polygamma closed form of the coupled double series",
        {"outer": TERM_5_OUTER, "inner": TERM_5_INNER, "closed_form": CF_5},
        sample_points=[_pt(x=F(1, 5)), _pt(x=F(-1, 4)), _pt(x=F(1, 3))],
        tolerance=1e-12, config=big))
    records.append(IdentityRecord(
        "I-5-THM", "VALUE",
        "interpolated t-values with interior unit run reduce to single t-values",
        {"range": 7}, tolerance=1e-8, config=mid))
    records.append(IdentityRecord(
        "I-5-ASYM", "VALUE",
        "cubic-scaled prefix-sum sequence approaches its limit at first order",
        {"outer": TERM_5_OUTER, "inner": TERM_5_INNER, "x": "-3",
         "ns": [1000, 10000, 100000]},
        tolerance=1e-4, config=mid))
    records.append(IdentityRecord(
        "I-5-TAYLOR", "VALUE",
        "leading Taylor data of the coupled double series at the origin",
        {"outer": TERM_5_OUTER, "inner": TERM_5_INNER, "h": "1/1000"},
        tolerance=1e-4, config=big))
    return {r.id: r for r in records}


_REGISTRY: Optional[Dict[str, IdentityRecord]] = None


def registry() -> Dict[str, IdentityRecord]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build_registry()
    return _REGISTRY


def lookup(rid: str) -> IdentityRecord:
    reg = registry()
    if rid not in reg:
        raise NotFound(rid)
    return reg[rid]


# -- verification -------------------------------------------------------------


def _fmt(x) -> str:
    with mp.workprec(64):
        return mp.nstr(mpf(x), 8, strip_zeros=False)


def _mzv_resolver_factory(cfg: SumConfig):
    cache: Dict[Tuple, object] = {}

    def resolver(atom, prec):
        if atom in cache:
            return cache[atom]
        kind, payload = atom
        if kind != "mzv":
            raise ValueError(atom)
        idx = MZVIndex.make(list(payload))
        val, _ = interpolated_nested_sum(idx, cfg)
        cache[atom] = val
        return val
    return resolver


def _nested(exps, kind, r, cfg) -> object:
    idx = MZVIndex.make(list(exps), kind=kind, r=F(r))
    return interpolated_nested_sum(idx, cfg)[0]


def _series_at(term: HyperTerm, var: str, point: Dict[str, Fraction],
               cfg: SumConfig, lower: int = 0) -> object:
    return hyperterm_series_sum(term, var, point, cfg, lower=lower)[0]


def verify_identity(rid: str, cfg: Optional[SumConfig] = None,
                    perturb: float = 0.0) -> VerificationReport:
    """Check one registry record; never raises for a failing identity."""
    rec = lookup(rid)
    cfg = cfg or rec.config
    start = time.time()
    try:
        deltas, detail = _dispatch(rec, cfg, perturb)
        tol = rec.tolerance
        if tol == 0.0:
            ok = all(d == 0 for d in deltas)
        else:
            ok = all(abs(d) <= tol for d in deltas)
        worst = max((abs(d) for d in deltas), default=0)
        report = VerificationReport(
            rid, "PASS" if ok else "FAIL",
            deltas=[_fmt(d) for d in deltas], worst=_fmt(worst),
            config={"N": cfg.N, "richardson_levels": cfg.richardson_levels,
                    "precision_bits": cfg.precision_bits,
                    "tolerance": rec.tolerance},
            detail=detail)
    except NotFound:
        raise
    except Exception as exc:  # malformed environments surface as FAIL reports
        report = VerificationReport(rid, "FAIL", deltas=[], worst="",
                                    detail="error: %s" % exc)
    report.ms = int((time.time() - start) * 1000)
    return report


def _dispatch(rec: IdentityRecord, cfg: SumConfig,
              perturb: float) -> Tuple[List[object], str]:
    rid = rec.id
    pert = mpf(perturb)
    prec = cfg.precision_bits
    if rid in ("I-CT-X", "I-CT-Y"):
        term = parse_term(rec.payload["term"])
        op = parse_operator(rec.payload["operator"], rec.payload["param_var"])
        cert = Certificate(parse_term(rec.payload["certificate"]).as_ratfunc())
        result = TelescopeResult(op, [cert], sum_var=rec.payload["sum_var"])
        residual = verify_certificate(term, result, rec.payload["sum_var"])
        rederived = zeilberger(term, rec.payload["sum_var"],
                               rec.payload["param_var"], max_order=2)
        same_op = rederived is not None and rederived.operator == op
        same_cert = (rederived is not None
                     and rederived.certificate[0].rat == cert.rat)
        deltas = [0 if residual.is_zero() else 1,
                  0 if same_op else 1, 0 if same_cert else 1]
        return deltas, "residual zero; operator and certificate re-derived"
    if rid in ("I-41-WZ1", "I-41-WZ2"):
        term = parse_term(rec.payload["term"])
        r = parse_term(rec.payload["certificate"]).as_ratfunc()
        residual = wz_check(term, rec.payload["diff_var"],
                            rec.payload["tele_var"], r)
        return [0 if residual.is_zero() else 1], "pair residual"
    if rid == "I-5-OP":
        outer = parse_term(rec.payload["outer"])
        inner = parse_term(rec.payload["inner"])
        op = parse_operator(rec.payload["operator"], rec.payload["param_var"])
        certs = [Certificate(parse_term(rec.payload["certificate0"]).as_ratfunc()),
                 Certificate(parse_term(rec.payload["certificate1"]).as_ratfunc())]
        result = TelescopeResult(op, certs, sum_var=rec.payload["sum_var"])
        residual = verify_prefix_sum(outer, inner, rec.payload["sum_var"],
                                     rec.payload["inner_var"], result)
        rederived = zeilberger_prefix_sum(outer, inner, rec.payload["sum_var"],
                                          rec.payload["inner_var"],
                                          rec.payload["param_var"], max_order=2)
        same_op = rederived is not None and rederived.operator == op
        deltas = [0 if all(c.is_zero() for c in residual) else 1,
                  0 if same_op else 1]
        return deltas, "module residual triple zero; operator re-derived"
    if rid == "I-31-REC":
        return _check_rec_31(rec, cfg, pert)
    if rid == "I-32-REC":
        return _check_rec_32(rec, cfg, pert)
    if rid == "I-33-REC":
        return _check_rec_33(rec, cfg, pert)
    if rec.kind == "CLOSED_FORM":
        return _check_closed_form(rec, cfg, pert)
    if rid == "I-31-VAL":
        lhs = _nested(*rec.payload["index"], cfg)
        rhs = zp_31val().to_mpf(prec) + pert
        return [lhs - rhs], "nested star sum against stored zeta polynomial"
    if rid == "I-TWO-ONE-A":
        out = []
        for exps, factor, half_exps in rec.payload["cases"]:
            lhs = _nested(exps, "zeta", 1, cfg)
            rhs = factor * _nested(half_exps, "zeta", F(1, 2), cfg) + pert
            out.append(lhs - rhs)
        return out, "star route against scaled half route"
    if rid == "I-ZS2N":
        out = []
        for n in range(rec.payload["range"]):
            lhs = _nested([2] * (n + 1), "zeta", 1, cfg)
            rhs = zp_zs2n(n).to_mpf(prec) + pert
            alt = -2 * _nested([-(2 * n + 2)], "zeta", 0, cfg) + pert
            out.extend([lhs - rhs, lhs - alt])
        return out, "Bernoulli form and alternating-half form"
    if rid == "I-41-GOSPER":
        term = parse_term(rec.payload["term"])
        cert = gosper(term, rec.payload["sum_var"])
        if cert is None:
            return [1], "no certificate found"
        op = ShiftOperator("x", [RatFunc.const(1)])
        result = TelescopeResult(op, [cert], sum_var=rec.payload["sum_var"])
        bnd = boundary_term(term, result, rec.payload["sum_var"], 0, {},
                            precision_bits=prec)
        with mp.workprec(prec):
            target = 1 / mp.pi ** 2 - mpf(1) / 4 + pert
            direct = hyperterm_series_sum(term, rec.payload["sum_var"], {}, cfg)[0]
            slipped = -mpf(1) / 4 - 1 / mp.pi ** 2
            gap = abs(bnd - slipped)
        detail = ("telescoped boundary against 1/pi^2 - 1/4; displayed "
                  "constant differs by %s" % _fmt(gap))
        return [bnd - target, direct - target], detail
    if rid == "I-COR42":
        out = []
        for n in range(rec.payload["range"]):
            lhs = _nested([-2] * n + [3], "zeta", F(1, 2), cfg)
            out.append(lhs - zp_cor42_head(n).to_mpf(prec) - pert)
            lhs = _nested([3] + [-2] * n, "zeta", F(1, 2), cfg)
            out.append(lhs - zp_cor42_tail(n).to_mpf(prec) - pert)
        return out, "half values against zeta polynomials"
    if rid == "I-TWO-ONE-B":
        out = []
        for n in range(rec.payload["range"]):
            pairs = [
                ([1, 3] * n + [1, 2], 2 ** (1 + 2 * n), [-2] * (2 * n) + [3]),
                ([2] + [1, 3] * n + [1, 2], -2 ** (2 + 2 * n), [-2] * (2 * n + 1) + [3]),
                ([1, 2] + [1, 3] * n, 2 ** (1 + 2 * n), [3] + [-2] * (2 * n)),
                ([2, 3] + [1, 3] * n, -2 ** (2 + 2 * n), [3] + [-2] * (2 * n + 1)),
            ]
            for exps, factor, half_exps in pairs:
                lhs = _nested(exps, "zeta", 1, cfg)
                rhs = factor * _nested(half_exps, "zeta", F(1, 2), cfg) + pert
                out.append(lhs - rhs)
        return out, "star families against scaled half families"
    if rid == "I-COR43":
        out = []
        mk = [lambda n: [1, 3] * n + [1, 2], lambda n: [2] + [1, 3] * n + [1, 2],
              lambda n: [1, 2] + [1, 3] * n, lambda n: [2, 3] + [1, 3] * n]
        for fam in range(4):
            for n in range(rec.payload["range"]):
                lhs = _nested(mk[fam](n), "zeta", 1, cfg)
                rhs = zp_cor43(fam + 1, n).to_mpf(prec) + pert
                out.append(lhs - rhs)
        return out, "four star families against zeta polynomials"
    if rid == "I-COR45":
        out = []
        for n in range(rec.payload["range"]):
            lhs = _nested([1, 2] + [1, 3] * n + [1, 2], "zeta", 1, cfg)
            rhs = zp_cor45(n).to_mpf(prec) + pert
            out.append(lhs - rhs)
        for n in range(rec.payload["range"]):
            lhs = (2 * _nested([3] + [-2] * n + [3], "zeta", F(1, 2), cfg)
                   if n % 2 == 0 else mpf(0))
            rhs = mpf(0)
            for i in range(n + 1):
                rhs += ((-1) ** i
                        * _nested([-2] * i + [3], "zeta", F(1, 2), cfg)
                        * _nested([-2] * (n - i) + [3], "zeta", F(1, 2), cfg))
            out.append(lhs - rhs - pert)
        return out, "zeta-polynomial form plus the half-value square identity"
    if rid == "I-CYCLIC":
        out = []
        for n in range(rec.payload["range"]):
            a = _nested([2] + [1, 3] * n + [1, 2], "zeta", 1, cfg)
            b = _nested([1] + [1, 3] * (n + 1), "zeta", 1, cfg)
            with mp.workprec(prec):
                rhs = 4 * mp.zeta(4 * n + 5) + pert
            out.append(a + b - rhs)
        return out, "cyclic-style relation via nested sums on both sides"
    if rid == "I-DRAMATIC":
        out = []
        for n in range(rec.payload["range"]):
            a = _nested([1, 3] * n + [1, 2], "zeta", 1, cfg)
            b = _nested([3] + [1, 3] * n, "zeta", 1, cfg)
            with mp.workprec(prec):
                rhs = (4 - mpf(16) ** -n) * mp.zeta(4 * n + 3) + pert
                alt = -4 * as_mpf(zeta_value(4 * n + 3, -1, prec), prec) + pert
            out.extend([a + b - rhs, a + b - alt])
        return out, "combination collapses to a single alternating zeta"
    if rid == "I-Z35":
        lhs = _nested([3, -2, 3], "zeta", F(1, 2), cfg)
        rhs = zp_z35().to_mpf(prec, _mzv_resolver_factory(cfg)) + pert
        return [lhs - rhs], "half value against the depth-2 right side"
    if rid == "I-32-H":
        hterm = parse_term(rec.payload["hterm"])
        fterm = parse_term(rec.payload["fterm"])
        out = []
        for point in rec.sample_points:
            X, Y = point["X"], point["Y"]
            hval = _series_at(hterm, "l", {"x": X, "y": Y}, cfg, lower=1)
            fval = _series_at(fterm, "m",
                              {"x": (X + Y) / 2, "y": (Y - X) / 2}, cfg)
            with mp.workprec(prec):
                Xm = mpf(X.numerator) / X.denominator
                Ym = mpf(Y.numerator) / Y.denominator
                rhs = (4 * mp.sin(mp.pi * Ym) * fval
                       / (mp.pi * Ym * Xm ** 2 * (4 - (Xm - Ym) ** 2))) + pert
            out.append(hval - rhs)
        return out, "direct generating function against the shifted one"
    if rid == "I-5-INHOM":
        return _check_inhom_5(rec, cfg, pert)
    if rid == "I-5-THM":
        out = []
        for n in range(rec.payload["range"]):
            lhs = _nested([2] + [1] * n + [2], "t", F(1, 2), cfg)
            with mp.workprec(prec):
                rhs = (mpf(n + 3) / 2 ** (n + 2)
                       * (1 - mpf(2) ** -(n + 4)) * mp.zeta(n + 4)) + pert
            out.append(lhs - rhs)
        with mp.workprec(prec):
            out.append(_nested([2, 2], "t", F(1, 2), cfg) - mp.pi ** 4 / 128 - pert)
        return out, "interior-unit t-values against single t-values"
    if rid == "I-5-ASYM":
        outer = parse_term(rec.payload["outer"])
        inner = parse_term(rec.payload["inner"])
        xv = F(rec.payload["x"])
        ns = rec.payload["ns"]
        vals = prefix_g_values(outer, inner, xv, ns, prec)
        with mp.workprec(prec):
            limit = -1 / (1 + 2 * mpf(xv.numerator) / xv.denominator)
            errs = [abs(mpf(n) ** 3 * g - limit) for n, g in vals]
            slope = ((mp.log(errs[0]) - mp.log(errs[-1]))
                     / (mp.log(ns[-1]) - mp.log(ns[0])))
        ok = slope >= 1 - mpf(1) / 20
        detail = "observed order %s over n in %s" % (_fmt(slope), ns)
        return [errs[-1] if ok else 1], detail
    if rid == "I-5-TAYLOR":
        outer = parse_term(rec.payload["outer"])
        inner = parse_term(rec.payload["inner"])
        h = F(rec.payload["h"])
        v0 = coupled_double_sum(outer, inner, F(0), cfg)[0]
        vp = coupled_double_sum(outer, inner, h, cfg)[0]
        vm = coupled_double_sum(outer, inner, -h, cfg)[0]
        with mp.workprec(prec):
            hm = mpf(h.numerator) / h.denominator
            c0_target = mp.pi ** 4 / 24 + pert
            c1 = (vp - vm) / (2 * hm)
            c1_target = 31 * mp.zeta(5) / 2 + pert
            c2 = (vp - 2 * v0 + vm) / hm ** 2
            c2_target = 2 * (mp.pi ** 6 / 20) + pert
            deltas = [v0 - c0_target, (c1 - c1_target) / c1_target,
                      (c2 - c2_target) / c2_target]
        return deltas, "value at origin absolute; derivative deltas relative"
    raise RuntimeError("no verifier for record %s" % rec.id)


def _check_closed_form(rec: IdentityRecord, cfg: SumConfig,
                       pert) -> Tuple[List[object], str]:
    prec = cfg.precision_bits
    expr = parse_closed_form(rec.payload["closed_form"])
    out = []
    if rec.id == "I-5-CF":
        outer = parse_term(rec.payload["outer"])
        inner = parse_term(rec.payload["inner"])
        for point in rec.sample_points:
            lhs = coupled_double_sum(outer, inner, point["x"], cfg)[0]
            rhs = expr.eval(point, prec) + pert
            out.append(lhs - rhs)
        return out, "coupled double series against polygamma closed form"
    term = parse_term(rec.payload["term"])
    var = rec.payload["sum_var"]
    pref = rec.payload.get("prefactor")
    pref_expr = parse_closed_form(pref) if pref else None
    lower = 1 if rec.id == "I-32-H" else 0
    if rec.id == "I-41-CF":
        even = parse_term(rec.payload["even"])
        odd = parse_term(rec.payload["odd"])
        ratio = (even + odd) / term
        out.append(0 if (ratio.is_rational() and ratio.as_ratfunc() == 1) else 1)
    for point in rec.sample_points:
        lhs = _series_at(term, var, point, cfg)
        if pref_expr is not None:
            lhs = lhs * pref_expr.eval(point, prec)
        rhs = expr.eval(point, prec) + pert
        out.append(lhs - rhs)
    return out, "series against closed form at stored rational points"


def _check_rec_31(rec, cfg, pert):
    prec = cfg.precision_bits
    term = parse_term(rec.payload["term"])
    op_expected = parse_operator(rec.payload["operator"], rec.payload["param_var"])
    res = zeilberger(term, rec.payload["sum_var"], rec.payload["param_var"],
                     max_order=2)
    if res is None:
        return [1], "no telescoper found"
    deltas = [0 if res.operator == op_expected else 1]
    inhom = parse_closed_form(rec.payload["inhom"])
    for point in rec.sample_points:
        bnd = boundary_term(term, res, rec.payload["sum_var"], 0, point,
                            precision_bits=prec)
        deltas.append(bnd - inhom.eval(point, prec) - pert)
        # recurrence residual through the series evaluator
        f0 = _series_at(term, rec.payload["sum_var"], point, cfg)
        point_up = dict(point)
        point_up["y"] = point["y"] + 1
        f1 = _series_at(term, rec.payload["sum_var"], point_up, cfg)
        with mp.workprec(prec):
            coeffs = [c.eval_frac(point) for c in res.operator.coeffs]
            lhs = (mpf(coeffs[0].numerator) / coeffs[0].denominator * f0
                   + mpf(coeffs[1].numerator) / coeffs[1].denominator * f1)
        deltas.append(lhs - bnd)
    return deltas, "operator re-derived; boundary matches inhomogeneous part"


def _check_rec_32(rec, cfg, pert):
    prec = cfg.precision_bits
    term = parse_term(rec.payload["term"])
    op_expected = parse_operator(rec.payload["operator"], rec.payload["param_var"])
    res = zeilberger(term, rec.payload["sum_var"], rec.payload["param_var"],
                     max_order=2)
    deltas = [0 if (res is not None and res.operator == op_expected) else 1]
    rhs = parse_closed_form(rec.payload["rhs"])
    for point in rec.sample_points:
        f0 = _series_at(term, rec.payload["sum_var"], point, cfg)
        point_up = dict(point)
        point_up["x"] = point["x"] + 1
        f1 = _series_at(term, rec.payload["sum_var"], point_up, cfg)
        want = rhs.eval(point, prec) + pert
        deltas.append((f0 - f1) - want)
        bnd = boundary_term(term, res, rec.payload["sum_var"], 0, point,
                            precision_bits=prec)
        deltas.append(bnd + want)
    return deltas, "shift difference matches the displayed right side"


def _check_rec_33(rec, cfg, pert):
    prec = cfg.precision_bits
    term = parse_term(rec.payload["term"])
    op_expected = parse_operator(rec.payload["operator"], rec.payload["param_var"])
    res = zeilberger(term, rec.payload["sum_var"], rec.payload["param_var"],
                     max_order=2)
    deltas = [0 if (res is not None and res.operator == op_expected) else 1]
    inhom = parse_closed_form(rec.payload["inhom"])
    for point in rec.sample_points:
        with mp.workprec(prec + 20):
            xv = point["x"]
            yv = point["y"]
            cosf = mp.cos(mp.pi * (mpf(xv.numerator) / xv.denominator
                                   - mpf(yv.numerator) / yv.denominator))
            f0 = 2 * cosf * _series_at(term, rec.payload["sum_var"], point, cfg)
            up = dict(point)
            up["x"] = xv + 1
            f1 = -2 * cosf * _series_at(term, rec.payload["sum_var"], up, cfg)
            xm = mpf(xv.numerator) / xv.denominator
            ym = mpf(yv.numerator) / yv.denominator
            resid = (f1 * (ym ** 2 - (xm + 1) ** 2) + f0 * (ym ** 2 - xm ** 2)
                     + inhom.eval(point, prec) + pert)
        deltas.append(resid)
    return deltas, "displayed recurrence holds with the trigonometric prefactor"


def _check_inhom_5(rec, cfg, pert):
    prec = cfg.precision_bits
    outer = parse_term(rec.payload["outer"])
    inner = parse_term(rec.payload["inner"])
    c0 = parse_term(rec.payload["certificate0"]).as_ratfunc()
    c1 = parse_term(rec.payload["certificate1"]).as_ratfunc()
    bnd_expr = parse_closed_form(rec.payload["boundary"])
    deltas = []
    base = 3000
    for point in rec.sample_points:
        xv = point["x"]
        ns = [base * 2 ** k for k in range(5)]
        vals0 = prefix_g_values(outer, inner, xv, ns, prec + 40)
        vals1 = prefix_g_values(outer, inner, xv + 1, ns, prec + 40)
        with mp.workprec(prec + 40):
            samples = []
            for (nv, g0), (_, g1) in zip(vals0, vals1):
                a = c0.eval_frac({"n": nv, "x": xv})
                b = c1.eval_frac({"n": nv, "x": xv})
                samples.append((nv, mpf(a.numerator) / a.denominator * g0
                                + mpf(b.numerator) / b.denominator * g1))
            lim, _ = extrapolate_power_law(samples, [1, 2, 3, 4], prec + 20)
            a = c0.eval_frac({"n": 1, "x": xv})
            b = c1.eval_frac({"n": 1, "x": xv})
            g0 = dict(prefix_g_values(outer, inner, xv, [1], prec + 40))[1]
            g1 = dict(prefix_g_values(outer, inner, xv + 1, [1], prec + 40))[1]
            at1 = (mpf(a.numerator) / a.denominator * g0
                   + mpf(b.numerator) / b.denominator * g1)
            boundary = lim - at1
        deltas.append(boundary - bnd_expr.eval(point, prec) - pert)
    return deltas, "telescoped boundary against the displayed rational value"


# -- batch verification and serialization ---------------------------------------


def _verify_worker(args):
    rid, cfg = args
    return verify_identity(rid, cfg)


def verify_all(cfg: Optional[SumConfig] = None,
               ids: Optional[Sequence[str]] = None,
               kind: Optional[str] = None,
               jobs: int = 1) -> List[VerificationReport]:
    reg = registry()
    todo = [r for r in reg.values()
            if (ids is None or r.id in ids) and (kind is None or r.kind == kind)]
    todo.sort(key=lambda r: r.id)
    if jobs > 1 and len(todo) > 1:
        import concurrent.futures as cf
        with cf.ProcessPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(_verify_worker,
                                  [(r.id, cfg) for r in todo]))
    else:
        reports = [verify_identity(r.id, cfg) for r in todo]
    return sorted(reports, key=lambda rep: rep.id)


def reports_json(reports: Sequence[VerificationReport],
                 timings: bool = False) -> str:
    payload = [rep.as_dict(timings=timings) for rep in reports]
    if len(payload) == 1:
        return json.dumps(payload[0], indent=2, sort_keys=True)
    return json.dumps(payload, indent=2, sort_keys=True)


def registry_text() -> str:
    """Versioned text serialization of the registry."""
    lines = ["ZTREG 1"]
    for rec in sorted(registry().values(), key=lambda r: r.id):
        lines.append("")
        lines.append("[%s]" % rec.id)
        lines.append("kind = %s" % rec.kind)
        lines.append("note = %s" % rec.note)
        lines.append("tolerance = %g" % rec.tolerance)
        lines.append("config = N=%d levels=%d prec=%d"
                     % (rec.config.N, rec.config.richardson_levels,
                        rec.config.precision_bits))
        for key in sorted(rec.payload):
            value = rec.payload[key]
            lines.append("%s = %s" % (key, value))
        for i, point in enumerate(rec.sample_points):
            body = ", ".join("%s=%s" % (k, v) for k, v in sorted(point.items()))
            lines.append("sample_%d = %s" % (i, body))
    return "\n".join(lines) + "\n"
