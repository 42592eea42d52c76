"""Hypergeometric terms: Gamma-type factors, exponential factors, rational prefactor.

A term is a product

    prefactor(vars) * prod_i Gamma(L_i)^e_i * prod_b b^(M_b)

where every L_i is an integer-linear form in the variables with a rational
offset, e_i are nonzero integers, bases b are rationals (a separate sign part
uses base -1), and M_b are integer-linear forms with zero offset.  Gamma
arguments are canonicalized so each offset lies in (0, 1]; Pochhammer symbols
are stored as Gamma ratios.  Terms are immutable after construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import ParseError, PoleError, UnsupportedGrowth
from .polys import MultiPoly, RatFunc, Scalar, _as_frac, _frac_str


class LinForm:
    """Integer-linear form in named symbols plus a rational offset."""

    __slots__ = ("coeffs", "offset")

    def __init__(self, coeffs: Dict[str, int] = None, offset: Scalar = 0):
        cs = {v: int(c) for v, c in (coeffs or {}).items() if c != 0}
        self.coeffs: Dict[str, int] = dict(sorted(cs.items()))
        self.offset = _as_frac(offset)

    @staticmethod
    def var(name: str, coeff: int = 1) -> "LinForm":
        return LinForm({name: coeff})

    def key(self) -> Tuple:
        return (tuple(self.coeffs.items()), self.offset)

    def varpart_key(self) -> Tuple:
        return tuple(self.coeffs.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, LinForm) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __add__(self, other: Union["LinForm", Scalar]) -> "LinForm":
        if isinstance(other, (int, Fraction)):
            return LinForm(self.coeffs, self.offset + other)
        cs = dict(self.coeffs)
        for v, c in other.coeffs.items():
            cs[v] = cs.get(v, 0) + c
        return LinForm(cs, self.offset + other.offset)

    def __neg__(self) -> "LinForm":
        return LinForm({v: -c for v, c in self.coeffs.items()}, -self.offset)

    def __sub__(self, other: Union["LinForm", Scalar]) -> "LinForm":
        return self + (-other if isinstance(other, LinForm) else -_as_frac(other))

    def scale(self, k: int) -> "LinForm":
        return LinForm({v: k * c for v, c in self.coeffs.items()}, self.offset * k)

    def is_const(self) -> bool:
        return not self.coeffs

    def coeff(self, var: str) -> int:
        return self.coeffs.get(var, 0)

    def shift(self, var: str, k: int) -> "LinForm":
        return LinForm(self.coeffs, self.offset + k * self.coeffs.get(var, 0))

    def drop(self, var: str) -> "LinForm":
        return LinForm({v: c for v, c in self.coeffs.items() if v != var},
                       self.offset)

    def eval(self, assignment: Dict[str, Scalar]) -> Fraction:
        out = self.offset
        for v, c in self.coeffs.items():
            out += c * _as_frac(assignment[v])
        return out

    def to_poly(self) -> MultiPoly:
        p = MultiPoly.const(self.offset)
        for v, c in self.coeffs.items():
            p = p + MultiPoly.var(v) * c
        return p

    def render(self) -> str:
        parts: List[str] = []
        for v, c in self.coeffs.items():
            if c == 1:
                parts.append("+%s" % v)
            elif c == -1:
                parts.append("-%s" % v)
            else:
                parts.append("%+d*%s" % (c, v))
        if self.offset != 0 or not parts:
            parts.append(("+" if self.offset >= 0 else "-") + _frac_str(abs(self.offset)))
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def __repr__(self) -> str:
        return "LinForm(%s)" % self.render()


def _linform_from_poly(p: MultiPoly) -> LinForm:
    """Extract an integer-linear form from a polynomial, or raise ParseError."""
    coeffs: Dict[str, int] = {}
    offset = Fraction(0)
    for e, c in p.terms.items():
        deg = sum(e)
        if deg == 0:
            offset = c
        elif deg == 1:
            i = next(i for i, x in enumerate(e) if x == 1)
            if c.denominator != 1:
                raise ParseError("non-integer variable coefficient in %s" % p.render())
            coeffs[p.vars[i]] = int(c)
        else:
            raise ParseError("nonlinear argument: %s" % p.render())
    return LinForm(coeffs, offset)


class HyperTerm:
    """Canonical product of Gamma factors, exponential factors, and a prefactor."""

    __slots__ = ("gamma_factors", "exp_factors", "sign_exp", "prefactor")

    def __init__(self, prefactor: RatFunc = None,
                 gamma_factors: Dict[LinForm, int] = None,
                 exp_factors: Dict[Fraction, LinForm] = None,
                 sign_exp: LinForm = None):
        pref = prefactor if prefactor is not None else RatFunc.const(1)
        gammas: Dict[LinForm, int] = {}
        for lf, e in (gamma_factors or {}).items():
            if e == 0:
                continue
            lf2, factor = _reduce_gamma(lf)
            if lf2 is None:
                pref = pref * factor ** e
            else:
                gammas[lf2] = gammas.get(lf2, 0) + e
                pref = pref * factor ** e
        gammas = {lf: e for lf, e in gammas.items() if e != 0}
        exps: Dict[Fraction, LinForm] = {}
        sign = sign_exp if sign_exp is not None else LinForm()
        for b, lf in (exp_factors or {}).items():
            b = _as_frac(b)
            if b == 0:
                raise ValueError("zero exponential base")
            if lf.offset != 0:
                raise ValueError("exponential factor with nonzero offset")
            if b < 0:
                sign = sign + lf
                b = -b
            if b == 1:
                continue
            if b < 1:
                b, lf = 1 / b, -lf
            cur = exps.get(b)
            exps[b] = (cur + lf) if cur is not None else lf
        exps = {b: lf for b, lf in exps.items() if lf.coeffs}
        sign = LinForm({v: c % 2 for v, c in sign.coeffs.items()}, 0)
        self.prefactor = pref
        self.gamma_factors = dict(sorted(gammas.items(), key=lambda t: t[0].key()))
        self.exp_factors = dict(sorted(exps.items()))
        self.sign_exp = sign

    # -- basic structure -------------------------------------------------

    @property
    def variables(self) -> Tuple[str, ...]:
        vs = set()
        for lf in self.gamma_factors:
            vs |= set(lf.coeffs)
        for lf in self.exp_factors.values():
            vs |= set(lf.coeffs)
        vs |= set(self.sign_exp.coeffs)
        for v in self.prefactor.num.vars:
            if self.prefactor.num.degree(v) > 0 or self.prefactor.den.degree(v) > 0:
                vs.add(v)
        return tuple(sorted(vs))

    def is_rational(self) -> bool:
        return (not self.gamma_factors and not self.exp_factors
                and not self.sign_exp.coeffs)

    def as_ratfunc(self) -> RatFunc:
        if not self.is_rational():
            raise ValueError("term has non-rational factors")
        return self.prefactor

    def is_zero(self) -> bool:
        return self.prefactor.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, HyperTerm):
            return NotImplemented
        return (self.prefactor == other.prefactor
                and self.gamma_factors == other.gamma_factors
                and self.exp_factors == other.exp_factors
                and self.sign_exp == other.sign_exp)

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: Union["HyperTerm", RatFunc, MultiPoly, Scalar]) -> "HyperTerm":
        if not isinstance(other, HyperTerm):
            return HyperTerm(self.prefactor * other, self.gamma_factors,
                             self.exp_factors, self.sign_exp)
        gammas = dict(self.gamma_factors)
        for lf, e in other.gamma_factors.items():
            gammas[lf] = gammas.get(lf, 0) + e
        exps = dict(self.exp_factors)
        for b, lf in other.exp_factors.items():
            cur = exps.get(b)
            exps[b] = (cur + lf) if cur is not None else lf
        return HyperTerm(self.prefactor * other.prefactor, gammas, exps,
                         self.sign_exp + other.sign_exp)

    __rmul__ = __mul__

    def inv(self) -> "HyperTerm":
        if self.prefactor.is_zero():
            raise ZeroDivisionError("inverting zero term")
        return HyperTerm(1 / self.prefactor,
                         {lf: -e for lf, e in self.gamma_factors.items()},
                         {b: -lf for b, lf in self.exp_factors.items()},
                         self.sign_exp)

    def __truediv__(self, other) -> "HyperTerm":
        if isinstance(other, HyperTerm):
            return self * other.inv()
        return HyperTerm(self.prefactor / other, self.gamma_factors,
                         self.exp_factors, self.sign_exp)

    def __rtruediv__(self, other) -> "HyperTerm":
        return self.inv() * other

    def __neg__(self) -> "HyperTerm":
        return self * Fraction(-1)

    def __add__(self, other: "HyperTerm") -> "HyperTerm":
        """Sum of two terms whose ratio is rational (same Gamma/exp structure)."""
        if not isinstance(other, HyperTerm):
            other = HyperTerm(RatFunc.const(other) if isinstance(other, (int, Fraction))
                              else RatFunc(other))
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        ratio = other / self
        if not ratio.is_rational():
            raise ParseError("sum is not a hypergeometric term")
        return HyperTerm(self.prefactor * (1 + ratio.as_ratfunc()),
                         self.gamma_factors, self.exp_factors, self.sign_exp)

    def __sub__(self, other) -> "HyperTerm":
        return self + (-other if isinstance(other, HyperTerm) else HyperTerm(RatFunc.const(-_as_frac(other))))

    def __pow__(self, k: int) -> "HyperTerm":
        if not isinstance(k, int):
            raise ParseError("non-integer power of a term")
        if k < 0:
            return self.inv() ** (-k)
        out = HyperTerm(RatFunc.const(1))
        for _ in range(k):
            out = out * self
        return out

    def subs_var(self, var: str, k: int) -> "HyperTerm":
        """Replace var by var + k everywhere (k integer)."""
        gammas = {}
        for lf, e in self.gamma_factors.items():
            nlf = lf.shift(var, k)
            gammas[nlf] = gammas.get(nlf, 0) + e
        pref = self.prefactor.shift(var, k) if var in _ratfunc_vars(self.prefactor) else self.prefactor
        sign_off = self.sign_exp.coeff(var) * k
        pref = pref * Fraction(-1) ** (sign_off % 2)
        exps = {}
        for b, lf in self.exp_factors.items():
            pref = pref * b ** (lf.coeff(var) * k)
            exps[b] = lf
        return HyperTerm(pref, gammas, exps, self.sign_exp)

    # -- queries -------------------------------------------------------------

    def shift_quotient(self, var: str) -> RatFunc:
        """Exact rational q with F(var+1) = q * F(var)."""
        q = RatFunc.const(1)
        for lf, e in self.gamma_factors.items():
            c = lf.coeff(var)
            if c == 0:
                continue
            poly = lf.to_poly()
            if c > 0:
                block = RatFunc.const(1)
                for i in range(c):
                    block = block * RatFunc(poly + i)
            else:
                block = RatFunc.const(1)
                for i in range(1, -c + 1):
                    block = block / RatFunc(poly - i)
            q = q * block ** e if e != 1 else q * block
        for b, lf in self.exp_factors.items():
            q = q * b ** lf.coeff(var)
        if self.sign_exp.coeff(var) % 2:
            q = q * Fraction(-1)
        if var in _ratfunc_vars(self.prefactor):
            q = q * (self.prefactor.shift(var, 1) / self.prefactor)
        return q

    def term_asymptotics(self, var: str) -> Tuple[Fraction, LinForm]:
        """(ratio, p) with F(var=N) ~ C * ratio^N * N^p as N -> +infinity.

        Gamma factors must be nondecreasing in var (coefficient 0 or 1) and
        the Gamma(N) growth must cancel; otherwise UnsupportedGrowth.
        """
        growth = 0
        power = LinForm()
        for lf, e in self.gamma_factors.items():
            c = lf.coeff(var)
            if c == 0:
                continue
            if c != 1:
                raise UnsupportedGrowth(
                    "gamma argument with coefficient %d in %s" % (c, var))
            growth += e
            power = power + lf.drop(var).scale(e)
        if growth != 0:
            raise UnsupportedGrowth("unbalanced Gamma growth in %s" % var)
        ratio = Fraction(1)
        for b, lf in self.exp_factors.items():
            ratio *= b ** lf.coeff(var)
        if self.sign_exp.coeff(var) % 2:
            ratio = -ratio
        delta = (self.prefactor.num.degree(var) - self.prefactor.den.degree(var))
        power = power + delta
        return ratio, power

    # -- evaluation ------------------------------------------------------------

    def eval_exact(self, assignment: Dict[str, Scalar]) -> Optional[Fraction]:
        """Exact rational value when all Gamma factors cancel; else None."""
        import math

        classes: Dict[Fraction, List[Tuple[Fraction, int]]] = {}
        for lf, e in self.gamma_factors.items():
            a = lf.eval(assignment)
            classes.setdefault(a - math.floor(a), []).append((a, e))
        value = Fraction(1)
        for frac_cls, items in classes.items():
            if frac_cls == 0 and all(a >= 1 for a, _ in items):
                if max(a for a, _ in items) > 512:
                    return None  # exact factorial too long; use the float path
                for a, e in items:
                    f = Fraction(1)
                    for i in range(2, int(a)):
                        f *= i
                    value *= f ** e
                continue
            if sum(e for _, e in items) != 0:
                return None
            base = min(a for a, _ in items)
            if max(a for a, _ in items) - base > 512:
                return None  # exact product too long; use the float path
            for a, e in items:
                k = int(a - base)
                block = Fraction(1)
                for i in range(k):
                    if base + i == 0:
                        return None  # pole in the reduction chain
                    block *= base + i
                value *= block ** e
        for b, lf in self.exp_factors.items():
            ev = lf.eval(assignment)
            if ev.denominator != 1:
                return None
            value *= b ** int(ev)
        sv = self.sign_exp.eval(assignment)
        if sv.denominator != 1:
            return None
        value *= Fraction(-1) ** (int(sv) % 2)
        try:
            return value * self.prefactor.eval_frac(
                {v: _as_frac(assignment[v]) for v in _ratfunc_vars(self.prefactor)})
        except ZeroDivisionError:
            raise PoleError("prefactor pole at %r" % (assignment,))

    def eval_numeric(self, assignment: Dict[str, Scalar], precision_bits: int):
        """mpf value at a rational assignment, correct to a few ulp."""
        from mpmath import mp, mpf

        for lf, e in self.gamma_factors.items():
            a = lf.eval(assignment)
            if e > 0 and a <= 0 and a.denominator == 1:
                raise PoleError("Gamma(%s) pole at %r" % (lf.render(), assignment))
        exact = self.eval_exact(assignment)
        with mp.workprec(precision_bits + 20):
            if exact is not None:
                return +mpf(exact.numerator) / mpf(exact.denominator)
            for lf, e in self.gamma_factors.items():
                a = lf.eval(assignment)
                if e < 0 and a <= 0 and a.denominator == 1:
                    return mpf(0)  # reciprocal of a Gamma pole
            value = mp.one
            for lf, e in self.gamma_factors.items():
                a = lf.eval(assignment)
                value *= mp.gamma(mpf(a.numerator) / a.denominator) ** e
            for b, lf in self.exp_factors.items():
                ev = lf.eval(assignment)
                if ev.denominator == 1:
                    value *= _as_frac(b) ** int(ev)
                else:
                    value *= mp.power(mpf(b.numerator) / b.denominator,
                                      mpf(ev.numerator) / ev.denominator)
            sv = self.sign_exp.eval(assignment)
            if sv.denominator != 1:
                raise PoleError("sign factor at non-integer point")
            value *= (-1) ** (int(sv) % 2)
            try:
                pf = self.prefactor.eval_frac(
                    {v: _as_frac(assignment[v]) for v in _ratfunc_vars(self.prefactor)})
            except ZeroDivisionError:
                raise PoleError("prefactor pole at %r" % (assignment,))
            value *= mpf(pf.numerator) / pf.denominator
        from mpmath import mp as _mp
        with _mp.workprec(precision_bits):
            return +value

    # -- rendering ----------------------------------------------------------

    def render(self) -> str:
        num_parts: List[str] = []
        den_parts: List[str] = []
        sv = self.sign_exp
        if sv.coeffs:
            num_parts.append("(-1)^(%s)" % sv.render())
        for b, lf in self.exp_factors.items():
            num_parts.append("%s^(%s)" % (_frac_str(b), lf.render()))
        for lf, e in self.gamma_factors.items():
            target = num_parts if e > 0 else den_parts
            a = abs(e)
            g = "Gamma(%s)" % lf.render()
            target.append(g if a == 1 else "%s^%d" % (g, a))
        pnum, pden = self.prefactor.num, self.prefactor.den
        if not (pnum.is_const() and pnum.const_value() == 1) or not num_parts:
            num_parts.insert(0, "(%s)" % pnum.render())
        if not (pden.is_const() and pden.const_value() == 1):
            den_parts.insert(0, "(%s)" % pden.render())
        num = " * ".join(num_parts)
        if not den_parts:
            return num
        den = " * ".join(den_parts)
        return "%s / (%s)" % (num, den)

    def __repr__(self) -> str:
        return "HyperTerm(%s)" % self.render()


def _ratfunc_vars(r: RatFunc) -> Tuple[str, ...]:
    return tuple(v for v in r.num.vars
                 if r.num.degree(v) > 0 or r.den.degree(v) > 0)


def _reduce_gamma(lf: LinForm) -> Tuple[Optional[LinForm], RatFunc]:
    """Canonicalize Gamma(lf): representative offset in (0,1], rational cofactor.

    Returns (canonical linform or None, multiplier) with
    Gamma(lf) = multiplier * Gamma(canonical); None means the factor reduced
    to a pure rational (positive-integer constant argument).
    """
    import math

    if lf.is_const():
        a = lf.offset
        if a.denominator == 1 and a > 0:
            f = Fraction(1)
            for i in range(1, int(a)):
                f *= i
            return None, RatFunc.const(f)
        # nonpositive-integer constants stay as formal factors so that
        # evaluation can report the pole
    off = lf.offset
    k = math.ceil(off) - 1  # off - k in (0, 1]
    if k == 0:
        return lf, RatFunc.const(1)
    base = LinForm(lf.coeffs, off - k)
    poly = base.to_poly()
    mult = RatFunc.const(1)
    if k > 0:
        for i in range(k):
            mult = mult * RatFunc(poly + i)
    else:
        for i in range(1, -k + 1):
            mult = mult / RatFunc(poly - i)
    return base, mult


# -- parsing -------------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: List[Tuple[str, str]] = []
        self._scan()
        self.i = 0

    def _scan(self):
        t, i = self.text, 0
        while i < len(t):
            ch = t[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(t) and t[j].isdigit():
                    j += 1
                self.tokens.append(("int", t[i:j]))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(t) and (t[j].isalnum() or t[j] == "_"):
                    j += 1
                self.tokens.append(("name", t[i:j]))
                i = j
            elif ch in "+-*/^(),":
                self.tokens.append((ch, ch))
                i += 1
            else:
                raise ParseError("unexpected character %r at %d" % (ch, i))
        self.tokens.append(("end", ""))

    def peek(self) -> Tuple[str, str]:
        return self.tokens[self.i]

    def next(self) -> Tuple[str, str]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> str:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError("expected %r, found %r" % (kind, tok[1]))
        return tok[1]


def parse_term(text: str) -> HyperTerm:
    """Parse the term grammar into a canonical HyperTerm."""
    tz = _Tokenizer(text)
    value = _parse_expr(tz)
    if tz.peek()[0] != "end":
        raise ParseError("trailing input at token %r" % (tz.peek()[1],))
    return value


def _parse_expr(tz: _Tokenizer) -> HyperTerm:
    value = _parse_mul(tz)
    while tz.peek()[0] in "+-":
        op = tz.next()[0]
        rhs = _parse_mul(tz)
        value = value + rhs if op == "+" else value - rhs
    return value


def _parse_mul(tz: _Tokenizer) -> HyperTerm:
    value = _parse_unary(tz)
    while tz.peek()[0] in "*/":
        op = tz.next()[0]
        rhs = _parse_unary(tz)
        value = value * rhs if op == "*" else value / rhs
    return value


def _parse_unary(tz: _Tokenizer) -> HyperTerm:
    if tz.peek()[0] == "-":
        tz.next()
        return -_parse_unary(tz)
    if tz.peek()[0] == "+":
        tz.next()
        return _parse_unary(tz)
    return _parse_power(tz)


def _parse_power(tz: _Tokenizer) -> HyperTerm:
    base = _parse_atom(tz)
    while tz.peek()[0] == "^":
        tz.next()
        neg = False
        if tz.peek()[0] == "-":
            tz.next()
            neg = True
        exp = _parse_atom(tz)
        base = _apply_power(base, exp, neg)
    return base


def _apply_power(base: HyperTerm, exp: HyperTerm, neg: bool) -> HyperTerm:
    if exp.is_rational() and exp.as_ratfunc().is_const():
        k = exp.as_ratfunc().const_value()
        if k.denominator != 1:
            raise ParseError("fractional power")
        k = -int(k) if neg else int(k)
        return base ** k
    # symbolic exponent: base must be a rational constant
    if not (base.is_rational() and base.as_ratfunc().is_const()):
        raise ParseError("symbolic exponent on non-constant base")
    b = base.as_ratfunc().const_value()
    lf = _linform_of(exp)
    if neg:
        lf = -lf
    if lf.offset.denominator != 1:
        raise ParseError("fractional offset in exponent")
    k = int(lf.offset)
    pref = RatFunc.const(b ** k)
    return HyperTerm(pref, exp_factors={b: LinForm(lf.coeffs, 0)})


def _linform_of(value: HyperTerm) -> LinForm:
    if not value.is_rational():
        raise ParseError("nonlinear argument")
    r = value.as_ratfunc()
    if not (r.den.is_const() and r.den.const_value() == 1):
        raise ParseError("nonlinear argument")
    return _linform_from_poly(r.num)


def _parse_atom(tz: _Tokenizer) -> HyperTerm:
    kind, text = tz.next()
    if kind == "int":
        return HyperTerm(RatFunc.const(int(text)))
    if kind == "(":
        value = _parse_expr(tz)
        tz.expect(")")
        return value
    if kind == "name":
        if tz.peek()[0] == "(":
            if text not in ("Gamma", "Poch"):
                raise ParseError("unknown function %r" % text)
            tz.next()
            arg1 = _parse_expr(tz)
            if text == "Gamma":
                tz.expect(")")
                return HyperTerm(gamma_factors={_linform_of(arg1): 1})
            tz.expect(",")
            arg2 = _parse_expr(tz)
            tz.expect(")")
            a, l = _linform_of(arg1), _linform_of(arg2)
            return HyperTerm(gamma_factors=_merge_gammas({a + l: 1}, {a: -1}))
        return HyperTerm(RatFunc.var(text))
    raise ParseError("unexpected token %r" % text)


def _merge_gammas(a: Dict[LinForm, int], b: Dict[LinForm, int]) -> Dict[LinForm, int]:
    out = dict(a)
    for lf, e in b.items():
        out[lf] = out.get(lf, 0) + e
    return out


def render_term(term: HyperTerm) -> str:
    return term.render()
