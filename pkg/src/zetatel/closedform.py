"""Closed-form expression trees and exact zeta-polynomial values.

The expression grammar extends the term grammar with the constants pi,
euler, log2, the functions psi (one or two arguments), Gamma, sin, cos,
tan, cot, csc, log, zeta and zetabar (integer arguments), and arbitrary
integer powers.  Trees evaluate at rational points to mpf values; poles of
the trigonometric factors at exact multiples of pi are detected exactly.

ZetaPoly keeps values of the form  sum of q * pi^(2k) * prod zeta(odd)
exact until a float is requested; division by zeta(2) stays symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from mpmath import mp, mpf

from .errors import ParseError, PoleError
from .numerics import zeta_even_coeff, zeta_value, as_mpf
from .polys import _as_frac, _frac_str


class Expr:
    __slots__ = ()

    def eval(self, assignment: Dict[str, Fraction], precision_bits: int):
        with mp.workprec(precision_bits + 30):
            out = self._ev({k: _as_frac(v) for k, v in assignment.items()},
                           precision_bits + 30)
        with mp.workprec(precision_bits):
            return +out

    def _ev(self, a, prec):  # pragma: no cover - abstract
        raise NotImplementedError

    def exact(self, a) -> Optional[Fraction]:
        return None

    def render(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError

    def __repr__(self):
        return "Expr(%s)" % self.render()

    def __eq__(self, other):
        return isinstance(other, Expr) and self.render() == other.render()

    def __hash__(self):
        return hash(self.render())


@dataclass(frozen=True, repr=False, eq=False)
class Num(Expr):
    value: Fraction

    def _ev(self, a, prec):
        return mpf(self.value.numerator) / self.value.denominator

    def exact(self, a):
        return self.value

    def render(self):
        v = self.value
        if v < 0:
            return "(-%s)" % _frac_str(-v)
        return _frac_str(v)


@dataclass(frozen=True, repr=False, eq=False)
class Const(Expr):
    name: str  # pi | euler | log2

    def _ev(self, a, prec):
        if self.name == "pi":
            return +mp.pi
        if self.name == "euler":
            return +mp.euler
        if self.name == "log2":
            return mp.log(2)
        raise ParseError("unknown constant %r" % self.name)

    def render(self):
        return self.name


@dataclass(frozen=True, repr=False, eq=False)
class Var(Expr):
    name: str

    def _ev(self, a, prec):
        v = a[self.name]
        return mpf(v.numerator) / v.denominator

    def exact(self, a):
        return a.get(self.name)

    def render(self):
        return self.name


@dataclass(frozen=True, repr=False, eq=False)
class Add(Expr):
    args: Tuple[Expr, ...]

    def _ev(self, a, prec):
        return sum((t._ev(a, prec) for t in self.args), mpf(0))

    def exact(self, a):
        total = Fraction(0)
        for t in self.args:
            v = t.exact(a)
            if v is None:
                return None
            total += v
        return total

    def render(self):
        return "(" + " + ".join(t.render() for t in self.args) + ")"


@dataclass(frozen=True, repr=False, eq=False)
class Mul(Expr):
    args: Tuple[Expr, ...]

    def _ev(self, a, prec):
        out = mpf(1)
        for t in self.args:
            out *= t._ev(a, prec)
        return out

    def exact(self, a):
        total = Fraction(1)
        for t in self.args:
            v = t.exact(a)
            if v is None:
                return None
            total *= v
        return total

    def render(self):
        return "*".join(t.render() for t in self.args)


@dataclass(frozen=True, repr=False, eq=False)
class Div(Expr):
    num: Expr
    den: Expr

    def _ev(self, a, prec):
        d = self.den._ev(a, prec)
        if d == 0:
            raise PoleError("division by zero in %s" % self.den.render())
        return self.num._ev(a, prec) / d

    def exact(self, a):
        n, d = self.num.exact(a), self.den.exact(a)
        if n is None or d is None:
            return None
        if d == 0:
            raise PoleError("division by zero in %s" % self.den.render())
        return n / d

    def render(self):
        return "%s/(%s)" % (self.num.render(), self.den.render())


@dataclass(frozen=True, repr=False, eq=False)
class Neg(Expr):
    arg: Expr

    def _ev(self, a, prec):
        return -self.arg._ev(a, prec)

    def exact(self, a):
        v = self.arg.exact(a)
        return None if v is None else -v

    def render(self):
        return "-(%s)" % self.arg.render()


@dataclass(frozen=True, repr=False, eq=False)
class Pow(Expr):
    base: Expr
    exponent: int

    def _ev(self, a, prec):
        if self.exponent < 0:
            b = self.base._ev(a, prec)
            if b == 0:
                raise PoleError("zero base with negative power")
            return b ** self.exponent
        return self.base._ev(a, prec) ** self.exponent

    def exact(self, a):
        v = self.base.exact(a)
        if v is None:
            return None
        if self.exponent < 0 and v == 0:
            raise PoleError("zero base with negative power")
        return v ** self.exponent

    def render(self):
        return "%s^%d" % (self.base.render(), self.exponent)


@dataclass(frozen=True, repr=False, eq=False)
class Call(Expr):
    fn: str
    args: Tuple[Expr, ...]

    def _pi_multiple(self, a) -> Optional[Fraction]:
        """Exact q when the single argument equals q*pi, else None."""
        arg = self.args[0]
        factors = list(arg.args) if isinstance(arg, Mul) else [arg]
        q = Fraction(1)
        found_pi = False
        for f in factors:
            if isinstance(f, Const) and f.name == "pi" and not found_pi:
                found_pi = True
                continue
            v = f.exact(a)
            if v is None:
                return None
            q *= v
        return q if found_pi else None

    def _ev(self, a, prec):
        fn = self.fn
        if fn == "psi":
            from .numerics import polygamma
            if len(self.args) == 1:
                order, zarg = 0, self.args[0]
            else:
                order = int(self.args[0].exact(a))
                zarg = self.args[1]
            z = zarg.exact(a)
            if z is not None:
                return polygamma(order, z, prec)
            return mp.psi(order, zarg._ev(a, prec))
        if fn == "Gamma":
            z = self.args[0].exact(a)
            if z is not None and z <= 0 and z.denominator == 1:
                raise PoleError("Gamma pole at %s" % z)
            return mp.gamma(self.args[0]._ev(a, prec))
        if fn in ("sin", "cos", "tan", "cot", "csc", "sec"):
            q = self._pi_multiple(a)
            if q is not None:
                bad = {"tan": q - Fraction(1, 2), "sec": q - Fraction(1, 2),
                       "cot": q, "csc": q}.get(fn)
                if bad is not None and bad.denominator == 1:
                    raise PoleError("%s pole at %s*pi" % (fn, q))
            v = self.args[0]._ev(a, prec)
            return getattr(mp, fn)(v)
        if fn == "log":
            v = self.args[0]._ev(a, prec)
            if v <= 0:
                raise PoleError("log of nonpositive value")
            return mp.log(v)
        if fn in ("zeta", "zetabar"):
            s = self.args[0].exact(a)
            if s is None or s.denominator != 1:
                raise ParseError("zeta needs an exact integer argument")
            return as_mpf(zeta_value(int(s), -1 if fn == "zetabar" else 1,
                                     prec), prec)
        if fn == "tval":
            s = self.args[0].exact(a)
            z = as_mpf(zeta_value(int(s), 1, prec), prec)
            return (1 - mpf(2) ** (-int(s))) * z
        raise ParseError("unknown function %r" % fn)

    def render(self):
        return "%s(%s)" % (self.fn, ", ".join(t.render() for t in self.args))


_FUNCTIONS = ("psi", "Gamma", "sin", "cos", "tan", "cot", "csc", "sec",
              "log", "zeta", "zetabar", "tval")
_CONSTS = ("pi", "euler", "log2")


def parse_closed_form(text: str) -> Expr:
    from .hyperterm import _Tokenizer

    tz = _Tokenizer(text)
    e = _parse_sum(tz)
    if tz.peek()[0] != "end":
        raise ParseError("trailing input at %r" % (tz.peek()[1],))
    return e


def _parse_sum(tz) -> Expr:
    terms = [_parse_product(tz)]
    while tz.peek()[0] in "+-":
        op = tz.next()[0]
        t = _parse_product(tz)
        terms.append(t if op == "+" else Neg(t))
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def _parse_product(tz) -> Expr:
    out = _parse_prefix(tz)
    while tz.peek()[0] in "*/":
        op = tz.next()[0]
        rhs = _parse_prefix(tz)
        if op == "*":
            args = (out.args if isinstance(out, Mul) else (out,)) + (rhs,)
            out = Mul(args)
        else:
            out = Div(out, rhs)
    return out


def _parse_prefix(tz) -> Expr:
    if tz.peek()[0] == "-":
        tz.next()
        return Neg(_parse_prefix(tz))
    if tz.peek()[0] == "+":
        tz.next()
        return _parse_prefix(tz)
    return _parse_postfix(tz)


def _parse_postfix(tz) -> Expr:
    base = _parse_atom(tz)
    while tz.peek()[0] == "^":
        tz.next()
        neg = False
        if tz.peek()[0] == "-":
            tz.next()
            neg = True
        kind, text = tz.next()
        if kind != "int":
            raise ParseError("integer exponent expected")
        k = -int(text) if neg else int(text)
        base = Pow(base, k)
    return base


def _parse_atom(tz) -> Expr:
    kind, text = tz.next()
    if kind == "int":
        return Num(Fraction(int(text)))
    if kind == "(":
        e = _parse_sum(tz)
        tz.expect(")")
        return e
    if kind == "name":
        if tz.peek()[0] == "(":
            if text not in _FUNCTIONS:
                raise ParseError("unknown function %r" % text)
            tz.next()
            args = [_parse_sum(tz)]
            while tz.peek()[0] == ",":
                tz.next()
                args.append(_parse_sum(tz))
            tz.expect(")")
            return Call(text, tuple(args))
        if text in _CONSTS:
            return Const(text)
        return Var(text)
    raise ParseError("unexpected token %r" % text)


# -- exact zeta polynomials ---------------------------------------------------

Atom = Union[int, Tuple[str, Tuple[int, ...]]]


class ZetaPoly:
    """Exact linear combination of pi^p * prod(atoms) with Fraction weights.

    Atoms are odd zeta arguments (ints >= 3) or special symbols such as
    ("mzv", (3, 5)) resolved through the value provider at float time.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Tuple[int, Tuple[Atom, ...]], Fraction]] = None):
        self.terms: Dict[Tuple[int, Tuple[Atom, ...]], Fraction] = dict(terms or {})

    def add(self, coeff: Fraction, pi_pow: int = 0,
            atoms: Sequence[Atom] = ()) -> "ZetaPoly":
        if coeff == 0:
            return self
        key = (pi_pow, tuple(sorted(atoms, key=repr)))
        self.terms[key] = self.terms.get(key, Fraction(0)) + coeff
        if self.terms[key] == 0:
            del self.terms[key]
        return self

    def __add__(self, other: "ZetaPoly") -> "ZetaPoly":
        out = ZetaPoly(self.terms)
        for (p, ats), c in other.terms.items():
            out.add(c, p, ats)
        return out

    def scale(self, q: Fraction) -> "ZetaPoly":
        q = _as_frac(q)
        return ZetaPoly({k: c * q for k, c in self.terms.items()} if q else {})

    def div_zeta2(self) -> "ZetaPoly":
        """Divide by zeta(2) = pi^2/6; every term must carry a pi^2 factor."""
        out = ZetaPoly()
        for (p, ats), c in self.terms.items():
            if p < 2:
                raise ValueError("pi^2 cancellation failed in zeta polynomial")
            out.add(c * 6, p - 2, ats)
        return out

    @staticmethod
    def zeta(k: int) -> "ZetaPoly":
        """zeta(k) for k >= 0, even kept exact, odd symbolic."""
        if k % 2 == 0:
            return ZetaPoly().add(zeta_even_coeff(k), k)
        return ZetaPoly().add(Fraction(1), 0, (k,))

    def to_mpf(self, precision_bits: int,
               resolver: Optional[Callable[[Atom, int], object]] = None):
        with mp.workprec(precision_bits + 20):
            total = mpf(0)
            for (p, ats), c in self.terms.items():
                term = mpf(c.numerator) / c.denominator
                if p:
                    term *= mp.pi ** p
                for at in ats:
                    if isinstance(at, int):
                        term *= mp.zeta(at)
                    else:
                        if resolver is None:
                            raise ValueError("no resolver for atom %r" % (at,))
                        term *= resolver(at, precision_bits + 20)
                total += term
        with mp.workprec(precision_bits):
            return +total

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (p, ats), c in sorted(self.terms.items(), key=lambda t: repr(t[0])):
            if abs(c) == 1 and (p or ats):
                body = []
            else:
                body = [_frac_str(abs(c))]
            if p:
                body.append("pi^%d" % p)
            for at in ats:
                if isinstance(at, int):
                    body.append("zeta(%d)" % at)
                else:
                    body.append("%s(%s)" % (at[0], ",".join(map(str, at[1]))))
            parts.append(("-" if c < 0 else "+") + "*".join(body))
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def __repr__(self):
        return "ZetaPoly(%s)" % self.render()
