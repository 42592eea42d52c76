"""Exact sparse multivariate polynomials and rational functions over Q.

A polynomial is a map from exponent tuples to nonzero Fraction coefficients,
together with an ordered (alphabetically sorted) tuple of variable names.
The zero polynomial has an empty term map.  Monomial comparisons use the
graded-lexicographic order induced by the sorted variable names; "leading"
below always means glex-greatest.

Rational functions are stored fully reduced with a canonically normalized
denominator (integer-coprime coefficients, positive leading coefficient).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, gcd as int_gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


def _as_frac(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class MultiPoly:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Dict[Exponent, Fraction]):
        vs = tuple(vars)
        if list(vs) != sorted(vs):
            raise ValueError("variables must be sorted: %r" % (vs,))
        self.vars = vs
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- construction -------------------------------------------------

    @staticmethod
    def const(c: Scalar, vars: Sequence[str] = ()) -> "MultiPoly":
        c = _as_frac(c)
        vs = tuple(sorted(vars))
        if c == 0:
            return MultiPoly(vs, {})
        return MultiPoly(vs, {(0,) * len(vs): c})

    @staticmethod
    def var(name: str) -> "MultiPoly":
        return MultiPoly((name,), {(1,): Fraction(1)})

    def with_vars(self, vars: Sequence[str]) -> "MultiPoly":
        """Reinterpret over a superset of variables (sorted)."""
        vs = tuple(sorted(vars))
        if vs == self.vars:
            return self
        if not set(self.vars) <= set(vs):
            raise ValueError("cannot drop variables %r -> %r" % (self.vars, vs))
        idx = [vs.index(v) for v in self.vars]
        terms: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * len(vs)
            for i, p in zip(idx, e):
                ne[i] = p
            terms[tuple(ne)] = c
        return MultiPoly(vs, terms)

    @staticmethod
    def align(*ps: "MultiPoly") -> List["MultiPoly"]:
        vs = tuple(sorted(set(itertools.chain.from_iterable(p.vars for p in ps))))
        return [p.with_vars(vs) for p in ps]

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(all(p == 0 for p in e) for e in self.terms)

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_const():
            raise ValueError("not a constant: %s" % self)
        return next(iter(self.terms.values()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = MultiPoly.align(self, other)
        return a.terms == b.terms

    def __hash__(self) -> int:
        # hash over a var-minimal canonical view so x+0*y equals x
        p = self.drop_unused()
        return hash((p.vars, frozenset(p.terms.items())))

    # -- arithmetic ----------------------------------------------------

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.vars)
        a, b = MultiPoly.align(self, other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly(a.vars, terms)

    __radd__ = __add__

    def __sub__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        return self + (-other if isinstance(other, MultiPoly) else -_as_frac(other))

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            c = _as_frac(other)
            if c == 0:
                return MultiPoly(self.vars, {})
            return MultiPoly(self.vars, {e: v * c for e, v in self.terms.items()})
        a, b = MultiPoly.align(self, other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                s = terms.get(e, Fraction(0)) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return MultiPoly(a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- structure -----------------------------------------------------

    def degree(self, var: Optional[str] = None) -> int:
        """Degree in `var`, or total degree if var is None; zero poly -> -1."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def leading(self) -> Tuple[Exponent, Fraction]:
        """Glex-greatest monomial and its coefficient."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=lambda t: (sum(t), t))
        return e, self.terms[e]

    def drop_unused(self) -> "MultiPoly":
        used = [i for i in range(len(self.vars))
                if any(e[i] for e in self.terms)]
        vs = tuple(self.vars[i] for i in used)
        return MultiPoly(vs, {tuple(e[i] for i in used): c
                              for e, c in self.terms.items()})

    def coeff_of(self, var: str, k: int) -> "MultiPoly":
        """Coefficient of var**k, as a polynomial in the same variable set."""
        if var not in self.vars:
            return self if k == 0 else MultiPoly(self.vars, {})
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == k:
                ne = list(e)
                ne[i] = 0
                terms[tuple(ne)] = c
        return MultiPoly(self.vars, terms)

    def as_univariate(self, var: str) -> List["MultiPoly"]:
        """Coefficient list [c0, c1, ...] of powers of var."""
        d = self.degree(var)
        if d < 0:
            return []
        return [self.coeff_of(var, k) for k in range(d + 1)]

    def subs(self, assignment: Dict[str, Union[Scalar, "MultiPoly"]]) -> "MultiPoly":
        """Substitute values/polynomials for variables (partial allowed)."""
        result = MultiPoly.const(0)
        for e, c in self.terms.items():
            term = MultiPoly.const(c)
            for v, p in zip(self.vars, e):
                if p == 0:
                    continue
                if v in assignment:
                    val = assignment[v]
                    if isinstance(val, MultiPoly):
                        term = term * val ** p
                    else:
                        term = term * (_as_frac(val) ** p)
                else:
                    term = term * MultiPoly.var(v) ** p
            result = result + term
        return result

    def eval_frac(self, assignment: Dict[str, Scalar]) -> Fraction:
        used = {v for i, v in enumerate(self.vars)
                if any(e[i] for e in self.terms)}
        out = self.subs({v: _as_frac(assignment[v]) for v in used})
        return out.const_value()

    def derivative(self, var: str) -> "MultiPoly":
        if var not in self.vars:
            return MultiPoly(self.vars, {})
        i = self.vars.index(var)
        terms: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = c * e[i]
        return MultiPoly(self.vars, terms)

    def shift(self, var: str, k: int) -> "MultiPoly":
        """Replace var by var + k, expanded."""
        if var not in self.vars:
            raise ValueError("unknown variable %r" % var)
        if k == 0:
            return self
        i = self.vars.index(var)
        terms: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            p = e[i]
            for j in range(p + 1):
                ne = list(e)
                ne[i] = j
                coeff = c * comb(p, j) * Fraction(k) ** (p - j)
                key = tuple(ne)
                s = terms.get(key, Fraction(0)) + coeff
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        return MultiPoly(self.vars, terms)

    # -- normalization ---------------------------------------------------

    def canonical_unit(self) -> Fraction:
        """Scalar u > 0 (times sign) such that self/u is canonical."""
        if not self.terms:
            return Fraction(1)
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = int_gcd(num_gcd, c.numerator)
            den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
        u = Fraction(num_gcd, den_lcm)
        _, lc = self.leading()
        if lc < 0:
            u = -u
        return u

    def canonical(self) -> "MultiPoly":
        """Scale to coprime integer coefficients with positive leading one."""
        if not self.terms:
            return self
        return self * (1 / self.canonical_unit())

    # -- rendering -------------------------------------------------------

    def __repr__(self) -> str:
        return "MultiPoly(%s)" % self.render()

    def render(self) -> str:
        """Canonical text form: monomials sorted glex-descending."""
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]),
                       reverse=True)
        parts: List[str] = []
        for e, c in items:
            factors = []
            for v, p in zip(self.vars, e):
                if p == 1:
                    factors.append(v)
                elif p > 1:
                    factors.append("%s^%d" % (v, p))
            mono = "*".join(factors)
            ac = abs(c)
            if not mono:
                body = _frac_str(ac)
            elif ac == 1:
                body = mono
            else:
                body = "%s*%s" % (_frac_str(ac), mono)
            parts.append(("-" if c < 0 else "+") + body)
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


# -- division and gcd ---------------------------------------------------


def div_exact(p: MultiPoly, d: MultiPoly) -> Optional[MultiPoly]:
    """Exact quotient p/d, or None if d does not divide p."""
    if d.is_zero():
        return None
    p, d = MultiPoly.align(p, d)
    if p.is_zero():
        return p
    q = MultiPoly.const(0, p.vars)
    lt_d, lc_d = d.leading()
    r = p
    while not r.is_zero():
        lt_r, lc_r = r.leading()
        e = tuple(a - b for a, b in zip(lt_r, lt_d))
        if any(x < 0 for x in e):
            return None
        t = MultiPoly(r.vars, {e: lc_r / lc_d})
        q = q + t
        r = r - t * d
    return q


def _content_wrt(p: MultiPoly, var: str) -> MultiPoly:
    coeffs = [c for c in p.as_univariate(var) if not c.is_zero()]
    g = coeffs[0]
    for c in coeffs[1:]:
        g = poly_gcd(g, c)
        if g.is_const():
            break
    return g.canonical()


def _prem(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """Pseudo-remainder of f by g in var: lc(g)^(df-dg+1) * f mod g."""
    dg = g.degree(var)
    lc_g = g.coeff_of(var, dg)
    r = f
    e = f.degree(var) - dg + 1
    v = MultiPoly.var(var)
    while not r.is_zero() and r.degree(var) >= dg:
        dr = r.degree(var)
        lc_r = r.coeff_of(var, dr)
        r = lc_g * r - lc_r * v ** (dr - dg) * g
        e -= 1
    for _ in range(max(e, 0)):
        r = r * lc_g
    return r


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, canonically normalized.

    gcd with 0 returns the canonical form of the other argument.
    """
    p, q = MultiPoly.align(p, q)
    if p.is_zero():
        return q.canonical()
    if q.is_zero():
        return p.canonical()
    if p.is_const() or q.is_const():
        return MultiPoly.const(1, p.vars)
    # choose main variable: present in both, minimizing the larger degree
    shared = [v for v in p.vars if p.degree(v) > 0 and q.degree(v) > 0]
    if not shared:
        return MultiPoly.const(1, p.vars)
    var = min(shared, key=lambda v: max(p.degree(v), q.degree(v)))
    cp = _content_wrt(p, var)
    cq = _content_wrt(q, var)
    pp = div_exact(p, cp)
    qq = div_exact(q, cq)
    assert pp is not None and qq is not None
    if pp.degree(var) < qq.degree(var):
        pp, qq = qq, pp
    g = _gcd_primitive_univariate(pp, qq, var)
    return (poly_gcd(cp, cq) * g).canonical()


def _gcd_primitive_univariate(u: MultiPoly, v: MultiPoly, var: str) -> MultiPoly:
    """gcd of primitive (wrt var) polynomials, deg_var u >= deg_var v >= 1.

    Subresultant remainder sequence; pseudo-remainders are divided by
    g*h^delta which is always exact.
    """
    g = MultiPoly.const(1, u.vars)
    h = MultiPoly.const(1, u.vars)
    while True:
        delta = u.degree(var) - v.degree(var)
        r = _prem(u, v, var)
        if r.is_zero():
            break
        divisor = g * h ** delta
        r2 = div_exact(r, divisor)
        assert r2 is not None, "subresultant division must be exact"
        u, v = v, r2
        if v.degree(var) == 0:
            return MultiPoly.const(1, u.vars)
        g = u.coeff_of(var, u.degree(var))
        if delta == 1:
            h = g
        elif delta > 1:
            nh = div_exact(g ** delta, h ** (delta - 1))
            assert nh is not None
            h = nh
    if v.degree(var) == 0:
        return MultiPoly.const(1, u.vars)
    res = div_exact(v, _content_wrt(v, var))
    assert res is not None
    return res.canonical()


def poly_lcm(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.is_zero() or q.is_zero():
        return MultiPoly.const(0, p.vars)
    g = poly_gcd(p, q)
    out = div_exact(p * q, g)
    assert out is not None
    return out.canonical()


def shift_poly(p: MultiPoly, var: str, k: int) -> MultiPoly:
    """p with var replaced by var + k, expanded; absent vars leave p unchanged."""
    if not var or not (var[0].isalpha() or var[0] == "_"):
        raise ValueError("unknown variable %r" % var)
    if var not in p.vars:
        return p
    return p.shift(var, k)


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Resultant of p and q with respect to var (Sylvester/Bareiss)."""
    p, q = MultiPoly.align(p, q)
    n, m = p.degree(var), q.degree(var)
    if n < 0 or m < 0:
        return MultiPoly.const(0, p.vars)
    if n == 0:
        return p ** m
    if m == 0:
        return q ** n
    pc = p.as_univariate(var)
    qc = q.as_univariate(var)
    size = n + m
    zero = MultiPoly.const(0, p.vars)
    mat: List[List[MultiPoly]] = []
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(pc)):
            row[i + j] = c
        mat.append(row)
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(qc)):
            row[i + j] = c
        mat.append(row)
    return _bareiss_det(mat)


def _bareiss_det(mat: List[List[MultiPoly]]) -> MultiPoly:
    """Fraction-free determinant; entries are exact polynomials."""
    n = len(mat)
    if n == 0:
        return MultiPoly.const(1)
    m = [row[:] for row in mat]
    sign = 1
    prev = MultiPoly.const(1, m[0][0].vars)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.const(0, m[0][0].vars)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                q = div_exact(num, prev)
                assert q is not None, "Bareiss division must be exact"
                m[i][j] = q
            m[i][k] = MultiPoly.const(0, m[0][0].vars)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def _int_roots_upper(poly: List[Fraction]) -> List[int]:
    """Nonnegative integer roots of a univariate rational-coefficient poly.

    Candidates are located numerically (every exact integer root is found to
    far better than integer resolution) and confirmed by exact evaluation.
    """
    poly = list(poly)
    while poly and poly[-1] == 0:
        poly.pop()
    if not poly:
        return []
    k = 0
    while poly[k] == 0:
        k += 1
    roots = [0] if k > 0 else []
    coeffs = poly[k:]
    if len(coeffs) == 1:
        return sorted(set(roots))

    def horner(j: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * j + c
        return acc

    candidates = set()
    from mpmath import mp

    bits = max(c.numerator.bit_length() + c.denominator.bit_length()
               for c in coeffs)
    with mp.workprec(max(4 * bits, 256)):
        try:
            zeros = mp.polyroots([mp.mpf(c.numerator) / c.denominator
                                  for c in reversed(coeffs)],
                                 maxsteps=200, extraprec=2 * bits)
        except Exception:
            zeros = []
    for z in zeros:
        re = mp.re(z)
        j = int(mp.nint(re))
        if abs(mp.im(z)) < 0.3 and abs(re - j) < 0.3 and j >= 0:
            candidates.update({j - 1, j, j + 1})
    for j in sorted(candidates):
        if j >= 1 and horner(j) == 0:
            roots.append(j)
    return sorted(set(roots))


def _numeric_roots(p: MultiPoly, var: str) -> Optional[list]:
    from mpmath import mp

    g = poly_gcd(p, p.derivative(var))
    if g.degree(var) > 0:
        sf = div_exact(p, g)
        if sf is not None:
            p = sf
    coeffs = [c.const_value() for c in p.as_univariate(var)]
    bits = max(c.numerator.bit_length() + c.denominator.bit_length()
               for c in coeffs)
    for extraprec in (2 * bits + 64, 6 * bits + 256):
        with mp.workprec(128 + extraprec):
            try:
                return mp.polyroots(
                    [mp.mpf(c.numerator) / c.denominator for c in reversed(coeffs)],
                    maxsteps=400, extraprec=extraprec)
            except Exception:
                continue
    return None


def dispersion_set(a: MultiPoly, b: MultiPoly, var: str) -> List[int]:
    """All j >= 0 with gcd(a(var), b(var+j)) non-unit.

    These are the nonnegative integer roots of the resultant in var of
    a(var) and b(var+j) as a polynomial in j; that resultant vanishes at j
    exactly when some root of b exceeds a root of a by j, so candidates are
    located from numeric root differences of parameter-projected inputs and
    each one is confirmed by an exact gcd computation.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("dispersion of zero polynomial")
    a2, b2 = MultiPoly.align(a, b)
    ca = _content_wrt(a2, var)
    cb = _content_wrt(b2, var)
    a2 = div_exact(a2, ca)
    b2 = div_exact(b2, cb)
    assert a2 is not None and b2 is not None
    da, db = a2.degree(var), b2.degree(var)
    if da <= 0 or db <= 0:
        return []
    params = sorted((set(a2.vars) | set(b2.vars)) - {var})
    candidates: set = set()
    got = 0
    for trial in range(6):
        proj = {v: Fraction(7 + 13 * trial + 5 * i, 11)
                for i, v in enumerate(params)}
        pa = a2.subs(proj)
        pb = b2.subs(proj)
        if pa.degree(var) != da or pb.degree(var) != db:
            continue
        ra = _numeric_roots(pa, var)
        rb = _numeric_roots(pb, var)
        if ra is None or rb is None:
            continue
        from mpmath import mp
        for x in ra:
            for y in rb:
                d = y - x
                if abs(mp.im(d)) < 0.25:
                    j = int(mp.nint(mp.re(d)))
                    if j >= 0 and abs(mp.re(d) - j) < 0.25:
                        candidates.add(j)
        got += 1
        if got >= 2 or not params:
            break
    out = []
    for j in sorted(candidates):
        g = poly_gcd(a2, b2.shift(var, j))
        if not g.is_const():
            out.append(j)
    return out


# -- rational functions --------------------------------------------------


class RatFunc:
    """Reduced rational function num/den with canonical denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[MultiPoly, Scalar],
                 den: Union[MultiPoly, Scalar, None] = None, *,
                 reduce: bool = True):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.const(num)
        if den is None:
            den = MultiPoly.const(1, num.vars)
        elif not isinstance(den, MultiPoly):
            den = MultiPoly.const(den, num.vars)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num, den = MultiPoly.align(num, den)
        if reduce:
            if num.is_zero():
                den = MultiPoly.const(1, num.vars)
            else:
                g = poly_gcd(num, den)
                if not g.is_const() or g.const_value() != 1:
                    num = div_exact(num, g)
                    den = div_exact(den, g)
            u = den.canonical_unit()
            if u != 1:
                den = den * (1 / u)
                num = num * (1 / u)
        self.num = num
        self.den = den

    @staticmethod
    def const(c: Scalar) -> "RatFunc":
        return RatFunc(MultiPoly.const(c))

    @staticmethod
    def var(name: str) -> "RatFunc":
        return RatFunc(MultiPoly.var(name))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> Fraction:
        return self.num.const_value() / self.den.const_value()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num * other.den == other.num * self.den)

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce=False)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other)
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        return other

    def __add__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return o - self

    def __mul__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return o / self

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return RatFunc(self.den, self.num) ** (-k)
        return RatFunc(self.num ** k, self.den ** k, reduce=False)

    def shift(self, var: str, k: int) -> "RatFunc":
        n = self.num if var not in self.num.vars else self.num.shift(var, k)
        d = self.den if var not in self.den.vars else self.den.shift(var, k)
        return RatFunc(n, d, reduce=False)

    def subs(self, assignment: Dict[str, Union[Scalar, MultiPoly]]) -> "RatFunc":
        return RatFunc(self.num.subs(assignment), self.den.subs(assignment))

    def eval_frac(self, assignment: Dict[str, Scalar]) -> Fraction:
        den = self.den.eval_frac(assignment)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at %r" % (assignment,))
        return self.num.eval_frac(assignment) / den

    def degree_delta(self, var: str) -> int:
        """deg_num - deg_den in var (degree of growth as var -> oo)."""
        return self.num.degree(var) - self.den.degree(var)

    def render(self) -> str:
        if self.den == MultiPoly.const(1, self.den.vars):
            return self.num.render()
        return "(%s)/(%s)" % (self.num.render(), self.den.render())

    def __repr__(self) -> str:
        return "RatFunc(%s)" % self.render()


# -- linear algebra over a field ------------------------------------------


def nullspace(rows: List[List[RatFunc]]) -> List[List[RatFunc]]:
    """Basis of the right nullspace of a matrix of RatFunc entries."""
    if not rows:
        return []
    ncols = len(rows[0])
    m = [row[:] for row in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if not m[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c]
        m[r] = [e / inv for e in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    zero = RatFunc.const(0)
    one = RatFunc.const(1)
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(vec)
    return basis


def linsolve(rows: List[List[RatFunc]], rhs: List[RatFunc]) -> Optional[List[RatFunc]]:
    """One solution of rows * x = rhs with free unknowns set to 0, or None."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [row[:] + [b] for row, b in zip(rows, rhs)]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(aug)):
            if not aug[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = aug[r][c]
        aug[r] = [e / inv for e in aug[r]]
        for i in range(len(aug)):
            if i != r and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if not aug[i][ncols].is_zero():
            return None
    zero = RatFunc.const(0)
    sol = [zero] * ncols
    for i, pc in enumerate(pivots):
        sol[pc] = aug[i][ncols]
    return sol


def solve_ansatz(alpha: RatFunc, beta: RatFunc, var: str, degree_bound: int,
                 rhs_terms: List[RatFunc],
                 param_unknowns: int) -> Optional[Tuple[List[RatFunc], List[RatFunc]]]:
    """Solve alpha(v) X(v+1) + beta(v) X(v) = sum_i sigma_i rhs_i(v).

    X is a polynomial in `var` of degree <= degree_bound with coefficients in
    the parameter field; sigma_i are `param_unknowns` field unknowns (the
    remaining rhs_terms beyond that count are forced inhomogeneous parts with
    sigma fixed to 1).  Returns (coeffs of X, sigmas) or None.  The trivial
    all-zero solution is only returned when some rhs term is forced.

    Free unknowns are set to zero.
    """
    if degree_bound < 0:
        return None
    den = alpha.den * beta.den
    for t in rhs_terms:
        den = den * t.den
    a = alpha * den
    b = beta * den
    terms = [t * den for t in rhs_terms]
    # now everything is polynomial; match coefficients of var-powers
    v = MultiPoly.var(var)
    unknown_count = degree_bound + 1 + param_unknowns
    cols: List[List[MultiPoly]] = []
    for k in range(degree_bound + 1):
        expr = a.num * (v + 1) ** k + b.num * v ** k
        cols.append(expr.as_univariate(var))
    for t in terms[:param_unknowns]:
        cols.append([-c for c in t.num.as_univariate(var)])
    forced = MultiPoly.const(0)
    for t in terms[param_unknowns:]:
        forced = forced + t.num
    rhs_col = forced.as_univariate(var)
    height = max([len(c) for c in cols] + [len(rhs_col), 1])
    zero_p = MultiPoly.const(0)
    rows: List[List[RatFunc]] = []
    rhs_vec: List[RatFunc] = []
    for i in range(height):
        row = []
        for col in cols:
            entry = col[i] if i < len(col) else zero_p
            row.append(RatFunc(entry))
        rows.append(row)
        rv = rhs_col[i] if i < len(rhs_col) else zero_p
        rhs_vec.append(RatFunc(rv))
    if param_unknowns == 0:
        sol = linsolve(rows, rhs_vec)
        if sol is None:
            return None
        return sol[:degree_bound + 1], []
    # homogeneous: seek nullspace vector with some sigma nonzero
    basis = nullspace(rows)
    for vec in basis:
        sig = vec[degree_bound + 1:]
        if any(not s.is_zero() for s in sig):
            return vec[:degree_bound + 1], sig
    return None
