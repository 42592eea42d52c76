"""Arbitrary-precision numerics: special functions and fast series evaluators.

mpmath supplies the floating substrate (Gamma, polygamma, zeta, constants);
the summation engines below run on scaled-integer fixed-point arithmetic with
guard bits, which keeps million-term loops cheap, and finish with power-law
tail extrapolation.  All sample points are rationals, so shift quotients
evaluate to exact integer polynomial ratios inside the hot loops.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from mpmath import mp, mpf

from .errors import DivergentIndex, DivergentSeries, PoleError
from .hyperterm import HyperTerm
from .polys import RatFunc, _as_frac

try:  # pragma: no cover - plain int fallback exercised only without gmpy2
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

GUARD_BITS = 64


# -- exact helpers -----------------------------------------------------------

_BERNOULLI_CACHE: Dict[int, Fraction] = {0: Fraction(1), 1: Fraction(-1, 2)}


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k (B_1 = -1/2); odd k > 1 give 0."""
    if k < 0:
        raise ValueError("negative Bernoulli index")
    if k in _BERNOULLI_CACHE:
        return _BERNOULLI_CACHE[k]
    if k % 2 == 1:
        return Fraction(0)
    have = max(i for i in _BERNOULLI_CACHE if i % 2 == 0)
    for m in range((have // 2) + 1, k // 2 + 1):
        n = 2 * m
        s = Fraction(n + 1) * Fraction(-1, 2)  # B_1 term
        for j in range(m):
            s += math.comb(n + 1, 2 * j) * _BERNOULLI_CACHE[2 * j]
        _BERNOULLI_CACHE[n] = -s / (n + 1)
    return _BERNOULLI_CACHE[k]


@dataclass(frozen=True)
class ExactPiMultiple:
    """coeff * pi**power, kept exact until a float is requested."""

    coeff: Fraction
    power: int

    def to_mpf(self, precision_bits: int):
        with mp.workprec(precision_bits + 10):
            out = (mpf(self.coeff.numerator) / self.coeff.denominator
                   * mp.pi ** self.power)
        with mp.workprec(precision_bits):
            return +out

    def render(self) -> str:
        if self.power == 0:
            return str(self.coeff)
        return "%s*pi^%d" % (self.coeff, self.power)


def zeta_even_coeff(s: int) -> Fraction:
    """zeta(s)/pi^s for even s >= 0, with zeta(0) = -1/2."""
    if s < 0 or s % 2:
        raise ValueError("even nonnegative argument required")
    if s == 0:
        return Fraction(-1, 2)
    k = s // 2
    return (Fraction((-1) ** (k + 1)) * bernoulli(s) * 2 ** (s - 1)
            / math.factorial(s))


def zeta_value(s: int, sign: int = 1, precision_bits: int = 192):
    """Riemann zeta at integer s >= 0; sign=-1 gives the alternating value.

    Even arguments (and s=0) return an exact rational multiple of pi^s;
    odd arguments return an mpf.  The pole at (s, sign) = (1, +1) raises.
    """
    if s < 0:
        raise ValueError("negative argument")
    if s == 1 and sign == 1:
        raise PoleError("zeta(1) pole")
    factor = Fraction(1)
    if sign == -1:
        if s == 1:
            with mp.workprec(precision_bits):
                return -mp.log(2)
        factor = Fraction(2) ** (1 - s) - 1
    if s % 2 == 0:
        return ExactPiMultiple(factor * zeta_even_coeff(s), s)
    with mp.workprec(precision_bits + 10):
        out = mpf(factor.numerator) / factor.denominator * mp.zeta(s)
    with mp.workprec(precision_bits):
        return +out


def as_mpf(value, precision_bits: int):
    if isinstance(value, ExactPiMultiple):
        return value.to_mpf(precision_bits)
    if isinstance(value, Fraction):
        with mp.workprec(precision_bits):
            return mpf(value.numerator) / value.denominator
    return value


def polygamma(m: int, z, precision_bits: int = 192):
    """psi^(m)(z) for real z away from the nonpositive integers."""
    zf = _as_frac(z) if isinstance(z, (int, Fraction)) else None
    if zf is not None and zf <= 0 and zf.denominator == 1:
        raise PoleError("polygamma pole at %s" % zf)
    with mp.workprec(precision_bits + 15):
        zv = mpf(zf.numerator) / zf.denominator if zf is not None else mpf(z)
        if zv <= 0 and zv == mp.floor(zv):
            raise PoleError("polygamma pole at %s" % zv)
        out = mp.psi(m, zv)
    with mp.workprec(precision_bits):
        return +out


def gamma_value(z, precision_bits: int = 192):
    zf = _as_frac(z) if isinstance(z, (int, Fraction)) else None
    if zf is not None and zf <= 0 and zf.denominator == 1:
        raise PoleError("Gamma pole at %s" % zf)
    with mp.workprec(precision_bits + 15):
        zv = mpf(zf.numerator) / zf.denominator if zf is not None else mpf(z)
        out = mp.gamma(zv)
    with mp.workprec(precision_bits):
        return +out


def euler_gamma(precision_bits: int = 192):
    with mp.workprec(precision_bits):
        return +mp.euler


def pi_value(precision_bits: int = 192):
    with mp.workprec(precision_bits):
        return +mp.pi


def log2_value(precision_bits: int = 192):
    with mp.workprec(precision_bits):
        return +mp.log(2)


# -- index and configuration -------------------------------------------------


@dataclass(frozen=True)
class MZVIndex:
    """Composition with signs, family kind, and interpolation weight.

    entries are (exponent, sign) pairs listed inner-to-outer, i.e. the last
    entry belongs to the largest summation index; kind "t" restricts the sum
    to odd denominators (signs must then all be +1).
    """

    entries: Tuple[Tuple[int, int], ...]
    kind: str = "zeta"
    r: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in ("zeta", "t"):
            raise ValueError("kind must be 'zeta' or 't'")
        if not self.entries:
            raise ValueError("empty index")
        for s, sig in self.entries:
            if s < 1 or sig not in (1, -1):
                raise DivergentIndex("invalid entry (%s, %s)" % (s, sig))
        if self.kind == "t" and any(sig != 1 for _, sig in self.entries):
            raise DivergentIndex("alternating t-values not supported")
        s_d, sig_d = self.entries[-1]
        if self.kind == "zeta" and (s_d, sig_d) == (1, 1):
            raise DivergentIndex("divergent index: trailing (1, +1)")
        if self.kind == "t" and s_d == 1:
            raise DivergentIndex("divergent index: trailing 1 in a t-value")
        rr = _as_frac(self.r)
        if not (0 <= rr <= 1):
            raise ValueError("interpolation weight outside [0, 1]")
        object.__setattr__(self, "r", rr)

    @property
    def depth(self) -> int:
        return len(self.entries)

    @property
    def weight(self) -> int:
        return sum(s for s, _ in self.entries)

    @staticmethod
    def make(exponents: Sequence[int], kind: str = "zeta",
             r: Union[Fraction, int, str] = 0,
             signs: Optional[Sequence[int]] = None) -> "MZVIndex":
        """Build from exponent list; negative exponents mean barred entries."""
        entries = []
        for i, s in enumerate(exponents):
            sig = 1
            if s < 0:
                s, sig = -s, -1
            if signs is not None:
                sig = signs[i]
            entries.append((s, sig))
        return MZVIndex(tuple(entries), kind, Fraction(r))

    def render(self) -> str:
        body = ",".join(("-%d" % s if sig < 0 else "%d" % s)
                        for s, sig in self.entries)
        return "%s^(%s)(%s)" % (self.kind, self.r, body)


@dataclass(frozen=True)
class SumConfig:
    N: int = 10 ** 6
    richardson_levels: int = 3
    precision_bits: int = 192

    def __post_init__(self):
        if self.N < 10:
            raise ValueError("truncation index too small")
        if not (0 <= self.richardson_levels <= 6):
            raise ValueError("richardson_levels out of range")
        if self.precision_bits < 64:
            raise ValueError("precision below 64 bits")


# -- extrapolation ------------------------------------------------------------


def extrapolate_tail(samples: Sequence[Tuple[int, object]],
                     basis: Sequence[Tuple[object, int]],
                     precision_bits: int) -> Tuple[object, object]:
    """Fit S(N) = S_inf + sum_j c_j N^(-e_j) (ln N)^(p_j) through samples.

    Uses the trailing len(basis)+1 samples; the error estimate is the
    difference against the fit shifted one sample earlier.
    """
    samples = list(samples)
    basis = list(basis)
    with mp.workprec(precision_bits + 40):
        def solve(pts):
            k = min(len(basis), len(pts) - 1)
            A = mp.matrix(len(pts), k + 1)
            b = mp.matrix(len(pts), 1)
            for i, (N, S) in enumerate(pts):
                A[i, 0] = 1
                lN = mp.log(N)
                for j in range(k):
                    e, p = basis[j]
                    A[i, j + 1] = mpf(N) ** (-mpf(float(e))) * lN ** p
                b[i] = S
            return mp.lu_solve(A, b)[0]

        if len(samples) < 2:
            return samples[-1][1], mpf(1)
        want = min(len(basis) + 1, len(samples))
        best = solve(samples[-want:])
        if len(samples) > want:
            prev = solve(samples[-want - 1:-1])
        elif want > 2:
            prev = solve(samples[-(want - 1):])
        else:
            prev = samples[-1][1]
        err = abs(best - prev) + mpf(2) ** (-precision_bits)
    with mp.workprec(precision_bits):
        return +best, +err


def extrapolate_power_law(samples: Sequence[Tuple[int, object]],
                          exponents: Sequence[Union[Fraction, float]],
                          precision_bits: int) -> Tuple[object, object]:
    """Pure power-law tail fit (no logarithmic corrections)."""
    exps = sorted(set(float(e) for e in exponents))
    return extrapolate_tail(samples, [(e, 0) for e in exps], precision_bits)


def _snap_points(N: int, count: int, even: bool) -> List[int]:
    pts = []
    for k in range(count - 1, -1, -1):
        n = max(10, N >> k)
        if even and n % 2:
            n += 1
        pts.append(n)
    return sorted(set(pts))


def _snap_points_sqrt2(N: int, count: int, even: bool) -> List[int]:
    """Geometric snapshot ladder with ratio sqrt(2) ending at N."""
    pts = []
    for k in range(count):
        n = max(20, int(N * 2 ** (-k / 2.0)))
        if even and n % 2:
            n += 1
        pts.append(n)
    return sorted(set(pts))


# -- interpolated nested sums -------------------------------------------------


def stuffle_expand(idx: MZVIndex) -> List[Tuple[Fraction, MZVIndex]]:
    """Expansion of an interpolated value into 2^(d-1) classical ones.

    Exponents of contracted runs are summed and signs multiplied; the
    coefficient is r^(number of contractions).
    """
    d = idx.depth
    out: List[Tuple[Fraction, MZVIndex]] = []
    r = idx.r
    for mask in range(1 << (d - 1)):
        entries: List[Tuple[int, int]] = [idx.entries[0]]
        contractions = 0
        for gap in range(d - 1):
            s, sig = idx.entries[gap + 1]
            if mask >> gap & 1:
                ps, psig = entries[-1]
                entries[-1] = (ps + s, psig * sig)
                contractions += 1
            else:
                entries.append((s, sig))
        coeff = r ** contractions if contractions else Fraction(1)
        if coeff == 0:
            continue
        out.append((coeff, MZVIndex(tuple(entries), idx.kind, Fraction(0))))
    return out


def interpolated_nested_sum(idx: MZVIndex, cfg: SumConfig) -> Tuple[object, object]:
    """(value, error_estimate) for the r-weighted nested sum.

    Dynamic programming over the depth: A_k(n) = w_k(n) (P_{k-1}(n-1)
    + r A_{k-1}(n)) with w_k(n) = sign^n / base(n)^s, run in fixed point;
    the outer partial sums are extrapolated against their power-law tail.
    """
    d = idx.depth
    work = cfg.precision_bits + GUARD_BITS
    one = mpz(1) << work
    P = [mpz(0)] * (d + 1)
    P[0] = one
    rn, rd = idx.r.numerator, idx.r.denominator
    any_sign = any(sig < 0 for _, sig in idx.entries)
    entries = idx.entries
    # every unit entry can feed a logarithmic factor into some layer of the
    # outer tail; the total count bounds the log degree at every layer
    log_run = sum(1 for s, _ in entries[:-1] if s == 1)
    s_d = entries[-1][0]
    alpha = Fraction(s_d) if (any_sign and entries[-1][1] < 0) else Fraction(s_d - 1)
    if alpha <= 0:
        raise DivergentIndex("no convergent tail model")
    levels = max(cfg.richardson_levels, 1)
    basis: List[Tuple[Fraction, int]] = []
    for j in range(levels):
        for p in range(log_run, -1, -1):
            basis.append((alpha + j, p))
    if len(basis) > 14:
        lnN = math.log(cfg.N)
        lnlnN = math.log(max(lnN, 2.0))
        basis.sort(key=lambda ep: float(ep[0]) * lnN - ep[1] * lnlnN)
        basis = basis[:14]
    snaps = _snap_points_sqrt2(cfg.N, len(basis) + 3, any_sign)
    series: List[Tuple[int, object]] = []
    t_kind = idx.kind == "t"
    newA = [mpz(0)] * (d + 1)
    target = set(snaps)
    last = snaps[-1]
    for n in range(1, last + 1):
        base = 2 * n - 1 if t_kind else n
        odd_n = n & 1
        for k in range(1, d + 1):
            s, sig = entries[k - 1]
            v = P[k - 1]
            if rn and k > 1:
                v = v + newA[k - 1] * rn // rd
            v = v // base ** s
            if sig < 0 and odd_n:
                v = -v
            newA[k] = v
        for k in range(1, d + 1):
            P[k] = P[k] + newA[k]
        if n in target:
            series.append((n, P[d]))
    with mp.workprec(work + 10):
        samples = [(n, mpf(int(v)) / mpf(int(one))) for n, v in series]
    value, err = extrapolate_tail(samples, basis, cfg.precision_bits)
    return value, err


def mzv_value(idx: MZVIndex, cfg: SumConfig) -> object:
    return interpolated_nested_sum(idx, cfg)[0]


# -- single hypergeometric series ----------------------------------------------


def _fixed_quotient(q: RatFunc, var: str, assignment: Dict[str, Fraction]):
    """Integer polynomial pair (P, Q) with q(n) = P(n)/Q(n) at the assignment."""
    others = {v: _as_frac(x) for v, x in assignment.items() if v != var}
    num = q.num.subs(others).as_univariate(var)
    den = q.den.subs(others).as_univariate(var)
    ncs = [c.const_value() for c in num]
    dcs = [c.const_value() for c in den]
    nl = math.lcm(*[c.denominator for c in ncs]) if ncs else 1
    dl = math.lcm(*[c.denominator for c in dcs]) if dcs else 1
    ni = [int(c * nl) for c in ncs]
    di = [int(c * dl) for c in dcs]
    # q = (ni/nl) / (di/dl) = (dl * ni) / (nl * di)
    ni = [c * dl for c in ni]
    di = [c * nl for c in di]
    return ni, di


def _int_horner(cs: List[int], n: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * n + c
    return acc


def hyperterm_series_sum(F: HyperTerm, var: str,
                         assignment: Dict[str, Fraction], cfg: SumConfig,
                         lower: int = 0) -> Tuple[object, object]:
    """(sum_{n >= lower} F, error_estimate) at a rational parameter point.

    One rational-quotient multiplication per step (no Gamma re-evaluation),
    followed by power-law tail extrapolation with the exponent taken from
    the term asymptotics.
    """
    assignment = {v: _as_frac(x) for v, x in assignment.items()}
    ratio, power = F.term_asymptotics(var)
    e = power.eval({**assignment, var: Fraction(0)})
    if abs(ratio) > 1:
        raise DivergentSeries("geometric growth")
    geometric = abs(ratio) < 1
    if not geometric and e >= -1:
        raise DivergentSeries("tail exponent %s >= -1" % e)
    work = cfg.precision_bits + GUARD_BITS
    one = mpz(1) << work
    q = F.shift_quotient(var)
    ni, di = _fixed_quotient(q, var, assignment)
    tries = 0
    while True:
        first = F.eval_numeric({**assignment, var: Fraction(lower)},
                               cfg.precision_bits + GUARD_BITS)
        if first != 0 or tries >= 4:
            break
        lower += 1
        tries += 1
    with mp.workprec(work + 10):
        term = mpz(int(mp.floor(first * (mpf(2) ** work))))
    acc = mpz(0)
    pairing = ratio < 0
    snaps = _snap_points(cfg.N, cfg.richardson_levels + 2, pairing)
    series: List[Tuple[int, object]] = []
    last = snaps[-1]
    if geometric:
        n = lower
        floor_bits = mpz(1) << (GUARD_BITS // 2)
        while True:
            acc += term
            if abs(term) < floor_bits and n > lower + 10:
                break
            term = term * _int_horner(ni, n) // _int_horner(di, n)
            n += 1
            if n > last + 10 ** 7:
                raise DivergentSeries("geometric series failed to settle")
        with mp.workprec(cfg.precision_bits):
            val = mpf(int(acc)) / mpf(int(one))
            return val, mpf(2) ** (-cfg.precision_bits + 4)
    n = lower
    for stop in snaps:
        while n < stop:
            acc += term
            term = term * _int_horner(ni, n) // _int_horner(di, n)
            n += 1
        with mp.workprec(work + 10):
            series.append((n, mpf(int(acc + term)) / mpf(int(one))))
    alpha = -e if pairing else -(e + 1)
    ladder = [alpha + j for j in range(max(cfg.richardson_levels, 1))]
    return extrapolate_power_law(series, ladder, cfg.precision_bits)


# -- coupled double sum ----------------------------------------------------------


def coupled_double_sum(outer: HyperTerm, inner: HyperTerm, x_value,
                       cfg: SumConfig, param_var: str = "x",
                       outer_var: str = "n", inner_var: str = "m",
                       with_samples: bool = False):
    """(value, error_estimate) of sum_{n >= 1} h(n) * sum_{0 <= m < n} c(m).

    Single pass maintaining the inner prefix sum and the outer term
    multiplicatively; the tail mixes the two power laws of h * prefix and
    h * (inner tail), both of which enter the extrapolation ladder.
    """
    xv = _as_frac(x_value)
    work = cfg.precision_bits + GUARD_BITS
    one = mpz(1) << work
    rat_h, pow_h = outer.term_asymptotics(outer_var)
    rat_c, pow_c = inner.term_asymptotics(inner_var)
    if abs(rat_h) != 1 or abs(rat_c) != 1:
        raise DivergentSeries("non-unit ratio in coupled sum")
    eh = pow_h.eval({param_var: xv, outer_var: Fraction(0)})
    ec = pow_c.eval({param_var: xv, inner_var: Fraction(0)})
    # prefix sum grows like n^(ec+1) (divergent inner) or approaches a
    # constant (convergent inner); both contributions appear in the tail
    g_exps = [eh + ec + 1, eh]
    worst = max(g_exps)
    if worst >= -1:
        raise DivergentSeries("coupled sum diverges at x = %s" % xv)
    qh = outer.shift_quotient(outer_var)
    qc = inner.shift_quotient(inner_var)
    hn_i, hd_i = _fixed_quotient(qh, outer_var, {param_var: xv})
    cn_i, cd_i = _fixed_quotient(qc, inner_var, {param_var: xv})
    h1 = outer.eval_numeric({param_var: xv, outer_var: Fraction(1)}, work)
    c0 = inner.eval_numeric({param_var: xv, inner_var: Fraction(0)}, work)
    with mp.workprec(work + 10):
        hterm = mpz(int(mp.floor(h1 * (mpf(2) ** work))))
        cterm = mpz(int(mp.floor(c0 * (mpf(2) ** work))))
    prefix = mpz(0)
    acc = mpz(0)
    snaps = _snap_points(cfg.N, cfg.richardson_levels + 2, False)
    series: List[Tuple[int, object]] = []
    n = 1
    for stop in snaps:
        while n <= stop:
            prefix += cterm
            cterm = cterm * _int_horner(cn_i, n - 1) // _int_horner(cd_i, n - 1)
            acc += hterm * prefix >> work
            hterm = hterm * _int_horner(hn_i, n) // _int_horner(hd_i, n)
            n += 1
        with mp.workprec(work + 10):
            series.append((n - 1, mpf(int(acc)) / mpf(int(one))))
    ladder: List[Fraction] = []
    for base in g_exps:
        a = -(base + 1)
        ladder.extend(a + j for j in range(cfg.richardson_levels + 1))
    ladder = sorted(set(ladder))[:cfg.richardson_levels + 1]
    value, err = extrapolate_power_law(series, ladder, cfg.precision_bits)
    if with_samples:
        return value, err, series
    return value, err


def prefix_g_values(outer: HyperTerm, inner: HyperTerm, x_value,
                    ns: Sequence[int], precision_bits: int,
                    param_var: str = "x", outer_var: str = "n",
                    inner_var: str = "m") -> List[Tuple[int, object]]:
    """g(n, x) = h(n) * sum_{m<n} c(m) at the requested n values."""
    xv = _as_frac(x_value)
    work = precision_bits + GUARD_BITS
    qh = outer.shift_quotient(outer_var)
    qc = inner.shift_quotient(inner_var)
    hn_i, hd_i = _fixed_quotient(qh, outer_var, {param_var: xv})
    cn_i, cd_i = _fixed_quotient(qc, inner_var, {param_var: xv})
    h1 = outer.eval_numeric({param_var: xv, outer_var: Fraction(1)}, work)
    c0 = inner.eval_numeric({param_var: xv, inner_var: Fraction(0)}, work)
    with mp.workprec(work + 10):
        scale = mpf(2) ** work
        hterm = mpz(int(mp.floor(h1 * scale)))
        cterm = mpz(int(mp.floor(c0 * scale)))
    prefix = mpz(0)
    out = []
    targets = sorted(set(int(n) for n in ns))
    consumed = 0   # prefix = sum_{m < consumed} c(m); cterm = c(consumed)
    hrow = 1       # hterm = h(hrow)
    for t in targets:
        while consumed < t:
            prefix += cterm
            cterm = cterm * _int_horner(cn_i, consumed) // _int_horner(cd_i, consumed)
            consumed += 1
        while hrow < t:
            hterm = hterm * _int_horner(hn_i, hrow) // _int_horner(hd_i, hrow)
            hrow += 1
        with mp.workprec(work + 10):
            gval = (mpf(int(hterm)) / scale) * (mpf(int(prefix)) / scale)
        out.append((t, gval))
    with mp.workprec(precision_bits):
        return [(t, +v) for t, v in out]
