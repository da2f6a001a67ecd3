"""Generalized hypergeometric series: construction, classification, evaluation.

A series of order r has r+1 upper and r lower parameters (all exact Gaussian
rationals) and argument x in the closed unit disk.  Terminating series are
summed exactly.  Numeric evaluation uses a geometric tail bound inside the
disk; at x = +-1 the terms decay like a power of k, so the tail is estimated
from the exact 1/k expansion of the term ratio and cross-validated by
doubling the truncation point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath as mp

from .errors import (DivergentSeries, DivisionByZero, LowerParamNonpositiveInt,
                     NoCommonParameter, PrecisionExhausted)
from .scalars import (DEFAULT_PRECISION_BITS, ApComplex, GaussianRational,
                      frac_to_mpf, gauss_seq)

#: refuse x=1 when the parametric excess has real part below this
MIN_EXCESS_AT_ONE = Fraction(1, 64)

#: number of 1/k correction terms used for the boundary tail estimate
TAIL_ORDER = 14

DEFAULT_TOL_BITS = 64
DEFAULT_MAX_TERMS = 10 ** 6


@dataclass(frozen=True)
class ParamPoint:
    """Parameter vector (alpha_1..alpha_{r+1}; beta_1..beta_r)."""

    alpha: tuple[GaussianRational, ...]
    beta: tuple[GaussianRational, ...]

    def __post_init__(self):
        if len(self.alpha) != len(self.beta) + 1:
            raise ValueError("need exactly one more upper than lower parameter")

    @staticmethod
    def of(alpha: Sequence, beta: Sequence) -> "ParamPoint":
        return ParamPoint(gauss_seq(alpha), gauss_seq(beta))

    @property
    def r(self) -> int:
        return len(self.beta)

    def well_formed_lower(self) -> bool:
        return not any(b.is_nonpositive_integer() for b in self.beta)

    def shift(self, upper: int = 0, lower: int = 0) -> "ParamPoint":
        return ParamPoint(tuple(a + upper for a in self.alpha),
                          tuple(b + lower for b in self.beta))

    def __str__(self) -> str:
        ups = ",".join(str(a) for a in self.alpha)
        los = ",".join(str(b) for b in self.beta)
        return f"{ups}:{los}"

    @staticmethod
    def parse(text: str) -> "ParamPoint":
        ups, _, los = text.partition(":")
        alpha = [GaussianRational.parse(t) for t in ups.split(",") if t]
        beta = [GaussianRational.parse(t) for t in los.split(",") if t]
        return ParamPoint(tuple(alpha), tuple(beta))

    def to_json(self) -> dict:
        return {"alpha": [a.to_json() for a in self.alpha],
                "beta": [b.to_json() for b in self.beta]}

    @staticmethod
    def from_json(obj: dict) -> "ParamPoint":
        return ParamPoint(tuple(GaussianRational.from_json(a) for a in obj["alpha"]),
                          tuple(GaussianRational.from_json(b) for b in obj["beta"]))


@dataclass(frozen=True)
class SeriesSpec:
    """A hypergeometric series at an exact argument."""

    params: ParamPoint
    argument: GaussianRational

    @staticmethod
    def of(alpha: Sequence, beta: Sequence, x) -> "SeriesSpec":
        return SeriesSpec(ParamPoint.of(alpha, beta), GaussianRational.coerce(x))

    def argument_numeric(self, precision_bits: int) -> mp.mpc:
        return self.argument.to_mpc(precision_bits)

    def to_json(self) -> dict:
        d = self.params.to_json()
        d["x"] = self.argument.to_json()
        return d

    @staticmethod
    def from_json(obj: dict) -> "SeriesSpec":
        return SeriesSpec(ParamPoint.from_json(obj),
                          GaussianRational.from_json(obj["x"]))


@dataclass(frozen=True)
class EvalResult:
    """A numeric series value with error bound and bookkeeping."""

    value: ApComplex
    error_bound: mp.mpf
    terms_used: int
    method: str
    exact: Optional[GaussianRational] = None

    def to_json(self, digits: int | None = None) -> dict:
        return {"value": self.value.to_decimal_string(digits),
                "error_bound": mp.nstr(self.error_bound, 5),
                "terms_used": self.terms_used,
                "method": self.method}


@dataclass(frozen=True)
class Classification:
    balanced_s: GaussianRational
    is_well_poised: bool
    terminating_index: Optional[int]


def parametric_excess(p: ParamPoint) -> GaussianRational:
    """Exact s = sum(beta) - sum(alpha)."""
    s = GaussianRational(0)
    for b in p.beta:
        s = s + b
    for a in p.alpha:
        s = s - a
    return s


def terminating_index(p: ParamPoint) -> Optional[int]:
    """Smallest n >= 0 with some upper parameter equal to -n, else None."""
    ns = [-int(a.re) for a in p.alpha if a.is_nonpositive_integer()]
    return min(ns) if ns else None


def _is_well_poised(p: ParamPoint) -> bool:
    # alpha_1 + 1 = alpha_i + beta_{i-1} for some separate orderings;
    # equivalent to a multiset pairing alpha_i + beta_j = alpha_1 + 1.
    for first in range(len(p.alpha)):
        target = p.alpha[first] + 1
        rest = [p.alpha[i] for i in range(len(p.alpha)) if i != first]
        betas = list(p.beta)
        ok = True
        for a in rest:
            want = target - a
            if want in betas:
                betas.remove(want)
            else:
                ok = False
                break
        if ok:
            return True
    return False


def classify(p: ParamPoint) -> Classification:
    return Classification(balanced_s=parametric_excess(p),
                          is_well_poised=_is_well_poised(p),
                          terminating_index=terminating_index(p))


def term_ratio(p: ParamPoint, x, k: int) -> GaussianRational:
    """Exact t_{k+1}/t_k = x * prod(alpha_i+k) / (prod(beta_i+k) * (k+1))."""
    x = GaussianRational.coerce(x)
    num = GaussianRational(1)
    for a in p.alpha:
        num = num * (a + k)
    den = GaussianRational(k + 1)
    for b in p.beta:
        bk = b + k
        if bk.is_zero():
            raise DivisionByZero(f"lower parameter {b} hits zero at k={k}")
        den = den * bk
    return x * num / den


def partial_sum(p: ParamPoint, x, n: int) -> GaussianRational:
    """Exact sum of terms 0..n."""
    x = GaussianRational.coerce(x)
    total = GaussianRational(1)
    term = GaussianRational(1)
    for k in range(n):
        term = term * term_ratio(p, x, k)
        total = total + term
    return total


def cancel_common(p: ParamPoint) -> ParamPoint:
    """Remove one exactly-equal upper/lower pair (sum is unchanged)."""
    for i, a in enumerate(p.alpha):
        for j, b in enumerate(p.beta):
            if a == b:
                return ParamPoint(p.alpha[:i] + p.alpha[i + 1:],
                                  p.beta[:j] + p.beta[j + 1:])
    raise NoCommonParameter(f"no common parameter in {p}")


def _cancel_all(p: ParamPoint) -> ParamPoint:
    while True:
        try:
            p = cancel_common(p)
        except NoCommonParameter:
            return p


# ----------------------------------------------------------------------------
# Laurent series in 1/k (exact coefficients) for the boundary tail estimate.
# A series is a list c with c[i] = coefficient of k^(1-i); index 0 is the k^1
# term, index 1 the constant term, and so on down to k^(1-M).
# ----------------------------------------------------------------------------

def _ser_zero(m: int) -> list[GaussianRational]:
    return [GaussianRational(0)] * m


def _ser_mul(a, b, m: int):
    out = _ser_zero(m)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            # k^(1-i) * k^(1-j) = k^(2-i-j): index i+j-1
            idx = i + j - 1
            if 0 <= idx < m:
                out[idx] = out[idx] + ai * bj
    return out


def _ser_inv(a, m: int):
    # invert a series with a[1] != 0 and a[0] == 0 (no k^1 part)
    assert a[0].is_zero() and not a[1].is_zero()
    out = _ser_zero(m)
    out[1] = 1 / a[1]
    for i in range(2, m):
        acc = GaussianRational(0)
        for j in range(1, i):
            acc = acc + out[j] * a[1 + i - j]
        out[i] = -acc / a[1]
    return out


def _ser_shift(a, m: int):
    """Compose with k -> k+1: expand (k+1)^(1-i) in powers of 1/k."""
    out = _ser_zero(m)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        e = 1 - i  # exponent of (k+1)
        if e == 1:
            out[0] = out[0] + ai
            out[1] = out[1] + ai
            continue
        if e == 0:
            out[1] = out[1] + ai
            continue
        # (k+1)^e = k^e * sum_l binom(e, l) k^(-l), e negative
        binom = Fraction(1)
        for l in range(0, m - i + 1):
            idx = i + l
            if idx >= m:
                break
            out[idx] = out[idx] + ai * binom
            binom = binom * Fraction(e - l, l + 1)
    return out


def _rho_series(p: ParamPoint, x: GaussianRational, m: int):
    """1/k expansion of the term ratio t_{k+1}/t_k."""
    num = _ser_zero(m)
    num[1] = GaussianRational(1)
    for a in p.alpha:
        fac = _ser_zero(m)
        fac[1] = GaussianRational(1)
        if not a.is_zero():
            fac[2] = a
        num = _ser_mul(num, fac, m)
    den = _ser_zero(m)
    den[1] = GaussianRational(1)
    for b in list(p.beta) + [GaussianRational(1)]:
        fac = _ser_zero(m)
        fac[1] = GaussianRational(1)
        if not b.is_zero():
            fac[2] = b
        den = _ser_mul(den, fac, m)
    rho = _ser_mul(num, _ser_inv(den, m), m)
    return [x * c for c in rho]


def _tail_weights(p: ParamPoint, x: GaussianRational, order: int):
    """Exact coefficients c_{-1}, c_0, ..., of the tail weight w(k).

    The weight satisfies tail(K) = t_{K+1} * w(K+1) with
    w(k) = 1 + rho(k) * w(k+1); it expands as c_{-1} k + c_0 + c_1/k + ...
    (c_{-1} = 0 away from x = 1).
    """
    m = order + 3
    rho = _rho_series(p, x, m)
    at_one = (x == GaussianRational(1))
    # unknown i contributes basis series e_i = k^(1-(i)) shifted by one slot:
    # unknown list: c_{-1} (index 0), c_0 (index 1), ...
    n_unknown = order + 2
    w = _ser_zero(m)
    one = _ser_zero(m)
    one[1] = GaussianRational(1)
    coeffs: list[GaussianRational] = []
    for i in range(n_unknown):
        if at_one:
            eq_idx = i + 1          # c_{-1} from k^0 equation, c_j from k^-(j+1)
        else:
            if i == 0:
                coeffs.append(GaussianRational(0))
                continue
            eq_idx = i              # c_j from the k^-j equation
        basis = _ser_zero(m)
        basis[i] = GaussianRational(1)
        col = _ser_sub(basis, _ser_mul(rho, _ser_shift(basis, m), m))
        resid = _ser_sub(_ser_add(one, _ser_mul(rho, _ser_shift(w, m), m)), w)
        diag = col[eq_idx]
        if diag.is_zero():
            raise PrecisionExhausted("degenerate tail expansion (resonant excess)")
        c = resid[eq_idx] / diag
        coeffs.append(c)
        w = _ser_add(w, [c * b for b in basis])
    return coeffs


def _ser_add(a, b):
    return [x + y for x, y in zip(a, b)]


def _ser_sub(a, b):
    return [x - y for x, y in zip(a, b)]


# ----------------------------------------------------------------------------
# numeric summation loops (raw mpmath under an explicit working precision)
# ----------------------------------------------------------------------------

def _numeric_params(p: ParamPoint, x: GaussianRational, wp: int):
    real = all(v.is_real() for v in p.alpha + p.beta) and x.is_real()
    if real:
        conv = lambda g: frac_to_mpf(g.re, wp)
    else:
        conv = lambda g: g.to_mpc(wp)
    return [conv(a) for a in p.alpha], [conv(b) for b in p.beta], conv(x)


class _SumState:
    """Incremental summation state: terms, running sum, sum of |terms|."""

    def __init__(self, alphas, betas, x):
        self.alphas, self.betas, self.x = alphas, betas, x
        self.k = 0
        self.term = mp.mpf(1) if isinstance(x, mp.mpf) else mp.mpc(1)
        self.total = self.term
        self.total_abs = mp.mpf(1)

    def advance(self, upto: int):
        alphas, betas, x = self.alphas, self.betas, self.x
        k, term, total, total_abs = self.k, self.term, self.total, self.total_abs
        while k < upto:
            num = x
            for a in alphas:
                num *= a + k
            den = mp.mpf(k + 1)
            for b in betas:
                den *= b + k
            term = term * num / den
            total += term
            total_abs += abs(term)
            k += 1
        self.k, self.term, self.total, self.total_abs = k, term, total, total_abs


def eval_series(spec: SeriesSpec,
                precision_bits: int = DEFAULT_PRECISION_BITS,
                tol=None,
                max_terms: int = DEFAULT_MAX_TERMS) -> EvalResult:
    """Evaluate a series to within ``tol`` (default 2^-64), or raise.

    Terminating series are summed exactly; an upper/lower pair that matches
    exactly is cancelled first, and the binomial case 1F0 is evaluated in
    closed form, which extends it to x = -1 by continuation.
    """
    if tol is None:
        tol = mp.mpf(2) ** (-DEFAULT_TOL_BITS)
    tol = mp.mpf(tol)
    p0 = spec.params
    x = spec.argument

    n_term = terminating_index(p0)
    lower_poles = [-int(b.re) for b in p0.beta if b.is_nonpositive_integer()]
    if lower_poles:
        blocking = min(lower_poles)
        if n_term is None or n_term > blocking:
            raise LowerParamNonpositiveInt(
                f"lower parameter -{blocking} blocks the series {p0}")
    if n_term is not None:
        exact = partial_sum(p0, x, n_term)
        return EvalResult(value=exact.to_apcomplex(precision_bits),
                          error_bound=mp.mpf(0), terms_used=n_term + 1,
                          method="exact-terminating", exact=exact)

    if x.norm() > 1:
        raise DivergentSeries(f"|x| > 1 at {x}")
    p = _cancel_all(p0)
    if p.r == 0:
        return _binomial_closed_form(p.alpha[0], x, precision_bits)

    s = parametric_excess(p)
    unit = x.norm() == 1
    if unit:
        if x == GaussianRational(1):
            if s.re <= 0:
                raise DivergentSeries(f"excess {s} <= 0 at x = 1")
            if s.re < MIN_EXCESS_AT_ONE:
                raise PrecisionExhausted(
                    f"excess {s} below the x=1 slow-convergence guard")
        elif x == GaussianRational(-1):
            if s.re <= -1:
                raise DivergentSeries(f"excess {s} <= -1 at x = -1")
        else:
            raise DivergentSeries("only x = +-1 supported on the unit circle")

    ladder = (precision_bits, 2 * precision_bits, 4 * precision_bits)
    last_exc: Exception | None = None
    for pb in ladder:
        wp = pb + 32
        try:
            if unit:
                res = _eval_boundary(p, x, s, wp, tol, max_terms)
            else:
                res = _eval_geometric(p, x, wp, tol, max_terms)
        except PrecisionExhausted as exc:
            last_exc = exc
            continue
        value, err, terms, method = res
        if err <= tol:
            return EvalResult(value=ApComplex(value, precision_bits),
                              error_bound=err, terms_used=terms, method=method)
        last_exc = PrecisionExhausted(
            f"error bound {mp.nstr(err, 5)} above tol at {pb} bits")
    raise last_exc or PrecisionExhausted("escalation ladder exhausted")


def _binomial_closed_form(a: GaussianRational, x: GaussianRational,
                          precision_bits: int) -> EvalResult:
    if x == GaussianRational(1):
        raise DivergentSeries("1F0 pole at x = 1")
    wp = precision_bits + 16
    with mp.workprec(wp):
        base = 1 - x.to_mpc(wp)
        val = base ** (-a.to_mpc(wp))
        err = abs(val) * mp.mpf(2) ** (8 - wp)
    return EvalResult(value=ApComplex(val, precision_bits), error_bound=err,
                      terms_used=1, method="closed-form-binomial")


def _eval_geometric(p: ParamPoint, x: GaussianRational, wp: int, tol,
                    max_terms: int):
    with mp.workprec(wp):
        alphas, betas, xn = _numeric_params(p, x, wp)
        st = _SumState(alphas, betas, xn)
        window: list[mp.mpf] = []
        while st.k < max_terms:
            prev = st.term
            st.advance(st.k + 1)
            if prev != 0:
                window.append(abs(st.term / prev))
                window = window[-8:]
            else:
                window = []
            if len(window) == 8:
                q = max(window)
                if q < 1:
                    tail = abs(st.term) * q / (1 - q)
                    noise = (st.k + 8) * st.total_abs * mp.mpf(2) ** (4 - wp)
                    if tail + noise <= tol:
                        return st.total, tail + noise, st.k, "geometric-tail"
        raise PrecisionExhausted(f"no geometric tail within {max_terms} terms")


def _eval_boundary(p: ParamPoint, x: GaussianRational, s: GaussianRational,
                   wp: int, tol, max_terms: int):
    weights = _tail_weights(p, x, TAIL_ORDER)
    size = max([1.0] + [abs(complex(v.re) + 1j * complex(v.im))
                        for v in p.alpha + p.beta])
    k0 = 256
    while k0 < 24 * size:
        k0 *= 2
    with mp.workprec(wp):
        alphas, betas, xn = _numeric_params(p, x, wp)
        wnum = [frac_to_mpf(c.re, wp) if c.is_real() else c.to_mpc(wp)
                for c in weights]
        st = _SumState(alphas, betas, xn)
        prev_est = None
        K = k0
        while True:
            st.advance(K + 1)
            # total holds sum through t_{K+1}; tail(K) = t_{K+1} w(K+1)
            est = st.total + st.term * (_weight_at(wnum, st.k) - 1)
            if prev_est is not None:
                delta = abs(est - prev_est)
                noise = (st.k + 16) * st.total_abs * mp.mpf(2) ** (4 - wp)
                err = 4 * delta + noise
                if err <= tol:
                    return est, err, st.k, "power-tail-heuristic"
            if 2 * K > max_terms:
                raise PrecisionExhausted(
                    f"boundary tail not converged within {max_terms} terms")
            prev_est = est
            K *= 2


def _weight_at(wnum, k: int):
    # w(k) ~ c_{-1} k + c_0 + c_1/k + ...
    kk = mp.mpf(k)
    inv = 1 / kk
    acc = wnum[-1]
    for c in reversed(wnum[1:-1]):
        acc = acc * inv + c
    return acc + wnum[0] * kk
