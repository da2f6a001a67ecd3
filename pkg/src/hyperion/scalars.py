"""Exact rational/Gaussian-rational arithmetic and arbitrary-precision gamma machinery.

Exact values are built on :class:`fractions.Fraction`; numeric values are
mpmath binary floats carried together with their precision in bits.  Gamma
quotients follow the usual summation-theory convention: a quotient whose
denominator contains a non-positive integer argument (and whose numerator
does not) is exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import mpmath as mp
from mpmath.libmp import from_rational, round_nearest

from .errors import PoleError

DEFAULT_PRECISION_BITS = 128

#: extra working bits so a documented 2^(8-p) or 2^(16-p) bound holds honestly
GUARD_BITS = 16

Rational = Fraction

RationalLike = Union[int, Fraction]


def parse_rational(text: str) -> Fraction:
    """Parse a "p/q" (or plain integer) decimal string."""
    return Fraction(text.strip())


def format_rational(q: Fraction) -> str:
    return str(q)


def frac_to_mpf(q: RationalLike, precision_bits: int) -> mp.mpf:
    """Correctly rounded conversion of an exact rational to an mpf."""
    q = Fraction(q)
    return mp.make_mpf(from_rational(q.numerator, q.denominator,
                                     precision_bits, round_nearest))


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of a binary float (every mpf is rational)."""
    if not isinstance(x, mp.mpf):
        x = mp.mpf(x)
    num, den = mp.libmp.to_rational(x._mpf_)
    return Fraction(num, den)


class GaussianRational:
    """An exact element of Q(i), stored as a pair of Fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *a):
        raise AttributeError("GaussianRational is immutable")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        if isinstance(value, str):
            return GaussianRational.parse(value)
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    @staticmethod
    def parse(text: str) -> "GaussianRational":
        """Parse "p/q" or "p/q+p/qi" (also "-3i", "i", "1/2-i")."""
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian rational literal")
        if not s.endswith("i"):
            return GaussianRational(Fraction(s))
        body = s[:-1]
        split = -1
        for idx in range(len(body) - 1, 0, -1):
            if body[idx] in "+-" and body[idx - 1] not in "/+-":
                split = idx
                break
        if split < 0:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:split], body[split:]
        if im_part in ("", "+"):
            im = Fraction(1)
        elif im_part == "-":
            im = Fraction(-1)
        else:
            im = Fraction(im_part)
        return GaussianRational(Fraction(re_part) if re_part else 0, im)

    # -- presentation ------------------------------------------------------
    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self) -> str:
        return f"GaussianRational({self})"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @staticmethod
    def from_json(obj) -> "GaussianRational":
        if isinstance(obj, dict):
            return GaussianRational(Fraction(obj["re"]), Fraction(obj.get("im", 0)))
        return GaussianRational.coerce(obj)

    # -- field arithmetic --------------------------------------------------
    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) + (-self)

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        c = o.conjugate()
        num = self * c
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    def is_nonpositive_integer(self) -> bool:
        return self.is_integer() and self.re <= 0

    # -- numeric conversion ------------------------------------------------
    def to_mpc(self, precision_bits: int) -> mp.mpc:
        return mp.make_mpc((frac_to_mpf(self.re, precision_bits)._mpf_,
                            frac_to_mpf(self.im, precision_bits)._mpf_))

    def to_apcomplex(self, precision_bits: int) -> "ApComplex":
        return ApComplex(self.to_mpc(precision_bits + 2), precision_bits)


GR = GaussianRational

GaussianLike = Union[int, Fraction, GaussianRational]


def gr(re, im=0) -> GaussianRational:
    """Shorthand constructor accepting ints, Fractions or "p/q" strings."""
    if im == 0 and isinstance(re, (GaussianRational, str)):
        return GaussianRational.coerce(re)
    return GaussianRational(Fraction(re), Fraction(im))


class ApComplex:
    """An arbitrary-precision complex value with its precision recorded.

    Arithmetic runs at the tracked precision plus a small internal guard, so
    each operation keeps relative error below 2^(1-precision_bits).
    """

    __slots__ = ("value", "precision_bits")

    def __init__(self, value, precision_bits: int = DEFAULT_PRECISION_BITS):
        self.precision_bits = int(precision_bits)
        # avoid re-rounding mp values at the ambient (possibly lower) precision
        if isinstance(value, mp.mpc):
            self.value = value
        elif isinstance(value, mp.mpf):
            self.value = mp.make_mpc((value._mpf_, mp.libmp.fzero))
        else:
            with mp.workprec(self.precision_bits + 8):
                self.value = mp.mpc(value)

    @staticmethod
    def from_exact(q: GaussianLike, precision_bits: int = DEFAULT_PRECISION_BITS) -> "ApComplex":
        return GaussianRational.coerce(q).to_apcomplex(precision_bits)

    # -- helpers -----------------------------------------------------------
    def _coerce(self, other) -> mp.mpc:
        if isinstance(other, ApComplex):
            return other.value
        if isinstance(other, GaussianRational):
            return other.to_mpc(self.precision_bits + 8)
        if isinstance(other, Fraction):
            return mp.mpc(frac_to_mpf(other, self.precision_bits + 8))
        return mp.mpc(other)

    def _prec_with(self, other) -> int:
        if isinstance(other, ApComplex):
            return min(self.precision_bits, other.precision_bits)
        return self.precision_bits

    def _binop(self, other, fn):
        p = self._prec_with(other)
        with mp.workprec(p + 8):
            return ApComplex(fn(self.value, self._coerce(other)), p)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __neg__(self):
        return ApComplex(-self.value, self.precision_bits)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __abs__(self) -> mp.mpf:
        with mp.workprec(self.precision_bits + 8):
            return abs(self.value)

    @property
    def real(self) -> mp.mpf:
        return self.value.real

    @property
    def imag(self) -> mp.mpf:
        return self.value.imag

    def conjugate(self) -> "ApComplex":
        return ApComplex(mp.conj(self.value), self.precision_bits)

    def is_real_within(self, tol) -> bool:
        return abs(self.value.imag) <= tol * max(1, abs(self.value))

    def to_decimal_string(self, digits: int | None = None) -> str:
        if digits is None:
            digits = max(8, int(self.precision_bits * 0.3010299956639812))
        if self.value.imag == 0:
            return mp.nstr(self.value.real, digits)
        return mp.nstr(self.value, digits)

    def __repr__(self):
        return f"ApComplex({self.to_decimal_string()}, bits={self.precision_bits})"


class ExactZero:
    """Sentinel for a gamma quotient that is exactly zero by convention."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ExactZero"

    def __bool__(self):
        return False


EXACT_ZERO = ExactZero()


@dataclass(frozen=True)
class GammaQuotient:
    """A formal product/quotient of gamma values at exact arguments."""

    numerator_args: tuple[GaussianRational, ...]
    denominator_args: tuple[GaussianRational, ...]

    @staticmethod
    def of(num: Iterable, den: Iterable) -> "GammaQuotient":
        return GammaQuotient(tuple(GaussianRational.coerce(a) for a in num),
                             tuple(GaussianRational.coerce(a) for a in den))

    @staticmethod
    def one() -> "GammaQuotient":
        return GammaQuotient((), ())

    def cancel(self) -> "GammaQuotient":
        """Remove arguments present (as exact values) in both lists."""
        den = list(self.denominator_args)
        num = []
        for a in self.numerator_args:
            if a in den:
                den.remove(a)
            else:
                num.append(a)
        return GammaQuotient(tuple(num), tuple(den))

    def __mul__(self, other: "GammaQuotient") -> "GammaQuotient":
        return GammaQuotient(self.numerator_args + other.numerator_args,
                             self.denominator_args + other.denominator_args)

    def inverse(self) -> "GammaQuotient":
        return GammaQuotient(self.denominator_args, self.numerator_args)

    def to_json(self) -> dict:
        return {"num": [str(a) for a in self.numerator_args],
                "den": [str(a) for a in self.denominator_args]}

    def __str__(self):
        num = ", ".join(str(a) for a in self.numerator_args) or "-"
        den = ", ".join(str(a) for a in self.denominator_args) or "-"
        return f"Gamma[({num})/({den})]"


def rising_factorial(a: GaussianLike, k: int) -> GaussianRational:
    """Exact (a)_k = a(a+1)...(a+k-1), with (a)_0 = 1."""
    if k < 0:
        raise ValueError("rising factorial needs k >= 0")
    a = GaussianRational.coerce(a)
    out = GaussianRational(1)
    for j in range(k):
        out = out * (a + j)
    return out


def _to_mpc(z, precision_bits: int) -> mp.mpc:
    if isinstance(z, GaussianRational):
        return z.to_mpc(precision_bits)
    if isinstance(z, ApComplex):
        return z.value
    if isinstance(z, Fraction):
        return mp.make_mpc((frac_to_mpf(z, precision_bits)._mpf_, mp.libmp.fzero))
    if isinstance(z, mp.mpc):
        return z
    if isinstance(z, mp.mpf):
        return mp.make_mpc((z._mpf_, mp.libmp.fzero))
    return mp.mpc(z)


def _is_nonpositive_integer(z) -> bool:
    if isinstance(z, GaussianRational):
        return z.is_nonpositive_integer()
    if isinstance(z, (int, Fraction)):
        return Fraction(z).denominator == 1 and z <= 0
    v = mp.mpc(z.value if isinstance(z, ApComplex) else z)
    return v.imag == 0 and v.real == mp.floor(v.real) and v.real <= 0


def log_gamma(z, precision_bits: int = DEFAULT_PRECISION_BITS) -> ApComplex:
    """Principal-branch log Gamma, accurate to 2^(8-precision_bits) relative."""
    if _is_nonpositive_integer(z):
        raise PoleError(f"log_gamma pole at {z}")
    with mp.workprec(precision_bits + GUARD_BITS):
        w = _to_mpc(z, precision_bits + GUARD_BITS)
        if w.imag == 0 and w.real > 0:
            res = mp.mpc(mp.loggamma(w.real))
        else:
            res = mp.loggamma(w)
    return ApComplex(res, precision_bits)


def eval_gamma_quotient(q: GammaQuotient,
                        precision_bits: int = DEFAULT_PRECISION_BITS):
    """Evaluate a gamma quotient with the zero/pole conventions.

    Identical numerator/denominator arguments cancel first.  After that, a
    denominator pole makes the value exactly zero, while a numerator pole is
    an error: either an infinite quotient, or (when a denominator pole at a
    different argument is present) a residue-ratio limit we refuse to take.
    """
    reduced = q.cancel()
    num_poles = [a for a in reduced.numerator_args if a.is_nonpositive_integer()]
    den_poles = [a for a in reduced.denominator_args if a.is_nonpositive_integer()]
    if num_poles:
        if den_poles:
            raise PoleError(
                f"pole pair at unequal arguments {num_poles[0]} / {den_poles[0]}",
                tag="paired-pole")
        raise PoleError(f"numerator pole at {num_poles[0]}")
    if den_poles:
        return EXACT_ZERO
    wp = precision_bits + GUARD_BITS
    with mp.workprec(wp):
        total = mp.mpc(0)
        for a in reduced.numerator_args:
            total += _loggamma_raw(a, wp)
        for b in reduced.denominator_args:
            total -= _loggamma_raw(b, wp)
        all_real = all(a.is_real() for a in
                       reduced.numerator_args + reduced.denominator_args)
        if all_real:
            # exact sign from the accumulated branch multiple of pi
            m = int(mp.nint(total.imag / mp.pi))
            val = mp.mpc(mp.exp(total.real) * (-1) ** (m & 1))
        else:
            val = mp.exp(total)
    return ApComplex(val, precision_bits)


def _loggamma_raw(a, wp: int) -> mp.mpc:
    z = _to_mpc(a, wp)
    if z.imag == 0 and z.real > 0:
        return mp.mpc(mp.loggamma(z.real))
    return mp.loggamma(z)


def check_duplication(z, precision_bits: int = DEFAULT_PRECISION_BITS) -> mp.mpf:
    """Relative residual of Gamma(2z) = (2pi)^(-1/2) 2^(2z-1/2) Gamma(z)Gamma(z+1/2)."""
    zg = GaussianRational.coerce(z) if isinstance(z, (int, Fraction, str, GaussianRational)) else z
    for w in (zg, _shift(zg, Fraction(1, 2)), _scale(zg, 2)):
        if _is_nonpositive_integer(w):
            raise PoleError(f"duplication check pole at {w}")
    wp = precision_bits + GUARD_BITS
    with mp.workprec(wp):
        zv = _to_mpc(zg, wp)
        d = (_loggamma_raw(zv, wp) + _loggamma_raw(zv + mp.mpf(1) / 2, wp)
             + (2 * zv - mp.mpf(1) / 2) * mp.log(2) - mp.log(2 * mp.pi) / 2
             - _loggamma_raw(2 * zv, wp))
        return abs(mp.exp(d) - 1)


def check_reflection(z, precision_bits: int = DEFAULT_PRECISION_BITS) -> mp.mpf:
    """Relative residual of Gamma(z)Gamma(1-z) = pi / sin(pi z)."""
    zg = GaussianRational.coerce(z) if isinstance(z, (int, Fraction, str, GaussianRational)) else z
    if isinstance(zg, GaussianRational) and zg.is_integer():
        raise PoleError(f"reflection check pole at {zg}")
    wp = precision_bits + GUARD_BITS
    with mp.workprec(wp):
        zv = _to_mpc(zg, wp)
        if zv.imag == 0 and zv.real == mp.floor(zv.real):
            raise PoleError(f"reflection check pole at {zg}")
        d = (_loggamma_raw(zv, wp) + _loggamma_raw(1 - zv, wp)
             - mp.log(mp.pi / mp.sin(mp.pi * zv)))
        # exp(d) is the ratio of the two sides; 2*pi*i log branches drop out
        return abs(mp.exp(d) - 1)


def _shift(z, d: Fraction):
    if isinstance(z, GaussianRational):
        return z + GaussianRational(d)
    return z + d


def _scale(z, c: int):
    if isinstance(z, GaussianRational):
        return z * GaussianRational(c)
    return c * z


def gauss_seq(values: Sequence) -> tuple[GaussianRational, ...]:
    """Coerce a sequence into Gaussian rationals."""
    return tuple(GaussianRational.coerce(v) for v in values)
