"""Dense-free multivariate polynomials with exact rational coefficients.

Monomials are exponent tuples; coefficients are Fractions.  This is the
shared substrate for the nonlinear parameter varieties and for the linear
coordinate changes of the 3F2 symmetry machinery.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Mapping, Sequence

from .scalars import GaussianRational


class Poly:
    """Polynomial over Q in ``nvars`` variables, as {exponents: coefficient}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @staticmethod
    def constant(nvars: int, c) -> "Poly":
        return Poly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def variable(nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): Fraction(1)})

    @staticmethod
    def linear(nvars: int, coeffs: Sequence, const=0) -> "Poly":
        terms = {}
        for i, c in enumerate(coeffs):
            if Fraction(c) != 0:
                e = [0] * nvars
                e[i] = 1
                terms[tuple(e)] = Fraction(c)
        if Fraction(const) != 0:
            terms[(0,) * nvars] = Fraction(const)
        return Poly(nvars, terms)

    # -- ring operations ---------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            return other
        return Poly.constant(self.nvars, other)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    # -- evaluation --------------------------------------------------------
    def evaluate(self, values: Sequence[GaussianRational]) -> GaussianRational:
        out = GaussianRational(0)
        for e, c in self.terms.items():
            m = GaussianRational(c)
            for i, ei in enumerate(e):
                for _ in range(ei):
                    m = m * values[i]
            out = out + m
        return out

    def evaluate_numeric(self, values):
        import mpmath as mp
        out = mp.mpf(0)
        for e, c in self.terms.items():
            m = mp.mpf(c.numerator) / c.denominator
            for i, ei in enumerate(e):
                for _ in range(ei):
                    m = m * values[i]
            out = out + m
        return out

    def derivative(self, var: int) -> "Poly":
        terms = {}
        for e, c in self.terms.items():
            if e[var] == 0:
                continue
            e2 = list(e)
            e2[var] -= 1
            terms[tuple(e2)] = terms.get(tuple(e2), Fraction(0)) + c * e[var]
        return Poly(self.nvars, terms)

    def gradient(self) -> list["Poly"]:
        return [self.derivative(i) for i in range(self.nvars)]

    # -- structural transforms ----------------------------------------------
    def permute_vars(self, perm: Sequence[int]) -> "Poly":
        """Substitute variable i by variable perm[i]."""
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * self.nvars
            for i, ei in enumerate(e):
                e2[perm[i]] += ei
            terms[tuple(e2)] = terms.get(tuple(e2), Fraction(0)) + c
        return Poly(self.nvars, terms)

    def substitute(self, replacements: Sequence["Poly"]) -> "Poly":
        """Substitute each variable by the given polynomial."""
        out = Poly.constant(self.nvars, 0)
        for e, c in self.terms.items():
            m = Poly.constant(self.nvars, c)
            for i, ei in enumerate(e):
                for _ in range(ei):
                    m = m * replacements[i]
            out = out + m
        return out

    def substitute_var(self, var: int, replacement: "Poly") -> "Poly":
        reps = [Poly.variable(self.nvars, i) for i in range(self.nvars)]
        reps[var] = replacement
        return self.substitute(reps)

    def normalized(self) -> "Poly":
        """Divide by content and fix the sign of the lex-first coefficient."""
        if not self.terms:
            return self
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, abs(n))
        l = 1
        for d in dens:
            l = l * d // gcd(l, d)
        content = Fraction(g, l)
        lead = self.terms[min(self.terms)]
        if lead < 0:
            content = -content
        return Poly(self.nvars, {e: c / content for e, c in self.terms.items()})

    # -- presentation ------------------------------------------------------
    def to_json(self) -> dict:
        return {",".join(str(x) for x in e): str(c)
                for e, c in sorted(self.terms.items())}

    @staticmethod
    def from_json(nvars: int, obj: Mapping[str, str]) -> "Poly":
        terms = {tuple(int(x) for x in k.split(",")): Fraction(v)
                 for k, v in obj.items()}
        return Poly(nvars, terms)

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(f"{names[i]}^{ei}" if ei > 1 else names[i]
                            for i, ei in enumerate(e) if ei)
            if mono:
                bits.append(f"{c}*{mono}" if c != 1 else mono)
            else:
                bits.append(str(c))
        return " + ".join(bits).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.format([f'v{i}' for i in range(self.nvars)])})"


def rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduced row echelon form over Q (used for affine linear systems)."""
    rows = [list(map(Fraction, r)) for r in rows if any(x != 0 for x in r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list[Fraction]] = []
    pivot_col = 0
    work = rows
    while work and pivot_col < ncols:
        pivot_row = next((r for r in work if r[pivot_col] != 0), None)
        if pivot_row is None:
            pivot_col += 1
            continue
        work.remove(pivot_row)
        pivot_row = [x / pivot_row[pivot_col] for x in pivot_row]
        for r in work + out:
            f = r[pivot_col]
            if f != 0:
                for j in range(ncols):
                    r[j] -= f * pivot_row[j]
        out.append(pivot_row)
        work = [r for r in work if any(x != 0 for x in r)]
        pivot_col += 1
    out.sort(key=lambda r: next(j for j, x in enumerate(r) if x != 0))
    return out


def linear_poly_to_row(p: Poly) -> list[Fraction]:
    """[coefficients..., constant] for a degree <= 1 polynomial."""
    if p.degree() > 1:
        raise ValueError("not a linear polynomial")
    row = [Fraction(0)] * (p.nvars + 1)
    for e, c in p.terms.items():
        if sum(e) == 0:
            row[-1] = c
        else:
            row[e.index(1)] = c
    return row


def row_to_linear_poly(nvars: int, row: Sequence[Fraction]) -> Poly:
    return Poly.linear(nvars, row[:-1], row[-1])
