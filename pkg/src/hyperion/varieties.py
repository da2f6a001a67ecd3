"""Parameter varieties behind the nonlinear summation theorems.

The variety of order r lives in the 2r+1 coordinates
(alpha_1..alpha_{r+1}, beta_1..beta_r).  The base variety matches the first
r elementary symmetric polynomials of the uppers and lowers; its extension
by an eliminated auxiliary parameter gives the second family.  Samplers
produce exact rational points where a discriminant search succeeds and
root-found points (with recorded residual bounds) otherwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Optional, Sequence

import mpmath as mp

from .errors import (DegenerateGamma, PointNotOnVarieties, RootFindingFailed,
                     SamplerExhausted)
from .polynomials import Poly
from .scalars import (DEFAULT_PRECISION_BITS, ApComplex, GaussianRational,
                      gauss_seq, mpf_to_fraction)
from .series import ParamPoint


@dataclass(frozen=True)
class ConstraintSet:
    """Polynomial constraints over the 2r+1 parameter coordinates."""

    r: int
    polynomials: tuple[Poly, ...]
    label: str = ""

    @property
    def nvars(self) -> int:
        return 2 * self.r + 1

    def residuals(self, point: ParamPoint) -> list[GaussianRational]:
        values = list(point.alpha) + list(point.beta)
        return [p.evaluate(values) for p in self.polynomials]

    def membership(self, point: ParamPoint) -> bool:
        return all(v.is_zero() for v in self.residuals(point))

    def membership_within(self, point: ParamPoint, tol) -> bool:
        tol = mp.mpf(tol)
        return all(_gr_abs(v) <= tol for v in self.residuals(point))

    def affine_dimension(self) -> int:
        """2r+1 minus the rank of the system; degree-1 constraints only."""
        from .polynomials import linear_poly_to_row, rref
        if any(p.degree() > 1 for p in self.polynomials):
            raise ValueError("affine dimension needs a linear constraint set")
        rows = rref([linear_poly_to_row(p) for p in self.polynomials])
        return self.nvars - len(rows)

    def to_json(self) -> dict:
        return {"r": self.r, "label": self.label,
                "polynomials": [p.to_json() for p in self.polynomials]}

    @staticmethod
    def from_json(obj: dict) -> "ConstraintSet":
        r = int(obj["r"])
        polys = tuple(Poly.from_json(2 * r + 1, p) for p in obj["polynomials"])
        return ConstraintSet(r, polys, obj.get("label", ""))


@dataclass(frozen=True)
class VarietyPoint:
    point: ParamPoint
    witness: str                     # "exact" | "root-found"
    residual_bound: Optional[mp.mpf] = None
    gamma: Optional[GaussianRational] = None

    def to_json(self) -> dict:
        d = {"point": self.point.to_json(), "witness": self.witness}
        if self.residual_bound is not None:
            d["residual_bound"] = mp.nstr(self.residual_bound, 5)
        if self.gamma is not None:
            d["gamma"] = str(self.gamma)
        return d


def _gr_abs(v: GaussianRational) -> mp.mpf:
    return mp.sqrt(mp.mpf(v.norm().numerator) / v.norm().denominator)


def elementary_symmetric(values: Sequence, l: int) -> GaussianRational:
    """Exact S_l: the sum of all products of l distinct entries (S_0 = 1)."""
    vals = gauss_seq(values)
    if l < 0 or l > len(vals):
        raise ValueError("need 0 <= l <= len(values)")
    if l == 0:
        return GaussianRational(1)
    total = GaussianRational(0)
    for combo in combinations(vals, l):
        prod = GaussianRational(1)
        for v in combo:
            prod = prod * v
        total = total + prod
    return total


def _sym_poly(nvars: int, var_idx: Sequence[int], l: int) -> Poly:
    if l == 0:
        return Poly.constant(nvars, 1)
    out = Poly.constant(nvars, 0)
    for combo in combinations(var_idx, l):
        m = Poly.constant(nvars, 1)
        for i in combo:
            m = m * Poly.variable(nvars, i)
        out = out + m
    return out


def u_variety(r: int) -> ConstraintSet:
    """S_l(alpha) = S_l(beta) for l = 1..r."""
    if r < 1:
        raise ValueError("r >= 1")
    n = 2 * r + 1
    aidx = list(range(r + 1))
    bidx = list(range(r + 1, n))
    polys = tuple(_sym_poly(n, aidx, l) - _sym_poly(n, bidx, l)
                  for l in range(1, r + 1))
    return ConstraintSet(r, polys, label=f"U_{r}")


def u1_variety(r: int) -> ConstraintSet:
    """The gamma-eliminated extension: for l = 1..r,

    [S_{l-1}(a)-S_{l-1}(b)][S_{r+1}(a)+S_r(b)]
      + [S_l(a)-S_l(b)+S_{l-1}(b)][-S_r(a)+S_r(b)] = 0.
    """
    if r < 1:
        raise ValueError("r >= 1")
    n = 2 * r + 1
    aidx = list(range(r + 1))
    bidx = list(range(r + 1, n))
    Sa = lambda l: _sym_poly(n, aidx, l)
    Sb = lambda l: _sym_poly(n, bidx, l) if l <= r else Poly.constant(n, 0)
    tail1 = Sa(r + 1) + Sb(r)
    tail2 = -Sa(r) + Sb(r)
    polys = tuple((Sa(l - 1) - Sb(l - 1)) * tail1
                  + (Sa(l) - Sb(l) + Sb(l - 1)) * tail2
                  for l in range(1, r + 1))
    return ConstraintSet(r, polys, label=f"U_{r}^1")


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, if one exists."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _height_ordered_rationals(limit: int):
    """0, 1, -1, 2, -2, 1/2, -1/2, 3, ... by increasing max(|num|, den)."""
    yield Fraction(0)
    count = 1
    h = 1
    while count < limit:
        for den in range(1, h + 1):
            for num in range(1, h + 1):
                if max(num, den) != h or Fraction(num, den).denominator != den:
                    continue
                yield Fraction(num, den)
                yield Fraction(-num, den)
                count += 2
                if count >= limit:
                    return
        h += 1


def u2_point_from(alpha1, alpha2, c) -> Optional[ParamPoint]:
    """Exact point of the r=2 variety with uppers (alpha1, alpha2, c), if the
    lower parameters come out rational."""
    a1, a2, c = Fraction(alpha1), Fraction(alpha2), Fraction(c)
    e1 = a1 + a2 + c
    e2 = a1 * a2 + c * (a1 + a2)
    disc = e1 * e1 - 4 * e2
    root = rational_sqrt(disc)
    if root is None:
        return None
    b1, b2 = (e1 + root) / 2, (e1 - root) / 2
    return ParamPoint.of([a1, a2, c], [b1, b2])


#: search budget for the exact r=2 sampler
U2_SEARCH_CANDIDATES = 10 ** 4


def sample_u2_rational(seed: int, retries: int = 200,
                       alpha_fixed: Optional[tuple] = None) -> VarietyPoint:
    """Exact rational point of the r=2 variety via a discriminant search."""
    rng = random.Random(seed)
    for _ in range(retries):
        if alpha_fixed is not None:
            a1, a2 = Fraction(alpha_fixed[0]), Fraction(alpha_fixed[1])
        else:
            a1 = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
            a2 = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
        if a1 == 0 and a2 == 0:
            continue
        for c in _height_ordered_rationals(U2_SEARCH_CANDIDATES):
            pt = u2_point_from(a1, a2, c)
            if pt is None:
                continue
            if _degenerate_u_point(pt):
                continue
            return VarietyPoint(pt, "exact")
    raise SamplerExhausted("no exact r=2 point found")


def _degenerate_u_point(pt: ParamPoint) -> bool:
    if any(a.is_zero() for a in pt.alpha):
        return True
    if any(a == b for a in pt.alpha for b in pt.beta):
        return True
    # series lowers are beta+1; keep them off the poles
    return any((b + 1).is_nonpositive_integer() for b in pt.beta)


def poly_roots(coeffs: Sequence, precision_bits: int = DEFAULT_PRECISION_BITS,
               max_iter: int = 400) -> list[ApComplex]:
    """All roots of a polynomial (coefficients highest degree first).

    Simultaneous (Weierstrass) iteration; backward error below
    2^(32-p) * norm(coeffs) * max(1,|root|)^deg, else RootFindingFailed.
    """
    wp = precision_bits + 32
    with mp.workprec(wp):
        cs = [c.value if isinstance(c, ApComplex) else mp.mpc(c) for c in coeffs]
        while cs and cs[0] == 0:
            cs = cs[1:]
        deg = len(cs) - 1
        if deg < 1:
            return []
        if deg > 12:
            raise ValueError("degree cap is 12")
        lead = cs[0]
        monic = [c / lead for c in cs]
        radius = 1 + max(abs(c) for c in monic[1:]) if deg else mp.mpf(1)
        norm = max(abs(c) for c in cs)
        target = mp.mpf(2) ** (32 - precision_bits)

        def p_at(z):
            acc = mp.mpc(1)
            for c in monic[1:]:
                acc = acc * z + c
            return acc

        for attempt in range(4):
            seed_rot = mp.mpc(mp.mpf(4) / 10, mp.mpf(9) / 10)
            jitter = mp.mpc(1) if attempt == 0 else mp.mpc(1, mp.mpf(attempt) / 7)
            roots = [radius * jitter * seed_rot ** (k + 1) for k in range(deg)]
            for _ in range(max_iter):
                shift = mp.mpf(0)
                new = []
                for i, z in enumerate(roots):
                    denom = mp.mpc(1)
                    for j, w in enumerate(roots):
                        if i != j:
                            denom *= z - w
                    if denom == 0:
                        denom = mp.mpc(2) ** (-wp)
                    dz = p_at(z) / denom
                    new.append(z - dz)
                    shift = max(shift, abs(dz))
                roots = new
                if shift < mp.mpf(2) ** (8 - wp) * max(1, radius):
                    break
            ok = all(abs(p_at(z)) * abs(lead) <= target * norm * max(1, abs(z)) ** deg
                     for z in roots)
            if ok:
                return [ApComplex(z, precision_bits) for z in roots]
        raise RootFindingFailed("Weierstrass iteration missed the error bound")


def _snap(z: ApComplex) -> GaussianRational:
    return GaussianRational(mpf_to_fraction(z.value.real),
                            mpf_to_fraction(z.value.imag))


def _monic_coeffs_from_e(es: Sequence[GaussianRational]) -> list[GaussianRational]:
    """x^n - e_1 x^(n-1) + e_2 x^(n-2) - ... for given symmetric functions."""
    out = [GaussianRational(1)]
    sign = -1
    for e in es:
        out.append(GaussianRational(sign) * e)
        sign = -sign
    return out


def sample_u_general(r: int, seed: int,
                     precision_bits: int = DEFAULT_PRECISION_BITS,
                     retries: int = 50) -> VarietyPoint:
    """Root-found point of the order-r variety: pick rational lowers and the
    one free top symmetric function, then solve for the uppers."""
    rng = random.Random(seed)
    cset = u_variety(r)
    tol = mp.mpf(2) ** (32 - precision_bits)
    for _ in range(retries):
        beta = [Fraction(rng.randint(1, 9), rng.choice([1, 2, 3])) for _ in range(r)]
        e_top = Fraction(rng.choice([n for n in range(-9, 10) if n]),
                         rng.choice([1, 2]))
        es = [elementary_symmetric(beta, l) for l in range(1, r + 1)]
        es.append(GaussianRational(e_top))
        coeffs = [c.to_apcomplex(precision_bits + 16)
                  for c in _monic_coeffs_from_e(es)]
        try:
            roots = poly_roots(coeffs, precision_bits + 16)
        except RootFindingFailed:
            continue
        pt = ParamPoint(tuple(_snap(z) for z in roots), gauss_seq(beta))
        if _degenerate_u_point(pt):
            continue
        resid = [_gr_abs(v) for v in cset.residuals(pt)]
        if max(resid) <= tol:
            return VarietyPoint(pt, "root-found", residual_bound=max(resid))
    raise SamplerExhausted(f"no root-found order-{r} point")


def u1_symmetric_functions(beta: Sequence[Fraction], gamma: Fraction
                           ) -> list[GaussianRational]:
    """Symmetric functions e_l(alpha) of the gamma-extension construction.

    Matching S_l(alpha_1..alpha_{r+1}, gamma) = S_l(beta_1..beta_r, gamma-1)
    for l = 1..r+1 gives e_l = S_l(b) + (gamma-1) S_{l-1}(b) - gamma e_{l-1}.
    """
    r = len(beta)
    g = GaussianRational(gamma)
    es: list[GaussianRational] = []
    prev = GaussianRational(1)
    for l in range(1, r + 2):
        sb = elementary_symmetric(beta, l) if l <= r else GaussianRational(0)
        sb1 = elementary_symmetric(beta, l - 1)
        e = sb + (g - 1) * sb1 - g * prev
        es.append(e)
        prev = e
    return es


def sample_u1(r: int, seed: int,
              precision_bits: int = DEFAULT_PRECISION_BITS,
              retries: int = 200) -> VarietyPoint:
    """Point of the gamma-extension variety; exact at r=1 when the quadratic
    discriminant is a rational square, root-found otherwise."""
    rng = random.Random(seed)
    cset = u1_variety(r)
    tol = mp.mpf(2) ** (32 - precision_bits)
    last_degenerate = None
    for _ in range(retries):
        beta = [Fraction(rng.randint(1, 9), rng.choice([1, 2, 3])) for _ in range(r)]
        gamma = Fraction(rng.choice([n for n in range(-6, 7) if n]),
                         rng.choice([1, 2, 3]))
        es = u1_symmetric_functions(beta, gamma)
        srb = elementary_symmetric(beta, r)
        if es[r - 1] == srb:
            last_degenerate = DegenerateGamma(
                f"S_r(alpha) = S_r(beta) for beta={beta}, gamma={gamma}")
            continue
        if (es[r] + srb).is_zero():
            continue
        recovered = (es[r] + srb) / (srb - es[r - 1])
        assert recovered == GaussianRational(gamma)
        if r == 1:
            disc = es[0] * es[0] - 4 * es[1]
            root = rational_sqrt(disc.re) if disc.is_real() else None
            if root is None:
                continue
            alpha = ((es[0].re + root) / 2, (es[0].re - root) / 2)
            pt = ParamPoint.of(alpha, beta)
            if _degenerate_u_point(pt):
                continue
            if not cset.membership(pt):
                continue
            return VarietyPoint(pt, "exact", gamma=GaussianRational(gamma))
        coeffs = [c.to_apcomplex(precision_bits + 16)
                  for c in _monic_coeffs_from_e(es)]
        try:
            roots = poly_roots(coeffs, precision_bits + 16)
        except RootFindingFailed:
            continue
        pt = ParamPoint(tuple(_snap(z) for z in roots), gauss_seq(beta))
        if _degenerate_u_point(pt):
            continue
        resid = [_gr_abs(v) for v in cset.residuals(pt)]
        if max(resid) <= tol:
            return VarietyPoint(pt, "root-found", residual_bound=max(resid),
                                gamma=GaussianRational(gamma))
    if last_degenerate is not None:
        raise last_degenerate
    raise SamplerExhausted(f"no order-{r} gamma-extension point")


def needed2_residual(point, k: int) -> GaussianRational:
    """prod(alpha_i+k) - k*prod(beta_i+k) - prod(alpha_i); zero on the variety."""
    pt = point.point if isinstance(point, VarietyPoint) else point
    lhs = GaussianRational(1)
    base = GaussianRational(1)
    for a in pt.alpha:
        lhs = lhs * (a + k)
        base = base * a
    rhs = GaussianRational(k)
    for b in pt.beta:
        rhs = rhs * (b + k)
    return lhs - rhs - base


def intersection_dimension(set_a: ConstraintSet, set_b: ConstraintSet,
                           point: ParamPoint,
                           precision_bits: int = DEFAULT_PRECISION_BITS) -> int:
    """2r+1 minus the numeric rank of the stacked Jacobian at the point."""
    n = set_a.nvars
    if set_b.nvars != n:
        raise ValueError("constraint sets live in different spaces")
    on_tol = mp.mpf(2) ** (-precision_bits // 4)
    for cs in (set_a, set_b):
        if not cs.membership_within(point, on_tol):
            raise PointNotOnVarieties(f"point {point} misses {cs.label}")
    wp = precision_bits + 16
    with mp.workprec(wp):
        values = [v.to_mpc(wp) for v in point.alpha + point.beta]
        rows = []
        for cs in (set_a, set_b):
            for p in cs.polynomials:
                rows.append([mp.mpc(g.evaluate_numeric(values))
                             for g in p.gradient()])
        rank = _numeric_rank(rows, mp.mpf(2) ** (-precision_bits // 2))
    return n - rank


def _numeric_rank(rows: list[list[mp.mpc]], threshold) -> int:
    rows = [r[:] for r in rows]
    scale = max((abs(x) for r in rows for x in r), default=mp.mpf(0))
    if scale == 0:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while col < ncols and rows:
        piv = max(range(len(rows)), key=lambda i: abs(rows[i][col]))
        if abs(rows[piv][col]) <= threshold * scale:
            col += 1
            continue
        rows[0], rows[piv] = rows[piv], rows[0]
        head = rows[0]
        for r in rows[1:]:
            f = r[col] / head[col]
            for j in range(col, ncols):
                r[j] -= f * head[j]
        rows = rows[1:]
        rank += 1
        col += 1
    return rank
