"""The S5 symmetry of 3F2(1): linear action, gamma factors, orbit machinery.

Parameter space is C^3 x C^2 with coordinates (a,b,c;d,e).  A second chart
(x,y,z,u,v) = (a,b,c,d,e) A^{-1} linearizes the symmetry: all 120 coordinate
permutations of (x,y,z,u,v) act, and separate permutations of upper and
lower parameters correspond to the order-12 subgroup preserving {x,y,z} and
{u,v}.  Constraint sets are transported through the same chart, canonical
forms are taken modulo the subgroup, and orbits are enumerated by applying
all 120 permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import NotOnW0, UnsupportedDegree
from .polynomials import Poly, linear_poly_to_row, row_to_linear_poly, rref
from .scalars import GammaQuotient, GaussianRational, gauss_seq
from .series import ParamPoint
from .varieties import ConstraintSet

_A_ROWS = [[1, 0, 0, 1, 1],
           [0, 1, 0, 1, 1],
           [0, 0, 1, 1, 1],
           [1, 1, 1, 2, 1],
           [1, 1, 1, 1, 2]]

_3AINV_ROWS = [[1, -2, -2, 1, 1],
               [-2, 1, -2, 1, 1],
               [-2, -2, 1, 1, 1],
               [1, 1, 1, 1, -2],
               [1, 1, 1, -2, 1]]


def matrix_A() -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in _A_ROWS]


def matrix_A_inverse() -> list[list[Fraction]]:
    return [[Fraction(x, 3) for x in row] for row in _3AINV_ROWS]


def _vec_times_matrix(vec: Sequence[GaussianRational], mat) -> tuple[GaussianRational, ...]:
    return tuple(sum((vec[i] * GaussianRational(mat[i][j]) for i in range(5)),
                     GaussianRational(0)) for j in range(5))


@dataclass(frozen=True)
class F32Point:
    """A point (a,b,c;d,e) of the 3F2(1) parameter space."""

    a: GaussianRational
    b: GaussianRational
    c: GaussianRational
    d: GaussianRational
    e: GaussianRational

    @staticmethod
    def of(a, b, c, d, e) -> "F32Point":
        return F32Point(*gauss_seq([a, b, c, d, e]))

    @staticmethod
    def from_param_point(p: ParamPoint) -> "F32Point":
        if p.r != 2:
            raise ValueError("F32Point needs a 3F2-shaped parameter point")
        return F32Point(*(p.alpha + p.beta))

    def to_param_point(self) -> ParamPoint:
        return ParamPoint((self.a, self.b, self.c), (self.d, self.e))

    def vector(self) -> tuple[GaussianRational, ...]:
        return (self.a, self.b, self.c, self.d, self.e)

    def xyzuv(self) -> tuple[GaussianRational, ...]:
        return _vec_times_matrix(self.vector(), matrix_A_inverse())

    @staticmethod
    def from_xyzuv(w: Sequence[GaussianRational]) -> "F32Point":
        return F32Point(*_vec_times_matrix(gauss_seq(w), matrix_A()))

    def excess(self) -> GaussianRational:
        return self.d + self.e - self.a - self.b - self.c

    def __str__(self):
        return f"{self.a},{self.b},{self.c}:{self.d},{self.e}"


@dataclass(frozen=True)
class ThomaeElement:
    """A permutation of the five linear coordinates (x,y,z,u,v).

    Acting on vectors by (sigma w)[i] = w[perm[i]].
    """

    perm: tuple[int, int, int, int, int]

    def apply_vector(self, w: Sequence) -> tuple:
        return tuple(w[self.perm[i]] for i in range(5))

    def preserves_partition(self) -> bool:
        return set(self.perm[:3]) == {0, 1, 2}

    def __str__(self):
        names = "xyzuv"
        return "".join(names[i] for i in self.perm)


def compose(s: ThomaeElement, t: ThomaeElement) -> ThomaeElement:
    """compose(s, t).apply == s.apply after t.apply."""
    return ThomaeElement(tuple(t.perm[s.perm[i]] for i in range(5)))


def all_elements() -> list[ThomaeElement]:
    return [ThomaeElement(p) for p in itertools.permutations(range(5))]


def subgroup_elements() -> list[ThomaeElement]:
    """The order-12 subgroup: separate permutations of {x,y,z} and {u,v}."""
    out = []
    for p3 in itertools.permutations(range(3)):
        for p2 in itertools.permutations((3, 4)):
            out.append(ThomaeElement(tuple(p3) + tuple(p2)))
    return out


IDENTITY = ThomaeElement((0, 1, 2, 3, 4))


@dataclass(frozen=True)
class TransformedSum:
    new_point: F32Point
    gamma_factor: GammaQuotient


def apply(t: ThomaeElement, p: F32Point) -> TransformedSum:
    """Rewrite F(p) as gamma_factor * F(new_point), formally.

    Convergence of either side is the caller's concern.
    """
    w = p.xyzuv()
    w2 = t.apply_vector(w)
    p2 = F32Point.from_xyzuv(w2)
    gq = GammaQuotient.of([p.d, p.e, p.excess()],
                          [p2.d, p2.e, p2.excess()]).cancel()
    return TransformedSum(new_point=p2, gamma_factor=gq)


def coset_representatives() -> list[ThomaeElement]:
    """One element per right coset of the partition subgroup (10 in all)."""
    sub = subgroup_elements()
    seen: set[frozenset] = set()
    reps = []
    for el in all_elements():
        coset = frozenset(compose(h, el).perm for h in sub)
        if coset not in seen:
            seen.add(coset)
            reps.append(ThomaeElement(min(coset)))
    return sorted(reps, key=lambda el: el.perm)


# ----------------------------------------------------------------------------
# constraint-set transport and canonicalization
# ----------------------------------------------------------------------------

def to_xyzuv(cs: ConstraintSet) -> ConstraintSet:
    """Exact change of coordinates (a,b,c,d,e) -> (x,y,z,u,v)."""
    A = matrix_A()
    reps = [Poly.linear(5, [A[i][j] for i in range(5)]) for j in range(5)]
    polys = tuple(p.substitute(reps) for p in cs.polynomials)
    return ConstraintSet(cs.r, polys, label=cs.label + "|xyzuv")


def from_xyzuv(cs: ConstraintSet) -> ConstraintSet:
    Ainv = matrix_A_inverse()
    reps = [Poly.linear(5, [Ainv[j][i] for j in range(5)]) for i in range(5)]
    polys = tuple(p.substitute(reps) for p in cs.polynomials)
    label = cs.label.removesuffix("|xyzuv")
    return ConstraintSet(cs.r, polys, label=label)


def _reduce_mod_linear(q: Poly, rows: list[list[Fraction]]) -> Poly:
    for row in rows:
        pivot = next(j for j, x in enumerate(row[:-1]) if x != 0)
        repl = Poly.linear(5, [-c if j != pivot else 0
                               for j, c in enumerate(row[:-1])], -row[-1])
        q = q.substitute_var(pivot, repl)
    return q


def _normal_form(polys: Iterable[Poly]) -> str:
    linear, quads = [], []
    for p in polys:
        if p.is_zero():
            continue
        d = p.degree()
        if d <= 1:
            linear.append(p)
        elif d == 2:
            quads.append(p)
        else:
            raise UnsupportedDegree(f"degree {d} constraint unsupported")
    rows = rref([linear_poly_to_row(p) for p in linear])
    reduced = sorted(repr(sorted(_reduce_mod_linear(q, rows).normalized()
                                 .terms.items()))
                     for q in quads)
    lin_repr = [";".join(str(x) for x in row) for row in rows]
    return "L[" + "|".join(lin_repr) + "]Q" + "".join(reduced)


def canonical_form(cs: ConstraintSet) -> bytes:
    """Deterministic normal form modulo separate upper/lower permutations.

    The set must be given in the linear (x,y,z,u,v) coordinates, with
    constraints of degree at most 2.
    """
    if len(cs.polynomials) > 4:
        raise UnsupportedDegree("at most 4 constraints supported")
    best: Optional[str] = None
    for h in subgroup_elements():
        polys = [p.permute_vars(h.perm) for p in cs.polynomials]
        form = _normal_form(polys)
        if best is None or form < best:
            best = form
    assert best is not None
    return best.encode()


@dataclass(frozen=True)
class OrbitClass:
    canonical: bytes
    representative: ConstraintSet     # over (a,b,c,d,e)


def enumerate_orbit(cs: ConstraintSet) -> list[OrbitClass]:
    """Orbit classes of a constraint set under all 120 transformations,
    identified up to separate upper/lower permutations."""
    base = to_xyzuv(cs)
    classes: dict[bytes, ConstraintSet] = {}
    for el in all_elements():
        polys = tuple(p.permute_vars(el.perm) for p in base.polynomials)
        key = canonical_form(ConstraintSet(cs.r, polys, base.label))
        if key not in classes:
            rep = from_xyzuv(ConstraintSet(cs.r, polys, cs.label + f"@{el}"))
            classes[key] = rep
    return [OrbitClass(k, classes[k]) for k in sorted(classes)]


def orbit_report(label: str, cs: ConstraintSet) -> dict:
    classes = enumerate_orbit(cs)
    return {"input_label": label,
            "class_count": len(classes),
            "classes": [{"canonical": oc.canonical.decode(),
                         "representative_constraints":
                             [p.to_json() for p in oc.representative.polynomials]}
                        for oc in classes]}


# ----------------------------------------------------------------------------
# the half-shift plane and the 2F1(-1) bridge
# ----------------------------------------------------------------------------

def whipple_w0_plane() -> ConstraintSet:
    """{alpha_2 = alpha_1 + 1/2, beta_2 = beta_1 + 1/2} over (a,b,c,d,e)."""
    a, b, c, d, e = [Poly.variable(5, i) for i in range(5)]
    half = Poly.constant(5, Fraction(1, 2))
    return ConstraintSet(2, (b - a - half, e - d - half), label="W0")


def whipple_orbit() -> list[OrbitClass]:
    return enumerate_orbit(whipple_w0_plane())


@dataclass(frozen=True)
class BridgeResult:
    f21_upper: tuple[GaussianRational, GaussianRational]
    f21_lower: GaussianRational
    gamma_factor: GammaQuotient


def whipple_bridge(p: F32Point) -> BridgeResult:
    """Convert a 3F2(1) on the half-shift plane to a 2F1(-1) evaluation.

    For p = (alpha, alpha+1/2, beta; gamma, gamma+1/2) up to permutation:
    2F1(2 alpha, beta; 2 gamma - beta; -1) = factor * 3F2(p; 1) with
    factor = Gamma[(2g-2a, 2g-b)/(2g-2a-b, 2g)].
    """
    uppers = (p.a, p.b, p.c)
    lowers = (p.d, p.e)
    half = GaussianRational(Fraction(1, 2))
    for i, j in itertools.permutations(range(3), 2):
        if uppers[j] != uppers[i] + half:
            continue
        for k, l in itertools.permutations(range(2), 2):
            if lowers[l] != lowers[k] + half:
                continue
            alpha = uppers[i]
            beta = uppers[3 - i - j]
            gamma = lowers[k]
            two_a, two_g = alpha * 2, gamma * 2
            factor = GammaQuotient.of([two_g - two_a, two_g - beta],
                                      [two_g - two_a - beta, two_g])
            return BridgeResult(f21_upper=(two_a, beta),
                                f21_lower=two_g - beta,
                                gamma_factor=factor)
    raise NotOnW0(f"{p} has no half-shifted upper and lower pair")


# frequently used planes, in (a,b,c,d,e) coordinates ------------------------

def dixon_plane() -> ConstraintSet:
    a, b, c, d, e = [Poly.variable(5, i) for i in range(5)]
    return ConstraintSet(2, (d - a + b - 1, e - a + c - 1), label="dixon")


def watson_plane() -> ConstraintSet:
    a, b, c, d, e = [Poly.variable(5, i) for i in range(5)]
    return ConstraintSet(2, (d * 2 - a - b - 1, e - c * 2), label="watson")


def whipple_plane() -> ConstraintSet:
    a, b, c, d, e = [Poly.variable(5, i) for i in range(5)]
    return ConstraintSet(2, (a + b - 1, d + e - c * 2 - 1), label="whipple")


def pfaff_saalschutz_plane(n) -> ConstraintSet:
    """Terminating 1-balanced plane with the first upper frozen at -n.

    ``n`` may be any exact rational; orbit enumeration uses a generic
    surrogate value so that the class count is that of generic n.
    """
    n = Fraction(n)
    a, b, c, d, e = [Poly.variable(5, i) for i in range(5)]
    return ConstraintSet(2, (a + n, d + e - a - b - c - 1),
                         label=f"ps(n={n})")


#: generic stand-in for the symbolic termination index during canonicalization
PS_SURROGATE_N = Fraction(355, 113)


def slater_quadric() -> ConstraintSet:
    a, b, c, d, e = [Poly.variable(5, i) for i in range(5)]
    one = Poly.constant(5, 1)
    return ConstraintSet(2, (a * b + b * c + c * a - (d - one) * (e - one),
                             d + e - a - b - c - 2), label="slater")


def slater_quadric_b() -> ConstraintSet:
    a, b, c, d, e = [Poly.variable(5, i) for i in range(5)]
    one = Poly.constant(5, 1)
    quad = (a - one) * (b - one) - ((a - one) + (b - one) - (e - one)) * c
    return ConstraintSet(2, (d - c - 2, quad), label="slater-b")


def slater_quadric_c() -> ConstraintSet:
    a, b, c, d, e = [Poly.variable(5, i) for i in range(5)]
    one = Poly.constant(5, 1)
    two = Poly.constant(5, 2)
    quad = (a - one) * (b - one) - (d - two) * (e - two)
    return ConstraintSet(2, (c - 2, quad), label="slater-c")


def shukla_plane() -> ConstraintSet:
    a, b, c, d, e = [Poly.variable(5, i) for i in range(5)]
    return ConstraintSet(2, (a - d * 2, b - d - 1), label="shukla")


NAMED_SETS = {
    "dixon": dixon_plane,
    "watson": watson_plane,
    "whipple": whipple_plane,
    "ps": lambda: pfaff_saalschutz_plane(PS_SURROGATE_N),
    "slater": slater_quadric,
    "slater-b": slater_quadric_b,
    "slater-c": slater_quadric_c,
    "shukla": shukla_plane,
    "whipple-2f1": whipple_w0_plane,
}
