"""The machine-checkable catalog of summation and transformation identities.

Each rule carries an exact applicability predicate on parameter points, a
left-hand-side evaluator (a hypergeometric series, possibly reached through
an Euler transformation when the raw series diverges at x = -1), and a
right-hand-side evaluator of the form rational prefactor times gamma
quotient.  Samplers draw valid convergent cases deterministically from a
seed, so verification runs are reproducible.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath as mp

from .errors import (DivergentSeries, LowerParamNonpositiveInt,
                     PrecisionExhausted, RuleNotApplicable, SamplerExhausted,
                     UnsupportedCase)
from .scalars import (DEFAULT_PRECISION_BITS, EXACT_ZERO, ApComplex,
                      ExactZero, GammaQuotient, GaussianRational, gauss_seq,
                      eval_gamma_quotient, rising_factorial)
from .series import (EvalResult, ParamPoint, SeriesSpec, eval_series,
                     partial_sum, parametric_excess, terminating_index)
from .thomae import F32Point, whipple_bridge
from .varieties import (VarietyPoint, elementary_symmetric, sample_u1,
                        sample_u2_rational, sample_u_general, u1_variety,
                        u_variety)

HALF = Fraction(1, 2)
GR1 = GaussianRational(1)


@dataclass(frozen=True)
class RuleInput:
    """One concrete case for a rule: a parameter point, an argument, and any
    auxiliary data (termination index, curve parameter, appended pair...)."""

    point: Optional[ParamPoint] = None
    x: Optional[GaussianRational] = None
    extras: dict = field(default_factory=dict)
    applicability: str = "exact"      # "exact" | "tolerance"

    def to_json(self) -> dict:
        d: dict = {}
        if self.point is not None:
            d["point"] = str(self.point)
        if self.x is not None:
            d["x"] = str(self.x)
        if self.extras:
            d["extras"] = {k: str(v) for k, v in self.extras.items()}
        if self.applicability != "exact":
            d["applicability"] = self.applicability
        return d


@dataclass(frozen=True)
class RhsValue:
    gamma_quotient: GammaQuotient
    rational_prefactor: GaussianRational

    def evaluate(self, precision_bits: int):
        if self.rational_prefactor.is_zero():
            return EXACT_ZERO
        gv = eval_gamma_quotient(self.gamma_quotient, precision_bits)
        if isinstance(gv, ExactZero):
            return EXACT_ZERO
        return gv * self.rational_prefactor


@dataclass(frozen=True)
class IdentityRule:
    id: str
    kind: str                         # summation | transformation | partial-sum | contiguous
    description: str
    applicable: Callable[[RuleInput], bool]
    sample: Callable[[random.Random], RuleInput]
    lhs_value: Callable[[RuleInput, int, mp.mpf, int], EvalResult]
    rhs_value: Callable[[RuleInput, int], "RhsResult"]
    exact_check: Optional[Callable[[RuleInput], bool]] = None


@dataclass(frozen=True)
class RhsResult:
    value: ApComplex | ExactZero
    gamma_quotient: Optional[GammaQuotient] = None
    rational_prefactor: GaussianRational = GR1
    transformed: Optional[SeriesSpec] = None


@dataclass(frozen=True)
class VerificationCase:
    rule_id: str
    seed: int
    case: int
    input: RuleInput
    lhs: Optional[EvalResult]
    rhs: Optional[ApComplex]
    abs_gap: mp.mpf
    rel_gap: mp.mpf
    verdict: str                      # pass | fail | skipped-divergent
    method: str
    precision_bits: int

    def to_json(self) -> dict:
        d = {"rule_id": self.rule_id, "seed": self.seed, "case": self.case,
             "verdict": self.verdict, "method": self.method,
             "precision_bits": self.precision_bits}
        d.update(self.input.to_json())
        if self.lhs is not None:
            d["lhs"] = self.lhs.to_json()
        if self.rhs is not None:
            d["rhs"] = self.rhs.to_decimal_string()
        d["abs_gap"] = mp.nstr(self.abs_gap, 5)
        d["rel_gap"] = mp.nstr(self.rel_gap, 5)
        return d


# ----------------------------------------------------------------------------
# small sampling/validity helpers
# ----------------------------------------------------------------------------

def _rand_frac(rng: random.Random, lo: int = -3, hi: int = 3,
               dens: Sequence[int] = (1, 2, 3, 4)) -> Fraction:
    d = rng.choice(list(dens))
    return Fraction(rng.randint(lo * d, hi * d), d)


def _npi(v: GaussianRational) -> bool:
    return v.is_nonpositive_integer()


def _gq_ok(gq: GammaQuotient) -> bool:
    """Usable for a generic pass case: no argument at a gamma pole.

    Checked before cancellation: a 0/0 argument pair evaluates by the formal
    convention, which need not match the analytic limit along a sampling
    line, so such draws are rejected rather than verified.
    """
    return not any(_npi(a) for a in gq.numerator_args + gq.denominator_args)


def _excess_ok(v: GaussianRational, low=Fraction(1, 4)) -> bool:
    return v.re >= low


def _gr(v) -> GaussianRational:
    return GaussianRational.coerce(v)


def _series_lhs(spec_builder: Callable[[RuleInput], SeriesSpec]):
    def lhs(inp: RuleInput, precision_bits: int, tol, max_terms: int) -> EvalResult:
        return eval_series(spec_builder(inp), precision_bits, tol, max_terms)
    return lhs


def _euler_fallback_eval(spec: SeriesSpec, precision_bits: int, tol,
                         max_terms: int) -> EvalResult:
    """Evaluate a 2F1, falling back to the Euler transform off the disk of
    convergence: F(a,b;c;x) = (1-x)^(c-a-b) F(c-a,c-b;c;x)."""
    try:
        return eval_series(spec, precision_bits, tol, max_terms)
    except DivergentSeries:
        pass
    (a, b), (c,) = spec.params.alpha, spec.params.beta
    x = spec.argument
    s = c - a - b
    inner = eval_series(SeriesSpec(ParamPoint((c - a, c - b), (c,)), x),
                        precision_bits, tol, max_terms)
    wp = precision_bits + 16
    with mp.workprec(wp):
        factor = (1 - x.to_mpc(wp)) ** s.to_mpc(wp)
        value = factor * inner.value.value
        err = inner.error_bound * abs(factor) + abs(value) * mp.mpf(2) ** (8 - wp)
    return EvalResult(value=ApComplex(value, precision_bits), error_bound=err,
                      terms_used=inner.terms_used,
                      method=inner.method + ";euler-transformed")


def _quotient_rhs(builder: Callable[[RuleInput], RhsValue]):
    def rhs(inp: RuleInput, precision_bits: int) -> RhsResult:
        rv = builder(inp)
        val = rv.evaluate(precision_bits)
        return RhsResult(value=val, gamma_quotient=rv.gamma_quotient,
                         rational_prefactor=rv.rational_prefactor)
    return rhs


def _case_seed(seed: int, rule_id: str, index: int) -> int:
    h = hashlib.sha256(f"{seed}:{rule_id}:{index}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def _retry(rng: random.Random, make, tries: int = 800) -> RuleInput:
    for _ in range(tries):
        out = make()
        if out is not None:
            return out
    raise SamplerExhausted("sampler failed to produce a valid case")


# ----------------------------------------------------------------------------
# the catalog
# ----------------------------------------------------------------------------

_RULES: dict[str, IdentityRule] = {}


def _register(rule: IdentityRule):
    _RULES[rule.id] = rule
    return rule


def rule_catalog() -> list[IdentityRule]:
    return list(_RULES.values())


def get_rule(rule_id: str) -> IdentityRule:
    if rule_id not in _RULES:
        raise KeyError(f"unknown rule {rule_id}")
    return _RULES[rule_id]


# -- Euler transformation (free argument) ------------------------------------

def _euler_applicable(inp: RuleInput) -> bool:
    return inp.point is not None and inp.point.r == 1 and inp.x is not None


def _euler_sample(rng: random.Random) -> RuleInput:
    def make():
        a, b = _rand_frac(rng), _rand_frac(rng)
        c = _rand_frac(rng, 0, 3) + Fraction(1, 4)
        if c <= 0 or _npi(_gr(c)):
            return None
        x = rng.choice([Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4),
                        Fraction(-1, 4), Fraction(3, 4)])
        return RuleInput(point=ParamPoint.of([a, b], [c]), x=_gr(x))
    return _retry(rng, make)


def _euler_lhs(inp, pb, tol, mt):
    return eval_series(SeriesSpec(inp.point, inp.x), pb, tol, mt)


def _euler_rhs(inp: RuleInput, pb: int) -> RhsResult:
    (a, b), (c,) = inp.point.alpha, inp.point.beta
    x = inp.x
    s = c - a - b
    new = SeriesSpec(ParamPoint((c - a, c - b), (c,)), x)
    inner = eval_series(new, pb)
    wp = pb + 16
    with mp.workprec(wp):
        factor = (1 - x.to_mpc(wp)) ** s.to_mpc(wp)
        val = factor * inner.value.value
    return RhsResult(value=ApComplex(val, pb), transformed=new)


_register(IdentityRule(
    id="R-EULER", kind="transformation",
    description="degree-1 argument-preserving 2F1 transformation",
    applicable=_euler_applicable, sample=_euler_sample,
    lhs_value=_euler_lhs, rhs_value=_euler_rhs))


# -- Euler transformation at x = -1 as a gamma-quotient two-term relation ----

def _euler_m1_sample(rng: random.Random) -> RuleInput:
    def make():
        a, b = _rand_frac(rng), _rand_frac(rng)
        s = rng.choice([HALF, -HALF, Fraction(1, 4), -Fraction(1, 4),
                        Fraction(3, 4)])
        c = a + b + s
        pt = ParamPoint.of([a, b], [c])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_euler_m1_quotient(_gr(s))):
            return None
        return RuleInput(point=pt, x=_gr(-1))
    return _retry(rng, make)


def _euler_m1_quotient(s: GaussianRational) -> GammaQuotient:
    h = GaussianRational(HALF)
    return GammaQuotient.of([h, 1 + s], [h + s / 2, 1 + s / 2])


def _euler_m1_rhs(inp: RuleInput, pb: int) -> RhsResult:
    (a, b), (c,) = inp.point.alpha, inp.point.beta
    s = c - a - b
    gq = _euler_m1_quotient(s)
    new = SeriesSpec(ParamPoint((c - a, c - b), (c,)), _gr(-1))
    inner = eval_series(new, pb)
    gv = eval_gamma_quotient(gq, pb)
    val = gv * inner.value
    return RhsResult(value=val, gamma_quotient=gq, transformed=new)


_register(IdentityRule(
    id="R-EULER-M1", kind="transformation",
    description="Euler transformation at x=-1 with gamma-quotient factor",
    applicable=lambda inp: _euler_applicable(inp) and inp.x == _gr(-1),
    sample=_euler_m1_sample,
    lhs_value=_euler_lhs, rhs_value=_euler_m1_rhs))


# -- generalized Euler transformation on the symmetric-function variety ------

def _on_u(point: ParamPoint, tol_ok: bool = False) -> bool:
    cs = u_variety(point.r)
    if cs.membership(point):
        return True
    if tol_ok:
        return cs.membership_within(point, mp.mpf(2) ** -90)
    return False


def _gen_euler_applicable(inp: RuleInput) -> bool:
    if inp.point is None:
        return False
    return _on_u(inp.point, tol_ok=(inp.applicability == "tolerance"))


def _variety_case(rng: random.Random, rs=(1, 2, 3)) -> tuple[ParamPoint, str]:
    r = rng.choice(list(rs))
    if r == 1:
        a1, a2 = _rand_frac(rng), _rand_frac(rng)
        pt = ParamPoint.of([a1, a2], [a1 + a2])
        return pt, "exact"
    if r == 2:
        vp = sample_u2_rational(rng.getrandbits(48))
        return vp.point, vp.witness
    vp = sample_u_general(r, rng.getrandbits(48))
    return vp.point, vp.witness


def _u_point_usable(pt: ParamPoint) -> bool:
    if any(_npi(b + 1) for b in pt.beta):
        return False
    if any(a.is_zero() for a in pt.alpha):
        return False
    return True


def _gen_euler_sample(rng: random.Random) -> RuleInput:
    def make():
        pt, witness = _variety_case(rng)
        if not _u_point_usable(pt):
            return None
        x = rng.choice([Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4),
                        Fraction(3, 4)])
        return RuleInput(point=pt, x=_gr(x),
                         applicability="exact" if witness == "exact" else "tolerance")
    return _retry(rng, make)


def _shifted_spec(pt: ParamPoint, x, upper_shift=0) -> SeriesSpec:
    return SeriesSpec(ParamPoint(tuple(a + upper_shift for a in pt.alpha),
                                 tuple(b + 1 for b in pt.beta)), _gr(x))


def _gen_euler_lhs(inp, pb, tol, mt):
    return eval_series(_shifted_spec(inp.point, inp.x), pb, tol, mt)


def _gen_euler_rhs(inp: RuleInput, pb: int) -> RhsResult:
    new = _shifted_spec(inp.point, inp.x, upper_shift=1)
    inner = eval_series(new, pb)
    pref = GR1 - inp.x
    return RhsResult(value=inner.value * pref, rational_prefactor=pref,
                     transformed=new)


_register(IdentityRule(
    id="R-GEN-EULER", kind="transformation",
    description="two-term transformation on the symmetric-function variety",
    applicable=_gen_euler_applicable, sample=_gen_euler_sample,
    lhs_value=_gen_euler_lhs, rhs_value=_gen_euler_rhs))


# -- closed-form partial sums on the variety ---------------------------------

def _partial_sum_sample(rng: random.Random) -> RuleInput:
    def make():
        pt, witness = _variety_case(rng, rs=(1, 2))
        if not _u_point_usable(pt):
            return None
        n = rng.randint(0, 50)
        return RuleInput(point=pt, x=_gr(1), extras={"n": n},
                         applicability="exact" if witness == "exact" else "tolerance")
    return _retry(rng, make)


def _partial_sum_exact(inp: RuleInput) -> bool:
    pt = inp.point
    n = int(inp.extras["n"])
    shifted = ParamPoint(pt.alpha, tuple(b + 1 for b in pt.beta))
    lhs = partial_sum(shifted, 1, n)
    rhs = _rising_product(pt, n)
    return lhs == rhs


def _rising_product(pt: ParamPoint, n: int) -> GaussianRational:
    num = GaussianRational(1)
    for a in pt.alpha:
        num = num * rising_factorial(a + 1, n)
    den = rising_factorial(GaussianRational(1), n)
    for b in pt.beta:
        den = den * rising_factorial(b + 1, n)
    return num / den


def _partial_sum_lhs(inp, pb, tol, mt):
    pt = inp.point
    n = int(inp.extras["n"])
    shifted = ParamPoint(pt.alpha, tuple(b + 1 for b in pt.beta))
    val = partial_sum(shifted, 1, n)
    return EvalResult(value=val.to_apcomplex(pb), error_bound=mp.mpf(0),
                      terms_used=n + 1, method="exact-terminating", exact=val)


def _partial_sum_rhs(inp: RuleInput, pb: int) -> RhsResult:
    val = _rising_product(inp.point, int(inp.extras["n"]))
    return RhsResult(value=val.to_apcomplex(pb), rational_prefactor=val)


_register(IdentityRule(
    id="R-PARTIAL-SUM", kind="partial-sum",
    description="closed-form partial sums on the symmetric-function variety",
    applicable=_gen_euler_applicable, sample=_partial_sum_sample,
    lhs_value=_partial_sum_lhs, rhs_value=_partial_sum_rhs,
    exact_check=_partial_sum_exact))


# -- terminating sums on the variety (upper parameter a non-positive integer)

def _term_slater_sample(rng: random.Random) -> RuleInput:
    def make():
        n = rng.randint(1, 8)
        r = rng.choice([1, 2])
        if r == 1:
            b = _rand_frac(rng, 0, 4) + Fraction(1, 3)
            pt = ParamPoint.of([-n, b + n], [b])
        else:
            a2 = _rand_frac(rng, 1, 5)
            vp = sample_u2_rational(rng.getrandbits(48), alpha_fixed=(-n, a2))
            pt = vp.point
            if pt.alpha[0] != _gr(-n):
                return None
        if any(_npi(b + 1) for b in pt.beta):
            return None
        return RuleInput(point=pt, x=_gr(1), extras={"n": n})
    return _retry(rng, make)


def _term_slater_applicable(inp: RuleInput) -> bool:
    if not _gen_euler_applicable(inp):
        return False
    return terminating_index(inp.point) is not None


def _term_slater_exact(inp: RuleInput) -> bool:
    pt = inp.point
    n = terminating_index(pt)
    shifted = ParamPoint(pt.alpha, tuple(b + 1 for b in pt.beta))
    return partial_sum(shifted, 1, n) == _rising_product(pt, n)


def _term_slater_lhs(inp, pb, tol, mt):
    pt = inp.point
    shifted = ParamPoint(pt.alpha, tuple(b + 1 for b in pt.beta))
    return eval_series(SeriesSpec(shifted, _gr(1)), pb, tol, mt)


def _term_slater_rhs(inp: RuleInput, pb: int) -> RhsResult:
    val = _rising_product(inp.point, terminating_index(inp.point))
    return RhsResult(value=val.to_apcomplex(pb), rational_prefactor=val)


_register(IdentityRule(
    id="R-TERM-SLATER", kind="partial-sum",
    description="terminating balanced sums on the symmetric-function variety",
    applicable=_term_slater_applicable, sample=_term_slater_sample,
    lhs_value=_term_slater_lhs, rhs_value=_term_slater_rhs,
    exact_check=_term_slater_exact))


# -- the gamma-quotient summation on the variety ------------------------------

def _slater_quotient(pt: ParamPoint) -> GammaQuotient:
    return GammaQuotient.of([b + 1 for b in pt.beta],
                            [a + 1 for a in pt.alpha])


def _slater_sample(rng: random.Random) -> RuleInput:
    def make():
        pt, witness = _variety_case(rng)
        if not _u_point_usable(pt):
            return None
        if not _gq_ok(_slater_quotient(pt)):
            return None
        return RuleInput(point=pt, x=_gr(1),
                         applicability="exact" if witness == "exact" else "tolerance")
    return _retry(rng, make)


def _slater_lhs(inp, pb, tol, mt):
    return eval_series(_shifted_spec(inp.point, 1), pb, tol, mt)


_register(IdentityRule(
    id="R-SLATER", kind="summation",
    description="gamma-quotient summation on the symmetric-function variety",
    applicable=_gen_euler_applicable, sample=_slater_sample,
    lhs_value=_slater_lhs,
    rhs_value=_quotient_rhs(lambda inp: RhsValue(_slater_quotient(inp.point), GR1))))


# -- the gamma-extension: quotient times rational prefactor -------------------

def _on_u1(inp: RuleInput) -> bool:
    if inp.point is None:
        return False
    cs = u1_variety(inp.point.r)
    if cs.membership(inp.point):
        return True
    if inp.applicability == "tolerance":
        return cs.membership_within(inp.point, mp.mpf(2) ** -90)
    return False


def _slater_plus_prefactor(pt: ParamPoint) -> GaussianRational:
    r = pt.r
    sra = elementary_symmetric(pt.alpha, r)
    srb = elementary_symmetric(pt.beta, r)
    stop = elementary_symmetric(pt.alpha, r + 1)
    return (srb - sra) / (stop + srb)


def _slater_plus_sample(rng: random.Random) -> RuleInput:
    def make():
        r = rng.choice([1, 2])
        try:
            vp = sample_u1(r, rng.getrandbits(48))
        except Exception:
            return None
        pt = vp.point
        if not _u_point_usable(pt):
            return None
        if not _gq_ok(_slater_quotient(pt)):
            return None
        return RuleInput(point=pt, x=_gr(1), extras={"gamma": vp.gamma},
                         applicability="exact" if vp.witness == "exact" else "tolerance")
    return _retry(rng, make, tries=100)


_register(IdentityRule(
    id="R-SLATER-PLUS", kind="summation",
    description="summation on the gamma-extension variety",
    applicable=_on_u1, sample=_slater_plus_sample,
    lhs_value=_slater_lhs,
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _slater_quotient(inp.point), _slater_plus_prefactor(inp.point)))))


# -- two-term relation with an appended upper/lower pair ----------------------

def _appendage_sample(rng: random.Random) -> RuleInput:
    def make():
        pt, witness = _variety_case(rng)
        if not _u_point_usable(pt):
            return None
        A = _rand_frac(rng)
        B = A + HALF + _rand_frac(rng, 0, 2)
        if _npi(_gr(B)) or _npi(_gr(B) + 1) or B == 0:
            return None
        return RuleInput(point=pt, x=_gr(1), extras={"A": _gr(A), "B": _gr(B)},
                         applicability="exact" if witness == "exact" else "tolerance")
    return _retry(rng, make)


def _appendage_specs(inp: RuleInput) -> tuple[SeriesSpec, SeriesSpec, GaussianRational]:
    pt = inp.point
    A, B = inp.extras["A"], inp.extras["B"]
    lhs = SeriesSpec(ParamPoint(pt.alpha + (A,),
                                tuple(b + 1 for b in pt.beta) + (B,)), _gr(1))
    rhs = SeriesSpec(ParamPoint(tuple(a + 1 for a in pt.alpha) + (A,),
                                tuple(b + 1 for b in pt.beta) + (B + 1,)), _gr(1))
    return lhs, rhs, (B - A) / B


def _appendage_lhs(inp, pb, tol, mt):
    return eval_series(_appendage_specs(inp)[0], pb, tol, mt)


def _appendage_rhs(inp: RuleInput, pb: int) -> RhsResult:
    _, new, pref = _appendage_specs(inp)
    inner = eval_series(new, pb)
    return RhsResult(value=inner.value * pref, rational_prefactor=pref,
                     transformed=new)


_register(IdentityRule(
    id="R-BETA-APPENDAGE", kind="transformation",
    description="two-term relation with an appended upper/lower pair",
    applicable=_gen_euler_applicable, sample=_appendage_sample,
    lhs_value=_appendage_lhs, rhs_value=_appendage_rhs))


# -- classical summations ------------------------------------------------------

def _gauss_sample(rng: random.Random) -> RuleInput:
    def make():
        a, b = _rand_frac(rng), _rand_frac(rng)
        s = HALF + _rand_frac(rng, 0, 2)
        c = a + b + s
        pt = ParamPoint.of([a, b], [c])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_gauss_quotient(pt)):
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


def _gauss_quotient(pt: ParamPoint) -> GammaQuotient:
    (a, b), (c,) = pt.alpha, pt.beta
    return GammaQuotient.of([c, c - a - b], [c - a, c - b])


_register(IdentityRule(
    id="R-GAUSS", kind="summation",
    description="the 2F1(1) gamma-quotient evaluation",
    applicable=lambda inp: inp.point is not None and inp.point.r == 1
                           and _excess_ok(parametric_excess(inp.point), Fraction(0)),
    sample=_gauss_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(_gauss_quotient(inp.point), GR1))))


def _match_dixon(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        a, b, c = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        for (d, e) in itertools.permutations(pt.beta):
            if d == 1 + a - b and e == 1 + a - c:
                return a, b, c
    return None


def _dixon_quotient(abc) -> GammaQuotient:
    a, b, c = abc
    h = a / 2
    return GammaQuotient.of([1 + h, 1 + h - b - c, 1 + a - b, 1 + a - c],
                            [1 + a, 1 + a - b - c, 1 + h - b, 1 + h - c])


def _dixon_sample(rng: random.Random) -> RuleInput:
    def make():
        b, c = _rand_frac(rng, -1, 1), _rand_frac(rng, -1, 1)
        s = HALF + _rand_frac(rng, 0, 2)
        a = s - 2 + 2 * b + 2 * c
        pt = ParamPoint.of([a, b, c], [1 + a - b, 1 + a - c])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_dixon_quotient((_gr(a), _gr(b), _gr(c)))):
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


_register(IdentityRule(
    id="R-DIXON", kind="summation",
    description="well-poised 3F2(1) summation",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_dixon(inp.point) is not None,
    sample=_dixon_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _dixon_quotient(_match_dixon(inp.point)), GR1))))


def _match_watson(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        a, b, c = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        for (d, e) in itertools.permutations(pt.beta):
            if 2 * d == 1 + a + b and e == 2 * c:
                return a, b, c
    return None


def _watson_quotient(abc) -> GammaQuotient:
    a, b, c = abc
    h = GaussianRational(HALF)
    return GammaQuotient.of([h, h + c, h + a / 2 + b / 2, h - a / 2 - b / 2 + c],
                            [h + a / 2, h + b / 2, h - a / 2 + c, h - b / 2 + c])


def _watson_sample(rng: random.Random) -> RuleInput:
    def make():
        a, b = _rand_frac(rng, -1, 2), _rand_frac(rng, -1, 2)
        s = HALF + _rand_frac(rng, 0, 2)
        c = s - HALF + (a + b) / 2
        pt = ParamPoint.of([a, b, c], [(1 + a + b) / 2, 2 * c])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_watson_quotient((_gr(a), _gr(b), _gr(c)))):
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


_register(IdentityRule(
    id="R-WATSON", kind="summation",
    description="3F2(1) summation with halved upper-sum lower parameter",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_watson(inp.point) is not None,
    sample=_watson_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _watson_quotient(_match_watson(inp.point)), GR1))))


def _match_whipple(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        a, b, c = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        if a + b != GaussianRational(1):
            continue
        for (e, f) in itertools.permutations(pt.beta):
            if f == 1 + 2 * c - e:
                return a, c, e
    return None


def _whipple_quotient(ace) -> GammaQuotient:
    a, c, e = ace
    h = GaussianRational(HALF)
    return GammaQuotient.of(
        [e, 1 + 2 * c - e, h + a / 2 + e / 2, h - a / 2 + c - e / 2],
        [a + e, h + a / 2 + c - e / 2, h - a / 2 + e / 2, 1 - a + 2 * c - e])


def _whipple_sample(rng: random.Random) -> RuleInput:
    def make():
        a = _rand_frac(rng)
        c = HALF + _rand_frac(rng, 0, 2)
        e = _rand_frac(rng, -1, 2) + Fraction(1, 3)
        pt = ParamPoint.of([a, 1 - a, c], [e, 1 + 2 * c - e])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_whipple_quotient((_gr(a), _gr(c), _gr(e)))):
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


_register(IdentityRule(
    id="R-WHIPPLE", kind="summation",
    description="3F2(1) summation with unit-sum upper pair",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_whipple(inp.point) is not None,
    sample=_whipple_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _whipple_quotient(_match_whipple(inp.point)), GR1))))


def _match_ps(pt: ParamPoint):
    if parametric_excess(pt) != GaussianRational(1):
        return None
    for i in range(3):
        if _npi(pt.alpha[i]):
            n = -int(pt.alpha[i].re)
            rest = [pt.alpha[j] for j in range(3) if j != i]
            return n, rest[0], rest[1], pt.beta[0]
    return None


def _ps_quotient(nabc) -> GammaQuotient:
    n, a, b, c = nabc
    return GammaQuotient.of([c - a + n, c - b + n, c, c - a - b],
                            [c - a, c - b, c + n, c - a - b + n])


def _ps_sample(rng: random.Random) -> RuleInput:
    def make():
        n = rng.randint(1, 6)
        a, b = _rand_frac(rng, -2, 2, (2, 3, 4)), _rand_frac(rng, -2, 2, (2, 3, 4))
        c = _rand_frac(rng, -2, 2, (2, 3, 4))
        pt = ParamPoint.of([-n, a, b], [c, 1 + a + b - c - n])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_ps_quotient((n, _gr(a), _gr(b), _gr(c)))):
            return None
        return RuleInput(point=pt, x=_gr(1), extras={"n": n})
    return _retry(rng, make)


_register(IdentityRule(
    id="R-PS", kind="summation",
    description="terminating 1-balanced 3F2(1) summation",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_ps(inp.point) is not None,
    sample=_ps_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _ps_quotient(_match_ps(inp.point)), GR1))))


def _match_ps_companion(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        a, b, c = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        for (d, e) in itertools.permutations(pt.beta):
            diff = a - d
            if e == 1 + b and diff.is_integer() and diff.re >= 1:
                return int(diff.re), a, b, c
    return None


def _ps_companion_quotient(nabc) -> GammaQuotient:
    n, a, b, c = nabc
    return GammaQuotient.of([1 + b - a + n, 1 - a, 1 - c, 1 + b],
                            [1 + b - a, 1 - a + n, 1 + b - c])


def _ps_companion_sample(rng: random.Random) -> RuleInput:
    def make():
        n = rng.randint(1, 4)
        a = _rand_frac(rng, -2, 2, (2, 3, 4)) + Fraction(1, 5)
        b = _rand_frac(rng, -1, 2)
        s = HALF + _rand_frac(rng, 0, 1)
        c = 1 - n - s
        pt = ParamPoint.of([a, b, c], [a - n, 1 + b])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_ps_companion_quotient((n, _gr(a), _gr(b), _gr(c)))):
            return None
        return RuleInput(point=pt, x=_gr(1), extras={"n": n})
    return _retry(rng, make)


_register(IdentityRule(
    id="R-PS-COMPANION", kind="summation",
    description="companion 3F2(1) summation with integer-displaced lower",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_ps_companion(inp.point) is not None,
    sample=_ps_companion_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _ps_companion_quotient(_match_ps_companion(inp.point)), GR1))))


def _match_shukla(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        a, over, c = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        for (d, e) in itertools.permutations(pt.beta):
            if d == a / 2 and over == 1 + a / 2:
                return a, c, e
    return None


def _shukla_quotient(ace) -> GammaQuotient:
    a, c, e = ace
    return GammaQuotient.of([e, e - a - c - 1, e + c - a],
                            [e - a, e - c, e + c - a - 1])


def _shukla_sample(rng: random.Random) -> RuleInput:
    def make():
        a = _rand_frac(rng, -2, 2, (3, 4, 5))
        c = _rand_frac(rng, -2, 1)
        s = rng.choice([HALF, Fraction(3, 4), Fraction(5, 4), Fraction(7, 4)])
        e = a + c + 1 + s
        pt = ParamPoint.of([a, Fraction(a, 2) + 1, c], [Fraction(a, 2), e])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_shukla_quotient((_gr(a), _gr(c), _gr(e)))):
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


_register(IdentityRule(
    id="R-SHUKLA", kind="summation",
    description="3F2(1) summation with upper exceeding a lower by one",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_shukla(inp.point) is not None,
    sample=_shukla_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _shukla_quotient(_match_shukla(inp.point)), GR1))))


# -- the three quadratically constrained 3F2(1) summations --------------------

def _sl2a_applicable(inp: RuleInput) -> bool:
    if inp.point is None or inp.point.r != 2:
        return False
    (a, b, c), (d, e) = inp.point.alpha, inp.point.beta
    if d + e - a - b - c != GaussianRational(2):
        return False
    return a * b + b * c + c * a == (d - 1) * (e - 1)


def _sl2a_quotient(pt: ParamPoint) -> GammaQuotient:
    (a, b, c), (d, e) = pt.alpha, pt.beta
    return GammaQuotient.of([d, e], [a + 1, b + 1, c + 1])


def _sl2a_sample(rng: random.Random) -> RuleInput:
    def make():
        vp = sample_u2_rational(rng.getrandbits(48))
        pt = vp.point
        shifted = ParamPoint(pt.alpha, tuple(b + 1 for b in pt.beta))
        if not shifted.well_formed_lower():
            return None
        if not _gq_ok(_sl2a_quotient(shifted)):
            return None
        return RuleInput(point=shifted, x=_gr(1))
    return _retry(rng, make)


_register(IdentityRule(
    id="R-SL2A", kind="summation",
    description="2-balanced quadratically constrained 3F2(1) summation",
    applicable=_sl2a_applicable, sample=_sl2a_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(_sl2a_quotient(inp.point), GR1))))


def _match_sl2b(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        a, b, c = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        for (d, e) in itertools.permutations(pt.beta):
            if d != c + 2:
                continue
            if (a - 1) * (b - 1) == ((a - 1) + (b - 1) - (e - 1)) * c:
                return a, b, c, e
    return None


def _sl2b_quotient(abce) -> GammaQuotient:
    a, b, c, e = abce
    return GammaQuotient.of([e, e - a - b + 2, c + 2],
                            [e - a + 1, e - b + 1, c + 1])


def _sl2b_sample(rng: random.Random) -> RuleInput:
    def make():
        a, b = _rand_frac(rng, -2, 2), _rand_frac(rng, -2, 2)
        c = _rand_frac(rng, -2, 2, (2, 3))
        if c == 0 or a == 1 or b == 1:
            return None
        q = (a - 1) * (b - 1)
        e = 1 + (a - 1) + (b - 1) - q / c
        if 1 - q / c < HALF:        # convergence margin Re(e-a-b+2) >= 1/2
            return None
        pt = ParamPoint.of([a, b, c], [c + 2, e])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_sl2b_quotient((_gr(a), _gr(b), _gr(c), _gr(e)))):
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


_register(IdentityRule(
    id="R-SL2B", kind="summation",
    description="quadratically constrained 3F2(1) with lower = upper + 2",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_sl2b(inp.point) is not None,
    sample=_sl2b_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _sl2b_quotient(_match_sl2b(inp.point)), GR1))))


def _match_sl2c(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        a, b, two = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        if two != GaussianRational(2):
            continue
        d, e = pt.beta
        if (a - 1) * (b - 1) == (d - 2) * (e - 2):
            return a, b, d, e
    return None


def _sl2c_value(abde) -> GaussianRational:
    a, b, d, e = abde
    return (d - 1) * (e - 1) / (d + e - a - b - 2)


def _sl2c_sample(rng: random.Random) -> RuleInput:
    def make():
        a, b = _rand_frac(rng, -2, 2), _rand_frac(rng, -2, 2)
        d = _rand_frac(rng, -1, 3, (2, 3))
        if d == 2:
            return None
        e = 2 + (a - 1) * (b - 1) / (d - 2)
        s = d + e - a - b - 2
        if s < HALF:
            return None
        pt = ParamPoint.of([a, b, 2], [d, e])
        if not pt.well_formed_lower():
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


def _sl2c_rhs(inp: RuleInput, pb: int) -> RhsResult:
    val = _sl2c_value(_match_sl2c(inp.point))
    return RhsResult(value=val.to_apcomplex(pb), rational_prefactor=val)


_register(IdentityRule(
    id="R-SL2C", kind="summation",
    description="quadratically constrained 3F2(1) with rational value",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_sl2c(inp.point) is not None,
    sample=_sl2c_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_sl2c_rhs))


# -- two-parameter overlap specializations ------------------------------------

def _match_ovl1(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        big, b, c = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        if big != 2 * b + 2 * c:
            continue
        for (d, e) in itertools.permutations(pt.beta):
            if d == 1 + b + 2 * c and e == 1 + 2 * b + c:
                return b, c
    return None


def _ovl1_quotient(bc) -> GammaQuotient:
    b, c = bc
    return GammaQuotient.of([1 + b + 2 * c, 1 + 2 * b + c],
                            [1 + 2 * b + 2 * c, 1 + b, 1 + c])


def _ovl1_sample(rng: random.Random) -> RuleInput:
    def make():
        b, c = _rand_frac(rng, -1, 2), _rand_frac(rng, -1, 2)
        pt = ParamPoint.of([2 * b + 2 * c, b, c], [1 + b + 2 * c, 1 + 2 * b + c])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_ovl1_quotient((_gr(b), _gr(c)))):
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


_register(IdentityRule(
    id="R-OVL1", kind="summation",
    description="overlap of the well-poised and quadratic summations",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_ovl1(inp.point) is not None,
    sample=_ovl1_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _ovl1_quotient(_match_ovl1(inp.point)), GR1))))


def _match_ovl2(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        two, b, c = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        if two != GaussianRational(2):
            continue
        for (d, e) in itertools.permutations(pt.beta):
            if 2 * d == 3 + b and e == 2 * c:
                return b, c
    return None


def _ovl2_value(bc) -> GaussianRational:
    b, c = bc
    return (1 + b) * (1 - 2 * c) / (1 + b - 2 * c)


def _ovl2_sample(rng: random.Random) -> RuleInput:
    def make():
        b = _rand_frac(rng, -1, 2)
        s = HALF + _rand_frac(rng, 0, 2)
        c = s + HALF + Fraction(b, 2)
        if 1 + b - 2 * c == 0:
            return None
        pt = ParamPoint.of([2, b, c], [Fraction(3, 2) + Fraction(b, 2), 2 * c])
        if not pt.well_formed_lower():
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


def _ovl2_rhs(inp: RuleInput, pb: int) -> RhsResult:
    val = _ovl2_value(_match_ovl2(inp.point))
    return RhsResult(value=val.to_apcomplex(pb), rational_prefactor=val)


_register(IdentityRule(
    id="R-OVL2", kind="summation",
    description="rational overlap specialization with upper parameter 2",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_ovl2(inp.point) is not None,
    sample=_ovl2_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_ovl2_rhs))


def _match_ovl3(pt: ParamPoint):
    for (ia, ib, ic) in itertools.permutations(range(3)):
        a, one_minus, c = pt.alpha[ia], pt.alpha[ib], pt.alpha[ic]
        if one_minus != 1 - a:
            continue
        for (d, e) in itertools.permutations(pt.beta):
            if d == 2 + a and e == 2 * c - a - 1:
                return a, c
    return None


def _ovl3_quotient(ac) -> GammaQuotient:
    a, c = ac
    return GammaQuotient.of([2 * c - a - 1, c, 2 + a],
                            [c - a, 2 * c - 1, 1 + a])


def _ovl3_sample(rng: random.Random) -> RuleInput:
    def make():
        a = _rand_frac(rng)
        c = HALF + _rand_frac(rng, 0, 2)
        pt = ParamPoint.of([a, 1 - a, c], [2 + a, 2 * c - a - 1])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_ovl3_quotient((_gr(a), _gr(c)))):
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


_register(IdentityRule(
    id="R-OVL3", kind="summation",
    description="overlap of the unit-sum-pair and quadratic summations",
    applicable=lambda inp: inp.point is not None and inp.point.r == 2
                           and _match_ovl3(inp.point) is not None,
    sample=_ovl3_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _ovl3_quotient(_match_ovl3(inp.point)), GR1))))


# -- well-poised 2F1(-1) -------------------------------------------------------

def _match_kummer(pt: ParamPoint):
    (u1, u2), (c,) = pt.alpha, pt.beta
    for a, b in ((u1, u2), (u2, u1)):
        if c == 1 + a - b:
            return a, b
    return None


def _kummer_quotient(ab) -> GammaQuotient:
    a, b = ab
    return GammaQuotient.of([1 + a - b, 1 + a / 2], [1 + a, 1 + a / 2 - b])


def _kummer_sample(rng: random.Random) -> RuleInput:
    def make():
        a = _rand_frac(rng)
        b = _rand_frac(rng, -2, 0) + Fraction(3, 8)   # keep Re(1-2b) > -1/4
        pt = ParamPoint.of([a, b], [1 + a - b])
        if not pt.well_formed_lower():
            return None
        if not _gq_ok(_kummer_quotient((_gr(a), _gr(b)))):
            return None
        return RuleInput(point=pt, x=_gr(-1))
    return _retry(rng, make)


_register(IdentityRule(
    id="R-KUMMER", kind="summation",
    description="well-poised 2F1(-1) gamma-quotient evaluation",
    applicable=lambda inp: inp.point is not None and inp.point.r == 1
                           and _match_kummer(inp.point) is not None
                           and inp.x == _gr(-1),
    sample=_kummer_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(-1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(
        _kummer_quotient(_match_kummer(inp.point)), GR1))))


# -- the half-shift bridge from 3F2(1) to 2F1(-1) ------------------------------

def _bridge_applicable(inp: RuleInput) -> bool:
    if inp.point is None or inp.point.r != 2:
        return False
    try:
        whipple_bridge(F32Point.from_param_point(inp.point))
        return True
    except Exception:
        return False


def _bridge_sample(rng: random.Random) -> RuleInput:
    def make():
        alpha = _rand_frac(rng, -1, 1)
        beta = _rand_frac(rng, -1, 1)
        s3 = Fraction(1, 4) + _rand_frac(rng, 0, 2)
        gamma = (s3 + 2 * alpha + beta) / 2
        pt = ParamPoint.of([alpha, alpha + HALF, beta], [gamma, gamma + HALF])
        if not pt.well_formed_lower():
            return None
        f21_lower = 2 * gamma - beta
        if _npi(_gr(f21_lower)):
            return None
        if s3 - beta <= Fraction(-3, 4):     # 2F1(-1) convergence margin
            return None
        br = whipple_bridge(F32Point.from_param_point(pt))
        if not _gq_ok(br.gamma_factor):
            return None
        return RuleInput(point=pt, x=_gr(1))
    return _retry(rng, make)


def _bridge_lhs(inp, pb, tol, mt):
    br = whipple_bridge(F32Point.from_param_point(inp.point))
    spec = SeriesSpec(ParamPoint(br.f21_upper, (br.f21_lower,)), _gr(-1))
    return _euler_fallback_eval(spec, pb, tol, mt)


def _bridge_rhs(inp: RuleInput, pb: int) -> RhsResult:
    br = whipple_bridge(F32Point.from_param_point(inp.point))
    inner = eval_series(SeriesSpec(inp.point, _gr(1)), pb)
    gv = eval_gamma_quotient(br.gamma_factor, pb)
    return RhsResult(value=gv * inner.value, gamma_quotient=br.gamma_factor)


_register(IdentityRule(
    id="R-WHIPPLE-BRIDGE", kind="transformation",
    description="half-shift plane bridge from 3F2(1) to 2F1(-1)",
    applicable=_bridge_applicable, sample=_bridge_sample,
    lhs_value=_bridge_lhs, rhs_value=_bridge_rhs))


# -- the four 2F1(-1) evaluation lines ----------------------------------------

@dataclass(frozen=True)
class _LineRule:
    rule_id: str
    a_from_lower: Callable[[GaussianRational], GaussianRational]
    uppers: Callable[[GaussianRational], tuple]
    lower: Callable[[GaussianRational], GaussianRational]
    quotient: Callable[[GaussianRational], GammaQuotient]
    prefactor: Callable[[GaussianRational], GaussianRational]
    a_range: tuple[Fraction, Fraction]
    dens: tuple[int, ...]


def _line_match(lr: _LineRule, pt: ParamPoint):
    if pt.r != 1:
        return None
    a = lr.a_from_lower(pt.beta[0])
    want = lr.uppers(a)
    if set(pt.alpha) == set(want) or pt.alpha == want:
        return a
    return None


def _line_sample(lr: _LineRule):
    def sample(rng: random.Random) -> RuleInput:
        def make():
            lo, hi = lr.a_range
            d = rng.choice(list(lr.dens))
            a = Fraction(rng.randint(int(lo * d), int(hi * d)), d)
            ag = _gr(a)
            pt = ParamPoint(lr.uppers(ag), (lr.lower(ag),))
            if not pt.well_formed_lower():
                return None
            if not _gq_ok(lr.quotient(ag)) or lr.prefactor(ag).is_zero():
                return None
            s = parametric_excess(pt)
            if s.re <= Fraction(-3, 4):
                return None
            return RuleInput(point=pt, x=_gr(-1), extras={"a": ag})
        return _retry(rng, make)
    return sample


def _line_rhs(lr: _LineRule):
    def rhs(inp: RuleInput, pb: int) -> RhsResult:
        a = _line_match(lr, inp.point)
        rv = RhsValue(lr.quotient(a), lr.prefactor(a))
        val = rv.evaluate(pb)
        return RhsResult(value=val, gamma_quotient=rv.gamma_quotient,
                         rational_prefactor=rv.rational_prefactor)
    return rhs


def _register_line(lr: _LineRule, description: str):
    _register(IdentityRule(
        id=lr.rule_id, kind="summation", description=description,
        applicable=lambda inp, lr=lr: inp.point is not None
                                      and _line_match(lr, inp.point) is not None
                                      and inp.x == _gr(-1),
        sample=_line_sample(lr),
        lhs_value=lambda inp, pb, tol, mt: _euler_fallback_eval(
            SeriesSpec(inp.point, _gr(-1)), pb, tol, mt),
        rhs_value=_line_rhs(lr)))


_H = GaussianRational(HALF)

_register_line(_LineRule(
    rule_id="R-K1",
    a_from_lower=lambda c: (c - 1) * 3,
    uppers=lambda a: (a - 4, a * Fraction(2, 3) - 1),
    lower=lambda a: 1 + a / 3,
    quotient=lambda a: GammaQuotient.of(
        [_H, a / 3, 1 + a / 3, a * Fraction(2, 3) - Fraction(3, 2),
         a * Fraction(2, 3) - 2],
        [a / 2 - Fraction(3, 2), a / 6, _H + a / 6, 2 - a / 6,
         a * Fraction(4, 3) - 3]),
    prefactor=lambda a: GR1,
    a_range=(Fraction(-4), Fraction(5)), dens=(2, 3, 6)),
    "first 2F1(-1) line from the quadratic-lower-parameter family")

_register_line(_LineRule(
    rule_id="R-K1-SIMPLE",
    a_from_lower=lambda c: (c - 1) * 3,
    uppers=lambda a: (a - 4, a * Fraction(2, 3) - 1),
    lower=lambda a: 1 + a / 3,
    quotient=lambda a: GammaQuotient.of([1 + a / 3, a / 2 - 1],
                                        [a - 2, 2 - a / 6]),
    prefactor=lambda a: GaussianRational(Fraction(3, 4)),
    a_range=(Fraction(-4), Fraction(5)), dens=(2, 3, 6)),
    "duplication-simplified right side of the first 2F1(-1) line")

_register_line(_LineRule(
    rule_id="R-K2",
    a_from_lower=lambda c: (c * 4 + 1) / 3,
    uppers=lambda a: (a - GaussianRational(Fraction(3, 2)), a / 4 + Fraction(1, 4)),
    lower=lambda a: a * Fraction(3, 4) - Fraction(1, 4),
    quotient=lambda a: GammaQuotient.of(
        [_H, GaussianRational(Fraction(3, 2)), Fraction(3, 4) + a / 4, a / 2,
         a * Fraction(3, 4) - Fraction(1, 4)],
        [GaussianRational(Fraction(7, 8)), GaussianRational(Fraction(9, 8)), a,
         Fraction(1, 8) + a / 4, Fraction(3, 8) + a / 4]),
    prefactor=lambda a: GR1,
    a_range=(Fraction(-3), Fraction(7, 2)), dens=(2, 4, 5)),
    "second 2F1(-1) line")

_register_line(_LineRule(
    rule_id="R-K3",
    a_from_lower=lambda c: c * 4 / 3,
    uppers=lambda a: (a - _H, a / 4),
    lower=lambda a: a * Fraction(3, 4),
    quotient=lambda a: GammaQuotient.of(
        [_H, _H, _H + a / 4, _H + a / 2, a * Fraction(3, 4)],
        [GaussianRational(Fraction(3, 8)), GaussianRational(Fraction(5, 8)), a,
         Fraction(3, 8) + a / 4, Fraction(5, 8) + a / 4]),
    prefactor=lambda a: GR1,
    a_range=(Fraction(-3), Fraction(5, 2)), dens=(2, 3, 5)),
    "third 2F1(-1) line")

_register_line(_LineRule(
    rule_id="R-K4",
    a_from_lower=lambda c: c * 3,
    uppers=lambda a: (a + 2, a * Fraction(2, 3)),
    lower=lambda a: a / 3,
    quotient=lambda a: GammaQuotient.of(
        [_H, a / 3, 1 + a / 3, Fraction(3, 2) + a * Fraction(2, 3),
         2 + a * Fraction(2, 3)],
        [Fraction(3, 2) + a / 2, _H + a / 6, 1 + a / 6, -a / 6,
         2 + a * Fraction(4, 3)]),
    prefactor=lambda a: GR1,
    a_range=(Fraction(-4), Fraction(-1)), dens=(2, 3, 6)),
    "fourth 2F1(-1) line")


# -- the two nonlinearly constrained 2F1(-1) curves ---------------------------

def _nl1_match(pt: ParamPoint):
    if pt.r != 1 or pt.alpha[1] != GaussianRational(3):
        return None
    beta = pt.beta[0] - 3
    alpha = (beta + 3 - pt.alpha[0]) / 2
    d = alpha - beta
    if 2 * d * d - 3 * alpha + 4 * beta + 1 == GaussianRational(0):
        return alpha, beta
    return None


def _nl1_value(ab) -> GaussianRational:
    alpha, beta = ab
    return (beta + 1) * (beta + 2) / (2 * beta - 2 * alpha + 3) / 4


def _nl1_point(alpha, beta) -> ParamPoint:
    return ParamPoint((beta - 2 * alpha + 3, GaussianRational(3)), (beta + 3,))


def _nl1_sample(rng: random.Random) -> RuleInput:
    def make():
        t = _rand_frac(rng, -2, 3, (1, 2, 3, 4, 5))
        alpha = -2 * t * t + 4 * t - 1
        beta = -2 * t * t + 3 * t - 1
        ag, bg = _gr(alpha), _gr(beta)
        pt = _nl1_point(ag, bg)
        if not pt.well_formed_lower() or _npi(pt.beta[0] - pt.alpha[0]) \
                or _npi(pt.beta[0] - pt.alpha[1]):
            return None
        if (2 * bg - 2 * ag + 3).is_zero():
            return None
        return RuleInput(point=pt, x=_gr(-1), extras={"t": _gr(t)})
    return _retry(rng, make)


def _nl_rhs(value_fn, match_fn):
    def rhs(inp: RuleInput, pb: int) -> RhsResult:
        val = value_fn(match_fn(inp.point))
        return RhsResult(value=val.to_apcomplex(pb), rational_prefactor=val)
    return rhs


_register(IdentityRule(
    id="R-NL1", kind="summation",
    description="quadratically constrained 2F1(-1) with third upper 3",
    applicable=lambda inp: inp.point is not None
                           and _nl1_match(inp.point) is not None
                           and inp.x == _gr(-1),
    sample=_nl1_sample,
    lhs_value=lambda inp, pb, tol, mt: _euler_fallback_eval(
        SeriesSpec(inp.point, _gr(-1)), pb, tol, mt),
    rhs_value=_nl_rhs(_nl1_value, _nl1_match)))


def _nl2_match(pt: ParamPoint):
    if pt.r != 1 or pt.alpha[1] != GaussianRational(4):
        return None
    beta = pt.beta[0] - 4
    alpha = (beta + 4 - pt.alpha[0]) / 2
    d = alpha - beta
    if 2 * d * d - 3 * alpha + 6 * beta + 1 == GaussianRational(0):
        return alpha, beta
    return None


def _nl2_value(ab) -> GaussianRational:
    alpha, beta = ab
    den = (2 * beta - 2 * alpha + 4) * (2 * beta - 2 * alpha + 5)
    return (beta + 1) * (beta + 2) * (beta + 3) / den / 4


def _nl2_sample(rng: random.Random) -> RuleInput:
    def make():
        y = Fraction(rng.randint(2, 9), rng.choice([4, 5, 6]))
        if y * y <= Fraction(1, 12):
            return None
        t = GaussianRational(Fraction(2, 3), rng.choice([1, -1]) * y)
        alpha = -6 * t * t + 8 * t - GaussianRational(Fraction(3, 2))
        beta = -6 * t * t + 5 * t - 1
        pt = ParamPoint((beta - 2 * alpha + 4, GaussianRational(4)), (beta + 4,))
        den = (2 * beta - 2 * alpha + 4) * (2 * beta - 2 * alpha + 5)
        if den.is_zero() or not pt.well_formed_lower():
            return None
        s = parametric_excess(pt)
        if s.re <= Fraction(-11, 12):
            return None
        return RuleInput(point=pt, x=_gr(-1), extras={"t": t})
    return _retry(rng, make)


_register(IdentityRule(
    id="R-NL2", kind="summation",
    description="quadratically constrained 2F1(-1) with third upper 4",
    applicable=lambda inp: inp.point is not None
                           and _nl2_match(inp.point) is not None
                           and inp.x == _gr(-1),
    sample=_nl2_sample,
    lhs_value=lambda inp, pb, tol, mt: _euler_fallback_eval(
        SeriesSpec(inp.point, _gr(-1)), pb, tol, mt),
    rhs_value=_nl_rhs(_nl2_value, _nl2_match)))


# -- parametrized forms of the two curves -------------------------------------

def _u1_curve_point(t: GaussianRational) -> ParamPoint:
    return ParamPoint((2 * t * t - 5 * t + 4, GaussianRational(3)),
                      (-2 * t * t + 3 * t + 2,))


def _u1_curve_value(t: GaussianRational) -> GaussianRational:
    return -t * (2 * t * t - 3 * t - 1) / 4


def _u1_match(pt: ParamPoint) -> Optional[GaussianRational]:
    # a = 2t^2-5t+4, c = -2t^2+3t+2  =>  t = (a + c - 6)/(-2)
    if pt.r != 1 or pt.alpha[1] != GaussianRational(3):
        return None
    t = (pt.alpha[0] + pt.beta[0] - 6) / (-2)
    if _u1_curve_point(t) == pt:
        return t
    return None


def _u1_sample(rng: random.Random) -> RuleInput:
    def make():
        t = _rand_frac(rng, -2, 3, (1, 2, 3, 4, 5))
        if t == 0:
            return None
        tg = _gr(t)
        pt = _u1_curve_point(tg)
        if not pt.well_formed_lower():
            return None
        return RuleInput(point=pt, x=_gr(-1), extras={"t": tg})
    return _retry(rng, make)


_register(IdentityRule(
    id="R-U1", kind="summation",
    description="uniformized cubic-value 2F1(-1) evaluation",
    applicable=lambda inp: inp.point is not None
                           and _u1_match(inp.point) is not None
                           and inp.x == _gr(-1),
    sample=_u1_sample,
    lhs_value=lambda inp, pb, tol, mt: _euler_fallback_eval(
        SeriesSpec(inp.point, _gr(-1)), pb, tol, mt),
    rhs_value=_nl_rhs(lambda t: _u1_curve_value(t), _u1_match)))


def _u2_curve_point(t: GaussianRational) -> ParamPoint:
    return ParamPoint((6 * t * t - 11 * t + 6, GaussianRational(4)),
                      (-6 * t * t + 5 * t + 3,))


def _u2_curve_value(t: GaussianRational) -> GaussianRational:
    return -t * (6 * t + 1) * (6 * t * t - 5 * t - 2) / 24


def _u2_match(pt: ParamPoint) -> Optional[GaussianRational]:
    if pt.r != 1 or pt.alpha[1] != GaussianRational(4):
        return None
    t = (pt.alpha[0] + pt.beta[0] - 9) / (-6)
    if _u2_curve_point(t) == pt:
        return t
    return None


def _u2_sample(rng: random.Random) -> RuleInput:
    def make():
        y = Fraction(rng.randint(2, 9), rng.choice([4, 5, 6]))
        if y * y <= Fraction(1, 12):
            return None
        t = GaussianRational(Fraction(2, 3), rng.choice([1, -1]) * y)
        pt = _u2_curve_point(t)
        if not pt.well_formed_lower():
            return None
        s = parametric_excess(pt)
        if s.re <= Fraction(-11, 12):
            return None
        return RuleInput(point=pt, x=_gr(-1), extras={"t": t})
    return _retry(rng, make)


_register(IdentityRule(
    id="R-U2", kind="summation",
    description="uniformized quartic-value 2F1(-1) evaluation",
    applicable=lambda inp: inp.point is not None
                           and _u2_match(inp.point) is not None
                           and inp.x == _gr(-1),
    sample=_u2_sample,
    lhs_value=lambda inp, pb, tol, mt: _euler_fallback_eval(
        SeriesSpec(inp.point, _gr(-1)), pb, tol, mt),
    rhs_value=_nl_rhs(lambda t: _u2_curve_value(t), _u2_match)))


# -- the contiguous three-term relation (exact) --------------------------------

CONTIG_TRUNCATION = 16


def contiguous_residual(a, b, c, x, order: int = CONTIG_TRUNCATION) -> GaussianRational:
    """Truncated combination (c-b) F(a,b-1) + (2b-c-bx+ax) F(a,b) + b(x-1) F(a,b+1).

    The combination vanishes identically as a power series; its truncation
    through degree ``order`` is therefore exactly zero for any parameters.
    """
    a, b, c, x = (_gr(v) for v in (a, b, c, x))
    Sm = partial_sum(ParamPoint((a, b - 1), (c,)), x, order)
    S0 = partial_sum(ParamPoint((a, b), (c,)), x, order)
    S0x = partial_sum(ParamPoint((a, b), (c,)), x, order - 1)
    Sp = partial_sum(ParamPoint((a, b + 1), (c,)), x, order)
    Spx = partial_sum(ParamPoint((a, b + 1), (c,)), x, order - 1)
    return ((c - b) * Sm + (2 * b - c) * S0 + (a - b) * x * S0x
            - b * Sp + b * x * Spx)


def _contig_sample(rng: random.Random) -> RuleInput:
    def make():
        a = _rand_frac(rng, -3, 3, (1, 2, 3, 4, 5))
        b = _rand_frac(rng, -3, 3, (1, 2, 3, 4, 5))
        c = _rand_frac(rng, -3, 3, (2, 3, 4, 5))
        x = _rand_frac(rng, -2, 2, (2, 3, 4, 5, 7))
        if any((_gr(c) + k).is_zero() for k in range(CONTIG_TRUNCATION + 1)):
            return None
        return RuleInput(point=ParamPoint.of([a, b], [c]), x=_gr(x))
    return _retry(rng, make)


def _contig_exact(inp: RuleInput) -> bool:
    (a, b), (c,) = inp.point.alpha, inp.point.beta
    return contiguous_residual(a, b, c, inp.x).is_zero()


def _contig_lhs(inp, pb, tol, mt):
    val = contiguous_residual(*inp.point.alpha, inp.point.beta[0], inp.x)
    return EvalResult(value=val.to_apcomplex(pb), error_bound=mp.mpf(0),
                      terms_used=CONTIG_TRUNCATION, method="exact-terminating",
                      exact=val)


_register(IdentityRule(
    id="R-CONTIG-B", kind="contiguous",
    description="three-term contiguous relation in the second upper parameter",
    applicable=lambda inp: inp.point is not None and inp.point.r == 1
                           and inp.x is not None,
    sample=_contig_sample,
    lhs_value=_contig_lhs,
    rhs_value=lambda inp, pb: RhsResult(value=GaussianRational(0).to_apcomplex(pb),
                                        rational_prefactor=GaussianRational(0)),
    exact_check=_contig_exact))


# -- x-parametric two-term evaluations -----------------------------------------

def _xt2_point(t: GaussianRational, x: GaussianRational) -> ParamPoint:
    a = -t / x + 1 - 1 / x
    return ParamPoint((a, GaussianRational(2)), (1 - t,))


def _xt2_value(t: GaussianRational, x: GaussianRational) -> GaussianRational:
    return t / (x - 1)


def _xt2_match(pt: ParamPoint, x: GaussianRational):
    if pt.r != 1 or pt.alpha[1] != GaussianRational(2) or x.is_zero():
        return None
    t = 1 - pt.beta[0]
    if _xt2_point(t, x) == pt:
        return t
    return None


def _valid_terminating_mix(pt: ParamPoint) -> bool:
    """Reject lower poles that strike before an upper terminates the series."""
    lower_poles = [-int(b.re) for b in pt.beta if _npi(b)]
    if not lower_poles:
        return True
    n = terminating_index(pt)
    return n is not None and n <= min(lower_poles)


def _xt2_sample(rng: random.Random) -> RuleInput:
    def make():
        x = rng.choice([Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4),
                        Fraction(-3, 4), Fraction(3, 4), Fraction(-1)])
        t = _rand_frac(rng, -3, 3, (1, 2, 3, 4))
        if t == 0:
            return None
        tg, xg = _gr(t), _gr(x)
        pt = _xt2_point(tg, xg)
        if not _valid_terminating_mix(pt):
            return None
        if x == Fraction(-1):
            s = parametric_excess(pt)
            if terminating_index(pt) is None and s.re <= Fraction(-3, 4):
                return None
        return RuleInput(point=pt, x=xg, extras={"t": tg})
    return _retry(rng, make)


def _xt_lhs(inp, pb, tol, mt):
    return _euler_fallback_eval(SeriesSpec(inp.point, inp.x), pb, tol, mt)


_register(IdentityRule(
    id="R-XT2", kind="summation",
    description="x-parametric rational 2F1 evaluation with second upper 2",
    applicable=lambda inp: inp.point is not None and inp.x is not None
                           and _xt2_match(inp.point, inp.x) is not None,
    sample=_xt2_sample,
    lhs_value=_xt_lhs,
    rhs_value=lambda inp, pb: RhsResult(
        value=_xt2_value(_xt2_match(inp.point, inp.x), inp.x).to_apcomplex(pb),
        rational_prefactor=_xt2_value(_xt2_match(inp.point, inp.x), inp.x))))


def _xt3_point(t: GaussianRational, x: GaussianRational) -> ParamPoint:
    xi = 1 / x
    a = (1 - xi) * t * t + (3 * xi - 2) * t + 2 - 2 * xi
    c = (x - 1) * t * t + (2 - x) * t + 2
    return ParamPoint((a, GaussianRational(3)), (c,))


def _xt3_value(t: GaussianRational, x: GaussianRational) -> GaussianRational:
    return t * ((1 - x) * t * t + (x - 2) * t - 1) / (2 * (x - 1))


def _xt3_match(pt: ParamPoint, x: GaussianRational):
    if pt.r != 1 or pt.alpha[1] != GaussianRational(3) or x.is_zero():
        return None
    # a + x*c is linear in t: a + x c = (3 x^-1 - 2 + 2x - x^2 ...) solve directly
    # instead scan: t satisfies c = (x-1)t^2 + (2-x)t + 2 and a matches
    a, c = pt.alpha[0], pt.beta[0]
    # (x-1)t^2 + (2-x)t + (2-c) = 0; try both roots symbolically via the
    # linear combination a*x + c*1 trick: a*x = (x-1)t^2 + (3-2x)t + 2x - 2
    # so a*x - c = t(1 - x) + 2x - 4 + ... fall back to solving the quadratic.
    lin = a * x - c        # = t*(1) - ... derive: ax - c
    # ax = (x-1)t^2 + (3-2x)t + 2x-2  and c = (x-1)t^2 + (2-x)t + 2
    # ax - c = (1-x)t + 2x - 4  =>  t = (ax - c - 2x + 4)/(1-x)
    t = (lin - 2 * x + 4) / (1 - x)
    if _xt3_point(t, x) == pt:
        return t
    return None


def _xt3_sample(rng: random.Random) -> RuleInput:
    def make():
        x = rng.choice([Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4),
                        Fraction(-3, 4), Fraction(3, 4), Fraction(-1)])
        t = _rand_frac(rng, -3, 3, (1, 2, 3, 4))
        if t == 0:
            return None
        tg, xg = _gr(t), _gr(x)
        pt = _xt3_point(tg, xg)
        if not _valid_terminating_mix(pt):
            return None
        if x == Fraction(-1):
            s = parametric_excess(pt)
            if terminating_index(pt) is None and s.re <= Fraction(-3, 4):
                # the transformed series must then converge
                if (-s).re <= Fraction(-3, 4):
                    return None
        return RuleInput(point=pt, x=xg, extras={"t": tg})
    return _retry(rng, make)


_register(IdentityRule(
    id="R-XT3", kind="summation",
    description="x-parametric rational 2F1 evaluation with second upper 3",
    applicable=lambda inp: inp.point is not None and inp.x is not None
                           and _xt3_match(inp.point, inp.x) is not None,
    sample=_xt3_sample,
    lhs_value=_xt_lhs,
    rhs_value=lambda inp, pb: RhsResult(
        value=_xt3_value(_xt3_match(inp.point, inp.x), inp.x).to_apcomplex(pb),
        rational_prefactor=_xt3_value(_xt3_match(inp.point, inp.x), inp.x))))


# -- deliberately wrong probe (excluded from the default catalog) --------------

BAD_PROBE_ID = "R-BAD-PROBE"

_BAD_PROBE = IdentityRule(
    id=BAD_PROBE_ID, kind="summation",
    description="known-bad 2F1(1) variant used to exercise the failure path",
    applicable=lambda inp: inp.point is not None and inp.point.r == 1,
    sample=_gauss_sample,
    lhs_value=_series_lhs(lambda inp: SeriesSpec(inp.point, _gr(1))),
    rhs_value=_quotient_rhs(lambda inp: RhsValue(GammaQuotient.of(
        [inp.point.beta[0], inp.point.beta[0] - inp.point.alpha[0]
         - inp.point.alpha[1] + Fraction(1, 3)],
        [inp.point.beta[0] - inp.point.alpha[0],
         inp.point.beta[0] - inp.point.alpha[1]]), GR1)))


def get_rule_or_probe(rule_id: str) -> IdentityRule:
    if rule_id == BAD_PROBE_ID:
        return _BAD_PROBE
    return get_rule(rule_id)


# ----------------------------------------------------------------------------
# application and verification
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AppliedRule:
    rhs_value: ApComplex | ExactZero
    gamma_quotient: Optional[GammaQuotient]
    prefactor: GaussianRational
    transformed: Optional[SeriesSpec]


def apply_rule(rule_id: str, point: ParamPoint, argument=None,
               precision_bits: int = DEFAULT_PRECISION_BITS,
               **extras) -> AppliedRule:
    """Evaluate a rule's right side at an exactly-applicable point."""
    rule = get_rule_or_probe(rule_id)
    x = None if argument is None else GaussianRational.coerce(argument)
    if x is None and rule.id not in ("R-EULER", "R-CONTIG-B", "R-XT2", "R-XT3"):
        x = _default_argument(rule.id)
    inp = RuleInput(point=point, x=x, extras=extras)
    if not rule.applicable(inp):
        raise RuleNotApplicable(f"{rule_id} does not apply at {point}")
    rr = rule.rhs_value(inp, precision_bits)
    return AppliedRule(rhs_value=rr.value, gamma_quotient=rr.gamma_quotient,
                       prefactor=rr.rational_prefactor, transformed=rr.transformed)


def _default_argument(rule_id: str):
    if rule_id in ("R-KUMMER", "R-K1", "R-K2", "R-K3", "R-K4", "R-K1-SIMPLE",
                   "R-NL1", "R-NL2", "R-U1", "R-U2", "R-EULER-M1"):
        return _gr(-1)
    return _gr(1)


def verify_rule(rule_id: str, sampler=None, n_cases: int = 25, tol=None,
                seed: int = 0,
                precision_bits: int = DEFAULT_PRECISION_BITS,
                max_terms: int = 10 ** 6) -> list[VerificationCase]:
    """Run ``n_cases`` sampled checks of one rule, deterministically per seed."""
    rule = get_rule_or_probe(rule_id)
    if tol is None:
        tol = mp.mpf(2) ** -64
    tol = mp.mpf(tol)
    sampler = sampler or rule.sample
    cases = []
    for i in range(n_cases):
        cseed = _case_seed(seed, rule_id, i)
        rng = random.Random(cseed)
        inp = sampler(rng)
        cases.append(run_case(rule, inp, cseed, i, tol, precision_bits, max_terms))
    return cases


def run_case(rule: IdentityRule, inp: RuleInput, cseed: int, index: int, tol,
             precision_bits: int, max_terms: int = 10 ** 6) -> VerificationCase:
    zero = mp.mpf(0)
    if rule.exact_check is not None:
        ok = rule.exact_check(inp)
        lhs = rule.lhs_value(inp, precision_bits, tol, max_terms)
        rhs_res = rule.rhs_value(inp, precision_bits)
        rhs_ap = _rhs_to_ap(rhs_res.value, precision_bits)
        return VerificationCase(
            rule_id=rule.id, seed=cseed, case=index, input=inp, lhs=lhs,
            rhs=rhs_ap, abs_gap=zero if ok else mp.inf,
            rel_gap=zero if ok else mp.inf,
            verdict="pass" if ok else "fail", method="exact",
            precision_bits=precision_bits)
    try:
        lhs = rule.lhs_value(inp, precision_bits, tol / 8, max_terms)
        rhs_res = rule.rhs_value(inp, precision_bits)
    except DivergentSeries:
        return VerificationCase(rule_id=rule.id, seed=cseed, case=index,
                                input=inp, lhs=None, rhs=None, abs_gap=zero,
                                rel_gap=zero, verdict="skipped-divergent",
                                method="n/a", precision_bits=precision_bits)
    rhs_ap = _rhs_to_ap(rhs_res.value, precision_bits)
    with mp.workprec(precision_bits + 16):
        abs_gap = abs(lhs.value.value - rhs_ap.value)
        mag = abs(rhs_ap.value)
        rel_gap = abs_gap / mag if mag > 0 else mp.inf
        passed = rel_gap <= tol or abs_gap <= tol * max(1, mag)
    return VerificationCase(
        rule_id=rule.id, seed=cseed, case=index, input=inp, lhs=lhs,
        rhs=rhs_ap, abs_gap=abs_gap, rel_gap=rel_gap,
        verdict="pass" if passed else "fail", method=lhs.method,
        precision_bits=precision_bits)


def _rhs_to_ap(value, precision_bits: int) -> ApComplex:
    if isinstance(value, ExactZero):
        return ApComplex(mp.mpc(0), precision_bits)
    return value


# ----------------------------------------------------------------------------
# the 2F1(-1) derivation chain and the uniformized-curve front end
# ----------------------------------------------------------------------------

def kummer_derivation_chain(a, b, precision_bits: int = DEFAULT_PRECISION_BITS,
                            tol=None) -> dict:
    """Four routes to the well-poised 2F1(-1) value; all must agree.

    Returns the series value, the bridge image, the bridge image with the
    well-poised 3F2(1) summed in closed form, and the one-line quotient.
    """
    if tol is None:
        tol = mp.mpf(2) ** -64
    a, b = _gr(a), _gr(b)
    pt = ParamPoint((a, b), (1 + a - b,))
    v1 = _euler_fallback_eval(SeriesSpec(pt, _gr(-1)), precision_bits, tol, 10 ** 6)
    bridge_gq = GammaQuotient.of([1 + 2 * a - 2 * b, 1 + a - b],
                                 [1 + a - 2 * b, 1 + 2 * a - b])
    f32 = ParamPoint((b / 2, (1 + b) / 2, a),
                     ((1 + 2 * a - b) / 2, 1 + a - b / 2))
    inner = eval_series(SeriesSpec(f32, _gr(1)), precision_bits, tol, 10 ** 6)
    gv = eval_gamma_quotient(bridge_gq, precision_bits)
    v2 = gv * inner.value
    dixon_gq = _dixon_quotient((a, b / 2, (1 + b) / 2))
    v3 = gv * eval_gamma_quotient(dixon_gq, precision_bits)
    v4 = eval_gamma_quotient(_kummer_quotient((a, b)), precision_bits)
    values = [v1.value, v2, v3, v4]
    with mp.workprec(precision_bits + 16):
        gaps = [abs(values[i].value - values[j].value)
                for i in range(4) for j in range(i + 1, 4)]
        worst = max(gaps)
    return {"series": v1.value, "bridge": v2, "bridge+wellpoised": v3,
            "quotient": v4, "max_gap": worst}


def uniformized_curves(b: int, x, t) -> tuple[str, RuleInput]:
    """Build the x-parametric (or x=-1 quartic) identity instance at (t, x).

    Degenerate parameter draws (a lower-parameter pole before termination,
    or t = 0) are rejected with UnsupportedCase, matching the samplers.
    """
    x, t = _gr(x), _gr(t)
    if b == 2 or b == 3:
        if x == GR1 or x.is_zero():
            raise UnsupportedCase("argument must be nonzero and not 1")
        if t.is_zero():
            raise UnsupportedCase("t = 0 is degenerate")
        pt = _xt2_point(t, x) if b == 2 else _xt3_point(t, x)
        if not _valid_terminating_mix(pt):
            raise UnsupportedCase(f"lower-parameter pole at t={t}, x={x}")
        return ("R-XT2" if b == 2 else "R-XT3",
                RuleInput(point=pt, x=x, extras={"t": t}))
    if b == 4:
        if x != _gr(-1):
            raise UnsupportedCase("the quartic curve is uniformized only at x=-1")
        pt = _u2_curve_point(t)
        if not pt.well_formed_lower():
            raise UnsupportedCase(f"lower-parameter pole at t={t}")
        return "R-U2", RuleInput(point=pt, x=_gr(-1), extras={"t": t})
    raise UnsupportedCase(f"unsupported second upper parameter {b}")
