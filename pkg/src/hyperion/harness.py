"""Batch verification driver: runs the catalog, orbit assertions, and the
gamma self-tests under one deterministic configuration."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath as mp

from .errors import HyperionError, PoleError
from .identities import (BAD_PROBE_ID, VerificationCase, get_rule_or_probe,
                         rule_catalog, run_case, _case_seed)
from .scalars import (DEFAULT_PRECISION_BITS, GaussianRational,
                      check_duplication, check_reflection)
from .thomae import NAMED_SETS, enumerate_orbit

#: expected orbit class counts; the last entry is measured, not literature
ORBIT_EXPECTATIONS = {"dixon": 3, "ps": 5, "slater": 3, "whipple-2f1": 6,
                      "shukla": 10}


def parse_tolerance(text: str) -> mp.mpf:
    """Accept "2^-64" power-of-two strings or plain decimal literals."""
    text = text.strip()
    if text.startswith("2^"):
        return mp.mpf(2) ** int(text[2:])
    return mp.mpf(text)


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION_BITS
    tol: str = "2^-64"
    max_terms: int = 10 ** 6
    seed: int = 0
    rules: Optional[tuple[str, ...]] = None
    cases_per_rule: int = 25
    check_orbits: bool = True
    check_scalars: bool = True

    def tol_value(self) -> mp.mpf:
        return parse_tolerance(self.tol)

    def to_json(self) -> dict:
        return {"precision_bits": self.precision_bits, "tol": self.tol,
                "max_terms": self.max_terms, "seed": self.seed,
                "rules": list(self.rules) if self.rules else None,
                "cases_per_rule": self.cases_per_rule,
                "check_orbits": self.check_orbits,
                "check_scalars": self.check_scalars}


@dataclass
class Report:
    config: RunConfig
    cases: list[VerificationCase] = field(default_factory=list)
    orbit_counts: dict = field(default_factory=dict)
    scalar_residuals: dict = field(default_factory=dict)
    errors: list[dict] = field(default_factory=list)

    def summary(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped-divergent": 0}
        for c in self.cases:
            out[c.verdict] = out.get(c.verdict, 0) + 1
        for label, got in self.orbit_counts.items():
            expected = ORBIT_EXPECTATIONS.get(label)
            out["pass" if expected in (None, got) else "fail"] += 1
        for label, residual in self.scalar_residuals.items():
            bound = mp.mpf(2) ** (16 - self.config.precision_bits)
            out["pass" if mp.mpf(residual) < bound else "fail"] += 1
        out["fail"] += len(self.errors)
        return out

    def case_lines(self) -> list[str]:
        return [json.dumps(c.to_json(), sort_keys=True) for c in self.cases]

    def to_json(self) -> dict:
        return {"config": self.config.to_json(),
                "cases": [c.to_json() for c in self.cases],
                "orbit_counts": self.orbit_counts,
                "orbit_expected": {k: v for k, v in ORBIT_EXPECTATIONS.items()
                                   if k in self.orbit_counts},
                "scalar_residuals": self.scalar_residuals,
                "errors": self.errors,
                "summary": self.summary()}

    def table(self) -> str:
        lines = []
        per_rule: dict[str, dict] = {}
        for c in self.cases:
            d = per_rule.setdefault(c.rule_id,
                                    {"pass": 0, "fail": 0,
                                     "skipped-divergent": 0,
                                     "worst": mp.mpf(0)})
            d[c.verdict] += 1
            if c.verdict == "pass" and mp.isfinite(c.rel_gap):
                d["worst"] = max(d["worst"], c.rel_gap)
        lines.append(f"{'rule':20s} {'pass':>5s} {'fail':>5s} {'skip':>5s} {'worst rel gap':>14s}")
        for rid, d in per_rule.items():
            lines.append(f"{rid:20s} {d['pass']:5d} {d['fail']:5d} "
                         f"{d['skipped-divergent']:5d} {mp.nstr(d['worst'], 3):>14s}")
        for label, got in self.orbit_counts.items():
            want = ORBIT_EXPECTATIONS.get(label, got)
            mark = "ok" if got == want else f"EXPECTED {want}"
            lines.append(f"orbit {label:14s} classes={got} {mark}")
        for label, residual in self.scalar_residuals.items():
            lines.append(f"selfcheck {label:11s} max residual {residual}")
        for err in self.errors:
            lines.append(f"ERROR {err['rule_id']}: {err['error']}")
        s = self.summary()
        lines.append(f"summary: pass={s['pass']} fail={s['fail']} "
                     f"skipped-divergent={s['skipped-divergent']}")
        return "\n".join(lines)


def scalar_selfchecks(precision_bits: int, seed: int = 0,
                      n_points: int = 100) -> dict:
    """Max duplication/reflection residuals over a deterministic sample."""
    rng = random.Random(_case_seed(seed, "selfcheck", 0))
    worst_dup = mp.mpf(0)
    worst_ref = mp.mpf(0)
    count = 0
    while count < n_points:
        z = Fraction(rng.randint(-40, 80), rng.choice([2, 3, 4, 5, 7, 8]))
        zg = GaussianRational(z)
        try:
            worst_dup = max(worst_dup, check_duplication(zg, precision_bits))
            worst_ref = max(worst_ref, check_reflection(zg, precision_bits))
        except PoleError:
            continue
        count += 1
    return {"duplication": mp.nstr(worst_dup, 5),
            "reflection": mp.nstr(worst_ref, 5)}


def run_suite(config: RunConfig) -> Report:
    """Execute the selected rules plus structural checks; never aborts."""
    report = Report(config=config)
    tol = config.tol_value()
    selected = list(config.rules) if config.rules else \
        [r.id for r in rule_catalog()]
    for rid in selected:
        try:
            rule = get_rule_or_probe(rid)
        except KeyError as exc:
            report.errors.append({"rule_id": rid, "error": str(exc)})
            continue
        for i in range(config.cases_per_rule):
            cseed = _case_seed(config.seed, rid, i)
            rng = random.Random(cseed)
            try:
                inp = rule.sample(rng)
                case = run_case(rule, inp, cseed, i, tol,
                                config.precision_bits, config.max_terms)
            except HyperionError as exc:
                report.errors.append({"rule_id": rid, "case": i,
                                      "error": f"{type(exc).__name__}: {exc}"})
                continue
            report.cases.append(case)
    if config.check_orbits:
        for label in ORBIT_EXPECTATIONS:
            cs = NAMED_SETS[label]()
            report.orbit_counts[label] = len(enumerate_orbit(cs))
    if config.check_scalars:
        report.scalar_residuals = scalar_selfchecks(config.precision_bits,
                                                    config.seed)
    return report
