"""Suite evaluation, counterexample search and audit reports."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Sequence, Union

from . import bounds
from .bounds import BoundId, Case, HypothesisError, Verdict, proof_chain_audit, verdict
from .expr import DomainError, to_string
from .propositions import PROPOSITIONS, PropCase, prop_crosscheck, prop_verdict
from .quadrature import QuadConfig, QuadratureError

GRID_A = (0.5, 1.0, 2.0)
GRID_DELTA = (0.5, 1.0, 2.0, 5.0)
GRID_P = (1.1, 1.5, 2.0, 3.0, 5.0, 10.0)
GRID_N = (2, 3, 4)
DEFAULT_FAMILY = ("x^2", "x^3", "x^4", "exp(x)", "1/x", "x*ln(x)", "abs(x-1)^2")
# the worked instance every section of the audit refers back to
SPOT_CASE = ("x^2", 0.0, 1.0)

FAMILIES = {
    "monomials": tuple(f"x^{n}" for n in range(2, 9)),
    "exp": tuple(f"exp({c:g}*x)" for c in (0.1, 0.5, 1.0, 2.0, 3.0)),
    "reciprocal": ("1/x",),
    "xlnx": ("x*ln(x)",),
}

CLAIM_ERRORS = (HypothesisError, DomainError, QuadratureError, ValueError, ZeroDivisionError,
                OverflowError)

Claim = Union[BoundId, str]
AnyCase = Union[Case, PropCase]

VERDICT_FIELDS = tuple(f.name for f in fields(Verdict))


def normalize_claim(claim: Claim) -> str:
    text = str(claim)
    if text.upper() in PROPOSITIONS:
        return text.upper()
    return BoundId(text.upper().replace("-", "_")).value


def is_sound(claim: str) -> bool:
    return claim in {b.value for b in bounds.SOUND_BOUNDS}


# --------------------------------------------------------------------------
# report

@dataclass
class ClaimSummary:
    cases: int = 0
    holds: int = 0
    violations: int = 0
    max_margin: float | None = None
    argmax: int | None = None  # index into the report's verdict list


@dataclass
class AuditReport:
    verdicts: list[Verdict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    errors: list[dict] = field(default_factory=list)
    findings: dict = field(default_factory=dict)
    summary: dict[str, ClaimSummary] = field(default_factory=dict)
    worst_violation: Verdict | None = None

    def __post_init__(self):
        if not self.summary and self.verdicts:
            self.summary, self.worst_violation = summarize(self.verdicts)

    @property
    def sound_violations(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.holds and is_sound(v.claim)]

    def to_dict(self) -> dict:
        return {
            "meta": self.meta,
            "verdicts": [asdict(v) for v in self.verdicts],
            "summary": {k: asdict(s) for k, s in self.summary.items()},
            "worst_violation": asdict(self.worst_violation) if self.worst_violation else None,
            "errors": self.errors,
            "findings": self.findings,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AuditReport":
        worst = data.get("worst_violation")
        return cls(
            verdicts=[Verdict(**v) for v in data.get("verdicts", [])],
            meta=dict(data.get("meta", {})),
            errors=list(data.get("errors", [])),
            findings=dict(data.get("findings", {})),
            summary={k: ClaimSummary(**s) for k, s in data.get("summary", {}).items()},
            worst_violation=Verdict(**worst) if worst else None,
        )

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "AuditReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        return verdicts_to_csv(self.verdicts)


def summarize(verdicts: Sequence[Verdict]) -> tuple[dict[str, ClaimSummary], Verdict | None]:
    summary: dict[str, ClaimSummary] = {}
    worst: Verdict | None = None
    for i, v in enumerate(verdicts):
        s = summary.setdefault(v.claim, ClaimSummary())
        s.cases += 1
        if v.holds:
            s.holds += 1
        else:
            s.violations += 1
            if worst is None or v.margin > worst.margin:
                worst = v
        if s.max_margin is None or v.margin > s.max_margin:
            s.max_margin, s.argmax = v.margin, i
    return summary, worst


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def verdicts_to_csv(verdicts: Iterable[Verdict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(VERDICT_FIELDS)
    for v in verdicts:
        writer.writerow([_csv_cell(getattr(v, name)) for name in VERDICT_FIELDS])
    return buf.getvalue()


def verdicts_from_csv(text: str) -> list[Verdict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    out = []
    for row in rows:
        out.append(Verdict(
            claim=row["claim"], f=row["f"], a=float(row["a"]), b=float(row["b"]),
            p=float(row["p"]), n=int(row["n"]) if row["n"] else None,
            lhs=float(row["lhs"]), rhs=float(row["rhs"]), margin=float(row["margin"]),
            holds=row["holds"] == "true", slack=float(row["slack"]),
            quad_error=float(row["quad_error"]),
        ))
    return out


# --------------------------------------------------------------------------
# suites

def evaluate_claim(claim: Claim, case: AnyCase, cfg: QuadConfig | None = None,
                   double_check: bool = True) -> Verdict:
    """One verdict; apparent violations are recomputed at 10x tighter tolerance."""
    cfg = cfg or QuadConfig()
    claim = normalize_claim(claim)

    def run(c: QuadConfig) -> Verdict:
        if claim in PROPOSITIONS:
            if not isinstance(case, PropCase) or case.prop != claim:
                raise ValueError(f"{claim} needs a matching PropCase")
            return prop_verdict(case, c)
        if not isinstance(case, Case):
            raise ValueError(f"{claim} needs a Case")
        return verdict(claim, case, c)

    result = run(cfg)
    if double_check and not result.holds:
        result = run(cfg.tighter(10.0))
    return result


def _case_key(case: AnyCase) -> dict:
    if isinstance(case, PropCase):
        return {"f": case.function, "a": case.a, "b": case.b, "p": case.p, "n": case.n}
    return {"f": to_string(case.f), "a": case.a, "b": case.b, "p": case.p, "n": None}


def run_suite(claims: Sequence[Claim], cases: Sequence[AnyCase] | dict,
              cfg: QuadConfig | None = None, seed: int = 0, suite: str = "custom") -> AuditReport:
    """Evaluate every claim on its cases, in a stable order.

    `cases` is either one list shared by all claims, or a mapping from claim
    to its own case list. Failures are recorded in ``report.errors``.
    """
    cfg = cfg or QuadConfig()
    verdicts: list[Verdict] = []
    errors: list[dict] = []
    for claim in claims:
        name = normalize_claim(claim)
        claim_cases = cases.get(name, []) if isinstance(cases, dict) else cases
        for case in claim_cases:
            try:
                verdicts.append(evaluate_claim(name, case, cfg))
            except CLAIM_ERRORS as exc:
                errors.append({"claim": name, **_case_key(case),
                               "error": f"{type(exc).__name__}: {exc}"})
    meta = {"seed": seed, "suite": suite,
            "tolerances": {"abs_tol": cfg.abs_tol, "rel_tol": cfg.rel_tol,
                           "max_evals": cfg.max_evals, "slack": bounds.ABS_SLACK},
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
    return AuditReport(verdicts=verdicts, meta=meta, errors=errors)


def _bound_cases(family, a_values, deltas, p_values, extra=()) -> list[Case]:
    out = []
    for f, a, d, p in itertools.product(family, a_values, deltas, p_values):
        try:
            out.append(Case(f, a, a + d, p))
        except CLAIM_ERRORS:
            continue
    for f, a, b in extra:
        for p in p_values:
            out.append(Case(f, a, b, p))
    return out


def _dedupe_fixed_p(cases: Sequence[Case], p: float) -> list[Case]:
    seen, out = set(), []
    for c in cases:
        key = (c.f, c.a, c.b)
        if key not in seen:
            seen.add(key)
            out.append(c.with_p(p))
    return out


def _prop_cases(a_values, deltas, p_values, n_values) -> dict[str, list[PropCase]]:
    out: dict[str, list[PropCase]] = {}
    for prop in PROPOSITIONS:
        ns = n_values if prop in ("P1", "P2", "P3") else (None,)
        out[prop] = [PropCase(prop, a, a + d, p, n)
                     for n, a, d, p in itertools.product(ns, a_values, deltas, p_values)]
    return out


def suite_cases(name: str) -> tuple[list[str], dict[str, list[AnyCase]]]:
    """Claims and per-claim cases for a named suite."""
    if name == "default":
        family, a_vals, deltas, ps, ns = DEFAULT_FAMILY, GRID_A, GRID_DELTA, GRID_P, GRID_N
    elif name == "quick":
        family, a_vals, deltas, ps, ns = ("x^2", "exp(x)", "1/x"), (1.0,), (1.0,), (1.1, 2.0), (2,)
    else:
        raise KeyError(name)
    base = _bound_cases(family, a_vals, deltas, ps, extra=[SPOT_CASE])
    per_claim: dict[str, list[AnyCase]] = {}
    for bound in BoundId:
        if bound.fixed_p is not None:
            per_claim[bound.value] = _dedupe_fixed_p(base, bound.fixed_p)
        else:
            per_claim[bound.value] = list(base)
    per_claim.update(_prop_cases(a_vals, deltas, ps, ns))
    claims = [b.value for b in BoundId] + list(PROPOSITIONS)
    return claims, per_claim


SUITES = ("default", "quick")


def run_named_suite(name: str, cfg: QuadConfig | None = None, seed: int = 0) -> AuditReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    cfg = cfg or QuadConfig()
    claims, per_claim = suite_cases(name)
    report = run_suite(claims, per_claim, cfg, seed=seed, suite=name)
    report.findings = collect_findings(report, per_claim, cfg)
    return report


def collect_findings(report: AuditReport, per_claim: dict, cfg: QuadConfig) -> dict:
    """Paper-level observations that are not single verdicts."""
    findings: dict = {}
    stated = {(v.f, v.a, v.b): v.rhs for v in report.verdicts if v.claim == "C2_STATED"}
    ratios = [stated[(v.f, v.a, v.b)] / v.rhs for v in report.verdicts
              if v.claim == "C2_DERIVED" and (v.f, v.a, v.b) in stated and v.rhs != 0.0]
    findings["c2_constant_ratio"] = {
        "stated_constant": bounds.C2_STATED_CONSTANT,
        "derived_constant": bounds.C2_DERIVED_CONSTANT,
        "ratio": bounds.C2_STATED_CONSTANT / bounds.C2_DERIVED_CONSTANT,
        "observed_ratio_min": min(ratios) if ratios else None,
        "observed_ratio_max": max(ratios) if ratios else None,
    }

    derived = {(v.f, v.a, v.b, v.p): v.rhs for v in report.verdicts if v.claim == "T3_DERIVED"}
    t3 = []
    for case in per_claim.get("T3_STATED", []):
        key = (to_string(case.f), case.a, case.b, case.p)
        stated_v = next((v for v in report.verdicts
                         if v.claim == "T3_STATED" and (v.f, v.a, v.b, v.p) == key), None)
        if stated_v is None or key not in derived or derived[key] == 0.0:
            continue
        t3.append({"f": key[0], "a": key[1], "b": key[2], "p": key[3],
                   "ratio": stated_v.rhs / derived[key],
                   "closed_form": bounds.t3_constant_ratio(case)})
    findings["t3_stated_vs_derived"] = t3

    spot = Case(*SPOT_CASE, 2.0)
    chains = {}
    for theorem in (BoundId.T1, BoundId.T2, BoundId.T3_STATED):
        links = proof_chain_audit(theorem, spot, cfg)
        failure = bounds.first_failure(links)
        chains[theorem.value] = {"case": _case_key(spot),
                                 "links": [asdict(link) for link in links],
                                 "first_failure": failure.step if failure else None}
    findings["proof_chains"] = chains

    cross = []
    for prop in PROPOSITIONS:
        for case in per_claim.get(prop, [])[:6]:
            try:
                cc = prop_crosscheck(case, cfg)
            except CLAIM_ERRORS:
                continue
            cross.append({"prop": prop, **_case_key(case), **asdict(cc)})
    findings["proposition_crosschecks"] = cross
    return findings


# --------------------------------------------------------------------------
# counterexample search

@dataclass(frozen=True)
class SearchSpec:
    claim: str
    family: str = "monomials"
    a_range: tuple[float, float] | None = None
    delta_range: tuple[float, float] = (0.5, 5.0)
    p_range: tuple[float, float] = (1.1, 10.0)
    budget: int = 10_000
    rounds: int = 8
    seed: int = 0
    grid_points: int = 4

    def members(self) -> tuple:
        claim = normalize_claim(self.claim)
        if claim in ("P1", "P2", "P3"):
            return tuple(range(2, 9))
        if claim in PROPOSITIONS:
            return (None,)
        return FAMILIES.get(self.family, (self.family,))

    def box(self) -> list[tuple[float, float]]:
        claim = normalize_claim(self.claim)
        a_range = self.a_range
        if a_range is None:
            positive = claim in PROPOSITIONS or self.family in ("reciprocal", "xlnx")
            a_range = (0.1, 2.0) if positive else (0.0, 2.0)
        p_range = self.p_range
        if claim not in PROPOSITIONS and BoundId(claim).fixed_p is not None:
            p_range = (BoundId(claim).fixed_p,) * 2
        return [tuple(map(float, a_range)), tuple(map(float, self.delta_range)),
                tuple(map(float, p_range))]

    def grid_size(self) -> int:
        axes = [1 if lo == hi else self.grid_points for lo, hi in self.box()]
        return len(self.members()) * math.prod(axes)


@dataclass
class SearchResult:
    best_case: dict | None
    best_margin: float | None
    evaluations: int
    trace: list[float]

    @property
    def violated(self) -> bool:
        return self.best_margin is not None and self.best_margin > bounds.ABS_SLACK


def _margin(claim: str, member, a: float, b: float, p: float, cfg: QuadConfig) -> float | None:
    try:
        if claim in PROPOSITIONS:
            case = PropCase(claim, a, b, p, member)
        else:
            case = Case(member, a, b, p)
        return evaluate_claim(claim, case, cfg, double_check=False).margin
    except CLAIM_ERRORS:
        return None


def search(spec: SearchSpec, cfg: QuadConfig | None = None) -> SearchResult:
    """Grid sweep over the box, then coordinate refinement around the best point.

    The step on each axis starts at the grid spacing and halves every round;
    only improving moves are accepted, so the best margin never decreases.
    """
    cfg = cfg or QuadConfig()
    claim = normalize_claim(spec.claim)
    box = spec.box()
    for lo, hi in box:
        if hi < lo:
            raise ValueError(f"empty search range ({lo}, {hi})")
    if spec.grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    if spec.budget < spec.grid_size():
        raise ValueError(f"budget {spec.budget} is below the grid size {spec.grid_size()}")
    rng = random.Random(spec.seed)
    members = spec.members()
    axes = [[lo] if lo == hi else
            [lo + (hi - lo) * i / (spec.grid_points - 1) for i in range(spec.grid_points)]
            for lo, hi in box]
    evals = 0
    best: tuple[float, object, list[float]] | None = None
    for member in members:
        for point in itertools.product(*axes):
            a, d, p = point
            m = _margin(claim, member, a, a + d, p, cfg)
            evals += 1
            if m is not None and (best is None or m > best[0]):
                best = (m, member, list(point))
    if best is None:
        return SearchResult(None, None, evals, [])
    trace = [best[0]]
    steps = [(hi - lo) / (spec.grid_points - 1) for lo, hi in box]
    margin, member, point = best
    for _ in range(spec.rounds):
        steps = [s / 2.0 for s in steps]
        order = [i for i in range(3) if steps[i] > 0.0]
        rng.shuffle(order)
        for i in order:
            for direction in rng.sample((-1.0, 1.0), 2):
                if evals >= spec.budget:
                    break
                trial = list(point)
                lo, hi = box[i]
                trial[i] = min(hi, max(lo, trial[i] + direction * steps[i]))
                if trial[i] == point[i]:
                    continue
                m = _margin(claim, member, trial[0], trial[0] + trial[1], trial[2], cfg)
                evals += 1
                if m is not None and m > margin:
                    margin, point = m, trial
        trace.append(margin)
    a, d, p = point
    best_case = {"claim": claim, "f": member if isinstance(member, str) else
                 (f"x^{member}" if member is not None else "1/x"),
                 "a": a, "b": a + d, "p": p,
                 "n": member if isinstance(member, int) else None}
    return SearchResult(best_case, margin, evals, trace)
