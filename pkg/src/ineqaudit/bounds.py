"""Trapezoid-gap bounds for convex functions and the identities behind them.

The left-hand side of every bound is the trapezoid gap

    gap(f; a, b) = (f(a) + f(b))/2 - 1/(b-a) * integral_a^b f(x) dx,

which is nonnegative for convex f. Right-hand sides come in two flavours:
bounds that are mathematically sound (T1, C1, T3_DERIVED, C3_DERIVED and
the two classical baselines DA1, DA2) and printed claims that are audited
as stated and may fail (T2, C2_*, T3_STATED, C3_STATED).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Callable

from .expr import DomainError, Expr, compile_expr, convexity_probe, differentiate, parse, to_string
from .quadrature import QuadConfig, QuadratureError, QuadResult, integrate, integrate_endpoint_singular

ABS_SLACK = 1e-9
YOUNG_SLACK = 1e-12
YOUNG_EQUALITY_TOL = 1e-9
DEFAULT_CFG = QuadConfig()


class BoundId(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"
    T3_STATED = "T3_STATED"
    T3_DERIVED = "T3_DERIVED"
    C1 = "C1"
    C2_STATED = "C2_STATED"
    C2_DERIVED = "C2_DERIVED"
    C3_STATED = "C3_STATED"
    C3_DERIVED = "C3_DERIVED"
    DA1 = "DA1"
    DA2 = "DA2"

    def __str__(self) -> str:
        return self.value

    @property
    def fixed_p(self) -> float | None:
        return _FIXED_P.get(self)

    @property
    def signed(self) -> bool:
        return self in (BoundId.T2, BoundId.C2_STATED, BoundId.C2_DERIVED)

    @property
    def sound(self) -> bool:
        return self in SOUND_BOUNDS


_FIXED_P = {
    BoundId.C1: 2.0,
    BoundId.C3_STATED: 2.0,
    BoundId.C3_DERIVED: 2.0,
    BoundId.C2_STATED: 1.1,
    BoundId.C2_DERIVED: 1.1,
}
SOUND_BOUNDS = frozenset({BoundId.T1, BoundId.C1, BoundId.T3_DERIVED, BoundId.C3_DERIVED,
                          BoundId.DA1, BoundId.DA2})
AUDITED_BOUNDS = frozenset(BoundId) - SOUND_BOUNDS

C2_STATED_CONSTANT = 11 / 483
C2_DERIVED_CONSTANT = 11 / 672


class HypothesisError(ValueError):
    """A case does not meet the hypotheses a claim is stated under."""


@dataclass(frozen=True)
class Case:
    """A claim instance: convex f on [a, b] with Hölder exponent p > 1."""

    f: Expr
    a: float
    b: float
    p: float = 2.0

    def __post_init__(self):
        if isinstance(self.f, str):
            object.__setattr__(self, "f", parse(self.f))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "p", float(self.p))
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"need finite a < b, got a={self.a}, b={self.b}")
        if not (math.isfinite(self.p) and self.p > 1.0):
            raise ValueError(f"need p > 1, got p={self.p}")
        fp = self.fprime_fn
        for x in (self.a, self.b):
            fp(x)
        if not convexity_probe(self.f_fn, self.a, self.b):
            raise HypothesisError(f"{to_string(self.f)} fails the convexity screen on "
                                  f"[{self.a}, {self.b}]")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def mid(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def length(self) -> float:
        return self.b - self.a

    @cached_property
    def fprime(self) -> Expr:
        return differentiate(self.f)

    @cached_property
    def f_fn(self) -> Callable[[float], float]:
        return compile_expr(self.f)

    @cached_property
    def fprime_fn(self) -> Callable[[float], float]:
        return compile_expr(self.fprime)

    def with_p(self, p: float) -> "Case":
        return self if p == self.p else replace(self, p=p)

    def describe(self) -> str:
        return f"f={to_string(self.f)}, [a,b]=[{self.a:g}, {self.b:g}], p={self.p:g}"


@dataclass(frozen=True)
class Estimate:
    value: float
    error: float = 0.0


def require_converged(result: QuadResult, what: str) -> Estimate:
    if not result.converged:
        raise QuadratureError(f"{what}: quadrature did not converge "
                              f"(error {result.abs_error_estimate:.3g})", result)
    return Estimate(result.value, result.abs_error_estimate)


def pow_estimate(est: Estimate, expo: float) -> Estimate:
    value = max(est.value, 0.0) ** expo
    if est.value > 0.0:
        err = abs(expo) * est.value ** (expo - 1.0) * est.error
    else:
        err = est.error ** expo if est.error > 0 else 0.0
    return Estimate(value, err)


# --------------------------------------------------------------------------
# integrals shared by claims; cached per (case, config)

def _chord(case: Case) -> Callable[[float], float]:
    a, b, fp = case.a, case.b, case.fprime_fn
    return lambda t: fp(t * a + (1.0 - t) * b)


@lru_cache(maxsize=16384)
def _integral(case: Case, name: str, cfg: QuadConfig) -> Estimate:
    a, b, q, m = case.a, case.b, case.q, case.mid
    f, fp = case.f_fn, case.fprime_fn
    chord = _chord(case)
    half = cfg.with_splits(0.5)
    if name == "f":
        res = integrate(f, a, b, cfg)
    elif name == "abs_fprime_q":
        res = integrate(lambda x: abs(fp(x)) ** q, a, b, cfg)
    elif name == "mid_weighted":
        res = integrate(lambda x: abs(x - m) * abs(fp(x)) ** q, a, b, cfg.with_splits(m))
    elif name == "lemma":
        res = integrate(lambda t: (1.0 - 2.0 * t) * chord(t), 0.0, 1.0, cfg)
    elif name == "lemma_abs":
        res = integrate(lambda t: abs((1.0 - 2.0 * t) * chord(t)), 0.0, 1.0, half)
    elif name == "chord_q":
        res = integrate(lambda t: abs(chord(t)) ** q, 0.0, 1.0, cfg)
    elif name == "chord":
        res = integrate(chord, 0.0, 1.0, cfg)
    elif name == "chord_weighted_q":
        res = integrate(lambda t: abs(1.0 - 2.0 * t) * abs(chord(t)) ** q, 0.0, 1.0, half)
    elif name == "unit_mid_weighted":
        # literal [0, 1] range of the printed p=q=2 corollary
        for x in (0.0, 1.0):
            fp(x)
        unit_cfg = cfg.with_splits(m) if 0.0 < m < 1.0 else cfg
        res = integrate(lambda x: abs(x - m) * abs(fp(x)) ** q, 0.0, 1.0, unit_cfg)
    else:  # pragma: no cover - internal names only
        raise KeyError(name)
    return require_converged(res, name)


@lru_cache(maxsize=1024)
def _weight_integral(name: str, p: float, cfg: QuadConfig) -> Estimate:
    half = cfg.with_splits(0.5)
    if name == "one_minus_2t":
        res = integrate(lambda t: 1.0 - 2.0 * t, 0.0, 1.0, cfg)
    elif name == "abs_one_minus_2t":
        res = integrate(lambda t: abs(1.0 - 2.0 * t), 0.0, 1.0, half)
    elif name == "abs_one_minus_2t_p":
        res = integrate(lambda t: abs(1.0 - 2.0 * t) ** p, 0.0, 1.0, half)
    else:  # pragma: no cover
        raise KeyError(name)
    return require_converged(res, name)


# --------------------------------------------------------------------------
# left-hand side and the identities

def _gap(case: Case, cfg: QuadConfig) -> Estimate:
    integral = _integral(case, "f", cfg)
    fa, fb = case.f_fn(case.a), case.f_fn(case.b)
    return Estimate(0.5 * (fa + fb) - integral.value / case.length,
                    integral.error / case.length)


def lhs_gap(case: Case, cfg: QuadConfig | None = None) -> float:
    """Signed trapezoid gap (f(a)+f(b))/2 - mean value of f over [a, b]."""
    return _gap(case, cfg or DEFAULT_CFG).value


def lemma_identity_residual(case: Case, cfg: QuadConfig | None = None) -> float:
    """|gap - (b-a)/2 * integral_0^1 (1-2t) f'(ta + (1-t)b) dt|."""
    cfg = cfg or DEFAULT_CFG
    gap = _gap(case, cfg)
    w = _integral(case, "lemma", cfg)
    return abs(gap.value - 0.5 * case.length * w.value)


@dataclass(frozen=True)
class HHResult:
    left: float
    mid: float
    right: float
    holds: bool
    slack: float


def hh_check(f: Expr | str, a: float, b: float, cfg: QuadConfig | None = None) -> HHResult:
    """f((a+b)/2) <= mean of f over [a, b] <= (f(a) + f(b))/2."""
    case = Case(f, a, b)
    cfg = cfg or DEFAULT_CFG
    integral = _integral(case, "f", cfg)
    avg = integral.value / case.length
    left = case.f_fn(case.mid)
    right = 0.5 * (case.f_fn(a) + case.f_fn(b))
    slack = integral.error / case.length + ABS_SLACK * max(1.0, abs(avg))
    return HHResult(left, avg, right, left <= avg + slack and avg <= right + slack, slack)


@dataclass(frozen=True)
class YoungResult:
    lhs: float
    rhs: float
    holds: bool
    equality: bool


def young_check(a: float, b: float, p: float) -> YoungResult:
    """ab <= a^p/p + b^q/q with equality exactly when a^p = b^q."""
    if not (a > 0 and b > 0 and p > 1):
        raise ValueError("young_check needs a, b > 0 and p > 1")
    q = p / (p - 1.0)
    ap, bq = a ** p, b ** q
    lhs = a * b
    rhs = ap / p + bq / q
    return YoungResult(lhs, rhs, lhs <= rhs + YOUNG_SLACK, abs(ap - bq) < YOUNG_EQUALITY_TOL)


def kernel_eval(p: float, t: float) -> float:
    """(1/p) t^(1/p - 1) + (1 - 1/p) t^(1/p); at least 1 on (0, 1)."""
    if not p > 1:
        raise ValueError("kernel needs p > 1")
    if not 0.0 < t <= 1.0:
        raise DomainError(f"kernel is defined for t in (0, 1], got {t!r}")
    s = 1.0 / p
    return s * t ** (s - 1.0) + (1.0 - s) * t ** s


def kernel_moment_closed(p: float, weight: str = "unit") -> float:
    if weight == "unit":
        return 2.0 * p / (p + 1.0)
    if weight == "one-minus-2t":
        return 2.0 * p * (p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0))
    raise ValueError(f"unknown kernel weight {weight!r}")


@lru_cache(maxsize=1024)
def _kernel_moment(p: float, weight: str, cfg: QuadConfig) -> Estimate:
    if weight == "unit":
        fn = lambda t: kernel_eval(p, t)  # noqa: E731
    elif weight == "one-minus-2t":
        fn = lambda t: kernel_eval(p, t) * (1.0 - 2.0 * t)  # noqa: E731
    else:
        raise ValueError(f"unknown kernel weight {weight!r}")
    return require_converged(integrate_endpoint_singular(fn, 0.0, 1.0, cfg, endpoint="a"),
                 f"kernel moment ({weight})")


def kernel_moment(p: float, weight: str = "unit", cfg: QuadConfig | None = None) -> float:
    """integral_0^1 K_p(t) w(t) dt by quadrature, with w = 1 or w = 1 - 2t."""
    if not p > 1:
        raise ValueError("kernel needs p > 1")
    return _kernel_moment(float(p), weight, cfg or DEFAULT_CFG).value


# --------------------------------------------------------------------------
# Chebyshev's integral inequality

class MonotonicityError(ValueError):
    """A Chebyshev pair is not monotone, so no inequality direction applies."""


@dataclass(frozen=True)
class ChebyshevResult:
    lhs: float
    rhs: float
    holds: bool
    orientation: str  # "comonotone", "anti-monotone" or "constant"
    form: str  # "weighted", "unweighted" or "unit-interval"


def _as_fn(g) -> Callable[[float], float]:
    if isinstance(g, str):
        g = parse(g)
    if isinstance(g, Expr):
        return compile_expr(g)
    return g


def _direction(fn, a: float, b: float, samples: int = 257) -> int:
    """+1 nondecreasing, -1 nonincreasing, 0 constant; MonotonicityError otherwise."""
    ys = [fn(a + (b - a) * i / (samples - 1)) for i in range(samples)]
    scale = max(1.0, max(abs(y) for y in ys))
    tol = 1e-12 * scale
    up = all(y2 >= y1 - tol for y1, y2 in zip(ys, ys[1:]))
    down = all(y2 <= y1 + tol for y1, y2 in zip(ys, ys[1:]))
    if up and down:
        return 0
    if up:
        return 1
    if down:
        return -1
    raise MonotonicityError("function is not monotone on the interval")


def chebyshev_check(f, g, w=None, a: float = 0.0, b: float = 1.0,
                    cfg: QuadConfig | None = None) -> ChebyshevResult:
    """Compare integral(w) * integral(w f g) against integral(w f) * integral(w g).

    `w=None` is the unit weight; the unweighted forms are reported on the
    scale of the plain integrals (divided by b - a, or over [0, 1]).
    """
    cfg = cfg or DEFAULT_CFG
    if not a < b:
        raise ValueError("chebyshev_check needs a < b")
    ff, gg = _as_fn(f), _as_fn(g)
    ww = (lambda x: 1.0) if w is None else _as_fn(w)
    for x in (a, 0.5 * (a + b), b):
        if ww(x) < 0:
            raise ValueError("Chebyshev weight must be nonnegative")
    try:
        df, dg = _direction(ff, a, b), _direction(gg, a, b)
    except MonotonicityError as exc:
        raise MonotonicityError(f"Chebyshev screen failed: {exc}") from None
    iw = require_converged(integrate(ww, a, b, cfg), "weight")
    iwfg = require_converged(integrate(lambda x: ww(x) * ff(x) * gg(x), a, b, cfg), "w*f*g")
    iwf = require_converged(integrate(lambda x: ww(x) * ff(x), a, b, cfg), "w*f")
    iwg = require_converged(integrate(lambda x: ww(x) * gg(x), a, b, cfg), "w*g")
    if w is None:
        lhs = iwfg.value
        rhs = iwf.value * iwg.value / iw.value
        err = iwfg.error + (abs(iwf.value) * iwg.error + abs(iwg.value) * iwf.error) / iw.value
        form = "unit-interval" if (a, b) == (0.0, 1.0) else "unweighted"
    else:
        lhs = iw.value * iwfg.value
        rhs = iwf.value * iwg.value
        err = (abs(iw.value) * iwfg.error + abs(iwfg.value) * iw.error
               + abs(iwf.value) * iwg.error + abs(iwg.value) * iwf.error)
        form = "weighted"
    slack = err + ABS_SLACK * max(1.0, abs(lhs), abs(rhs))
    if df == 0 or dg == 0:
        orientation, holds = "constant", abs(lhs - rhs) <= slack
    elif df == dg:
        orientation, holds = "comonotone", lhs >= rhs - slack
    else:
        orientation, holds = "anti-monotone", lhs <= rhs + slack
    return ChebyshevResult(lhs, rhs, holds, orientation, form)


# --------------------------------------------------------------------------
# right-hand sides

def _rhs(bound: BoundId, case: Case, cfg: QuadConfig) -> Estimate:
    bound = BoundId(bound)
    if bound.fixed_p is not None:
        case = case.with_p(bound.fixed_p)
    a, b, p, q, ell = case.a, case.b, case.p, case.q, case.length
    fp = case.fprime_fn
    if bound in (BoundId.T1, BoundId.C1):
        if bound is BoundId.C1:
            const = 2.0 * math.sqrt(ell) / 3.0 ** 1.5
        else:
            const = ell ** (1.0 / p) * p / (p + 1.0) ** (1.0 + 1.0 / p)
        root = pow_estimate(_integral(case, "abs_fprime_q", cfg), 1.0 / q)
        return Estimate(const * root.value, const * root.error)
    if bound in (BoundId.T2, BoundId.C2_STATED, BoundId.C2_DERIVED):
        rise = case.f_fn(b) - case.f_fn(a)
        coef = {BoundId.T2: p * (p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0)),
                BoundId.C2_STATED: C2_STATED_CONSTANT,
                BoundId.C2_DERIVED: C2_DERIVED_CONSTANT}[bound]
        return Estimate(coef * rise)
    if bound in (BoundId.T3_STATED, BoundId.T3_DERIVED, BoundId.C3_DERIVED):
        root = pow_estimate(_integral(case, "mid_weighted", cfg), 1.0 / q)
        if bound is BoundId.T3_STATED:
            const = 2.0 ** (1.0 / q) * p / ((p + 1.0) * ell)
        else:
            const = p / (p + 1.0) * 2.0 ** (2.0 / q - 1.0) * ell ** (1.0 - 2.0 / q)
        return Estimate(const * root.value, const * root.error)
    if bound is BoundId.C3_STATED:
        root = pow_estimate(_integral(case, "unit_mid_weighted", cfg), 0.5)
        const = 2.0 ** 1.5 / 3.0
        return Estimate(const * root.value, const * root.error)
    if bound is BoundId.DA1:
        return Estimate(ell * (abs(fp(a)) + abs(fp(b))) / 8.0)
    if bound is BoundId.DA2:
        avg = 0.5 * (abs(fp(a)) ** q + abs(fp(b)) ** q)
        return Estimate(ell / (2.0 * (p + 1.0) ** (1.0 / p)) * avg ** (1.0 / q))
    raise ValueError(f"unknown bound {bound!r}")  # pragma: no cover


def rhs(bound: BoundId | str, case: Case, cfg: QuadConfig | None = None) -> float:
    """Right-hand side of `bound` for `case`; corollaries substitute their fixed p."""
    return _rhs(BoundId(bound), case, cfg or DEFAULT_CFG).value


def check_hypotheses(bound: BoundId, case: Case) -> None:
    """Raise HypothesisError when the baseline bounds' extra hypotheses fail."""
    if bound is BoundId.DA1:
        g = lambda x: abs(case.fprime_fn(x))  # noqa: E731
        what = "|f'|"
    elif bound is BoundId.DA2:
        q = case.q
        g = lambda x: abs(case.fprime_fn(x)) ** q  # noqa: E731
        what = f"|f'|^{q:g}"
    else:
        return
    if not convexity_probe(g, case.a, case.b):
        raise HypothesisError(f"{bound}: {what} is not convex on [{case.a:g}, {case.b:g}]")


@dataclass(frozen=True)
class Verdict:
    claim: str
    f: str
    a: float
    b: float
    p: float
    n: int | None
    lhs: float
    rhs: float
    margin: float
    holds: bool
    slack: float
    quad_error: float

    @classmethod
    def build(cls, claim: str, f: str, a: float, b: float, p: float, n: int | None,
              lhs: Estimate, rhs: Estimate) -> "Verdict":
        quad_error = lhs.error + rhs.error
        slack = quad_error + ABS_SLACK
        margin = lhs.value - rhs.value
        return cls(claim, f, a, b, p, n, lhs.value, rhs.value, margin, margin <= slack,
                   slack, quad_error)


def verdict(bound: BoundId | str, case: Case, cfg: QuadConfig | None = None) -> Verdict:
    """Evaluate one bound on one case. Absolute-value claims compare |gap|."""
    bound = BoundId(bound)
    cfg = cfg or DEFAULT_CFG
    if bound.fixed_p is not None:
        case = case.with_p(bound.fixed_p)
    check_hypotheses(bound, case)
    gap = _gap(case, cfg)
    lhs = gap if bound.signed else Estimate(abs(gap.value), gap.error)
    return Verdict.build(bound.value, to_string(case.f), case.a, case.b, case.p, None,
                         lhs, _rhs(bound, case, cfg))


# --------------------------------------------------------------------------
# proof-chain audit

@dataclass(frozen=True)
class ChainLink:
    step: str
    lhs: float
    rhs: float
    relation: str  # "=" or "<="
    holds: bool
    ratio: float | None  # rhs / lhs when lhs is nonzero


def _link(step: str, lhs: float, rhs: float, relation: str, err: float = 0.0) -> ChainLink:
    slack = err + ABS_SLACK * max(1.0, abs(lhs), abs(rhs))
    if relation == "=":
        holds = abs(lhs - rhs) <= slack
    else:
        holds = lhs <= rhs + slack
    ratio = rhs / lhs if lhs != 0.0 else None
    return ChainLink(step, lhs, rhs, relation, holds, ratio)


def proof_chain_audit(theorem: BoundId | str, case: Case,
                      cfg: QuadConfig | None = None) -> list[ChainLink]:
    """Evaluate each consecutive step of the printed proof of T1, T2 or T3."""
    theorem = BoundId(theorem)
    cfg = cfg or DEFAULT_CFG
    if theorem not in (BoundId.T1, BoundId.T2, BoundId.T3_STATED):
        raise ValueError("proof chains exist for T1, T2 and T3 (pass T3_STATED)")
    p, q, ell = case.p, case.q, case.length
    half_len = 0.5 * ell
    gap = _gap(case, cfg)
    w = _integral(case, "lemma", cfg)
    k1 = _kernel_moment(p, "unit", cfg)
    err = gap.error + ell * w.error + k1.error

    links = [
        _link("lemma", gap.value, half_len * w.value, "=", err),
        _link("kernel_integral", 1.0, k1.value, "<=", k1.error),
        _link("multiply", gap.value, half_len * k1.value * w.value, "<=", err),
    ]
    if theorem is BoundId.T2:
        iw = _weight_integral("one_minus_2t", p, cfg)
        chord = _integral(case, "chord", cfg)
        kw = _kernel_moment(p, "one-minus-2t", cfg)
        rise = case.f_fn(case.b) - case.f_fn(case.a)
        after_first = half_len * k1.value * iw.value * chord.value
        evaluated = 0.5 * rise * k1.value * iw.value
        final = 0.5 * rise * kw.value
        err2 = err + ell * (iw.error + chord.error) + abs(rise) * kw.error
        links += [
            _link("chebyshev_first", half_len * k1.value * w.value, after_first, "<=", err2),
            _link("evaluation", after_first, evaluated, "=", err2),
            _link("chebyshev_second", evaluated, final, "<=", err2),
            _link("simple_calculation", final, _rhs(BoundId.T2, case, cfg).value, "=", err2),
        ]
        return links

    w_abs = _integral(case, "lemma_abs", cfg)
    scaled_abs = half_len * k1.value * w_abs.value
    err = err + ell * w_abs.error
    links.append(_link("absolute_value", abs(gap.value), scaled_abs, "<=", err))
    if theorem is BoundId.T1:
        moment = _weight_integral("abs_one_minus_2t_p", p, cfg)
        chord_q = pow_estimate(_integral(case, "chord_q", cfg), 1.0 / q)
        holder = half_len * k1.value * moment.value ** (1.0 / p) * chord_q.value
        closed = half_len * (2.0 * p / (p + 1.0)) * (1.0 / (p + 1.0)) ** (1.0 / p) * chord_q.value
        err = err + ell * (moment.error + chord_q.error)
        links += [
            _link("holder", scaled_abs, holder, "<=", err),
            _link("holder_evaluation", holder, closed, "=", err),
            _link("simple_calculation", closed, _rhs(BoundId.T1, case, cfg).value, "=", err),
        ]
        return links

    abs_w = _weight_integral("abs_one_minus_2t", p, cfg)
    j = pow_estimate(_integral(case, "chord_weighted_q", cfg), 1.0 / q)
    power_mean = half_len * k1.value * abs_w.value ** (1.0 / p) * j.value
    printed = 2.0 ** (1.0 / q) * p / (p + 1.0) * j.value
    err = err + ell * (abs_w.error + j.error)
    links += [
        _link("power_mean", scaled_abs, power_mean, "<=", err),
        _link("power_mean_constant", power_mean, printed, "=", err),
        _link("change_of_variable", printed, _rhs(BoundId.T3_STATED, case, cfg).value, "=", err),
    ]
    return links


def first_failure(links: list[ChainLink]) -> ChainLink | None:
    return next((link for link in links if not link.holds), None)


def t3_constant_ratio(case: Case) -> float:
    """Closed-form ratio of the printed to the re-derived T3 right-hand side."""
    q, ell = case.q, case.length
    return 2.0 ** (1.0 / q) / (2.0 ** (2.0 / q - 1.0) * ell ** (2.0 - 2.0 / q))
