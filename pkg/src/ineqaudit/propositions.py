"""Special-mean propositions: the bounds specialised to f = x^n and f = 1/x.

P1-P3 take f(x) = x^n (n >= 2), P4-P6 take f(x) = 1/x. P1/P4, P2/P5 and
P3/P6 descend from T1, T2 and T3 respectively; P2 and P5 are signed, the
rest compare absolute values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import means
from .bounds import BoundId, Case, Estimate, Verdict, pow_estimate, require_converged, rhs as bound_rhs
from .expr import parse
from .quadrature import QuadConfig, integrate

PROPOSITIONS = ("P1", "P2", "P3", "P4", "P5", "P6")
PARENT = {"P1": BoundId.T1, "P2": BoundId.T2, "P3": BoundId.T3_STATED,
          "P4": BoundId.T1, "P5": BoundId.T2, "P6": BoundId.T3_STATED}
SIGNED = frozenset({"P2", "P5"})
CROSSCHECK_RTOL = 1e-8


@dataclass(frozen=True)
class PropCase:
    prop: str
    a: float
    b: float
    p: float = 2.0
    n: int | None = None
    literal_ln: bool = False  # read L_n in the left side literally instead of L_n^n

    def __post_init__(self):
        if self.prop not in PROPOSITIONS:
            raise ValueError(f"unknown proposition {self.prop!r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "p", float(self.p))
        if not (0 < self.a < self.b and math.isfinite(self.b)):
            raise ValueError(f"need 0 < a < b, got a={self.a}, b={self.b}")
        if not (self.p > 1 and math.isfinite(self.p)):
            raise ValueError(f"need p > 1, got p={self.p}")
        if self.prop in ("P1", "P2", "P3"):
            if self.n is None or int(self.n) != self.n or self.n < 2:
                raise ValueError(f"{self.prop} needs an integer n >= 2")
            object.__setattr__(self, "n", int(self.n))
        else:
            object.__setattr__(self, "n", None)

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def function(self) -> str:
        return f"x^{self.n}" if self.n is not None else "1/x"

    def parent_case(self) -> Case:
        return Case(parse(self.function), self.a, self.b, self.p)


def _lhs(case: PropCase) -> float:
    a, b = case.a, case.b
    if case.n is not None:
        n = case.n
        lp = means.mean(means.kind_for_exponent(n), a, b)
        value = means.mean(means.A, a ** n, b ** n) - (lp if case.literal_ln else lp ** n)
    else:
        value = means.mean(means.A, 1.0 / a, 1.0 / b) - 1.0 / means.mean(means.L, a, b)
    return value if case.prop in SIGNED else abs(value)


def prop_lhs(case: PropCase) -> float:
    return _lhs(case)


def _mid_integral(case: PropCase, deriv_abs, cfg: QuadConfig) -> Estimate:
    a, b, q = case.a, case.b, case.q
    m = 0.5 * (a + b)
    res = integrate(lambda x: abs(x - m) * deriv_abs(x) ** q, a, b, cfg.with_splits(m))
    return require_converged(res, f"{case.prop} weighted integral")


def _rhs(case: PropCase, cfg: QuadConfig) -> Estimate:
    a, b, p, q = case.a, case.b, case.p, case.q
    ell = b - a
    prop = case.prop
    if prop == "P1":
        n = case.n
        return Estimate(n * p * ell / (p + 1.0) ** (1.0 + 1.0 / p)
                        * means.mean(means.A, a, b) ** (n - 1))
    if prop == "P2":
        return Estimate(p * (p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0)) * (b ** case.n - a ** case.n))
    if prop in ("P3", "P6"):
        if prop == "P3":
            n = case.n
            deriv_abs = lambda x: n * x ** (n - 1)  # noqa: E731
        else:
            deriv_abs = lambda x: x ** -2.0  # noqa: E731
        root = pow_estimate(_mid_integral(case, deriv_abs, cfg), 1.0 / q)
        const = 2.0 ** (1.0 / q) * p / ((p + 1.0) * ell)
        return Estimate(const * root.value, const * root.error)
    if prop == "P4":
        res = require_converged(integrate(lambda x: abs(x) ** (-2.0 * q), a, b, cfg), "P4 integral")
        root = pow_estimate(res, 1.0 / q)
        const = p * ell ** (1.0 / p) / (p + 1.0) ** (1.0 + 1.0 / p)
        return Estimate(const * root.value, const * root.error)
    # P5
    return Estimate(2.0 * p * (p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0))
                    / means.mean(means.H, a, b))


def prop_rhs(case: PropCase, cfg: QuadConfig | None = None) -> float:
    return _rhs(case, cfg or QuadConfig()).value


def prop_verdict(case: PropCase, cfg: QuadConfig | None = None) -> Verdict:
    cfg = cfg or QuadConfig()
    return Verdict.build(case.prop, case.function, case.a, case.b, case.p, case.n,
                         Estimate(_lhs(case)), _rhs(case, cfg))


@dataclass(frozen=True)
class CrossCheck:
    printed: float
    theorem: float
    agree: bool
    ratio: float  # printed / theorem


def prop_crosscheck(case: PropCase, cfg: QuadConfig | None = None) -> CrossCheck:
    """Compare the printed right side with the parent bound evaluated generically."""
    cfg = cfg or QuadConfig()
    printed = prop_rhs(case, cfg)
    generic = bound_rhs(PARENT[case.prop], case.parent_case(), cfg)
    agree = math.isclose(printed, generic, rel_tol=CROSSCHECK_RTOL, abs_tol=0.0)
    ratio = printed / generic if generic != 0.0 else math.inf
    return CrossCheck(printed, generic, agree, ratio)
