"""Adaptive Gauss-Kronrod quadrature.

The base rule is the 7-point Gauss / 15-point Kronrod pair. The Kronrod
estimate is exact for polynomials up to degree 22 (the embedded Gauss rule
up to degree 13); the difference between the two drives both the error
estimate and the bisection of the worst subinterval.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .expr import DomainError

# Kronrod abscissae on [-1, 1], positive half, descending; odd indices are the Gauss nodes.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

RULE_SIZE = 15
KRONROD_DEGREE = 22
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_evals: int = 100_000
    split_points: tuple[float, ...] = ()

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_evals < RULE_SIZE:
            raise ValueError(f"max_evals must be at least {RULE_SIZE}")
        pts = tuple(float(s) for s in self.split_points)
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("split_points must be strictly increasing")
        object.__setattr__(self, "split_points", pts)

    def tighter(self, factor: float = 10.0) -> "QuadConfig":
        return replace(self, abs_tol=self.abs_tol / factor, rel_tol=self.rel_tol / factor,
                       max_evals=int(self.max_evals * factor))

    def with_splits(self, *points: float) -> "QuadConfig":
        return replace(self, split_points=tuple(sorted(set(self.split_points) | set(points))))


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    function_evals: int
    converged: bool

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(self.value + other.value,
                          self.abs_error_estimate + other.abs_error_estimate,
                          self.function_evals + other.function_evals,
                          self.converged and other.converged)


class QuadratureError(RuntimeError):
    """Integration did not reach the requested tolerance."""

    def __init__(self, message: str, result: QuadResult | None = None):
        super().__init__(message)
        self.result = result


def _checked(f: Callable[[float], float]) -> Callable[[float], float]:
    def g(x: float) -> float:
        y = f(x)
        if not math.isfinite(y):
            raise DomainError(f"integrand is not finite at x={x!r}")
        return y
    return g


def gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod 7/15 pass on [a, b]: (Kronrod value, error estimate).

    The error estimate follows the QUADPACK heuristic, scaling |K - G| by the
    integrand's variation and flooring it at roundoff level.
    """
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    res_k = fc * _WGK[7]
    res_g = fc * _WG[3]
    res_abs = abs(res_k)
    fv1 = [0.0] * 7
    fv2 = [0.0] * 7
    for j in range(7):
        dx = half * _XGK[j]
        f1, f2 = f(center - dx), f(center + dx)
        fv1[j], fv2[j] = f1, f2
        res_k += _WGK[j] * (f1 + f2)
        res_abs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            res_g += _WG[j // 2] * (f1 + f2)
    mean = 0.5 * res_k
    res_asc = _WGK[7] * abs(fc - mean)
    for j in range(7):
        res_asc += _WGK[j] * (abs(fv1[j] - mean) + abs(fv2[j] - mean))
    value = res_k * half
    res_abs *= abs(half)
    res_asc *= abs(half)
    err = abs((res_k - res_g) * half)
    if res_asc != 0.0 and err != 0.0:
        err = res_asc * min(1.0, (200.0 * err / res_asc) ** 1.5)
    if res_abs > 1e-290:
        err = max(err, 50.0 * _EPS * res_abs)
    return value, err


def _segments(a: float, b: float, splits: Sequence[float]) -> list[tuple[float, float]]:
    inner = [s for s in splits if a < s < b]
    if len(inner) != len(splits):
        raise ValueError(f"split points {tuple(splits)} must lie strictly inside ({a}, {b})")
    edges = [a, *inner, b]
    return list(zip(edges, edges[1:]))


def _adaptive(f, segments, cfg: QuadConfig, evals_left: int) -> QuadResult:
    heap = []
    total = 0.0
    err_total = 0.0
    evals = 0
    for lo, hi in segments:
        v, e = gk15(f, lo, hi)
        evals += RULE_SIZE
        heapq.heappush(heap, (-e, lo, hi, v))
        total += v
        err_total += e

    def tol() -> float:
        return max(cfg.abs_tol, cfg.rel_tol * abs(total))

    while err_total > tol() and evals + 2 * RULE_SIZE <= evals_left:
        neg_e, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # interval cannot be bisected further in floating point
            heapq.heappush(heap, (neg_e, lo, hi, v))
            break
        v1, e1 = gk15(f, lo, mid)
        v2, e2 = gk15(f, mid, hi)
        evals += 2 * RULE_SIZE
        total += v1 + v2 - v
        err_total += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
    # re-sum to shed accumulated cancellation in the running totals
    total = math.fsum(item[3] for item in heap)
    err_total = math.fsum(-item[0] for item in heap)
    return QuadResult(total, err_total, evals, err_total <= tol())


def integrate(f: Callable[[float], float], a: float, b: float,
              cfg: QuadConfig | None = None) -> QuadResult:
    """Adaptive integral of `f` over [a, b], pre-split at ``cfg.split_points``.

    Running out of budget is not an error: the result comes back with
    ``converged=False``. A non-finite integrand value raises DomainError.
    """
    cfg = cfg or QuadConfig()
    if not a < b:
        raise ValueError(f"integration needs a < b, got a={a}, b={b}")
    return _adaptive(_checked(f), _segments(a, b, cfg.split_points), cfg, cfg.max_evals)


GRADING_RATIO = 0.25
MAX_GRADING_LEVELS = 400


def _graded(f, a: float, b: float, toward: float, cfg: QuadConfig, evals_left: int) -> QuadResult:
    """Integrate over [a, b] with pieces shrinking geometrically toward one endpoint.

    Stops once a geometric extrapolation of the untouched tail falls below
    tolerance; the tail estimate is added to the value and to the error.
    """
    length = b - a
    sign = 1.0 if toward == a else -1.0
    piece_cfg = replace(cfg, abs_tol=cfg.abs_tol / (4 * MAX_GRADING_LEVELS),
                        rel_tol=cfg.rel_tol / 4, split_points=())
    pieces: list[float] = []
    errors: list[float] = []
    evals = 0
    converged = True
    outer = 1.0
    tail = math.inf
    for _ in range(MAX_GRADING_LEVELS):
        inner = outer * GRADING_RATIO
        lo, hi = sorted((toward + sign * length * inner, toward + sign * length * outer))
        if not lo < hi or evals + RULE_SIZE > evals_left:
            converged = False
            break
        res = _adaptive(f, [(lo, hi)], piece_cfg, evals_left - evals)
        evals += res.function_evals
        converged = converged and res.converged
        pieces.append(res.value)
        errors.append(res.abs_error_estimate)
        outer = inner
        if len(pieces) >= 3 and pieces[-2] != 0.0:
            ratio = pieces[-1] / pieces[-2]
            if 0.0 <= ratio < 1.0:
                tail = pieces[-1] * ratio / (1.0 - ratio)
            else:
                tail = math.inf
            value = math.fsum(pieces)
            if abs(tail) <= max(cfg.abs_tol, cfg.rel_tol * abs(value)) / 4:
                break
        elif len(pieces) >= 3 and all(p == 0.0 for p in pieces[-3:]):
            tail = 0.0
            break
    else:
        converged = False
    if not math.isfinite(tail):
        converged = False
        tail = 0.0
    value = math.fsum(pieces) + tail
    err = math.fsum(errors) + abs(tail)
    return QuadResult(value, err, evals, converged)


def integrate_endpoint_singular(f: Callable[[float], float], a: float, b: float,
                                cfg: QuadConfig | None = None,
                                endpoint: str = "both") -> QuadResult:
    """Integral of `f` over [a, b] where `f` may blow up (integrably) at an endpoint.

    ``endpoint`` is "a", "b" or "both". The neighbourhood of each singular
    endpoint is covered by graded pieces with ratio 1/4; any split points
    bound the middle section, which is integrated by the plain adaptive rule.
    """
    cfg = cfg or QuadConfig()
    if not a < b:
        raise ValueError(f"integration needs a < b, got a={a}, b={b}")
    if endpoint not in ("a", "b", "both"):
        raise ValueError("endpoint must be 'a', 'b' or 'both'")
    g = _checked(f)
    inner = [s for s in cfg.split_points if a < s < b]
    if len(inner) != len(cfg.split_points):
        raise ValueError("split points must lie strictly inside the interval")
    left_end = inner[0] if inner else None
    right_end = inner[-1] if inner else None
    if left_end is None:
        if endpoint == "both":
            left_end = right_end = 0.5 * (a + b)
        elif endpoint == "a":
            left_end = right_end = b
        else:
            left_end = right_end = a

    budget = cfg.max_evals
    result = QuadResult(0.0, 0.0, 0, True)
    if endpoint in ("a", "both"):
        result = result + _graded(g, a, left_end, a, cfg, budget)
    else:
        left_end = a
    if endpoint in ("b", "both"):
        tail_part = _graded(g, right_end, b, b, cfg, budget - result.function_evals)
    else:
        right_end = b
        tail_part = QuadResult(0.0, 0.0, 0, True)
    if left_end < right_end:
        mid_cfg = replace(cfg, split_points=tuple(s for s in inner if left_end < s < right_end))
        mid = _adaptive(g, _segments(left_end, right_end, mid_cfg.split_points), mid_cfg,
                        max(RULE_SIZE * len(inner) + RULE_SIZE,
                            budget - result.function_evals - tail_part.function_evals))
        result = result + mid
    result = result + tail_part
    tol = max(cfg.abs_tol, cfg.rel_tol * abs(result.value))
    return replace(result, converged=result.converged and result.abs_error_estimate <= tol)
