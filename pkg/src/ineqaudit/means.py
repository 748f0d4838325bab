"""Two-variable special means and their ordering.

Every mean is evaluated through u = (b - a)/a with a = min, b = max, using
log1p/expm1 so nearly equal arguments keep full relative accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .expr import DomainError

EPS_MEAN = 1e-12
LIMIT_WINDOW = 1e-8
CHAIN_SLACK = 1e-12


@dataclass(frozen=True)
class MeanKind:
    """One of A, G, H, L, I, or the p-logarithmic mean ``Lp`` with exponent r."""

    name: str
    r: float | None = None

    def __post_init__(self):
        if self.name not in ("A", "G", "H", "L", "I", "Lp"):
            raise ValueError(f"unknown mean {self.name!r}")
        if self.name == "Lp":
            if self.r is None or not math.isfinite(self.r):
                raise ValueError("the p-logarithmic mean needs a finite exponent")
            if self.r in (-1.0, 0.0):
                raise ValueError("use L for r = -1 and I for r = 0")

    def __str__(self) -> str:
        return f"L_{self.r:g}" if self.name == "Lp" else self.name


A = MeanKind("A")
G = MeanKind("G")
H = MeanKind("H")
L = MeanKind("L")
I = MeanKind("I")  # noqa: E741


def Lp(r: float) -> MeanKind:
    return MeanKind("Lp", float(r))


def kind_for_exponent(r: float) -> MeanKind:
    """L_r with the conventions L_{-1} = L, L_0 = I, L_1 = A."""
    if r == -1:
        return L
    if r == 0:
        return I
    if r == 1:
        return A
    return Lp(r)


def _log_ratio_over_u(u: float) -> float:
    # log1p(u)/u, continuous at u = 0
    return math.log1p(u) / u if u != 0.0 else 1.0


def _identric_unit(u: float) -> float:
    return math.exp((1.0 + u) * _log_ratio_over_u(u) - 1.0)


def _logarithmic_unit(u: float) -> float:
    return 1.0 / _log_ratio_over_u(u)


def _plog_unit(u: float, r: float) -> float:
    if abs(r + 1.0) < LIMIT_WINDOW:
        return _logarithmic_unit(u)
    if abs(r) < LIMIT_WINDOW:
        return _identric_unit(u)
    s = r + 1.0
    ratio = math.expm1(s * math.log1p(u)) / (s * u)
    return ratio ** (1.0 / r)


def mean(kind: MeanKind, a: float, b: float) -> float:
    if not (a > 0 and b > 0) or not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"means need positive finite arguments, got ({a}, {b})")
    lo, hi = min(a, b), max(a, b)
    name = kind.name
    if name == "A":
        return 0.5 * lo + 0.5 * hi
    if name == "G":
        return lo if lo == hi else math.sqrt(lo) * math.sqrt(hi)
    if name == "H":
        return 2.0 * lo * (hi / (lo + hi))
    if hi - lo <= EPS_MEAN * hi:
        return 0.5 * lo + 0.5 * hi
    u = (hi - lo) / lo
    if name == "L":
        return lo * _logarithmic_unit(u)
    if name == "I":
        return lo * _identric_unit(u)
    if kind.r == 1.0:
        return 0.5 * lo + 0.5 * hi
    return lo * _plog_unit(u, kind.r)


@dataclass(frozen=True)
class ChainEntry:
    kind: MeanKind
    value: float
    violated: bool  # value < predecessor beyond slack


CHAIN = (H, G, L, I, A)


def _nondecreasing(values: Sequence[float], slack: float) -> list[bool]:
    flags = [False]
    for prev, cur in zip(values, values[1:]):
        flags.append(cur < prev - slack * max(abs(prev), abs(cur)))
    return flags


def chain_check(a: float, b: float) -> list[ChainEntry]:
    """H <= G <= L <= I <= A, each link judged with relative slack."""
    values = [mean(k, a, b) for k in CHAIN]
    flags = _nondecreasing(values, CHAIN_SLACK)
    return [ChainEntry(k, v, f) for k, v, f in zip(CHAIN, values, flags)]


def chain_holds(a: float, b: float) -> bool:
    return not any(entry.violated for entry in chain_check(a, b))


def lp_values(a: float, b: float, exponents: Sequence[float]) -> list[float]:
    return [mean(kind_for_exponent(r), a, b) for r in exponents]


def lp_monotonicity_check(a: float, b: float, exponents: Sequence[float]) -> bool:
    """True iff L_r(a, b) is nondecreasing along the given increasing exponents."""
    if any(s <= r for r, s in zip(exponents, exponents[1:])):
        raise ValueError("exponents must be strictly increasing")
    values = lp_values(a, b, exponents)
    return not any(_nondecreasing(values, CHAIN_SLACK))
