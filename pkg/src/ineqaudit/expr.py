"""Univariate expression trees: parsing, printing, evaluation, differentiation.

Grammar (whitespace-insensitive)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := number | "x" | "e" | "pi" | func "(" expr ")" | "(" expr ")"
    func   := "exp" | "ln" | "sin" | "cos" | "abs" | "sqrt" | "sign"

``^`` is right-associative and binds tighter than unary minus, so ``-x^2``
is ``-(x^2)`` and ``x^-2`` is ``x^(-2)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

UNARY_FUNCS = ("exp", "ln", "sin", "cos", "abs", "sqrt", "sign")
BINARY_OPS = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}
KINDS = frozenset(("const", "x", "neg", *BINARY_OPS, *UNARY_FUNCS))

# printing precedence; atoms and function calls bind tightest
_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_ATOM_PREC = 5


class DomainError(ValueError):
    """Raised when an expression is evaluated outside its real domain."""


class ParseError(ValueError):
    """Malformed expression source.

    Carries the byte offset of the offending token and a hint describing
    what the parser expected there.
    """

    def __init__(self, source: str, offset: int, message: str, expected: str = ""):
        self.source = source
        self.offset = min(offset, len(source.encode("utf-8")))
        self.message = message
        self.expected = expected
        text = f"{message} at offset {self.offset}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


@dataclass(frozen=True)
class Expr:
    kind: str
    args: tuple["Expr", ...] = ()
    value: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if self.kind == "const":
            if self.value is None or not math.isfinite(self.value):
                raise ValueError("constant nodes must hold a finite value")

    def __str__(self) -> str:
        return to_string(self)

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    @property
    def has_x(self) -> bool:
        if self.kind == "x":
            return True
        return any(arg.has_x for arg in self.args)


X = Expr("x")


def const(value: float) -> Expr:
    return Expr("const", value=float(value))


def power(base: Expr, exponent: Expr) -> Expr:
    """Power node; an exponent that depends on x becomes exp(exponent*ln(base))."""
    if exponent.has_x:
        return Expr("exp", (Expr("mul", (exponent, Expr("ln", (base,)))),))
    return Expr("pow", (base, exponent))


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(source) and source[pos].isspace():
            pos += 1
        if pos >= len(source):
            break
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(source, _byte_offset(source, pos),
                             f"unexpected character {source[pos]!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), _byte_offset(source, m.start(kind))))
        pos = m.end()
    tokens.append(("end", "", len(source.encode("utf-8"))))
    return tokens


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, expected: str = ""):
        _, _, offset = self.peek()
        raise ParseError(self.source, offset, message, expected)

    def expect_op(self, op: str):
        kind, text, _ = self.peek()
        if kind != "op" or text != op:
            found = text or "end of input"
            self.fail(f"unexpected {found!r}", repr(op))
        self.advance()

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.fail("empty expression", "an expression")
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}", "operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = Expr("add" if op == "+" else "sub", (node, self.term()))
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = Expr("mul" if op == "*" else "div", (node, self.factor()))
        return node

    def factor(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Expr("neg", (self.factor(),))
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            return power(base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "num":
            self.advance()
            value = float(text)
            if not math.isfinite(value):
                self.fail(f"number {text!r} out of range")
            return const(value)
        if kind == "name":
            if text == "x":
                self.advance()
                return X
            if text == "e":
                self.advance()
                return const(math.e)
            if text == "pi":
                self.advance()
                return const(math.pi)
            if text in UNARY_FUNCS:
                self.advance()
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Expr(text, (arg,))
            self.fail(f"unknown identifier {text!r}",
                      "x, e, pi or one of " + ", ".join(UNARY_FUNCS))
        if (kind, text) == ("op", "("):
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        found = text or "end of input"
        self.fail(f"unexpected {found!r}", "number, x, function or '('")


def parse(source: str) -> Expr:
    """Parse `source` into an expression tree; raises ParseError when malformed."""
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# printing

def _prec(e: Expr) -> int:
    return _PREC.get(e.kind, _ATOM_PREC)


def to_string(e: Expr) -> str:
    """Canonical text form; parsing it gives back an identical tree."""
    k = e.kind
    if k == "const":
        v = e.value
        text = str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)
        return f"({text})" if text.startswith("-") else text
    if k == "x":
        return "x"
    if k in UNARY_FUNCS:
        return f"{k}({to_string(e.args[0])})"
    if k == "neg":
        (u,) = e.args
        inner = to_string(u)
        return "-" + (f"({inner})" if _prec(u) < _PREC["neg"] else inner)
    left, right = e.args
    ls, rs = to_string(left), to_string(right)
    if k == "pow":
        if _prec(left) < _ATOM_PREC:
            ls = f"({ls})"
        if _prec(right) < _PREC["neg"]:
            rs = f"({rs})"
        return f"{ls}^{rs}"
    p = _PREC[k]
    if _prec(left) < p:
        ls = f"({ls})"
    if _prec(right) <= p:
        rs = f"({rs})"
    return f"{ls} {BINARY_OPS[k]} {rs}"


# --------------------------------------------------------------------------
# evaluation

def _ln(u: float) -> float:
    if u <= 0.0:
        raise DomainError(f"ln of non-positive value {u!r}")
    return math.log(u)


def _sqrt(u: float) -> float:
    if u < 0.0:
        raise DomainError(f"sqrt of negative value {u!r}")
    return math.sqrt(u)


def _exp(u: float) -> float:
    try:
        return math.exp(u)
    except OverflowError:
        raise DomainError(f"exp overflow at {u!r}") from None


def _sign(u: float) -> float:
    return (u > 0.0) - (u < 0.0)


def _div(u: float, v: float) -> float:
    if v == 0.0:
        raise DomainError("division by zero")
    return u / v


def _pow(u: float, v: float) -> float:
    if u == 0.0 and v < 0.0:
        raise DomainError("zero raised to a negative power")
    if u < 0.0 and v != int(v):
        raise DomainError(f"negative base {u!r} with non-integer exponent {v!r}")
    try:
        return math.pow(u, v)
    except OverflowError:
        raise DomainError(f"overflow in {u!r}^{v!r}") from None


_UNARY_IMPL = {
    "neg": lambda u: -u,
    "exp": _exp,
    "ln": _ln,
    "sin": math.sin,
    "cos": math.cos,
    "abs": abs,
    "sqrt": _sqrt,
    "sign": _sign,
}
_BINARY_IMPL = {
    "add": lambda u, v: u + v,
    "sub": lambda u, v: u - v,
    "mul": lambda u, v: u * v,
    "div": _div,
    "pow": _pow,
}


def _build(e: Expr) -> Callable[[float], float]:
    k = e.kind
    if k == "const":
        c = e.value
        return lambda x: c
    if k == "x":
        return lambda x: x
    if k in _UNARY_IMPL:
        fn, inner = _UNARY_IMPL[k], _build(e.args[0])
        return lambda x: fn(inner(x))
    fn = _BINARY_IMPL[k]
    left, right = _build(e.args[0]), _build(e.args[1])
    return lambda x: fn(left(x), right(x))


def compile_expr(e: Expr) -> Callable[[float], float]:
    """Return a fast callable equivalent to ``evaluate(e, x)``."""
    inner = _build(e)

    def f(x: float) -> float:
        y = inner(x)
        if not math.isfinite(y):
            raise DomainError(f"non-finite value {y!r} at x={x!r}")
        return y

    return f


def evaluate(e: Expr, x: float) -> float:
    return compile_expr(e)(x)


# --------------------------------------------------------------------------
# differentiation

def _is_const(e: Expr, value: float | None = None) -> bool:
    return e.kind == "const" and (value is None or e.value == value)


def _add(u: Expr, v: Expr) -> Expr:
    if _is_const(u, 0.0):
        return v
    if _is_const(v, 0.0):
        return u
    return Expr("add", (u, v))


def _mul(u: Expr, v: Expr) -> Expr:
    if _is_const(u, 0.0) or _is_const(v, 0.0):
        return const(0.0)
    if _is_const(u, 1.0):
        return v
    if _is_const(v, 1.0):
        return u
    return Expr("mul", (u, v))


def _neg(u: Expr) -> Expr:
    if _is_const(u, 0.0):
        return u
    return Expr("neg", (u,))


def differentiate(e: Expr) -> Expr:
    """Symbolic d/dx. The result is correct but not simplified beyond trivial 0/1 folding."""
    k = e.kind
    if not e.has_x:
        return const(0.0)
    if k == "x":
        return const(1.0)
    if k == "neg":
        return _neg(differentiate(e.args[0]))
    if k in ("add", "sub"):
        du, dv = (differentiate(a) for a in e.args)
        if k == "add":
            return _add(du, dv)
        return du if _is_const(dv, 0.0) else Expr("sub", (du, dv))
    if k == "mul":
        u, v = e.args
        return _add(_mul(differentiate(u), v), _mul(u, differentiate(v)))
    if k == "div":
        u, v = e.args
        du, dv = differentiate(u), differentiate(v)
        if _is_const(dv, 0.0):
            return Expr("div", (du, v))
        num = Expr("sub", (_mul(du, v), _mul(u, dv)))
        return Expr("div", (num, Expr("pow", (v, const(2.0)))))
    if k == "pow":
        u, c = e.args
        # exponent is x-free by construction (see power())
        cval = evaluate(c, 0.0)
        lowered = Expr("pow", (u, const(cval - 1.0)))
        return _mul(_mul(const(cval), lowered), differentiate(u))
    (u,) = e.args
    du = differentiate(u)
    if k == "exp":
        outer = e
    elif k == "ln":
        return Expr("div", (du, u))
    elif k == "sin":
        outer = Expr("cos", (u,))
    elif k == "cos":
        outer = _neg(Expr("sin", (u,)))
    elif k == "abs":
        outer = Expr("sign", (u,))
    elif k == "sqrt":
        return Expr("div", (du, Expr("mul", (const(2.0), e))))
    elif k == "sign":
        # derivative vanishes away from the jump
        return const(0.0)
    else:  # pragma: no cover - KINDS is closed
        raise ValueError(k)
    return _mul(outer, du)


# --------------------------------------------------------------------------

TOL_CONVEXITY = 1e-9


def convexity_probe(e: Expr | Callable[[float], float], a: float, b: float,
                    samples: int = 64, tol: float = TOL_CONVEXITY) -> bool:
    """Screen for convexity on [a, b] with second central differences.

    `samples` equispaced interior points are tested, each against its two
    grid neighbours. Passing is necessary for convexity, not sufficient.
    Raises DomainError if the function is undefined at any grid point.
    """
    if not a < b:
        raise ValueError("convexity_probe needs a < b")
    if samples < 3:
        raise ValueError("convexity_probe needs at least 3 samples")
    f = compile_expr(e) if isinstance(e, Expr) else e
    h = (b - a) / (samples + 1)
    ys = [f(a + i * h) for i in range(samples + 2)]
    for i in range(1, samples + 1):
        d2 = ys[i - 1] - 2.0 * ys[i] + ys[i + 1]
        scale = max(1.0, abs(ys[i - 1]) + 2.0 * abs(ys[i]) + abs(ys[i + 1]))
        if d2 < -tol * scale:
            return False
    return True
