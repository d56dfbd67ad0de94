"""Expression kernel for real-analytic initial data.

Grammar (see docs/expression-grammar.md):

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?          # right-associative, integer exponent
    atom   := NUMBER | "i" | IDENT | IDENT "(" expr ")" | "(" expr ")"

Functions: sin, cos, sinh, cosh, exp, and sqrt restricted to constant
arguments (folded at parse time).  Exactly one variable name may appear.  The
literal "i" denotes the imaginary unit (an extension used by Weierstrass
chart data).

Evaluation works on complex scalars and numpy arrays alike; restricted to a
real argument it reproduces the real function, and since every primitive is
entire (or a quotient of entire functions) evaluating the same AST at complex
arguments *is* the unique holomorphic extension.  Internally-built trees may
contain Sqrt nodes with non-constant radicands (triad normalization); the
principal branch is used, and callers are responsible for keeping the
radicand away from the branch cut, as with any denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    DivisionByZero,
    EvaluationError,
    ExprSyntaxError,
    NonIntegerExponent,
    UnknownFunction,
)

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Call",
    "parse",
    "differentiate",
    "evaluate",
    "to_text",
    "const",
    "var",
    "add",
    "sub",
    "mul",
    "div",
    "neg",
    "powi",
    "call",
    "sqrt_expr",
    "variable_name",
]


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Sub:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Mul:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Div:
    lhs: "Expr"
    rhs: "Expr"
    offset: int | None = None


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"
    offset: int | None = None


Expr = Union[Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call]

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "exp": np.exp,
    "sqrt": np.sqrt,
}

_DERIV_ZERO = Const(0.0)
_ONE = Const(1.0)


# ---------------------------------------------------------------------------
# smart constructors (light constant folding keeps derivative trees small)


def const(v) -> Const:
    return Const(complex(v))


def var(name: str = "t") -> Var:
    return Var(name)


def _const_value(e):
    return e.value if isinstance(e, Const) else None


def add(a: Expr, b: Expr) -> Expr:
    av, bv = _const_value(a), _const_value(b)
    if av is not None and bv is not None:
        return Const(av + bv)
    if av == 0:
        return b
    if bv == 0:
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    av, bv = _const_value(a), _const_value(b)
    if av is not None and bv is not None:
        return Const(av - bv)
    if bv == 0:
        return a
    if av == 0:
        return neg(b)
    return Sub(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def mul(a: Expr, b: Expr) -> Expr:
    av, bv = _const_value(a), _const_value(b)
    if av is not None and bv is not None:
        return Const(av * bv)
    if av == 0 or bv == 0:
        return _DERIV_ZERO
    if av == 1:
        return b
    if bv == 1:
        return a
    return Mul(a, b)


def div(a: Expr, b: Expr, offset: int | None = None) -> Expr:
    av, bv = _const_value(a), _const_value(b)
    if bv == 0:
        raise DivisionByZero("constant denominator is zero", offset)
    if av is not None and bv is not None:
        return Const(av / bv)
    if bv == 1:
        return a
    if av == 0:
        return _DERIV_ZERO
    return Div(a, b, offset)


def powi(a: Expr, n: int) -> Expr:
    n = int(n)
    if n == 0:
        return _ONE
    if n == 1:
        return a
    if isinstance(a, Const):
        return Const(a.value**n)
    return Pow(a, n)


def call(fn: str, a: Expr, offset: int | None = None) -> Expr:
    if fn not in FUNCTIONS:
        raise UnknownFunction(f"unknown function {fn!r}", offset)
    if isinstance(a, Const):
        return Const(complex(FUNCTIONS[fn](complex(a.value))))
    return Call(fn, a, offset)


def sqrt_expr(a: Expr) -> Expr:
    """Principal-branch square root node (internal use; any radicand)."""
    if isinstance(a, Const):
        return Const(complex(np.sqrt(complex(a.value))))
    return Call("sqrt", a)


# ---------------------------------------------------------------------------
# tokenizer / parser


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", "op"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            tokens.append(_Token("num", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], i))
            i = j
            continue
        if c in "+-*/^()":
            tokens.append(_Token("op", c, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.var_name: str | None = None

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ExprSyntaxError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def expect(self, text: str):
        tok = self.next()
        if tok.kind != "op" or tok.text != text:
            raise ExprSyntaxError(f"expected {text!r}, found {tok.text!r}", tok.offset)

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.offset)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "op" or tok.text not in "+-":
                return e
            self.next()
            rhs = self.term()
            e = add(e, rhs) if tok.text == "+" else sub(e, rhs)

    def term(self) -> Expr:
        e = self.unary()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "op" or tok.text not in "*/":
                return e
            self.next()
            rhs = self.unary()
            e = mul(e, rhs) if tok.text == "*" else div(e, rhs, tok.offset)

    def unary(self) -> Expr:
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.text == "-":
            self.next()
            return neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok is None or tok.kind != "op" or tok.text != "^":
            return base
        self.next()
        exp_tree = self.unary()  # right-associative through unary -> power
        return powi(base, self._require_int(exp_tree, tok.offset))

    def _require_int(self, e: Expr, offset: int) -> int:
        if _contains_var(e):
            raise NonIntegerExponent("exponent must be a constant integer", offset)
        value = complex(evaluate(e, 0.0))
        if abs(value.imag) > 1e-12 or abs(value.real - round(value.real)) > 1e-12:
            raise NonIntegerExponent(f"exponent {value.real:g} is not an integer", offset)
        return int(round(value.real))

    def atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "num":
            return Const(float(tok.text))
        if tok.kind == "op" and tok.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "ident":
            nxt = self.peek()
            if nxt is not None and nxt.kind == "op" and nxt.text == "(":
                if tok.text not in FUNCTIONS:
                    raise UnknownFunction(f"unknown function {tok.text!r}", tok.offset)
                self.next()
                arg = self.expr()
                self.expect(")")
                if tok.text == "sqrt":
                    if _contains_var(arg):
                        raise ExprSyntaxError(
                            "sqrt of a non-constant argument is not in the grammar",
                            tok.offset,
                        )
                    return sqrt_expr(arg)
                return call(tok.text, arg, tok.offset)
            if tok.text == "i":
                return Const(1j)
            if tok.text in FUNCTIONS:
                raise ExprSyntaxError(f"function {tok.text!r} needs an argument", tok.offset)
            if self.var_name is None:
                self.var_name = tok.text
            elif tok.text != self.var_name:
                raise ExprSyntaxError(
                    f"conflicting variable names {self.var_name!r} and {tok.text!r}",
                    tok.offset,
                )
            return Var(tok.text)
        raise ExprSyntaxError(f"unexpected token {tok.text!r}", tok.offset)


def parse(text: str) -> Expr:
    """Parse source text into an Expr; errors carry the byte offset."""
    return _Parser(text).parse()


def _contains_var(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, (Const,)):
        return False
    if isinstance(e, Neg):
        return _contains_var(e.arg)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return _contains_var(e.lhs) or _contains_var(e.rhs)
    if isinstance(e, Pow):
        return _contains_var(e.base)
    if isinstance(e, Call):
        return _contains_var(e.arg)
    raise TypeError(f"not an Expr: {e!r}")


def variable_name(e: Expr) -> str | None:
    """Name of the (single) variable occurring in e, or None."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return None
    if isinstance(e, Neg):
        return variable_name(e.arg)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return variable_name(e.lhs) or variable_name(e.rhs)
    if isinstance(e, Pow):
        return variable_name(e.base)
    if isinstance(e, Call):
        return variable_name(e.arg)
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# differentiation

_DERIVS = {
    "sin": lambda a: call("cos", a),
    "cos": lambda a: neg(call("sin", a)),
    "sinh": lambda a: call("cosh", a),
    "cosh": lambda a: call("sinh", a),
    "exp": lambda a: call("exp", a),
}


def differentiate(e: Expr) -> Expr:
    """Symbolic derivative with respect to the variable."""
    if isinstance(e, Const):
        return _DERIV_ZERO
    if isinstance(e, Var):
        return _ONE
    if isinstance(e, Neg):
        return neg(differentiate(e.arg))
    if isinstance(e, Add):
        return add(differentiate(e.lhs), differentiate(e.rhs))
    if isinstance(e, Sub):
        return sub(differentiate(e.lhs), differentiate(e.rhs))
    if isinstance(e, Mul):
        return add(mul(differentiate(e.lhs), e.rhs), mul(e.lhs, differentiate(e.rhs)))
    if isinstance(e, Div):
        num = sub(mul(differentiate(e.lhs), e.rhs), mul(e.lhs, differentiate(e.rhs)))
        return div(num, powi(e.rhs, 2), e.offset)
    if isinstance(e, Pow):
        step = mul(const(e.exponent), powi(e.base, e.exponent - 1))
        return mul(step, differentiate(e.base))
    if isinstance(e, Call):
        inner_d = differentiate(e.arg)
        if e.fn == "sqrt":
            return div(inner_d, mul(const(2.0), sqrt_expr(e.arg)))
        return mul(_DERIVS[e.fn](e.arg), inner_d)
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# evaluation


def evaluate(e: Expr, w):
    """Evaluate at a complex scalar or ndarray; always complex-valued."""
    w = np.asarray(w, dtype=complex)
    return _eval(e, w)


def _eval(e: Expr, w):
    if isinstance(e, Const):
        return np.broadcast_to(np.asarray(e.value, dtype=complex), w.shape) if w.shape else e.value
    if isinstance(e, Var):
        return w
    if isinstance(e, Neg):
        return -_eval(e.arg, w)
    if isinstance(e, Add):
        return _eval(e.lhs, w) + _eval(e.rhs, w)
    if isinstance(e, Sub):
        return _eval(e.lhs, w) - _eval(e.rhs, w)
    if isinstance(e, Mul):
        return _eval(e.lhs, w) * _eval(e.rhs, w)
    if isinstance(e, Div):
        den = _eval(e.rhs, w)
        if np.any(den == 0):
            raise DivisionByZero(f"denominator {to_text(e.rhs)!r} vanished", e.offset)
        return _eval(e.lhs, w) / den
    if isinstance(e, Pow):
        base = _eval(e.base, w)
        if e.exponent < 0 and np.any(base == 0):
            raise DivisionByZero(f"base {to_text(e.base)!r} vanished under exponent {e.exponent}")
        with np.errstate(over="raise"):
            try:
                return base**e.exponent
            except FloatingPointError as exc:  # pragma: no cover - defensive
                raise EvaluationError(f"overflow in {to_text(e)}") from exc
    if isinstance(e, Call):
        return FUNCTIONS[e.fn](_eval(e.arg, w))
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Call: 5, Const: 5, Var: 5}


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return format(x, ".17g")


def _fmt_const(v: complex) -> tuple[str, int]:
    """Return (text, precedence) for a complex constant."""
    if v.imag == 0:
        txt = _fmt_real(v.real)
        return txt, (3 if v.real < 0 else 5)
    if v.real == 0:
        if v.imag == 1:
            return "i", 5
        if v.imag == -1:
            return "-i", 3
        return f"{_fmt_real(v.imag)}*i", 2
    re, im = _fmt_real(v.real), _fmt_real(abs(v.imag))
    op = "+" if v.imag > 0 else "-"
    return f"({re} {op} {im}*i)", 5


def to_text(e: Expr) -> str:
    """Pretty-print; output reparses to the same function (print is a fixed point)."""
    return _print(e)[0]


def _print(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return e.name, 5
    if isinstance(e, Neg):
        inner_txt, inner_prec = _print(e.arg)
        if inner_prec < 3:
            inner_txt = f"({inner_txt})"
        return f"-{inner_txt}", 3
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        lt, lp = _print(e.lhs)
        rt, rp = _print(e.rhs)
        if lp < 1:
            lt = f"({lt})"
        if rp <= 1:  # right operand of -, and unary-minus, need parens
            rt = f"({rt})"
        return f"{lt} {op} {rt}", 1
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        lt, lp = _print(e.lhs)
        rt, rp = _print(e.rhs)
        if lp < 2:
            lt = f"({lt})"
        if rp <= 2:
            rt = f"({rt})"
        return f"{lt}{op}{rt}", 2
    if isinstance(e, Pow):
        bt, bp = _print(e.base)
        if bp < 5:
            bt = f"({bt})"
        if e.exponent < 0:
            return f"{bt}^({e.exponent})", 4
        return f"{bt}^{e.exponent}", 4
    if isinstance(e, Call):
        return f"{e.fn}({_print(e.arg)[0]})", 5
    raise TypeError(f"not an Expr: {e!r}")
