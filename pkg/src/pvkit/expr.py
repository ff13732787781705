"""Complex-valued expressions of one variable: parse, evaluate, differentiate.

Grammar (EBNF)::

    expr    = term , { ("+" | "-") , term } ;
    term    = unary , { ("*" | "/") , unary } ;
    unary   = ("-" | "+") , unary | power ;
    power   = atom , [ "^" , unary ] ;            (* right-associative *)
    atom    = number | constant | variable
            | function , "(" , expr , ")"
            | "(" , expr , ")" ;
    number  = digits , [ "." , [ digits ] ] , [ exponent ]
            | "." , digits , [ exponent ] ;
    exponent = ("e" | "E") , [ "+" | "-" ] , digits ;
    constant = "i" | "pi" | "e" ;
    function = "exp" | "sin" | "cos" | "sinh" | "cosh" | "sqrt" | "ln" ;
    variable = single letter other than "i" and "e" ;

``x`` and ``z`` name the same variable.  A tree may contain at most one
distinct variable.  Implicit multiplication (``2z``) is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import (
    DivisionByZeroError,
    DomainError,
    ExprSyntaxError,
    MultipleVariablesError,
    NonFiniteError,
    UnknownIdentifierError,
)

__all__ = [
    "ExprAst",
    "parse",
    "evaluate",
    "differentiate",
    "unparse",
    "as_function",
    "FUNCTIONS",
    "CONSTANTS",
]

FUNCTIONS = ("exp", "sin", "cos", "sinh", "cosh", "sqrt", "ln")
CONSTANTS = {"i": 1j, "pi": complex(np.pi), "e": complex(np.e)}
BINARY_OPS = ("+", "-", "*", "/", "^")

_ALIASES = {"x": "z"}


@dataclass(frozen=True)
class ExprAst:
    """Immutable expression tree node.

    ``kind`` is one of ``literal``, ``variable``, ``neg``, ``binary``,
    ``call``.  ``label`` holds the operator for ``binary``, the function
    name for ``call``, the variable name for ``variable`` and the source
    text (if any) for ``literal``.  ``span`` is diagnostic only and is
    ignored by equality.
    """

    kind: str
    children: tuple["ExprAst", ...] = ()
    label: str = ""
    value: complex = 0j
    span: tuple[int, int] = field(default=(0, 0), compare=False, repr=False)

    def __post_init__(self):
        arity = {"literal": 0, "variable": 0, "neg": 1, "call": 1, "binary": 2}
        if self.kind not in arity:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if len(self.children) != arity[self.kind]:
            raise ValueError(f"{self.kind} node needs {arity[self.kind]} children")
        if self.kind == "binary" and self.label not in BINARY_OPS:
            raise ValueError(f"unknown operator {self.label!r}")
        if self.kind == "call" and self.label not in FUNCTIONS:
            raise ValueError(f"unknown function {self.label!r}")

    def variables(self) -> set[str]:
        """Canonical variable names occurring in the tree."""
        if self.kind == "variable":
            return {_ALIASES.get(self.label, self.label)}
        out: set[str] = set()
        for c in self.children:
            out |= c.variables()
        return out

    def __str__(self) -> str:
        return unparse(self)


# -- construction helpers -------------------------------------------------------------

def _lit(v: complex, label: str = "") -> ExprAst:
    return ExprAst("literal", label=label, value=complex(v))


def _bin(op: str, a: ExprAst, b: ExprAst) -> ExprAst:
    return ExprAst("binary", (a, b), label=op)


def _call(name: str, a: ExprAst) -> ExprAst:
    return ExprAst("call", (a,), label=name)


def _is_const(node: ExprAst, v: complex) -> bool:
    return node.kind == "literal" and node.value == v


# -- tokenizer / parser --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass
class _Tok:
    kind: str  # num | name | op | end
    text: str
    start: int
    end: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            bad = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {src[bad]!r}", bad + 1, src)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind), m.end(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", n, n))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _fail(self, expected: str):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"expected {expected}, found {found}", t.start + 1, self.src)

    def _accept(self, text: str) -> _Tok | None:
        t = self.tok
        if t.kind == "op" and t.text == text:
            self.i += 1
            return t
        return None

    def parse(self) -> ExprAst:
        node = self.expr()
        if self.tok.kind != "end":
            if self.tok.text == ")":
                self._fail("end of input (unbalanced parenthesis)")
            self._fail("operator or end of input")
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            node = ExprAst("binary", (node, rhs), label=op, span=(node.span[0], rhs.span[1]))
        return node

    def term(self) -> ExprAst:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            rhs = self.unary()
            node = ExprAst("binary", (node, rhs), label=op, span=(node.span[0], rhs.span[1]))
        return node

    def unary(self) -> ExprAst:
        t = self._accept("-")
        if t is not None:
            arg = self.unary()
            return ExprAst("neg", (arg,), span=(t.start, arg.span[1]))
        if self._accept("+") is not None:
            return self.unary()
        return self.power()

    def power(self) -> ExprAst:
        base = self.atom()
        if self._accept("^") is not None:
            exp = self.unary()
            return ExprAst("binary", (base, exp), label="^", span=(base.span[0], exp.span[1]))
        return base

    def atom(self) -> ExprAst:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return ExprAst("literal", label=t.text, value=complex(float(t.text)), span=(t.start, t.end))
        if t.kind == "name":
            self.i += 1
            name = t.text
            if name in FUNCTIONS:
                if self._accept("(") is None:
                    self._fail(f"'(' after {name}")
                arg = self.expr()
                close = self._accept(")")
                if close is None:
                    self._fail("')' (unbalanced parenthesis)")
                return ExprAst("call", (arg,), label=name, span=(t.start, close.end))
            if name in CONSTANTS:
                return ExprAst("literal", label=name, value=CONSTANTS[name], span=(t.start, t.end))
            if len(name) == 1 and name.isalpha():
                return ExprAst("variable", label=name, span=(t.start, t.end))
            raise UnknownIdentifierError(f"unknown identifier {name!r}", t.start + 1, self.src)
        if self._accept("(") is not None:
            inner = self.expr()
            if self._accept(")") is None:
                self._fail("')' (unbalanced parenthesis)")
            return inner
        self._fail("number, identifier or '('")


def parse(source: str) -> ExprAst:
    """Parse integrand text into an :class:`ExprAst`.

    Raises:
        ExprSyntaxError: malformed input, with a 1-based position.
        UnknownIdentifierError: a name that is not a function, constant or
            single-letter variable.
        MultipleVariablesError: more than one distinct variable.
    """
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 1, source or "")
    ast = _Parser(source).parse()
    names = ast.variables()
    if len(names) > 1:
        second = sorted(names)[1]
        pos = source.find(second) + 1
        raise MultipleVariablesError(
            f"more than one free variable ({', '.join(sorted(names))})", pos, source
        )
    return ast


# -- printing ------------------------------------------------------------------------

def _fmt_number(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _fmt_literal(node: ExprAst) -> str:
    if node.label:
        return node.label
    v = node.value
    if v.imag == 0:
        s = _fmt_number(v.real)
        return f"({s})" if v.real < 0 else s
    if v.real == 0:
        return f"({_fmt_number(v.imag)}*i)"
    return f"({_fmt_number(v.real)}+{_fmt_number(v.imag)}*i)"


def unparse(node: ExprAst) -> str:
    """Render a tree as fully parenthesized text that reparses to the same tree."""
    if node.kind == "literal":
        return _fmt_literal(node)
    if node.kind == "variable":
        return node.label
    if node.kind == "neg":
        return f"(-{unparse(node.children[0])})"
    if node.kind == "call":
        return f"{node.label}({unparse(node.children[0])})"
    a, b = node.children
    return f"({unparse(a)}{node.label}{unparse(b)})"


# -- evaluation ----------------------------------------------------------------------

_NUMPY_FUNCS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "sqrt": np.sqrt,
    "ln": np.log,
}


def _check_finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NonFiniteError(f"non-finite value in {what}")
    return values


def _eval(node: ExprAst, z: np.ndarray) -> np.ndarray:
    kind = node.kind
    if kind == "literal":
        return np.full(z.shape, node.value, dtype=complex)
    if kind == "variable":
        return z
    if kind == "neg":
        return -_eval(node.children[0], z)
    if kind == "call":
        arg = _eval(node.children[0], z)
        if node.label == "ln" and np.any(arg == 0):
            raise DomainError("ln(0) is undefined")
        return _check_finite(_NUMPY_FUNCS[node.label](arg), node.label)
    a = _eval(node.children[0], z)
    b = _eval(node.children[1], z)
    op = node.label
    if op == "+":
        out = a + b
    elif op == "-":
        out = a - b
    elif op == "*":
        out = a * b
    elif op == "/":
        if np.any(b == 0):
            raise DivisionByZeroError("division by zero")
        out = a / b
    else:
        if np.any((a == 0) & ((b.real < 0) | (b.imag != 0))):
            raise DivisionByZeroError("zero raised to a negative or complex power")
        out = np.power(a, b)
        # numpy gives 0**0 as nan for complex input
        out = np.where((a == 0) & (b == 0), 1.0 + 0j, out)
    return _check_finite(out, f"'{op}'")


Number = Union[complex, float, int]


def evaluate(ast: ExprAst, point):
    """Evaluate ``ast`` at a scalar or array of complex points.

    Principal branches are used for ``sqrt`` and ``ln`` (cut along the
    negative real axis).  Scalars in, complex out; arrays in, complex
    ndarray out.

    Raises:
        DivisionByZeroError: exact zero denominator.
        DomainError: ``ln(0)``.
        NonFiniteError: overflow or any other non-finite intermediate.
    """
    scalar = np.ndim(point) == 0
    z = np.atleast_1d(np.asarray(point, dtype=complex))
    with np.errstate(all="ignore"):
        out = _eval(ast, z)
    if out.shape != z.shape:
        out = np.broadcast_to(out, z.shape).copy()
    return complex(out[0]) if scalar else out


def as_function(f) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized callable for an :class:`ExprAst`, text, or existing callable."""
    if isinstance(f, str):
        f = parse(f)
    if isinstance(f, ExprAst):
        ast = f
        return lambda z: evaluate(ast, np.asarray(z, dtype=complex))
    if callable(f):
        return f
    raise TypeError(f"cannot make an integrand from {type(f).__name__}")


# -- differentiation -----------------------------------------------------------------

def _add(a, b):
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return _bin("+", a, b)


def _sub(a, b):
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return ExprAst("neg", (b,))
    return _bin("-", a, b)


def _mul(a, b):
    if _is_const(a, 0) or _is_const(b, 0):
        return _lit(0)
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return _bin("*", a, b)


def _div(a, b):
    if _is_const(a, 0):
        return _lit(0)
    if _is_const(b, 1):
        return a
    return _bin("/", a, b)


def differentiate(ast: ExprAst) -> ExprAst:
    """Symbolic derivative with respect to the free variable.

    Only trivial zero/one folding is applied; the result is well formed but
    not simplified.
    """
    kind = ast.kind
    if kind == "literal":
        return _lit(0)
    if kind == "variable":
        return _lit(1)
    if kind == "neg":
        d = differentiate(ast.children[0])
        return _lit(0) if _is_const(d, 0) else ExprAst("neg", (d,))
    if kind == "call":
        u = ast.children[0]
        du = differentiate(u)
        name = ast.label
        if name == "exp":
            outer = ast
        elif name == "sin":
            outer = _call("cos", u)
        elif name == "cos":
            outer = ExprAst("neg", (_call("sin", u),))
        elif name == "sinh":
            outer = _call("cosh", u)
        elif name == "cosh":
            outer = _call("sinh", u)
        elif name == "sqrt":
            outer = _div(_lit(1), _mul(_lit(2), ast))
        else:  # ln
            outer = _div(_lit(1), u)
        return _mul(outer, du)

    a, b = ast.children
    da, db = differentiate(a), differentiate(b)
    op = ast.label
    if op == "+":
        return _add(da, db)
    if op == "-":
        return _sub(da, db)
    if op == "*":
        return _add(_mul(da, b), _mul(a, db))
    if op == "/":
        return _div(_sub(_mul(da, b), _mul(a, db)), _bin("^", b, _lit(2)))
    # power
    if not b.variables():
        # d(a^c) = c * a^(c-1) * a'
        return _mul(_mul(b, _bin("^", a, _sub(b, _lit(1)))), da)
    if not a.variables():
        return _mul(_mul(ast, _call("ln", a)), db)
    return _mul(ast, _add(_mul(db, _call("ln", a)), _div(_mul(b, da), a)))
