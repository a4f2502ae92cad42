"""A small expression language for boundary data and test functions.

Grammar (EBNF, whitespace ignored)::

    expr    = term , { ( "+" | "-" ) , term } ;
    term    = unary , { ( "*" | "/" ) , unary } ;
    unary   = "-" , unary | power ;
    power   = atom , [ "^" , int ] ;
    int     = [ "-" | "+" ] , digits | "(" , [ "-" | "+" ] , digits , ")" ;
    atom    = number | "z" | "i" | func , "(" , expr , ")" | complex | "(" , expr , ")" ;
    complex = "(" , [ "-" ] , real , ( "+" | "-" ) , imag , ")" ;
    func    = "conj" | "re" | "im" ;
    number  = real , [ "i" ] ;
    imag    = real , "i" ;
    real    = digits , [ "." , [ digits ] ] , [ ( "e" | "E" ) , [ "+" | "-" ] , digits ]
            | "." , digits , [ ( "e" | "E" ) , [ "+" | "-" ] , digits ] ;

``^`` binds tighter than unary minus, so ``-z^2`` is ``-(z^2)``. A number with
an ``i`` suffix is an imaginary literal (``0.5i``); ``a+bi`` is ordinary
addition, except that the exact shape ``(x+yi)`` or ``(-x-yi)`` (one real and
one imaginary literal inside parentheses) is read as a single complex
constant; this is how the printer writes complex constants. Exponents are
integers, possibly negative.

:func:`parse_constant` accepts the same grammar without ``z`` plus ``pi`` and
``exp(...)``, for entering points such as ``0.85*exp(i*pi/7)``.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ExprSyntaxError, PoleAtEvaluationPoint, UnknownIdentifier

POLE_TOL = 1e-14


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: int = -1

    # division position is diagnostic metadata, not structure
    def __eq__(self, other):
        return (
            isinstance(other, BinOp)
            and self.op == other.op
            and self.left == other.left
            and self.right == other.right
        )

    def __hash__(self):
        return hash((self.op, self.left, self.right))


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    k: int


Expr = Union[Const, Var, Neg, Call, BinOp, Pow]

FUNCTIONS = {"conj": np.conj, "re": np.real, "im": np.imag}
CONST_FUNCTIONS = {**FUNCTIONS, "exp": np.exp}

_TOKEN = _re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z_]))?"
    r"|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            off = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[off]!r}", off)
        start = m.start(m.lastgroup if m.lastgroup != "imag" else "num")
        if m.group("num") is not None:
            v = float(m.group("num"))
            if m.group("imag"):
                toks.append(("inum", complex(0, v), start))
            else:
                toks.append(("num", complex(v), start))
        elif m.group("ident") is not None:
            toks.append(("ident", m.group("ident"), start))
        else:
            toks.append(("op", m.group("op"), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text, constant=False):
        self.toks = _tokenize(text)
        self.i = 0
        self.constant = constant
        self.funcs = CONST_FUNCTIONS if constant else FUNCTIONS

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ExprSyntaxError(f"expected {op!r}", t[2])
        return t

    def parse(self):
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ExprSyntaxError(f"unexpected token {t[1]!r}", t[2])
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            _, op, pos = self.take()
            e = BinOp(op, e, self.term(), pos)
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            e = BinOp(op, e, self.unary(), pos)
        return e

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            return Pow(base, self.integer())
        return base

    def integer(self):
        paren = False
        t = self.peek()
        if t[0] == "op" and t[1] == "(":
            self.take()
            paren = True
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        t = self.take()
        if t[0] != "num" or t[1].imag != 0 or t[1].real != int(t[1].real):
            raise ExprSyntaxError("exponent must be an integer", t[2])
        if paren:
            self.expect(")")
        return sign * int(t[1].real)

    def complex_literal(self):
        """``( [-] x (+|-) y i )`` read as one constant; called just after the ``(``."""
        toks = self.toks[self.i : self.i + 5]
        neg = toks[0][0] == "op" and toks[0][1] == "-"
        t = toks[1:] if neg else toks[:4]
        shape = [(k, v if k == "op" else None) for k, v, _ in t]
        if shape[:4] in ([("num", None), ("op", "+"), ("inum", None), ("op", ")")],
                         [("num", None), ("op", "-"), ("inum", None), ("op", ")")]):
            re_ = -t[0][1].real if neg else t[0][1].real
            im_ = -t[2][1].imag if t[1][1] == "-" else t[2][1].imag
            self.i += 4 + neg
            return Const(complex(re_, im_))
        return None

    def atom(self):
        kind, val, pos = self.take()
        if kind in ("num", "inum"):
            return Const(val)
        if kind == "ident":
            if val == "z" and not self.constant:
                return Var()
            if val == "i":
                return Const(1j)
            if val == "pi" and self.constant:
                return Const(complex(np.pi))
            if val in self.funcs:
                self.expect("(")
                e = self.expr()
                self.expect(")")
                return Call(val, e)
            raise UnknownIdentifier(f"unknown identifier {val!r}", pos)
        if kind == "op" and val == "(":
            lit = self.complex_literal()
            if lit is not None:
                return lit
            e = self.expr()
            self.expect(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {what}", pos)


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


def parse_constant(text: str) -> complex:
    """Evaluate a constant expression such as ``0.85*exp(i*pi/7)``."""
    e = _Parser(text, constant=True).parse()
    return complex(_eval(e, np.zeros(1, dtype=complex), CONST_FUNCTIONS)[0])


# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_num(x: float) -> str:
    s = repr(float(x))
    if s in ("inf", "-inf", "nan"):
        raise ValueError(f"cannot print non-finite constant {s}")
    return s


def _fmt_const(c: complex) -> str:
    if c.imag == 0 and not np.signbit(c.imag) and not np.signbit(c.real):
        return _fmt_num(c.real)
    if c.real == 0 and not np.signbit(c.real) and c.imag > 0:
        return _fmt_num(c.imag) + "i"
    sign = "-" if np.signbit(c.imag) else "+"
    return f"({_fmt_num(c.real)}{sign}{_fmt_num(abs(c.imag))}i)"


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_LITERAL_SHAPE = _re.compile(rf"\(-?{_NUM}[+-]{_NUM}i\)")


def _paren(e, text: str) -> str:
    """Parenthesize ``text``; sums that would read back as a complex literal keep their right operand wrapped."""
    out = f"({text})"
    if isinstance(e, BinOp) and _LITERAL_SHAPE.fullmatch(out):
        out = f"({to_text(e.left)}{e.op}({to_text(e.right)}))"
    return out


def _prec(e) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    return 4  # atoms, calls, powers


def to_text(e: Expr) -> str:
    """Print ``e`` so that :func:`parse_expr` reads back the same tree."""
    if isinstance(e, Const):
        return _fmt_const(complex(e.value))
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Call):
        return f"{e.name}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.arg)
        return "-" + (inner if _prec(e.arg) >= 3 else _paren(e.arg, inner))
    if isinstance(e, Pow):
        b = to_text(e.base)
        if not (isinstance(e.base, (Var, Call)) or (isinstance(e.base, Const) and not b.startswith("("))):
            b = _paren(e.base, b)
        return f"{b}^{e.k}"
    p = _PREC[e.op]
    left = to_text(e.left)
    right = to_text(e.right)
    if _prec(e.left) < p:
        left = _paren(e.left, left)
    if _prec(e.right) <= p:
        right = _paren(e.right, right)
    return f"{left}{e.op}{right}"


def _eval(e, z, funcs):
    if isinstance(e, Const):
        return np.full(z.shape, complex(e.value))
    if isinstance(e, Var):
        return z
    if isinstance(e, Neg):
        return -_eval(e.arg, z, funcs)
    if isinstance(e, Call):
        return np.asarray(funcs[e.name](_eval(e.arg, z, funcs)), dtype=complex)
    if isinstance(e, Pow):
        b = _eval(e.base, z, funcs)
        if e.k < 0:
            bad = np.abs(b) < POLE_TOL
            if bad.any():
                raise PoleAtEvaluationPoint(complex(z[np.argmax(bad)]), to_text(e))
            return (1 / b) ** (-e.k)
        return b ** e.k
    a = _eval(e.left, z, funcs)
    b = _eval(e.right, z, funcs)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    bad = np.abs(b) < POLE_TOL
    if bad.any():
        raise PoleAtEvaluationPoint(complex(z[np.argmax(bad)]), f"{to_text(e)} (offset {e.pos})")
    return a / b


def eval_expr(e: Expr, points) -> np.ndarray:
    z = np.asarray(points, dtype=complex)
    scalar = z.ndim == 0
    out = _eval(e, np.atleast_1d(z), FUNCTIONS)
    return out[0] if scalar else out.reshape(z.shape)


def sample_boundary(e: Expr, grid):
    from .geometry import BoundarySamples

    return BoundarySamples(grid, eval_expr(e, grid.nodes))


# named builders


def z() -> Expr:
    return Var()


def const(c) -> Expr:
    return Const(complex(c))


def conj_z() -> Expr:
    return Call("conj", Var())


def _shift(center: complex) -> Expr:
    center = complex(center)
    if center == 0:
        return Var()
    if center.imag == 0 and center.real > 0:
        return BinOp("-", Var(), Const(center))
    if center.imag == 0:
        return BinOp("+", Var(), Const(complex(-center.real)))
    return BinOp("-", Var(), Const(center))


def zpow(n: int, center: complex = 0, radius: float = 1.0) -> Expr:
    """``((z - center)/radius)^n``, printed as plainly as possible."""
    base = _shift(center)
    if radius != 1:
        base = BinOp("/", base, Const(complex(radius)))
    if n == 1:
        return base
    if n == 0:
        return Const(1 + 0j)
    return Pow(base, n)


def runge(domain, k: int, n: int) -> Expr:
    """``(r_k/(z - c_k))^n`` for hole ``k`` of ``domain`` (0-based)."""
    h = domain.holes[k]
    e = BinOp("/", Const(complex(h.radius)), _shift(h.center))
    return e if n == 1 else Pow(e, n)


def conj_shift(center: complex) -> Expr:
    return Call("conj", _shift(center))


REGISTRY = {
    "conj_z": lambda: conj_z(),
    "zpow": lambda n: zpow(int(n)),
    "runge": runge,
}
