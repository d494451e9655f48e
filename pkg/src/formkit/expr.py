"""
Recursive-descent parser and evaluator for complex-valued expressions.

Sequence symbols are written over the variable ``n`` (``"(-1)^n * n^2"``),
plane functions over ``x``, ``y`` and ``z = x + i*y`` (``"exp(i*z)"``).

Grammar, lowest precedence first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?            right-associative
    atom    := number | 'i' | 'pi' | 'e' | var | func '(' expr ')' | '(' expr ')'

There is no implicit multiplication: ``2n`` is a syntax error.
"""

from dataclasses import dataclass
import math
import re
from typing import Union

import numpy as np

from .errors import ContextError, DomainError, ParseError, UnboundVariable

__all__ = [
    "Literal",
    "Var",
    "Unary",
    "Binary",
    "Expr",
    "UNARY_OPS",
    "BINARY_OPS",
    "CONTEXT_VARS",
    "parse",
    "evaluate",
    "evaluate_array",
    "to_text",
    "free_vars",
]

UNARY_OPS = ("neg", "conj", "abs", "re", "im", "sign", "sqrt", "exp", "log", "sin", "cos")
BINARY_OPS = ("add", "sub", "mul", "div", "pow")
CONTEXT_VARS = {"sequence": frozenset("n"), "plane": frozenset("xyz")}

_FUNCTIONS = frozenset(UNARY_OPS) - {"neg"}
_CONSTANTS = {"i": 1j, "pi": complex(math.pi), "e": complex(math.e)}
_SYMBOL_OF = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}
_OP_OF = {v: k for k, v in _SYMBOL_OF.items()}


@dataclass(frozen=True)
class Literal:
    value: complex


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Literal, Var, Unary, Binary]


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | name | op | end
    text: str
    pos: int  # byte offset


def _tokenize(text):
    tokens = []
    i = 0
    byte_pos = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(byte_pos, "a token", text[i])
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), byte_pos))
        byte_pos += len(m.group().encode("utf-8"))
        i = m.end()
    tokens.append(_Token("end", "", byte_pos))
    return tokens


class _Parser:
    def __init__(self, text, context):
        self.tokens = _tokenize(text)
        self.k = 0
        self.allowed = CONTEXT_VARS[context]
        self.context = context

    @property
    def tok(self):
        return self.tokens[self.k]

    def _accept(self, op):
        if self.tok.kind == "op" and self.tok.text == op:
            self.k += 1
            return True
        return False

    def _expect(self, op):
        if not self._accept(op):
            raise ParseError(self.tok.pos, repr(op), self.tok.text or "end of input")

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(self.tok.pos, "an operator or end of input", self.tok.text)
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = _OP_OF[self.tok.text]
            self.k += 1
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = _OP_OF[self.tok.text]
            self.k += 1
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        if self._accept("-"):
            return Unary("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self._accept("^"):
            return Binary("pow", base, self.unary())
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "number":
            value = float(tok.text)
            if not math.isfinite(value):
                raise ParseError(tok.pos, "a finite number", tok.text)
            self.k += 1
            return Literal(complex(value))
        if tok.kind == "name":
            self.k += 1
            name = tok.text
            if name in _FUNCTIONS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Unary(name, arg)
            if name in _CONSTANTS:
                return Literal(_CONSTANTS[name])
            if name in CONTEXT_VARS["sequence"] | CONTEXT_VARS["plane"]:
                if name not in self.allowed:
                    raise ContextError(
                        tok.pos, f"a {self.context} variable {sorted(self.allowed)}", name
                    )
                return Var(name)
            raise ParseError(tok.pos, "a variable, constant or function", name)
        if self._accept("("):
            node = self.expr()
            self._expect(")")
            return node
        raise ParseError(tok.pos, "an operand", tok.text or "end of input")


def parse(text, context="sequence"):
    """Parse `text` into an expression tree.

    Parameters
    ----------
    text : str
        Source expression.
    context : {'sequence', 'plane'}
        Selects the admissible variables: ``n`` for sequences, ``x``, ``y``,
        ``z`` for plane functions.

    Raises
    ------
    ParseError
        With the byte offset of the offending token.
    ContextError
        If a variable is not allowed in `context`.
    """
    if context not in CONTEXT_VARS:
        raise ValueError(f"unknown context {context!r}")
    if not text or not text.strip():
        raise ParseError(0, "an expression", "")
    return _Parser(text, context).parse()


# -- printing ----------------------------------------------------------------


def _real_text(x):
    return repr(x) if math.copysign(1.0, x) > 0 else f"(-{-x!r})"


def _literal_text(v):
    if v == 1j:
        return "i"
    if v.imag == 0.0:
        return _real_text(v.real)
    # not producible by the parser; emit an equivalent expression
    return f"({_real_text(v.real)} + {_real_text(v.imag)}*i)"


def to_text(node):
    """Canonical fully parenthesized text; ``parse(to_text(a)) == a``.

    Round-tripping is exact for every tree the parser can produce
    (literals are then nonnegative reals or ``i``).
    """
    if isinstance(node, Literal):
        return _literal_text(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"(-{to_text(node.child)})"
        return f"{node.op}({to_text(node.child)})"
    return f"({to_text(node.left)} {_SYMBOL_OF[node.op]} {to_text(node.right)})"


def free_vars(node):
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Unary):
        return free_vars(node.child)
    if isinstance(node, Binary):
        return free_vars(node.left) | free_vars(node.right)
    return set()


# -- evaluation --------------------------------------------------------------


def _first_bad(mask):
    return int(np.flatnonzero(np.ravel(mask))[0])


def _int_power(a, k):
    # exact binary exponentiation; k is an integer ndarray broadcast with a
    a, k = np.broadcast_arrays(a, k)
    result = np.ones(a.shape, dtype=np.complex128)
    base = a.astype(np.complex128).copy()
    e = np.abs(k).astype(np.int64)
    while np.any(e):
        odd = (e & 1).astype(bool)
        result[odd] *= base[odd]
        e >>= 1
        if np.any(e):
            base = base * base
    neg = k < 0
    if np.any(neg):
        if np.any(result[neg] == 0):
            raise DomainError("zero raised to a negative power")
        result[neg] = 1.0 / result[neg]
    return result


def _unsigned_zero(v):
    # -0.0 + 0.0 == +0.0: keeps arg() in (-pi, pi] so sqrt(-4) = 2i
    return v + 0.0


def _power(a, b):
    a, b = np.broadcast_arrays(a, b)
    out = np.empty(a.shape, dtype=np.complex128)
    integral = (b.imag == 0) & (b.real == np.round(b.real)) & (np.abs(b.real) < 2**62)
    if np.any(integral):
        out[integral] = _int_power(a[integral], b[integral].real.astype(np.int64))
    rest = ~integral
    if np.any(rest):
        ar, br = a[rest], b[rest]
        zero = ar == 0
        if np.any(zero):
            positive = (br.imag == 0) & (br.real > 0)
            if np.any(zero & ~positive):
                raise DomainError("0 raised to a non-positive or complex power")
        with np.errstate(all="ignore"):
            safe = np.where(zero, 1.0, ar)
            val = np.exp(br * np.log(_unsigned_zero(safe)))
        out[rest] = np.where(zero, 0.0, val)
    return out


def _apply_unary(op, v):
    if op == "neg":
        return -v
    if op == "conj":
        return np.conj(v)
    if op == "abs":
        return np.abs(v).astype(np.complex128)
    if op == "re":
        return v.real.astype(np.complex128)
    if op == "im":
        return v.imag.astype(np.complex128)
    if op == "sign":
        mag = np.abs(v)
        with np.errstate(all="ignore"):
            return np.where(mag == 0, 0.0, v / np.where(mag == 0, 1.0, mag))
    if op == "sqrt":
        return np.sqrt(_unsigned_zero(v))
    if op == "exp":
        return np.exp(v)
    if op == "log":
        if np.any(v == 0):
            raise DomainError(f"log(0) at element {_first_bad(v == 0)}")
        return np.log(_unsigned_zero(v))
    if op == "sin":
        return np.sin(v)
    if op == "cos":
        return np.cos(v)
    raise ValueError(f"unknown unary op {op!r}")


def _eval(node, env):
    if isinstance(node, Literal):
        return np.asarray(node.value, dtype=np.complex128)
    if isinstance(node, Var):
        if node.name in env:
            return env[node.name]
        if node.name == "z" and "x" in env and "y" in env:
            return env["x"] + 1j * env["y"]
        raise UnboundVariable(f"variable {node.name!r} is not bound")
    if isinstance(node, Unary):
        return _apply_unary(node.op, _eval(node.child, env))
    a = _eval(node.left, env)
    b = _eval(node.right, env)
    if node.op == "add":
        return a + b
    if node.op == "sub":
        return a - b
    if node.op == "mul":
        return a * b
    if node.op == "div":
        if np.any(b == 0):
            raise DomainError("division by zero")
        return a / b
    return _power(a, b)


def evaluate_array(node, bindings):
    """Evaluate `node` elementwise over broadcast array `bindings`.

    Returns a complex128 ndarray. Scalar and array evaluation share this
    code path, so results are bit-identical between them.
    """
    env = {k: np.asarray(v, dtype=np.complex128) for k, v in bindings.items()}
    with np.errstate(over="ignore", invalid="ignore"):
        out = _eval(node, env)
    return np.asarray(out, dtype=np.complex128)


def evaluate(node, bindings=None):
    """Evaluate `node` at scalar `bindings` and return a Python complex.

    Conventions: ``sign(0) = 0``; branch cuts of ``sqrt``, ``log`` and
    ``^`` follow ``arg`` in ``(-pi, pi]`` (signed zeros are ignored); ``a^b`` is the principal branch
    ``exp(b log a)`` except for integer ``b``, which uses exact repeated
    multiplication (so ``(-1)^n`` is exactly +-1); ``0^0 = 1``,
    ``0^b = 0`` for real ``b > 0``.

    Raises
    ------
    UnboundVariable, DomainError
    """
    return complex(evaluate_array(node, bindings or {}))
