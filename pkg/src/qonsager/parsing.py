"""Recursive-descent parser for the scalar and algebra-element text grammar.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' ['-'] INT]
    atom   := INT | NAME | '(' expr ')'

Parameter names are ``q``, ``v``, ``v1``..``v8``, ``k+``, ``k-``, ``e+``,
``e-``; the sign belongs to the name when it directly follows ``k`` or ``e``.
Any other NAME must be a letter of the supplied alphabet.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .scalars import VAR_INDEX, Scalar

_TOKEN = re.compile(r"\s*(?:(\d+)|([ke][+-])|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def tokenize(text: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, signed, name, sym = m.groups()
        if num is not None:
            toks.append(("int", num))
        elif signed is not None:
            toks.append(("name", signed))
        elif name is not None:
            toks.append(("name", name))
        elif sym in "+-*/^()":
            toks.append(("op", sym))
        elif sym.strip():
            raise ParseError(f"unexpected character {sym!r} in {text!r}")
    return toks


class _Parser:
    def __init__(self, text, alphabet=None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.alphabet = alphabet

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind} at token {self.i} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        val = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.i} in {self.text!r}")
        return val

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.i += 1
            sign = -1
        elif self.peek() == ("op", "+"):
            self.i += 1
        val = self.term()
        if sign < 0:
            val = -val
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            if op == "*":
                val = val * rhs
            else:
                if not isinstance(rhs, Scalar):
                    raise ParseError("only scalars may appear in a denominator")
                val = val / rhs if isinstance(val, Scalar) else val * (Scalar(1) / rhs)
        return val

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.i += 1
            neg = False
            if self.peek() == ("op", "-"):
                self.i += 1
                neg = True
            n = int(self.take("int")[1])
            if neg:
                if not isinstance(base, Scalar):
                    raise ParseError("negative powers apply to scalars only")
                n = -n
            base = base**n
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "int":
            self.i += 1
            return Scalar(int(val))
        if kind == "name":
            self.i += 1
            if val in VAR_INDEX:
                return Scalar.var(val)
            if self.alphabet is not None and val in self.alphabet:
                return self.alphabet.letter(val)
            raise ParseError(f"unknown name {val!r} in {self.text!r}")
        if (kind, val) == ("op", "("):
            self.i += 1
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_scalar(text: str) -> Scalar:
    val = _Parser(text).parse()
    if not isinstance(val, Scalar):
        raise ParseError(f"{text!r} is not a scalar")
    return val


def parse_expression(text: str, alphabet):
    """Parse an algebra element over ``alphabet``; scalars are promoted."""
    val = _Parser(text, alphabet).parse()
    if isinstance(val, Scalar):
        val = alphabet.one() * val
    return val
