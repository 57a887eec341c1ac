"""Bivariate polynomials with rational coefficients.

A polynomial is a plain ``dict`` mapping exponent pairs ``(i, j)`` (for
``x**i * y**j``) to nonzero Fractions.  The text parser accepts integer and
rational coefficients, the variables ``x`` and ``y``, ``+ - * ^`` (``**`` is
accepted as a synonym for ``^``), parentheses, and division by a constant.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb

from .errors import ConfigError

Poly = dict  # {(i, j): Fraction}

_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])|(\*\*|[-+*/^()]))")


def _clean(p: dict) -> Poly:
    return {k: Fraction(v) for k, v in p.items() if v}


def const(c) -> Poly:
    return _clean({(0, 0): Fraction(c)})


def add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + v
    return _clean(out)


def scale(p: Poly, c) -> Poly:
    return _clean({k: v * c for k, v in p.items()})


def mul(p: Poly, q: Poly) -> Poly:
    out: dict = {}
    for (i1, j1), a in p.items():
        for (i2, j2), b in q.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + a * b
    return _clean(out)


def power(p: Poly, e: int) -> Poly:
    out = const(1)
    for _ in range(e):
        out = mul(out, p)
    return out


def degree(p: Poly) -> int:
    return max((i + j for i, j in p), default=-1)


def degree_in(p: Poly, var: str) -> int:
    idx = 0 if var == "x" else 1
    return max((k[idx] for k in p), default=-1)


def evaluate(p: Poly, x, y) -> Fraction:
    return sum((c * Fraction(x) ** i * Fraction(y) ** j for (i, j), c in p.items()), Fraction(0))


def diff(p: Poly, var: str) -> Poly:
    if var == "x":
        return _clean({(i - 1, j): c * i for (i, j), c in p.items() if i})
    return _clean({(i, j - 1): c * j for (i, j), c in p.items() if j})


def shift_x(p: Poly, x0) -> Poly:
    """p(x0 + z, y), returned with z in the first slot."""
    x0 = Fraction(x0)
    out: dict = {}
    for (i, j), c in p.items():
        for k in range(i + 1):
            key = (k, j)
            out[key] = out.get(key, 0) + c * comb(i, k) * x0 ** (i - k)
    return _clean(out)


def to_string(p: Poly) -> str:
    if not p:
        return "0"
    terms = []
    for (i, j) in sorted(p, key=lambda k: (-(k[0] + k[1]), -k[0])):
        c = p[(i, j)]
        mono = "*".join(
            s for s in (
                f"x^{i}" if i > 1 else ("x" if i == 1 else ""),
                f"y^{j}" if j > 1 else ("y" if j == 1 else ""),
            ) if s
        )
        if mono:
            coef = "" if c == 1 else ("-" if c == -1 else f"{c}*")
            terms.append(f"{coef}{mono}")
        else:
            terms.append(str(c))
    out = " + ".join(terms)
    return out.replace("+ -", "- ")


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        text = text.replace("−", "-")
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ConfigError(f"cannot parse polynomial at {text[pos:]!r}")
            num, var, op = m.groups()
            self.tokens.append(("num", int(num)) if num else ("var", var) if var else ("op", op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        if self.take() != ("op", op):
            raise ConfigError(f"expected {op!r} in polynomial")

    def parse(self) -> Poly:
        if not self.tokens:
            raise ConfigError("empty polynomial")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ConfigError(f"unexpected token {self.peek()[1]!r} in polynomial")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            q = self.term()
            p = add(p, q if op == "+" else scale(q, -1))
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            q = self.unary()
            if op == "*":
                p = mul(p, q)
            else:
                if set(q) - {(0, 0)} or not q:
                    raise ConfigError("division is only allowed by a nonzero constant")
                p = scale(p, 1 / q[(0, 0)])
        return p

    def unary(self) -> Poly:
        if self.peek() == ("op", "-"):
            self.take()
            return scale(self.unary(), -1)
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() in (("op", "^"), ("op", "**")):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ConfigError("exponents must be non-negative integers")
            base = power(base, val)
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return const(val)
        if kind == "var":
            return {(1, 0): Fraction(1)} if val == "x" else {(0, 1): Fraction(1)}
        if (kind, val) == ("op", "("):
            p = self.expr()
            self.expect(")")
            return p
        raise ConfigError(f"unexpected {val!r} in polynomial")


def parse(text: str) -> Poly:
    """Parse a polynomial in x and y, e.g. ``"x^5 + y^5 + 1"``."""
    return _Parser(text).parse()
