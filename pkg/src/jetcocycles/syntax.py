"""Expression text format: a small LL(1) grammar and the matching printer.

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' nat]
    atom   := rational | 'lam' | family '[' nat ']' | 'hinv' | 'S'
            | 'det' '(' nat ',' nat ')' | '(' expr ')'

with family one of f, g, k, T, R, w, h and rational either an integer or
int/int.  Derivative orders are always bracketed (no primes), which keeps the
grammar unambiguous at any order.  ``print -> parse`` is the identity on
canonical forms.
"""

from __future__ import annotations

from fractions import Fraction

from .expr import DEFAULT_ORDER_CAP, FAMILIES, DiffExpr, atom_name, jet, hinv, lam_expr
from .lampoly import LamPoly

_JET_FAMILIES = {"f", "g", "k", "T", "R", "w", "h"}


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise ExprSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ExprSyntaxError("expected an integer", start)
        return int(self.text[start:self.pos])

    def name(self) -> tuple[str, int]:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start:self.pos], start


def parse_expr(text: str, cap: int = DEFAULT_ORDER_CAP) -> DiffExpr:
    """Parse text into a canonical DiffExpr."""
    sc = _Scanner(text)
    e = _expr(sc, cap)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise ExprSyntaxError("unexpected trailing input", sc.pos)
    return e


def _expr(sc: _Scanner, cap: int) -> DiffExpr:
    negate = False
    if sc.peek() == "-":
        sc.expect("-")
        negate = True
    acc = _term(sc, cap)
    if negate:
        acc = -acc
    while sc.peek() in ("+", "-"):
        op = sc.peek()
        sc.expect(op)
        rhs = _term(sc, cap)
        acc = acc + rhs if op == "+" else acc - rhs
    return acc


def _term(sc: _Scanner, cap: int) -> DiffExpr:
    acc = _factor(sc, cap)
    while sc.peek() == "*":
        sc.expect("*")
        acc = acc * _factor(sc, cap)
    return acc


def _factor(sc: _Scanner, cap: int) -> DiffExpr:
    base = _atom(sc, cap)
    if sc.peek() == "^":
        sc.expect("^")
        sc.skip_ws()
        pos = sc.pos
        n = sc.integer()
        try:
            base = base ** n
        except ValueError as exc:
            raise ExprSyntaxError(str(exc), pos) from None
    return base


def _atom(sc: _Scanner, cap: int) -> DiffExpr:
    ch = sc.peek()
    if ch == "(":
        sc.expect("(")
        e = _expr(sc, cap)
        sc.expect(")")
        return e
    if ch.isdigit():
        num = sc.integer()
        if sc.peek() == "/":
            sc.expect("/")
            sc.skip_ws()
            pos = sc.pos
            den = sc.integer()
            if den == 0:
                raise ExprSyntaxError("zero denominator", pos)
            return DiffExpr.rational(Fraction(num, den))
        return DiffExpr.rational(num)
    if ch.isalpha():
        word, start = sc.name()
        if word == "lam":
            return lam_expr()
        if word == "hinv":
            return hinv()
        if word == "S":
            from .calculus import schwarzian

            return schwarzian()
        if word == "det":
            sc.expect("(")
            ppos = sc.pos
            p = sc.integer()
            sc.expect(",")
            qpos = sc.pos
            q = sc.integer()
            sc.expect(")")
            if p >= q:
                raise ExprSyntaxError(f"det({p},{q}) needs p < q", ppos if p > q else qpos)
            return jet("f", p, cap) * jet("g", q, cap) - jet("f", q, cap) * jet("g", p, cap)
        if word in _JET_FAMILIES:
            sc.expect("[")
            pos = sc.pos
            order = sc.integer()
            sc.expect("]")
            try:
                return jet(word, order, cap)
            except ValueError as exc:
                raise ExprSyntaxError(str(exc), pos) from None
        raise ExprSyntaxError(f"unknown name {word!r}", start)
    raise ExprSyntaxError("expected a factor", sc.pos)


# -- printing ----------------------------------------------------------


def poly_text(p: LamPoly) -> str:
    """Grammar-compatible rendering of a lam polynomial (descending degree)."""
    if p.is_zero():
        return "0"
    pieces = []
    for deg in range(p.degree, -1, -1):
        c = p.coeffs[deg] if deg < len(p.coeffs) else Fraction(0)
        if c == 0:
            continue
        mag = abs(c)
        if deg == 0:
            body = str(mag)
        else:
            var = "lam" if deg == 1 else f"lam^{deg}"
            body = var if mag == 1 else f"{mag}*{var}"
        pieces.append(("-" if c < 0 else "+", body))
    sign0, body0 = pieces[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _mono_text(mono) -> str:
    parts = []
    for atom, exp in mono:
        name = atom_name(atom)
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return "*".join(parts)


def to_text(e: DiffExpr) -> str:
    """Deterministic canonical rendering; parse_expr(to_text(e)) == e."""
    if e.is_zero():
        return "0"
    pieces = []
    for mono, coef in e.terms():
        mono_s = _mono_text(mono)
        if coef.is_constant():
            c = coef.constant_value()
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono_s:
                body = str(mag)
            elif mag == 1:
                body = mono_s
            else:
                body = f"{mag}*{mono_s}"
        else:
            sign = "+"
            inner = f"({poly_text(coef)})"
            body = inner if not mono_s else f"{inner}*{mono_s}"
        pieces.append((sign, body))
    sign0, body0 = pieces[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
