"""Text format for Moebius maps, Jonquieres pairs and homogeneous triples.

Grammar::

    map    := '(' expr ',' expr ')' | '[' expr ':' expr ':' expr ']' | expr
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' | '+') factor | base ('^' int)?
    base   := integer | zeta_n | var | '(' expr ')'

Variables are ``x, y`` in pairs and single expressions and ``X, Y, Z`` in
triples. Multiplication must be explicit. Errors carry byte offsets.
"""

from __future__ import annotations

import math
import re
from typing import NamedTuple

from .errors import (
    DivisionByZero,
    InconsistentDegrees,
    MapSyntaxError,
    NotHomogeneous,
    NotJonquieres,
)
from .fields import QQ, Cyclotomic, CyclotomicField, FpElement, PrimeField, _mu_power, field_of
from .poly import Poly, RatFunc, _coeff_text, format_ratfunc, function_field


class Token(NamedTuple):
    kind: str  # num, ident, op, end
    value: str
    pos: int  # byte offset


_TOKEN_RE = re.compile(r"\s+|#[^\n]*|(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.)", re.S)
_ZETA_RE = re.compile(r"zeta_(\d+)")
_OPS = set("+-*/^()[],:")


def tokenize(text: str):
    out = []
    raw = text.encode()
    # byte offset of each character
    offsets = []
    b = 0
    for ch in text:
        offsets.append(b)
        b += len(ch.encode())
    offsets.append(len(raw))
    for m in _TOKEN_RE.finditer(text):
        num, ident, op = m.groups()
        pos = offsets[m.start()]
        if num is not None:
            out.append(Token("num", num, pos))
        elif ident is not None:
            out.append(Token("ident", ident, pos))
        elif op is not None:
            if op not in _OPS:
                raise MapSyntaxError(f"unexpected character {op!r}", pos)
            out.append(Token("op", op, pos))
    out.append(Token("end", "", offsets[-1]))
    return out


class Node(NamedTuple):
    op: str  # num, zeta, var, add, sub, mul, div, pow, neg
    args: tuple
    pos: int


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.tok
        if t.value != value or t.kind == "end":
            found = "end of input" if t.kind == "end" else repr(t.value)
            raise MapSyntaxError(f"expected {value!r}, found {found}", t.pos)
        return self.take()

    def expr(self):
        left = self.term()
        while self.tok.kind == "op" and self.tok.value in "+-":
            t = self.take()
            right = self.term()
            left = Node("add" if t.value == "+" else "sub", (left, right), t.pos)
        return left

    def term(self):
        left = self.factor()
        while True:
            t = self.tok
            if t.kind == "op" and t.value in "*/":
                self.take()
                right = self.factor()
                left = Node("mul" if t.value == "*" else "div", (left, right), t.pos)
            elif t.kind in ("num", "ident") or (t.kind == "op" and t.value in "(["):
                raise MapSyntaxError("implicit multiplication is not allowed; use '*'", t.pos)
            else:
                return left

    def factor(self):
        t = self.tok
        if t.kind == "op" and t.value in "+-":
            self.take()
            inner = self.factor()
            return inner if t.value == "+" else Node("neg", (inner,), t.pos)
        b = self.base()
        if self.tok.kind == "op" and self.tok.value == "^":
            caret = self.take()
            sign = 1
            if self.tok.kind == "op" and self.tok.value == "-":
                self.take()
                sign = -1
            e = self.tok
            if e.kind != "num":
                raise MapSyntaxError("exponent must be an integer literal", e.pos)
            self.take()
            b = Node("pow", (b, sign * int(e.value)), caret.pos)
            if self.tok.kind == "op" and self.tok.value == "^":
                raise MapSyntaxError("chained exponents need parentheses", self.tok.pos)
        return b

    def base(self):
        t = self.tok
        if t.kind == "num":
            self.take()
            return Node("num", (int(t.value),), t.pos)
        if t.kind == "ident":
            self.take()
            m = _ZETA_RE.fullmatch(t.value)
            if m:
                n = int(m.group(1))
                if n < 1:
                    raise MapSyntaxError("zeta index must be positive", t.pos)
                return Node("zeta", (n,), t.pos)
            if t.value in ("x", "y", "X", "Y", "Z"):
                return Node("var", (t.value,), t.pos)
            raise MapSyntaxError(f"unknown identifier {t.value!r}", t.pos)
        if t.kind == "op" and t.value == "(":
            self.take()
            e = self.expr()
            if self.tok.kind == "op" and self.tok.value == ",":
                raise MapSyntaxError("a pair is only allowed at the top level", self.tok.pos)
            self.expect(")")
            return e
        found = "end of input" if t.kind == "end" else repr(t.value)
        raise MapSyntaxError(f"unexpected {found}", t.pos)

    def finish(self):
        if self.tok.kind != "end":
            raise MapSyntaxError(f"unexpected trailing input {self.tok.value!r}", self.tok.pos)


def parse_ast(text: str):
    """Return ("pair", (e1, e2)) | ("triple", (e1, e2, e3)) | ("expr", e)."""
    toks = tokenize(text)
    p = _Parser(toks)
    t = p.tok
    if t.kind == "op" and t.value == "[":
        p.take()
        parts = [p.expr()]
        for _ in range(2):
            p.expect(":")
            parts.append(p.expr())
        if p.tok.kind == "op" and p.tok.value == ":":
            raise MapSyntaxError("a plane map has exactly three components", p.tok.pos)
        p.expect("]")
        p.finish()
        return "triple", tuple(parts)
    if t.kind == "op" and t.value == "(":
        p.take()
        first = p.expr()
        if p.tok.kind == "op" and p.tok.value == ",":
            p.take()
            second = p.expr()
            if p.tok.kind == "op" and p.tok.value == ",":
                raise MapSyntaxError("a Jonquieres pair has exactly two components", p.tok.pos)
            p.expect(")")
            p.finish()
            return "pair", (first, second)
        # a parenthesized expression: reparse from the start
        p = _Parser(toks)
    e = p.expr()
    p.finish()
    return "expr", e


# ---------------------------------------------------------------- evaluation

def _zeta_value(K, n, pos):
    if K is QQ:
        if n in (1, 2):
            return K(1 if n == 1 else -1)
    elif isinstance(K, CyclotomicField):
        if K.mu_order % n == 0:
            return _mu_power(K, K.mu_order // n)
    raise MapSyntaxError(f"zeta_{n} is not available in {K.name}", pos)


class _Algebra:
    allowed = ()

    def __init__(self, K):
        self.K = K

    def scalar(self, a):
        raise NotImplementedError

    def var(self, name, pos):
        raise NotImplementedError

    def div(self, a, b, pos):
        if not b:
            raise MapSyntaxError("division by zero", pos)
        return a / b

    def pow(self, a, k, pos):
        if k < 0 and not a:
            raise MapSyntaxError("division by zero", pos)
        return a**k

    def add(self, a, b, pos):
        return a + b

    def sub(self, a, b, pos):
        return a - b

    def mul(self, a, b, pos):
        return a * b


class _ScalarAlgebra(_Algebra):
    def scalar(self, a):
        return self.K(a)

    def var(self, name, pos):
        raise MapSyntaxError(f"variable {name} not allowed in a scalar", pos)


class _XAlgebra(_Algebra):
    """K(x)."""

    def scalar(self, a):
        return RatFunc.const(self.K, a)

    def var(self, name, pos):
        if name != "x":
            raise MapSyntaxError(f"variable {name} not allowed here (only x)", pos)
        return RatFunc.x(self.K)


class _XYAlgebra(_Algebra):
    """K(x)(y) as rational functions in y over K(x)."""

    def __init__(self, K):
        super().__init__(K)
        self.Kx = function_field(K)

    def scalar(self, a):
        return RatFunc.const(self.Kx, self.Kx(a))

    def var(self, name, pos):
        if name == "x":
            return RatFunc.const(self.Kx, RatFunc.x(self.K))
        if name == "y":
            return RatFunc(Poly.x(self.Kx))
        raise MapSyntaxError(f"variable {name} not allowed in an affine pair (use x, y)", pos)


class _HomAlgebra(_Algebra):
    def scalar(self, a):
        from .cremona import HomPoly

        return HomPoly.const(self.K, a)

    def var(self, name, pos):
        from .cremona import HomPoly

        idx = {"X": 0, "Y": 1, "Z": 2}.get(name)
        if idx is None:
            raise MapSyntaxError(f"variable {name} not allowed in a triple (use X, Y, Z)", pos)
        return HomPoly.var(self.K, idx)

    def _wrap(self, fn, pos):
        try:
            return fn()
        except InconsistentDegrees as exc:
            raise NotHomogeneous(str(exc), pos) from None

    def add(self, a, b, pos):
        return self._wrap(lambda: a + b, pos)

    def sub(self, a, b, pos):
        return self._wrap(lambda: a - b, pos)

    def div(self, a, b, pos):
        if not b:
            raise MapSyntaxError("division by zero", pos)
        if b.deg != 0:
            raise NotHomogeneous("division by a non-constant polynomial in a triple", pos)
        return a.scale(1 / b.terms[(0, 0, 0)])

    def pow(self, a, k, pos):
        if k < 0:
            if a and a.deg == 0:
                return type(a).const(self.K, (1 / a.terms[(0, 0, 0)]) ** (-k))
            raise NotHomogeneous("negative power in a triple", pos)
        return a**k


def evaluate(node: Node, alg: _Algebra):
    op = node.op
    if op == "num":
        return alg.scalar(node.args[0])
    if op == "zeta":
        return alg.scalar(_zeta_value(alg.K, node.args[0], node.pos))
    if op == "var":
        return alg.var(node.args[0], node.pos)
    if op == "neg":
        return -evaluate(node.args[0], alg)
    if op == "pow":
        return alg.pow(evaluate(node.args[0], alg), node.args[1], node.pos)
    a = evaluate(node.args[0], alg)
    b = evaluate(node.args[1], alg)
    try:
        return getattr(alg, op)(a, b, node.pos)
    except DivisionByZero:
        raise MapSyntaxError("division by zero", node.pos) from None


def _mobius_from_ratfunc(r: RatFunc, K, pos, what="base"):
    from .mobius import Mobius

    if r.num.deg > 1 or r.den.deg > 1:
        raise NotJonquieres(f"{what} component is not a Moebius transformation of x", pos)
    a, b = r.num[1], r.num[0]
    c, d = r.den[1], r.den[0]
    if not (a * d - b * c):
        raise NotJonquieres(f"{what} component is constant", pos)
    return Mobius(K, a, b, c, d)


def parse_map(text: str, field=QQ):
    """Parse a Moebius map, a Jonquieres pair or a homogeneous triple."""
    kind, parts = parse_ast(text)
    K = field
    if kind == "triple":
        from .cremona import CremonaMap

        alg = _HomAlgebra(K)
        comps = [evaluate(e, alg) for e in parts]
        degs = {c.deg for c in comps if c}
        if not degs:
            raise InconsistentDegrees("all components are zero", parts[0].pos)
        if len(degs) > 1:
            raise InconsistentDegrees(f"components have degrees {sorted(degs)}", parts[0].pos)
        return CremonaMap(comps, K)
    if kind == "expr":
        r = evaluate(parts, _XAlgebra(K))
        return _mobius_from_ratfunc(r, K, parts.pos, "expression")
    from .jonq import JonqMap

    alg = _XYAlgebra(K)
    first = evaluate(parts[0], alg)
    second = evaluate(parts[1], alg)
    if not (first.num.is_constant() and first.den.is_constant()):
        raise NotJonquieres("first component depends on y", parts[0].pos)
    base_rf = first.num.constant_value() / first.den.constant_value()
    eta = _mobius_from_ratfunc(base_rf, K, parts[0].pos)
    num, den = second.num, second.den
    if num.deg > 1 or den.deg > 1:
        raise NotJonquieres("second component is not of degree one in y", parts[1].pos)
    A, B = num[1], num[0]
    C, D = den[1], den[0]
    if not (A * D - B * C):
        raise NotJonquieres("second component does not depend on y", parts[1].pos)
    return JonqMap(eta, ((A, B), (C, D)))


def parse_ratfunc(text: str, field=QQ) -> RatFunc:
    kind, e = parse_ast(text)
    if kind != "expr":
        raise MapSyntaxError("expected a rational function of x", 0)
    return evaluate(e, _XAlgebra(field))


def parse_scalar_expression(text: str, field=None):
    kind, e = parse_ast(text)
    if kind != "expr":
        raise MapSyntaxError("expected a scalar", 0)
    if field is None:
        ns = [int(m.group(1)) for m in _ZETA_RE.finditer(text)]
        n = math.lcm(*ns) if ns else 1
        field = Cyclotomic(n) if n > 2 else QQ
    return evaluate(e, _ScalarAlgebra(field))


def parse_corpus(text: str, field=QQ):
    """One map per line; blank lines and '#' comments are skipped."""
    out = []
    for line in text.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            out.append(parse_map(stripped, field))
    return out


# ---------------------------------------------------------------- rendering

def _format_bivariate(terms, xv="x", yv="y"):
    """terms: {(i, j): c} for x^i y^j, ordered by y-degree then x-degree."""
    parts = []
    for (i, j), c in sorted(terms.items(), key=lambda t: (t[0][1], t[0][0]), reverse=True):
        if not c:
            continue
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in ((xv, i), (yv, j)) if e
        )
        neg, body = _coeff_text(c)
        text = (mono if body == "1" else f"{body}*{mono}") if mono else body
        parts.append((neg, text))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, t in parts[1:]:
        out += (" - " if neg else " + ") + t
    return out


def _linear_in_y(P: Poly, Q: Poly):
    """{(i, j): c} for P*y + Q."""
    terms = {}
    for i, c in enumerate(P.c):
        if c:
            terms[(i, 1)] = c
    for i, c in enumerate(Q.c):
        if c:
            terms[(i, 0)] = c
    return terms


def _paren(s):
    if any(ch in s for ch in " +/") or s.startswith("-") or ("*" in s):
        return f"({s})"
    return s


def _display_scaled(polys):
    """Over Q, rescale the fiber matrix to coprime integer coefficients for display."""
    K = polys[0].field
    if K is not QQ:
        return polys
    coeffs = [c for p in polys for c in p.c if c]
    den = math.lcm(*(int(c.denominator) for c in coeffs))
    num = math.gcd(*(int(c.numerator) for c in coeffs))
    lam = QQ(den) / num
    return [p * lam for p in polys]


def render_map(m) -> str:
    from .cremona import CremonaMap
    from .jonq import JonqMap
    from .mobius import Mobius

    if isinstance(m, CremonaMap):
        return m.format()
    if isinstance(m, Mobius):
        return format_ratfunc(m.as_ratfunc())
    if isinstance(m, RatFunc):
        return format_ratfunc(m)
    if isinstance(m, JonqMap):
        base = format_ratfunc(m.base.as_ratfunc())
        A, B, C, D = _display_scaled(m.entries())
        if not C and D.is_constant():
            d = D.constant_value()
            second = _format_bivariate(_linear_in_y(A * (1 / d), B * (1 / d)))
        else:
            num = _format_bivariate(_linear_in_y(A, B))
            den = _format_bivariate(_linear_in_y(C, D))
            second = f"{_paren(num)}/{_paren(den)}"
        return f"({base}, {second})"
    raise TypeError(f"cannot render {type(m).__name__}")
