"""Univariate polynomials over a field and reduced rational functions K(x).

Coefficients are stored densely, lowest degree first. The coefficient ring may
be any object behaving like the field classes of :mod:`jonquieres.fields`,
including :class:`RationalFunctionField`, so ``Poly`` over ``K(x)`` is what
the map parser uses for the fiber variable ``y``.
"""

from __future__ import annotations

from gmpy2 import mpq

from .errors import (
    DegreeBudgetExceeded,
    DivisionByZero,
    Undecided,
    UnsupportedCharacteristic,
)
from .fields import (
    QQ,
    CyclotomicField,
    FpElement,
    PrimeField,
    field_of,
    format_scalar,
    nth_root_in_field,
)

DEGREE_CAP = 4096


def _check_cap(d):
    if d > DEGREE_CAP:
        raise DegreeBudgetExceeded(f"degree {d} exceeds the cap {DEGREE_CAP}")


class Poly:
    __slots__ = ("field", "c")

    def __init__(self, field, coeffs=(), _raw=False):
        self.field = field
        if not _raw:
            coeffs = [field(a) for a in coeffs]
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.c = tuple(coeffs)

    # constructors
    @classmethod
    def x(cls, field):
        return cls(field, (field.zero, field.one), _raw=True)

    @classmethod
    def const(cls, field, a):
        return cls(field, (field(a),), _raw=True)

    @classmethod
    def monomial(cls, field, k, a=1):
        return cls(field, [field.zero] * k + [field(a)], _raw=True)

    # basic data
    @property
    def deg(self):
        return len(self.c) - 1

    def degree(self):
        return len(self.c) - 1

    def lc(self):
        return self.c[-1] if self.c else self.field.zero

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else self.field.zero

    def __bool__(self):
        return bool(self.c)

    def is_constant(self):
        return len(self.c) <= 1

    def constant_value(self):
        return self.c[0] if self.c else self.field.zero

    def valuation(self):
        for i, a in enumerate(self.c):
            if a:
                return i
        return None

    def __eq__(self, o):
        if isinstance(o, Poly):
            return self.field is o.field and self.c == o.c
        if isinstance(o, RatFunc) and o.field is self.field:
            return o == self
        try:
            return self.c == Poly.const(self.field, o).c
        except Exception:
            return NotImplemented

    def __hash__(self):
        if len(self.c) <= 1:
            return hash(self.constant_value())
        return hash(("Poly", self.c))

    def _coerce(self, o):
        if isinstance(o, Poly):
            if o.field is not self.field:
                from .errors import SpecMismatch

                raise SpecMismatch("polynomials over different fields")
            return o
        return Poly.const(self.field, o)

    # arithmetic
    def __add__(self, o):
        if isinstance(o, RatFunc) and o.field is self.field:
            return NotImplemented
        o = self._coerce(o)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return Poly(self.field, out, _raw=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-a for a in self.c], _raw=True)

    def __sub__(self, o):
        if isinstance(o, RatFunc) and o.field is self.field:
            return NotImplemented
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, RatFunc) and o.field is self.field:
            return NotImplemented
        if not isinstance(o, Poly):
            s = self.field(o)
            if not s:
                return Poly(self.field, (), _raw=True)
            return Poly(self.field, [a * s for a in self.c], _raw=True)
        o = self._coerce(o)
        if not self.c or not o.c:
            return Poly(self.field, (), _raw=True)
        _check_cap(self.deg + o.deg)
        zero = self.field.zero
        out = [zero] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return Poly(self.field, out, _raw=True)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        _check_cap(max(self.deg, 0) * k)
        result = Poly.const(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, o):
        o = self._coerce(o)
        if not o.c:
            raise DivisionByZero("polynomial division by zero")
        r = list(self.c)
        db = o.deg
        inv = 1 / o.c[-1]
        if len(r) - 1 < db:
            return Poly(self.field, (), _raw=True), self
        q = [self.field.zero] * (len(r) - db)
        for i in range(len(r) - 1 - db, -1, -1):
            t = r[i + db] * inv
            q[i] = t
            if t:
                for j, b in enumerate(o.c):
                    r[i + j] = r[i + j] - t * b
        return Poly(self.field, q, _raw=True), Poly(self.field, r[:db], _raw=True)

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __mod__(self, o):
        return divmod(self, o)[1]

    def exact_div(self, o):
        q, r = divmod(self, o)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __truediv__(self, o):
        if isinstance(o, Poly) or (isinstance(o, RatFunc) and o.field is self.field):
            return RatFunc(self) / o
        s = self.field(o)
        if not s:
            raise DivisionByZero("division by zero")
        return self * (1 / s)

    def __rtruediv__(self, o):
        return RatFunc.const(self.field, o) / RatFunc(self)

    def monic(self):
        if not self.c:
            return self
        return self * (1 / self.c[-1])

    def derivative(self):
        return Poly(self.field, [a * i for i, a in enumerate(self.c)][1:], _raw=True)

    def __call__(self, v):
        """Horner evaluation at a scalar, polynomial or rational function."""
        if not self.c:
            return self.field.zero if not isinstance(v, (Poly, RatFunc)) else v * 0
        acc = self.c[-1]
        if isinstance(v, (Poly, RatFunc)) and v.field is self.field:
            acc = type(v).const(v.field, acc)
        for a in reversed(self.c[:-1]):
            acc = acc * v + a
        return acc

    def scale_arg(self, s):
        """p(s*x)."""
        out = []
        pw = self.field.one
        for a in self.c:
            out.append(a * pw)
            pw = pw * s
        return Poly(self.field, out, _raw=True)

    def map_coeffs(self, fn, field=None):
        field = field or self.field
        return Poly(field, [fn(a) for a in self.c])

    def format(self, var="x"):
        return format_poly(self, var)

    def __repr__(self):
        return f"Poly({self.format()})"

    def __str__(self):
        return self.format()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero only when both inputs are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """(g, s, t) with s*a + t*b = g monic."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = Poly.const(f, 1), Poly(f, ())
    t0, t1 = Poly(f, ()), Poly.const(f, 1)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = 1 / r0.lc()
    return r0 * inv, s0 * inv, t0 * inv


class RatFunc:
    """A reduced fraction num/den in K(x); den is monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, Poly):
            raise TypeError("RatFunc needs Poly numerator")
        if den is None:
            den = Poly.const(num.field, 1)
        if not den:
            raise DivisionByZero("zero denominator")
        if not _reduced:
            if not num:
                den = Poly.const(num.field, 1)
            elif not den.is_constant():
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num, den = num.exact_div(g), den.exact_div(g)
            inv = 1 / den.lc()
            if inv != 1:
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def const(cls, field, a):
        return cls(Poly.const(field, a), _reduced=True) if field(a) else cls(Poly(field, ()), _reduced=True)

    @classmethod
    def x(cls, field):
        return cls(Poly.x(field), _reduced=True)

    def _check(self):
        """Debug validator for the reduced-form invariant."""
        assert self.den and self.den.lc() == 1
        assert poly_gcd(self.num, self.den).is_constant() or not self.num
        return True

    def __bool__(self):
        return bool(self.num)

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self):
        return self.den.is_constant()

    def constant_value(self):
        return self.num.constant_value()

    def degree(self):
        return max(self.num.deg, self.den.deg)

    def _coerce(self, o):
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, Poly):
            return RatFunc(o, _reduced=True)
        return RatFunc.const(self.field, o)

    def __eq__(self, o):
        if isinstance(o, RatFunc):
            return self.num == o.num and self.den == o.den
        if isinstance(o, Poly):
            return self.den.is_constant() and self.num == o
        try:
            return self.den.is_constant() and self.num == Poly.const(self.field, o)
        except Exception:
            return NotImplemented

    def __hash__(self):
        if self.den.is_constant():
            return hash(self.num)
        return hash((self.num, self.den))

    def __add__(self, o):
        o = self._coerce(o)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        if not self.num or not o.num:
            return RatFunc(Poly(self.field, ()), _reduced=True)
        # cross-cancel before multiplying keeps degrees small
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = self.num.exact_div(g1), o.den.exact_div(g1)
        n2, d1 = o.num.exact_div(g2), self.den.exact_div(g2)
        den = d1 * d2
        num = n1 * n2
        inv = 1 / den.lc()
        return RatFunc(num * inv, den * inv, _reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero rational function")
        num, den = self.den, self.num
        inv = 1 / den.lc()
        return RatFunc(num * inv, den * inv, _reduced=True)

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num**k, self.den**k, _reduced=True)

    def __call__(self, v):
        """Evaluate at a scalar (DivisionByZero at a pole) or compose with a RatFunc/Poly."""
        if isinstance(v, (Poly, RatFunc)):
            return self.compose(v if isinstance(v, RatFunc) else RatFunc(v, _reduced=True))
        d = self.den(v)
        if not d:
            raise DivisionByZero("evaluation at a pole")
        return self.num(v) / d

    def compose(self, g: "RatFunc") -> "RatFunc":
        """self(g(x)) via homogenized evaluation to avoid nested fractions."""
        p, q = g.num, g.den
        m = self.degree()
        return RatFunc(_homog_eval(self.num, p, q, m)) / RatFunc(_homog_eval(self.den, p, q, m))

    def scale_arg(self, s):
        return RatFunc(self.num.scale_arg(s), self.den.scale_arg(s))

    def derivative(self):
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def format(self, var="x"):
        return format_ratfunc(self, var)

    def __repr__(self):
        return f"RatFunc({self.format()})"

    def __str__(self):
        return self.format()


def _homog_eval(f: Poly, p: Poly, q: Poly, m: int) -> Poly:
    """sum_i f_i p^i q^(m-i)."""
    field = f.field
    if not f:
        return Poly(field, ())
    acc = Poly(field, ())
    ppow = [Poly.const(field, 1)]
    for _ in range(m):
        ppow.append(ppow[-1] * p)
    qpow = [Poly.const(field, 1)]
    for _ in range(m):
        qpow.append(qpow[-1] * q)
    for i, a in enumerate(f.c):
        if a:
            acc = acc + ppow[i] * qpow[m - i] * a
    return acc


class RationalFunctionField:
    """K(x) as a coefficient 'field' for :class:`Poly`."""

    def __init__(self, base):
        self.base = base
        self.char = base.char
        self.name = f"{base.name}(x)"

    def __call__(self, v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, Poly):
            return RatFunc(v, _reduced=True)
        return RatFunc.const(self.base, v)

    @property
    def zero(self):
        return RatFunc(Poly(self.base, ()), _reduced=True)

    @property
    def one(self):
        return RatFunc.const(self.base, 1)

    def __eq__(self, o):
        return isinstance(o, RationalFunctionField) and o.base is self.base

    def __hash__(self):
        return hash(("Kx", id(self.base)))


_KX_CACHE = {}


def function_field(base):
    if id(base) not in _KX_CACHE:
        _KX_CACHE[id(base)] = (base, RationalFunctionField(base))
    return _KX_CACHE[id(base)][1]


def ratfunc_arith(f, g, op):
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    raise ValueError(op)


# ------------------------------------------------------------ squarefree

def squarefree_decomposition(p: Poly):
    """Yun's algorithm: monic squarefree factors with multiplicities.

    ``p = lc(p) * prod f_i^m_i``. In characteristic p the result is accepted
    only if it reconstructs the input (all multiplicities below p).
    """
    if not p:
        raise ValueError("squarefree decomposition of zero")
    f = p.monic()
    if f.is_constant():
        return []
    out = []
    df = f.derivative()
    if not df:
        raise UnsupportedCharacteristic("derivative vanishes; multiplicity divisible by the characteristic")
    a0 = poly_gcd(f, df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    i = 1
    while not b.is_constant():
        a = poly_gcd(b, d)
        if not a.is_constant():
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    prod = Poly.const(p.field, 1)
    for a, m in out:
        prod = prod * a**m
    if prod != f:
        raise UnsupportedCharacteristic("multiplicity not below the characteristic")
    return out


def squarefree_part(p: Poly) -> Poly:
    """Product of the factors of odd multiplicity (monic)."""
    out = Poly.const(p.field, 1)
    for a, m in squarefree_decomposition(p):
        if m % 2:
            out = out * a
    return out


def is_square_in_field(a):
    """(True, root) / (False, None); Undecided for unresolved cyclotomic constants."""
    f = field_of(a)
    if isinstance(f, PrimeField) and f.p == 2:
        return True, a  # Frobenius is bijective on F_2
    r = nth_root_in_field(a, 2)
    if r is not None:
        return True, r
    if isinstance(f, CyclotomicField) and not (a.is_rational() and f.degree == 1):
        raise Undecided(f"cannot decide whether {format_scalar(a)} is a square in {f.name}")
    return False, None


def is_square_ratfunc(f: RatFunc):
    """Decide whether f is a square in K(x); returns (flag, sqrt or None)."""
    if not f:
        return True, f
    field = f.field
    if isinstance(field, PrimeField) and field.p == 2:
        raise UnsupportedCharacteristic("square test needs odd characteristic")
    root = RatFunc.const(field, 1)
    for part, sign in ((f.num, 1), (f.den, -1)):
        for a, m in squarefree_decomposition(part):
            if m % 2:
                return False, None
            root = root * (a ** (m // 2) if sign > 0 else RatFunc(a ** (m // 2)).inverse())
    lead = f.num.lc() / f.den.lc()
    ok, r = is_square_in_field(lead)
    if not ok:
        return False, None
    return True, root * r


# ------------------------------------------------------------ Moebius action

def substitute_mobius(f: RatFunc, eta) -> RatFunc:
    """f(eta(x)) for a Moebius map eta = (a x + b)/(c x + d)."""
    field = f.field
    p = Poly(field, (eta.b, eta.a))
    q = Poly(field, (eta.d, eta.c))
    return f.compose(RatFunc(p, q))


# ------------------------------------------------------------ roots in K

def roots_in_field(p: Poly):
    """Distinct roots of p lying in its coefficient field, plus unresolved factors.

    Returns (roots, unresolved) where ``unresolved`` lists monic factors of
    degree >= 2 without roots found in K (over Q they are irreducible; over a
    cyclotomic field they are factors with rational coefficients only, or
    anything we could not split).
    """
    field = p.field
    if p.is_constant():
        return [], []
    sqf = Poly.const(field, 1)
    for a, _ in squarefree_decomposition(p):
        sqf = sqf * a
    if field is QQ:
        return _roots_rational(sqf)
    if isinstance(field, PrimeField):
        roots = [a for a in field.elements() if not sqf(a)] if field.p <= 1 << 16 else _roots_fp_large(sqf)
        rest = sqf
        for r in roots:
            rest = rest.exact_div(Poly(field, (-r, field.one)))
        return roots, ([] if rest.is_constant() else [rest])
    return _roots_cyclotomic(sqf)


def _to_sympy(p, gen):
    from sympy import Poly as SPoly, Rational

    return SPoly([Rational(int(a.numerator), int(a.denominator)) for a in reversed(p.c)], gen)


def _roots_rational(p):
    from sympy import Symbol, factor_list

    x = Symbol("x")
    expr = _to_sympy(p, x).as_expr()
    roots, rest = [], []
    for fac, _ in factor_list(expr, x)[1]:
        coeffs = [mpq(int(c.p), int(c.q)) for c in reversed(fac.as_poly(x).all_coeffs())]
        fp = Poly(QQ, coeffs).monic()
        if fp.deg == 1:
            roots.append(-fp.c[0])
        elif fp.deg > 1:
            rest.append(fp)
    roots.sort()
    return roots, rest


def _roots_fp_large(p):
    from sympy import Poly as SPoly, Symbol

    field = p.field
    x = Symbol("x")
    sp = SPoly([int(a) for a in reversed(p.c)], x, modulus=field.p)
    return [field(int(r)) for r in sp.ground_roots()]


def _roots_cyclotomic(p):
    field = p.field
    roots, rest = [], []
    pending = [p.monic()]
    if all(a.is_rational() for a in p.c):
        rp = Poly(QQ, [a.to_rational() for a in p.c])
        r, unres = _roots_rational(rp)
        roots = [field(a) for a in r]
        pending = [Poly(field, u.c) for u in unres]
    for f in pending:
        if f.deg == 2:
            # x^2 + b x + c: roots from a square root of the discriminant
            b, c = f.c[1], f.c[0]
            disc = b * b - 4 * c
            s = nth_root_in_field(disc, 2)
            if s is not None:
                roots.extend([(-b + s) / 2, (-b - s) / 2])
                continue
        if f.deg == 1:
            roots.append(-f.c[0])
            continue
        rest.append(f)
    return roots, rest


# ------------------------------------------------------------ text

def _scalar_text(a):
    return format_scalar(a, bare_fp=True)


def _coeff_text(a):
    """(negative, body) for a coefficient printed in front of a monomial."""
    if isinstance(a, FpElement):
        return False, str(a.v)
    f = field_of(a)
    if f is QQ or a.is_rational():
        q = a if f is QQ else a.to_rational()
        return q < 0, format_scalar(abs(q))
    s = format_scalar(a)
    if " " in s:
        return False, f"({s})"
    if s.startswith("-"):
        return True, s[1:]
    return False, s


def format_poly(p: Poly, var="x") -> str:
    if not p.c:
        return "0"
    terms = []
    for k in range(len(p.c) - 1, -1, -1):
        a = p.c[k]
        if not a:
            continue
        mono = "" if k == 0 else var if k == 1 else f"{var}^{k}"
        neg, body = _coeff_text(a)
        if mono:
            text = mono if body == "1" else f"{body}*{mono}"
        else:
            text = body
        terms.append((neg, text))
    out = ("-" if terms[0][0] else "") + terms[0][1]
    for neg, t in terms[1:]:
        out += (" - " if neg else " + ") + t
    return out


def _wrap(s):
    return s if _is_atom(s) else f"({s})"


def _is_atom(s):
    return all(ch not in s for ch in " +/") and not s.startswith("-")


def format_ratfunc(f: RatFunc, var="x") -> str:
    num = format_poly(f.num, var)
    if f.den.is_constant():
        return num
    den = format_poly(f.den, var)
    return f"{_wrap(num)}/{_wrap(den)}"


def format_factored(f: RatFunc, var="x") -> str:
    """Compact form using squarefree factors, e.g. ``(x+1)^2/x``."""
    if not f.num:
        return "0"

    def side(p):
        parts = []
        lead = p.lc()
        for a, m in squarefree_decomposition(p):
            s = format_poly(a, var).replace(" ", "")
            s = s if _is_atom(s) else f"({s})"
            parts.append(s if m == 1 else f"{s}^{m}")
        return lead, parts

    lead_n, pn = side(f.num)
    lead_d, pd = side(f.den)
    c = lead_n / lead_d
    num = "*".join(pn)
    if c != 1 or not num:
        cs = _scalar_text(c).replace(" ", "")
        if not _is_atom(cs) and num:
            cs = f"({cs})"
        num = cs if not num else f"{cs}*{num}"
    if not pd:
        return num
    den = "*".join(pd)
    if len(pd) > 1:
        den = f"({den})"
    return f"{num}/{den}"
