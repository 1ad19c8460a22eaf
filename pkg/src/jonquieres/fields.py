"""Exact coefficient fields: Q, cyclotomic fields Q(zeta_n) and prime fields F_p.

Rational numbers are plain :class:`gmpy2.mpq` values, so ordinary Python
arithmetic works on them. Cyclotomic and prime-field elements are small
immutable wrapper classes that refuse to mix with elements of another field.
"""

from __future__ import annotations

import functools
import math
import re

import gmpy2
from gmpy2 import mpq, mpz
from sympy import factorint
from sympy.ntheory import discrete_log, nthroot_mod, primitive_root

from ._lattice import kernel_mod
from .errors import (
    DivisionByZero,
    FieldTooSmall,
    SpecMismatch,
    UnsupportedElement,
    UsageError,
    ZeroElement,
)

MPQ = type(mpq(0))
MPZ = type(mpz(0))
_INTS = (int, MPZ)


def _divisors(n):
    ds = [1]
    for p, e in factorint(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def _totient(n):
    r = n
    for p in factorint(n):
        r = r // p * (p - 1)
    return r


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 = prod_{d | n} Phi_d
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num = _exact_div_int(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div_int(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a), "inexact division"
    return q


class Field:
    """Common interface of the three field kinds."""

    char: int
    name: str

    def __repr__(self):
        return f"<field {self.name}>"

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_finite(self):
        return self.char > 0

    def format(self, a):
        return format_scalar(a)

    def contains(self, a):
        try:
            return field_of(a) is self or (field_of(a) is QQ and self.char == 0)
        except SpecMismatch:
            return False


class RationalField(Field):
    char = 0
    name = "Q"
    degree = 1

    def __call__(self, v):
        if isinstance(v, MPQ):
            return v
        if isinstance(v, _INTS):
            return mpq(v)
        if isinstance(v, CycElement) and v.is_rational():
            return v.to_rational()
        if isinstance(v, str):
            return mpq(v.strip())
        if hasattr(v, "numerator") and hasattr(v, "denominator") and not isinstance(v, FpElement):
            return mpq(int(v.numerator), int(v.denominator))
        raise SpecMismatch(f"cannot coerce {v!r} into Q")

    def random_element(self, rng, height=6, nonzero=False):
        while True:
            a = mpq(rng.randint(-height, height), rng.randint(1, height))
            if a or not nonzero:
                return a


class CyclotomicField(Field):
    """Q(zeta_n) with power basis 1, z, ..., z^(phi(n)-1) reduced mod Phi_n."""

    char = 0

    def __init__(self, n):
        self.n = n
        self.name = f"Qzeta:{n}"
        self.degree = _totient(n)
        phi = cyclotomic_poly(n)
        d = self.degree
        # rows: z^k mod Phi_n for k = d .. 2d - 2
        red = []
        cur = [mpq(-c) for c in phi[:-1]]  # z^d
        for _ in range(max(d - 1, 1)):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [mpq(0)] + cur[:-1]
            cur = [cur[i] + top * red[0][i] for i in range(d)]
        self._red = red
        # order of the full root-of-unity group
        self.mu_order = n if n % 2 == 0 else 2 * n

    def __call__(self, v):
        if isinstance(v, CycElement):
            if v.field is self:
                return v
            raise SpecMismatch(f"element of {v.field.name} used in {self.name}")
        if isinstance(v, FpElement):
            raise SpecMismatch(f"element of {v.field.name} used in {self.name}")
        q = QQ(v)
        return CycElement(self, (q,) + (mpq(0),) * (self.degree - 1))

    def gen(self):
        if self.degree == 1:
            # n = 1 or 2: zeta_n is rational
            return self(1 if self.n == 1 else -1)
        return CycElement(self, tuple(mpq(int(i == 1)) for i in range(self.degree)))

    def _reduce(self, v):
        d = self.degree
        out = list(v[:d]) + [mpq(0)] * max(0, d - len(v))
        for k in range(d, len(v)):
            c = v[k]
            if c:
                row = self._red[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out)

    def zeta_power(self, k):
        return self.gen() ** (k % self.n)

    def random_element(self, rng, height=4, nonzero=False):
        while True:
            a = CycElement(
                self, tuple(mpq(rng.randint(-height, height), rng.randint(1, 3)) for _ in range(self.degree))
            )
            if a or not nonzero:
                return a


class PrimeField(Field):
    def __init__(self, p):
        self.p = p
        self.char = p
        self.name = f"Fp:{p}"
        self.degree = 1

    def __call__(self, v):
        if isinstance(v, FpElement):
            if v.field is self:
                return v
            raise SpecMismatch(f"element of {v.field.name} used in {self.name}")
        if isinstance(v, CycElement):
            raise SpecMismatch(f"element of {v.field.name} used in {self.name}")
        if isinstance(v, _INTS):
            return FpElement(self, int(v) % self.p)
        if isinstance(v, str):
            v = mpq(v.strip())
        q = QQ(v)
        den = int(q.denominator)
        if den % self.p == 0:
            raise DivisionByZero(f"denominator divisible by {self.p}")
        return FpElement(self, int(q.numerator) * pow(den, -1, self.p) % self.p)

    def elements(self):
        return [FpElement(self, i) for i in range(self.p)]

    def random_element(self, rng, height=None, nonzero=False):
        lo = 1 if nonzero else 0
        return FpElement(self, rng.randint(lo, self.p - 1))


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def Cyclotomic(n: int) -> CyclotomicField:
    if n < 1:
        raise UsageError("cyclotomic index must be positive")
    return CyclotomicField(n)


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    if p < 2 or not gmpy2.is_prime(p):
        raise UsageError(f"{p} is not prime")
    return PrimeField(p)


def Rationals() -> RationalField:
    return QQ


def field_from_string(s: str) -> Field:
    """Parse ``Q``, ``Qzeta:n`` or ``Fp:p``."""
    s = s.strip()
    if s == "Q":
        return QQ
    m = re.fullmatch(r"Qzeta:(\d+)", s)
    if m:
        return Cyclotomic(int(m.group(1)))
    m = re.fullmatch(r"Fp:(\d+)", s)
    if m:
        return GF(int(m.group(1)))
    raise UsageError(f"unknown field {s!r} (expected Q, Qzeta:n or Fp:p)")


def field_of(a) -> Field:
    if isinstance(a, (MPQ,) + _INTS):
        return QQ
    if isinstance(a, (CycElement, FpElement)):
        return a.field
    raise SpecMismatch(f"not a field element: {a!r}")


class _Element:
    __slots__ = ()

    def __radd__(self, o):
        return self.__add__(o)

    def __rmul__(self, o):
        return self.__mul__(o)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __truediv__(self, o):
        o = self._coerce(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __ne__(self, o):
        return not self == o

    def __repr__(self):
        return f"{type(self).__name__}({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


class FpElement(_Element):
    __slots__ = ("field", "v")

    def __init__(self, field, v):
        self.field = field
        self.v = v

    def _coerce(self, o):
        if isinstance(o, FpElement):
            if o.field is not self.field:
                raise SpecMismatch(f"{o.field.name} vs {self.field.name}")
            return o
        return self.field(o)

    def __add__(self, o):
        o = self._coerce(o)
        return FpElement(self.field, (self.v + o.v) % self.field.p)

    def __neg__(self):
        return FpElement(self.field, -self.v % self.field.p)

    def __mul__(self, o):
        o = self._coerce(o)
        return FpElement(self.field, self.v * o.v % self.field.p)

    def inverse(self):
        if not self.v:
            raise DivisionByZero("division by zero in " + self.field.name)
        return FpElement(self.field, pow(self.v, -1, self.field.p))

    def __bool__(self):
        return self.v != 0

    def __eq__(self, o):
        if isinstance(o, FpElement):
            return o.field is self.field and o.v == self.v
        if isinstance(o, _INTS):
            return self.v == int(o) % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash(("Fp", self.field.p, self.v))

    def __int__(self):
        return self.v


class CycElement(_Element):
    __slots__ = ("field", "c")

    def __init__(self, field, c):
        self.field = field
        self.c = c

    def _coerce(self, o):
        if isinstance(o, CycElement):
            if o.field is not self.field:
                raise SpecMismatch(f"{o.field.name} vs {self.field.name}")
            return o
        return self.field(o)

    def is_rational(self):
        return not any(self.c[1:])

    def to_rational(self):
        if not self.is_rational():
            raise UnsupportedElement(f"{self} is not rational")
        return self.c[0]

    def __add__(self, o):
        if isinstance(o, (MPQ,) + _INTS):
            return CycElement(self.field, (self.c[0] + o,) + self.c[1:])
        o = self._coerce(o)
        return CycElement(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    def __neg__(self):
        return CycElement(self.field, tuple(-a for a in self.c))

    def __mul__(self, o):
        if isinstance(o, (MPQ,) + _INTS):
            return CycElement(self.field, tuple(a * o for a in self.c))
        o = self._coerce(o)
        if o.is_rational():
            return self * o.c[0]
        if self.is_rational():
            return o * self.c[0]
        d = self.field.degree
        prod = [mpq(0)] * (2 * d - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        prod[i + j] += a * b
        return CycElement(self.field, self.field._reduce(prod))

    def inverse(self):
        if not self:
            raise DivisionByZero("division by zero in " + self.field.name)
        if self.is_rational():
            return self.field(1 / self.c[0])
        # solve (self * y) = 1 via the multiplication matrix
        d = self.field.degree
        z = self.field.gen()
        cols = []
        cur = self
        for _ in range(d):
            cols.append(cur.c)
            cur = cur * z
        rows = [[cols[j][i] for j in range(d)] for i in range(d)]
        rhs = [mpq(int(i == 0)) for i in range(d)]
        sol = solve_linear(rows, rhs)
        return CycElement(self.field, tuple(sol))

    def __bool__(self):
        return any(self.c)

    def __eq__(self, o):
        if isinstance(o, CycElement):
            return o.field is self.field and o.c == self.c
        if isinstance(o, (MPQ,) + _INTS):
            return self.is_rational() and self.c[0] == o
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash(("Qzeta", self.field.n, self.c))


def solve_linear(rows, rhs, zero=0):
    """Gaussian elimination for a square nonsingular system over any field."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != zero), None)
        if piv is None:
            raise DivisionByZero("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != zero:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def arith(a, b, op: str):
    """Exact ``a op b`` for op in add/sub/mul/div; both operands in one field."""
    fa, fb = field_of(a), field_of(b)
    if fa is not fb:
        raise SpecMismatch(f"{fa.name} vs {fb.name}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivisionByZero("division by zero")
        return a / b
    raise UsageError(f"unknown operation {op!r}")


def is_one(a):
    return a == 1


def multiplicative_order(a):
    """Least m >= 1 with a^m = 1, or None when the order is infinite."""
    if not a:
        raise ZeroElement("zero has no multiplicative order")
    f = field_of(a)
    if f is QQ:
        return 1 if a == 1 else 2 if a == -1 else None
    if isinstance(f, CyclotomicField):
        if a.is_rational():
            return multiplicative_order(a.c[0])
        for m in _divisors(f.mu_order):
            if a**m == 1:
                return m
        return None
    # F_p: order divides p - 1
    m = f.p - 1
    for q, e in factorint(m).items():
        for _ in range(e):
            if a ** (m // q) == 1:
                m //= q
            else:
                break
    return m


def _rational_coords(q):
    """Sign and prime exponents of a nonzero rational."""
    exps = {}
    for p, e in factorint(abs(int(q.numerator))).items():
        exps[p] = exps.get(p, 0) + e
    for p, e in factorint(int(q.denominator)).items():
        exps[p] = exps.get(p, 0) - e
    return (1 if q < 0 else 0), exps


def _split_root_of_unity(a):
    """Write a = r * zeta_n^j with r rational; return (r, j) or None."""
    f = a.field
    if a.is_rational():
        return a.c[0], 0
    z_inv = f.gen().inverse()
    cur = a
    for j in range(f.n):
        if cur.is_rational():
            return cur.c[0], j
        cur = cur * z_inv
    return None


def relation_lattice(alpha, beta):
    """Basis of {(i, j) in Z^2 : alpha^i beta^j = 1}.

    Rank one: a single generator with first nonzero entry positive.
    Rank two: Hermite form ((a, b), (0, d)).
    """
    if not alpha or not beta:
        raise ZeroElement("relation lattice needs nonzero elements")
    f = field_of(alpha)
    if field_of(beta) is not f:
        raise SpecMismatch("elements from different fields")
    cons = []
    if f is QQ:
        sa, ea = _rational_coords(mpq(alpha))
        sb, eb = _rational_coords(mpq(beta))
        cons.append((sa, sb, 2))
        for p in sorted(set(ea) | set(eb)):
            cons.append((ea.get(p, 0), eb.get(p, 0), 0))
    elif isinstance(f, CyclotomicField):
        parts = []
        for x in (alpha, beta):
            sp = _split_root_of_unity(x)
            if sp is None:
                raise UnsupportedElement(f"{x} is not a rational multiple of a root of unity")
            parts.append(sp)
        big = f.mu_order
        tors = []
        exps = []
        for r, j in parts:
            s, e = _rational_coords(r)
            # zeta_n^j = zeta_big^(j * big / n); -1 = zeta_big^(big / 2)
            tors.append((j * (big // f.n) + s * (big // 2)) % big)
            exps.append(e)
        cons.append((tors[0], tors[1], big))
        for p in sorted(set(exps[0]) | set(exps[1])):
            cons.append((exps[0].get(p, 0), exps[1].get(p, 0), 0))
    else:
        p = f.p
        if p == 2:
            return ((1, 0), (0, 1))
        g = primitive_root(p)
        la = discrete_log(p, alpha.v, g)
        lb = discrete_log(p, beta.v, g)
        cons.append((la, lb, p - 1))
    return kernel_mod(cons)


def nth_root_in_field(a, d: int):
    """Some b with b^d = a in the field of ``a``, or None when there is none."""
    if not a:
        raise ZeroElement("root of zero requested")
    if d < 1:
        raise UsageError("root degree must be positive")
    if d == 1:
        return a
    f = field_of(a)
    if f is QQ:
        return _rational_root(mpq(a), d)
    if isinstance(f, CyclotomicField):
        sp = _split_root_of_unity(a)
        if sp is None:
            # brute-force fallback is out of scope: only monomial elements
            return None
        r, j = sp
        big = f.mu_order
        t = (j * (big // f.n)) % big
        if r < 0:
            r = -r
            t = (t + big // 2) % big
        rr = _rational_root(r, d)
        if rr is None:
            # a negative d-th root of |r| may still combine with -1
            return None
        # solve d * s = t (mod big)
        g = math.gcd(d, big)
        if t % g:
            return None
        s = (t // g) * pow(d // g, -1, big // g) % (big // g) if big // g > 1 else 0
        return f(rr) * _mu_power(f, s)
    p = f.p
    roots = nthroot_mod(a.v, d, p, all_roots=False)
    if roots is None:
        return None
    return FpElement(f, int(roots) % p)


def _mu_power(f, s):
    """zeta_big^s where big = mu_order of the cyclotomic field."""
    big = f.mu_order
    if big == f.n:
        return f.zeta_power(s)
    # n odd: zeta_{2n} = -zeta_n^((n+1)/2)
    z2 = -(f.zeta_power((f.n + 1) // 2))
    return z2**s


def _rational_root(q, d):
    if q < 0:
        if d % 2 == 0:
            return None
        r = _rational_root(-q, d)
        return None if r is None else -r
    num, ex1 = gmpy2.iroot(mpz(q.numerator), d)
    den, ex2 = gmpy2.iroot(mpz(q.denominator), d)
    if ex1 and ex2:
        return mpq(num, den)
    return None


def root_of_unity(field: Field, m: int):
    """A primitive m-th root of unity in ``field``; FieldTooSmall if none exists."""
    if m == 1:
        return field.one
    if field is QQ:
        if m == 2:
            return mpq(-1)
        raise FieldTooSmall(f"Q has no primitive {m}-th root of unity")
    if isinstance(field, CyclotomicField):
        big = field.mu_order
        if big % m:
            raise FieldTooSmall(f"{field.name} has no primitive {m}-th root of unity")
        return _mu_power(field, big // m)
    p = field.p
    if (p - 1) % m:
        raise FieldTooSmall(f"{field.name} has no primitive {m}-th root of unity")
    g = primitive_root(p)
    return FpElement(field, pow(g, (p - 1) // m, p))


# ---------------------------------------------------------------- text form

def _fmt_q(q):
    q = mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(a, bare_fp=False) -> str:
    """Canonical text: ``3/7``, ``zeta_12^5``, ``-2*zeta_3 + 1/2``, ``F5:3``."""
    if isinstance(a, (MPQ,) + _INTS):
        return _fmt_q(a)
    if isinstance(a, FpElement):
        return str(a.v) if bare_fp else f"F{a.field.p}:{a.v}"
    f = a.field
    n = f.n
    if a.is_rational():
        return _fmt_q(a.c[0])
    # pure +-zeta^k reads best as a single power
    sp = _split_root_of_unity(a)
    if sp is not None and abs(sp[0]) == 1:
        sign = "-" if sp[0] < 0 else ""
        return sign + _zeta_str(n, sp[1])
    terms = []
    for k in range(f.degree - 1, -1, -1):
        c = a.c[k]
        if not c:
            continue
        if k == 0:
            body = _fmt_q(abs(c))
        elif abs(c) == 1:
            body = _zeta_str(n, k)
        else:
            body = f"{_fmt_q(abs(c))}*{_zeta_str(n, k)}"
        terms.append(("-" if c < 0 else "+", body))
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for s, b in terms[1:]:
        out += f" {s} {b}"
    return out


def _zeta_str(n, k):
    return f"zeta_{n}" if k == 1 else f"zeta_{n}^{k}"


def needs_parens(a) -> bool:
    """True if the scalar text is a sum or a fraction and must be bracketed in products."""
    s = format_scalar(a, bare_fp=True)
    return " " in s or "/" in s


_FP_RE = re.compile(r"F(\d+):(-?\d+)")


def parse_scalar(text: str, field: Field | None = None):
    """Parse the scalar text forms; without ``field`` the field is inferred."""
    text = text.strip()
    m = _FP_RE.fullmatch(text)
    if m:
        f = GF(int(m.group(1)))
        if field is not None and field is not f:
            raise SpecMismatch(f"{text} is not in {field.name}")
        return f(int(m.group(2)))
    # cyclotomic and rational forms go through the expression parser
    from .parser import parse_scalar_expression

    return parse_scalar_expression(text, field)
