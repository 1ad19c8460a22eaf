"""Moebius transformations x -> (a x + b)/(c x + d) in PGL_2(K)."""

from __future__ import annotations

from sympy import totient

from .errors import DivisionByZero, UnresolvedFixedPoints
from .fields import PrimeField, format_scalar, multiplicative_order, nth_root_in_field
from .poly import Poly, RatFunc


class _Infinity:
    """The point at infinity of P^1."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "oo"

    __str__ = __repr__


INF = _Infinity()


class Mobius:
    __slots__ = ("field", "a", "b", "c", "d")

    def __init__(self, field, a, b, c, d):
        a, b, c, d = (field(v) for v in (a, b, c, d))
        if not (a * d - b * c):
            raise DivisionByZero("singular Moebius matrix")
        lead = next(v for v in (a, b, c, d) if v)
        if lead != 1:
            inv = 1 / lead
            a, b, c, d = a * inv, b * inv, c * inv, d * inv
        self.field = field
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, field):
        return cls(field, 1, 0, 0, 1)

    @classmethod
    def scaling(cls, field, alpha):
        return cls(field, alpha, 0, 0, 1)

    @classmethod
    def translation(cls, field, t):
        return cls(field, 1, t, 0, 1)

    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def det(self):
        return self.a * self.d - self.b * self.c

    def key(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, o):
        return isinstance(o, Mobius) and self.field is o.field and self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def is_identity(self):
        return self.b == 0 and self.c == 0 and self.a == self.d

    def compose(self, o: "Mobius") -> "Mobius":
        """self o o."""
        a, b, c, d = self.key()
        e, f, g, h = o.key()
        return Mobius(self.field, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __matmul__(self, o):
        return self.compose(o)

    def inverse(self) -> "Mobius":
        return Mobius(self.field, self.d, -self.b, -self.c, self.a)

    def power(self, n: int) -> "Mobius":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = Mobius.identity(self.field)
        while n:
            if n & 1:
                out = out.compose(base)
            base = base.compose(base)
            n >>= 1
        return out

    def __call__(self, v):
        """Image of a point of P^1 (scalar or INF), or substitution into a RatFunc/Poly."""
        if isinstance(v, (Poly, RatFunc)):
            return self.as_ratfunc().compose(v if isinstance(v, RatFunc) else RatFunc(v))
        a, b, c, d = self.key()
        if v is INF:
            return a / c if c else INF
        den = c * v + d
        if not den:
            return INF
        return (a * v + b) / den

    def as_ratfunc(self) -> RatFunc:
        f = self.field
        return RatFunc(Poly(f, (self.b, self.a)), Poly(f, (self.d, self.c)))

    def as_polys(self):
        """(numerator, denominator) as polynomials in x."""
        f = self.field
        return Poly(f, (self.b, self.a)), Poly(f, (self.d, self.c))

    # fixed points and dynamics
    def fixed_point_quadratic(self) -> Poly:
        """c x^2 + (d - a) x - b, whose roots are the finite fixed points."""
        return Poly(self.field, (-self.b, self.d - self.a, self.c))

    def fixed_points(self):
        """Fixed points in P^1(K); raises UnresolvedFixedPoints if they lie outside K.

        The identity returns an empty list (every point is fixed).
        """
        if self.is_identity():
            return []
        a, b, c, d = self.key()
        if not c:
            pts = [INF]
            if d != a:
                pts.insert(0, b / (d - a))
            return pts
        q = self.fixed_point_quadratic()
        disc = (d - a) ** 2 + 4 * b * c
        if not disc:
            return [(a - d) / (2 * c)]
        s = nth_root_in_field(disc, 2) if not _is_char2(self.field) else None
        if s is None:
            raise UnresolvedFixedPoints(
                f"fixed points satisfy {q.format()} = 0, not split over {self.field.name}",
                quadratic=q,
            )
        r1 = (a - d + s) / (2 * c)
        r2 = (a - d - s) / (2 * c)
        return [r1, r2]

    def multiplier(self, p):
        """Derivative of eta at its fixed point p (p may be INF)."""
        a, b, c, d = self.key()
        if p is INF:
            # chart u = 1/x: u -> (c + d u)/(a + b u); derivative at 0 is (ad - bc)/a^2
            return self.det() / (a * a)
        den = c * p + d
        return self.det() / (den * den)

    def order(self):
        """Order in PGL_2(K), or None if infinite."""
        if self.is_identity():
            return 1
        f = self.field
        if isinstance(f, PrimeField):
            p = f.p
            cands = set()
            for n in (p - 1, p, p + 1):
                cands.update(_divisors(n))
            for m in sorted(cands):
                if m > 1 and self.power(m).is_identity():
                    return m
            return None
        try:
            pts = self.fixed_points()
        except UnresolvedFixedPoints:
            pts = None
        if pts is not None:
            if len(pts) == 1:
                return None  # parabolic, characteristic zero
            return multiplicative_order(self.multiplier(pts[0]))
        # eigenvalues outside K: order m needs phi(m) <= 2 [K:Q]
        deg = getattr(f, "degree", 1)
        bound = 8 * deg * deg + 2
        cur = self
        for m in range(1, bound + 1):
            if cur.is_identity():
                return m if totient(m) <= 2 * deg else None
            cur = cur.compose(self)
        return None

    def format(self, var="x"):
        return self.as_ratfunc().format(var)

    def __repr__(self):
        return f"Mobius({self.format()})"

    def __str__(self):
        return self.format()


def _is_char2(field):
    return getattr(field, "char", 0) == 2


def _divisors(n):
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            out.append(n // i)
        i += 1
    return sorted(set(out))


def normalizing_coordinate(eta: Mobius):
    """Classify eta and return (kind, phi, data) with phi eta phi^-1 in normal form.

    kind is ``"finite"`` (data = order), ``"multiplicative"`` (data = alpha with
    phi eta phi^-1 = alpha x) or ``"parabolic"`` (phi eta phi^-1 = x + 1).
    """
    K = eta.field
    order = eta.order()
    if order is not None:
        return "finite", None, order
    pts = eta.fixed_points()
    if len(pts) == 2:
        p, q = pts
        if p is INF:
            p, q = q, p
        # p finite; send p -> 0 and q -> oo
        phi = Mobius(K, 1, -p, 0, 1) if q is INF else Mobius(K, 1, -p, 1, -q)
        conj = phi.compose(eta).compose(phi.inverse())
        assert conj.b == 0 and conj.c == 0
        return "multiplicative", phi, conj.a / conj.d
    (p,) = pts
    phi = Mobius.identity(K) if p is INF else Mobius(K, 0, 1, 1, -p)
    conj = phi.compose(eta).compose(phi.inverse())
    assert conj.c == 0 and conj.a == conj.d
    t = conj.b / conj.d
    phi = Mobius(K, 1 / t, 0, 0, 1).compose(phi)
    return "parabolic", phi, None


def format_point(p):
    return "oo" if p is INF else format_scalar(p)
