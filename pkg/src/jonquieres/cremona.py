"""Birational maps of P^2 as coprime homogeneous triples.

Homogeneous polynomials are sparse dicts keyed by exponent triples
``(i, j, k)`` for ``X^i Y^j Z^k``. Large products over Q and F_p go through a
Kronecker substitution into one big integer, which keeps loxodromic iterates
(degree 2^n) tractable.
"""

from __future__ import annotations

import enum
import math
import random
from fractions import Fraction
from typing import NamedTuple

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DegreeBudgetExceeded, InconsistentDegrees, SequenceTooShort, SpecMismatch
from .fields import QQ, CyclotomicField, PrimeField, field_of, format_scalar
from .poly import DEGREE_CAP, Poly, RatFunc, function_field, poly_gcd

_KRONECKER_THRESHOLD = 3000


class HomPoly:
    """Homogeneous polynomial in X, Y, Z (the zero polynomial has degree None)."""

    __slots__ = ("field", "terms", "deg")

    def __init__(self, field, terms, deg=None):
        terms = {e: c for e, c in terms.items() if c}
        if terms:
            degs = {sum(e) for e in terms}
            if len(degs) != 1:
                raise InconsistentDegrees("polynomial is not homogeneous")
            d = degs.pop()
            if deg is not None and deg != d:
                raise InconsistentDegrees(f"expected degree {deg}, found {d}")
            deg = d
        self.field = field
        self.terms = terms
        self.deg = deg

    @classmethod
    def var(cls, field, idx):
        e = [0, 0, 0]
        e[idx] = 1
        return cls(field, {tuple(e): field.one}, 1)

    @classmethod
    def const(cls, field, a):
        a = field(a)
        return cls(field, {(0, 0, 0): a} if a else {}, 0)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, o):
        return isinstance(o, HomPoly) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, o):
        if not o.terms:
            return self
        if not self.terms:
            return o
        if self.deg != o.deg:
            raise InconsistentDegrees(f"adding degrees {self.deg} and {o.deg}")
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            out[e] = c if v is None else v + c
        return HomPoly(self.field, out, self.deg)

    def __neg__(self):
        return HomPoly(self.field, {e: -c for e, c in self.terms.items()}, self.deg)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, s):
        s = self.field(s)
        return HomPoly(self.field, {e: c * s for e, c in self.terms.items()}, self.deg)

    def __mul__(self, o):
        if not isinstance(o, HomPoly):
            return self.scale(o)
        if not self.terms or not o.terms:
            return HomPoly(self.field, {})
        d = self.deg + o.deg
        if d > DEGREE_CAP:
            raise DegreeBudgetExceeded(f"degree {d} exceeds the cap {DEGREE_CAP}")
        if len(self.terms) * len(o.terms) > _KRONECKER_THRESHOLD and (
            self.field is QQ or isinstance(self.field, PrimeField)
        ):
            return HomPoly(self.field, _kronecker_mul(self, o), d)
        out = {}
        for (a, b, c), u in self.terms.items():
            for (i, j, k), v in o.terms.items():
                e = (a + i, b + j, c + k)
                w = out.get(e)
                out[e] = u * v if w is None else w + u * v
        return HomPoly(self.field, out, d)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = HomPoly.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def leading_coeff(self):
        return self.sorted_terms()[0][1] if self.terms else self.field.zero

    def monomial_content(self):
        """Componentwise minimum of the exponents."""
        es = list(self.terms)
        return tuple(min(e[t] for e in es) for t in range(3))

    def divide_monomial(self, m):
        return HomPoly(
            self.field,
            {(e[0] - m[0], e[1] - m[1], e[2] - m[2]): c for e, c in self.terms.items()},
            self.deg - sum(m),
        )

    def is_monomial(self):
        return len(self.terms) == 1

    def dehomogenize(self):
        """Bivariate dict {(i, j): c} at Z = 1."""
        return {(e[0], e[1]): c for e, c in self.terms.items()}

    def format(self):
        return format_hompoly(self)

    def __repr__(self):
        return f"HomPoly({self.format()})"


def _int_coeffs(p: HomPoly):
    """(scale, {(i,j): int}) with p = ints / scale."""
    if p.field is QQ:
        den = 1
        for c in p.terms.values():
            den = math.lcm(den, int(c.denominator))
        return den, {(e[0], e[1]): int(c * den) for e, c in p.terms.items()}
    return 1, {(e[0], e[1]): int(c) for e, c in p.terms.items()}


def _pack(coeffs, D, nbytes):
    """Dense little-endian byte packing of nonnegative ints at index i + D*j."""
    size = D * D
    zero = bytes(nbytes)
    buf = [zero] * size
    for (i, j), c in coeffs.items():
        buf[i + D * j] = c.to_bytes(nbytes, "little")
    return mpz(int.from_bytes(b"".join(buf), "little"))


def _kronecker_mul(a: HomPoly, b: HomPoly):
    sa, ca = _int_coeffs(a)
    sb, cb = _int_coeffs(b)
    ma = max(abs(v) for v in ca.values())
    mb = max(abs(v) for v in cb.values())
    bound = ma * mb * min(len(ca), len(cb))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    D = a.deg + b.deg + 1

    def split(c):
        pos = {e: v for e, v in c.items() if v > 0}
        neg = {e: -v for e, v in c.items() if v < 0}
        return _pack(pos, D, nbytes), _pack(neg, D, nbytes)

    ap, an = split(ca)
    bp, bn = split(cb)
    prod = (ap - an) * (bp - bn)
    half = 1 << (8 * nbytes - 1)
    offset_digit = half.to_bytes(nbytes, "little")
    offset = mpz(int.from_bytes(offset_digit * (D * D), "little"))
    raw = int(prod + offset).to_bytes(nbytes * D * D, "little")
    d = a.deg + b.deg
    out = {}
    field = a.field
    scale = sa * sb
    for j in range(D):
        for i in range(D - j):
            idx = (i + D * j) * nbytes
            v = int.from_bytes(raw[idx : idx + nbytes], "little") - half
            if v:
                if field is QQ:
                    out[(i, j, d - i - j)] = mpq(v, scale)
                else:
                    out[(i, j, d - i - j)] = field(v)
    return out


# ---------------------------------------------------------------- gcd

def _bivariate_to_ring(polys, field):
    from sympy import GF, QQ as SQQ
    from sympy.polys.rings import ring

    if field is QQ:
        dom = SQQ
    else:
        dom = GF(field.p)
    R, X, Y = ring("X,Y", dom)
    out = []
    for p in polys:
        terms = {}
        for (i, j), c in p.dehomogenize().items():
            if field is QQ:
                terms[(i, j)] = SQQ(int(c.numerator), int(c.denominator))
            else:
                terms[(i, j)] = dom(int(c))
        out.append(R.from_dict(terms))
    return R, out


def _gcd_sympy(polys, field):
    R, rs = _bivariate_to_ring(polys, field)
    g = rs[0]
    for r in rs[1:]:
        g = g.gcd(r)
        if g.is_ground:
            return None
    if g.is_ground:
        return None
    terms = {}
    for (i, j), c in g.to_dict().items():
        if field is QQ:
            terms[(i, j)] = mpq(int(c.numerator), int(c.denominator))
        else:
            terms[(i, j)] = field(int(c))
    return _rehomogenize(terms, field)


def _rehomogenize(terms, field):
    d = max(i + j for (i, j) in terms)
    return HomPoly(field, {(i, j, d - i - j): c for (i, j), c in terms.items()}, d)


def _to_kxy(p: HomPoly):
    """Dehomogenized polynomial as Poly in y over K(x)."""
    K = p.field
    Kx = function_field(K)
    bydeg = {}
    for (i, j, _), c in p.terms.items():
        bydeg.setdefault(j, {})[i] = c
    top = max(bydeg) if bydeg else 0
    coeffs = []
    for j in range(top + 1):
        row = bydeg.get(j, {})
        mx = max(row) if row else -1
        coeffs.append(RatFunc(Poly(K, [row.get(i, K.zero) for i in range(mx + 1)])))
    return Poly(Kx, coeffs, _raw=True)


def _gcd_generic(polys, field):
    """Exact gcd over any field: contents in K[x] plus Euclid in K(x)[y]."""
    K = field
    ys = [_to_kxy(p) for p in polys]
    # content (gcd of the K[x] coefficients) of each
    cont = None
    for y in ys:
        for c in y.c:
            cont = c.num if cont is None else poly_gcd(cont, c.num)
    g = ys[0]
    for y in ys[1:]:
        g = poly_gcd(g, y)
    terms = {}
    if g.deg >= 1:
        # make primitive over K[x]
        den = Poly.const(K, 1)
        for c in g.c:
            den = den * c.den.exact_div(poly_gcd(den, c.den))
        coeffs = [(c * RatFunc(den)).num for c in g.c]
        cg = None
        for c in coeffs:
            if c:
                cg = c if cg is None else poly_gcd(cg, c)
        coeffs = [c.exact_div(cg) for c in coeffs]
        if cont is not None and not cont.is_constant():
            coeffs = [c * cont for c in coeffs]
        for j, c in enumerate(coeffs):
            for i, a in enumerate(c.c):
                if a:
                    terms[(i, j)] = a
    elif cont is not None and not cont.is_constant():
        for i, a in enumerate(cont.c):
            if a:
                terms[(i, 0)] = a
    if not terms:
        return None
    return _rehomogenize(terms, K)


def _modular_coprime(polys, field, rng):
    """Cheap certificate that the gcd is a constant; False means 'unknown'."""
    if field is QQ:
        p = 1_000_003
        denominators_ok = all(
            int(c.denominator) % p for q in polys for c in q.terms.values()
        )
        if not denominators_ok:
            return False

        def red(c):
            return int(c.numerator) * pow(int(c.denominator), -1, p) % p

    elif isinstance(field, PrimeField):
        p = field.p

        def red(c):
            return int(c)

    else:
        return False
    for var in (0, 1):  # specialize x (check y-degree) then y (check x-degree)
        ok = False
        for _ in range(3):
            a = rng.randrange(1, p)
            unis = []
            lead_ok = True
            for q in polys:
                coeffs = {}
                top = -1
                for (i, j, _), c in q.terms.items():
                    keep, sub = (j, i) if var == 0 else (i, j)
                    coeffs[keep] = (coeffs.get(keep, 0) + red(c) * pow(a, sub, p)) % p
                    top = max(top, keep)
                if top >= 0 and coeffs.get(top, 0) == 0:
                    lead_ok = False
                    break
                unis.append([coeffs.get(t, 0) for t in range(top + 1)])
            if not lead_ok:
                continue
            g = unis[0]
            for u in unis[1:]:
                g = _gcd_mod(g, u, p)
            if len(g) <= 1:
                ok = True
                break
            else:
                return False
        if not ok:
            return False
    return True


def _strip(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _gcd_mod(a, b, p):
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            t = a[-1] * inv % p
            s = len(a) - len(b)
            for i, v in enumerate(b):
                a[s + i] = (a[s + i] - t * v) % p
            _strip(a)
            if not a:
                break
        a, b = b, a
    return a


def common_factor(polys, rng=None):
    """Homogeneous gcd of a list of nonzero HomPolys (None when it is constant)."""
    polys = [q for q in polys if q]
    field = polys[0].field
    if any(q.is_monomial() for q in polys):
        return None
    rng = rng or random.Random(0)
    if _modular_coprime(polys, field, rng):
        return None
    if field is QQ or isinstance(field, PrimeField):
        return _gcd_sympy(polys, field)
    return _gcd_generic(polys, field)


def hom_exact_div(p: HomPoly, g: HomPoly) -> HomPoly:
    """Exact division of homogeneous polynomials (via Z = 1 and K(x)[y])."""
    K = p.field
    a = _to_kxy(p)
    b = _to_kxy(g)
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("inexact homogeneous division")
    terms = {}
    d = p.deg - g.deg
    for j, c in enumerate(q.c):
        if not c.is_polynomial():
            raise ArithmeticError("inexact homogeneous division")
        for i, v in enumerate(c.num.c):
            if v:
                terms[(i, j, d - i - j)] = v
    return HomPoly(K, terms, d)


# ---------------------------------------------------------------- maps

class CremonaMap:
    """[f0 : f1 : f2] with coprime components of a common degree, normalized."""

    __slots__ = ("field", "comps", "deg")

    def __init__(self, comps, field=None, _normalized=False):
        comps = tuple(comps)
        if len(comps) != 3:
            raise InconsistentDegrees("a plane map needs exactly three components")
        field = field or next(c.field for c in comps if c)
        degs = {c.deg for c in comps if c}
        if not degs:
            raise InconsistentDegrees("all components are zero")
        if len(degs) != 1:
            raise InconsistentDegrees(f"components have different degrees {sorted(degs)}")
        d = degs.pop()
        if not _normalized:
            comps, d = _reduce_triple(comps, field, d)
        self.field = field
        self.comps = comps
        self.deg = d

    @classmethod
    def identity(cls, field):
        return cls([HomPoly.var(field, i) for i in range(3)], field)

    def degree(self):
        return self.deg

    def __eq__(self, o):
        return isinstance(o, CremonaMap) and self.comps == o.comps

    def __hash__(self):
        return hash(self.comps)

    def compose(self, g: "CremonaMap") -> "CremonaMap":
        """self o g: substitute g into self and strip the common factor."""
        if g.field is not self.field:
            raise SpecMismatch("maps over different fields")
        cache = {}

        def gpow(idx, k):
            key = (idx, k)
            if key not in cache:
                if k == 0:
                    cache[key] = HomPoly.const(self.field, 1)
                elif k == 1:
                    cache[key] = g.comps[idx]
                else:
                    h = k // 2
                    cache[key] = gpow(idx, h) * gpow(idx, k - h)
            return cache[key]

        out = []
        d = self.deg * g.deg
        if d > DEGREE_CAP:
            raise DegreeBudgetExceeded(f"degree {d} exceeds the cap {DEGREE_CAP}")
        for comp in self.comps:
            acc = HomPoly(self.field, {})
            for (i, j, k), c in comp.sorted_terms():
                term = gpow(0, i) * gpow(1, j) * gpow(2, k)
                acc = acc + term.scale(c)
            out.append(acc)
        return CremonaMap(out, self.field)

    def __matmul__(self, g):
        return self.compose(g)

    def power(self, n):
        if n < 0:
            raise ValueError("general inverse of a plane map is not provided")
        out = CremonaMap.identity(self.field)
        for _ in range(n):
            out = self.compose(out)
        return out

    def format(self):
        return "[" + " : ".join(c.format() for c in self.comps) + "]"

    def __repr__(self):
        return f"CremonaMap({self.format()})"

    def __str__(self):
        return self.format()


def _reduce_triple(comps, field, d):
    live = [c for c in comps if c]
    # common monomial factor
    mc = [min(c.monomial_content()[t] for c in live) for t in range(3)]
    if any(mc):
        comps = tuple(c.divide_monomial(mc) if c else c for c in comps)
        live = [c for c in comps if c]
        d -= sum(mc)
    g = common_factor(live)
    if g is not None and g.deg > 0:
        comps = tuple(hom_exact_div(c, g) if c else c for c in comps)
        d -= g.deg
    # projective normalization: first nonzero coefficient (descending lex) is 1
    lead = next(c.leading_coeff() for c in comps if c)
    if lead != 1:
        inv = 1 / lead
        comps = tuple(c.scale(inv) if c else c for c in comps)
    comps = tuple(c if c else HomPoly(field, {}, d) for c in comps)
    return comps, d


def compose(f: CremonaMap, g: CremonaMap) -> CremonaMap:
    return f.compose(g)


class DegreeSequence(list):
    """List of degrees deg(f^0), ..., with a ``truncated`` flag."""

    truncated = False


def degree_sequence(f: CremonaMap, n_max: int, budget: int = DEGREE_CAP) -> DegreeSequence:
    """[deg f^0, ..., deg f^n_max]; stops early (truncated=True) on the degree budget.

    An iterate is skipped as soon as the a priori bound deg(f) * deg(f^n) exceeds
    ``budget``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    seq = DegreeSequence([1])
    cur = CremonaMap.identity(f.field)
    for _ in range(n_max):
        if f.deg * cur.deg > budget:
            seq.truncated = True
            break
        try:
            cur = f.compose(cur)
        except DegreeBudgetExceeded:
            seq.truncated = True
            break
        seq.append(cur.deg)
    return seq


class GrowthType(str, enum.Enum):
    Elliptic = "Elliptic"
    JonquieresTwist = "JonquieresTwist"
    HalphenTwist = "HalphenTwist"
    Loxodromic = "Loxodromic"
    Undetermined = "Undetermined"


class Growth(NamedTuple):
    kind: GrowthType
    note: str

    def summary(self):
        head = self.note.split(";")[0]
        return f"{self.kind.value} ({head})" if head else self.kind.value


def _num(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _period(seq, max_period):
    for p in range(1, max_period + 1):
        if len(seq) > p and all(seq[i + p] == seq[i] for i in range(len(seq) - p)):
            return p
    return None


def classify_growth(degrees, window: int = 4, rho: float = 1.05, truncated=None) -> Growth:
    """Window heuristic on a degree sequence; the note records what matched."""
    if truncated is None:
        truncated = getattr(degrees, "truncated", False)
    degrees = list(degrees)
    if len(degrees) < 8:
        raise SequenceTooShort(f"need at least 8 degrees, got {len(degrees)}")
    start = max(0, min(2 * degrees[1], len(degrees) - (2 * window + 1)))
    tail = degrees[start:]
    where = f"tail n={start}..{len(degrees) - 1}, window {window}"
    if truncated:
        return Growth(GrowthType.Undetermined, f"degree budget hit; {where}")
    p = _period(tail, window)
    if p is not None:
        return Growth(GrowthType.Elliptic, f"period {p}; {where}")
    d1 = [b - a for a, b in zip(tail, tail[1:])]
    p = _period(d1, window)
    if p is not None:
        slope = Fraction(sum(d1[:p]), p)
        if slope > 0:
            return Growth(GrowthType.JonquieresTwist, f"slope {_num(slope)}; {where}")
    d2 = [b - a for a, b in zip(d1, d1[1:])]
    p = _period(d2, window)
    if p is not None:
        acc = Fraction(sum(d2[:p]), p)
        if acc > 0:
            return Growth(
                GrowthType.HalphenTwist,
                f"second difference {_num(acc)}; {where}; no effective bound on the quadratic onset",
            )
    ratios = [Fraction(b, a) for a, b in zip(tail, tail[1:])]
    if all(r >= Fraction(rho) for r in ratios):
        return Growth(GrowthType.Loxodromic, f"ratio {_num(ratios[-1])}; {where}")
    if max(tail) <= max(degrees[: start + 1]):
        return Growth(GrowthType.Elliptic, f"bounded; {where}")
    return Growth(GrowthType.Undetermined, f"no window matched; {where}")


# ---------------------------------------------------------------- embedding

def _hom_from_univariate(p: Poly, m: int, field, y_power=0):
    """Z^m p(X/Z) * Y^y_power as a HomPoly (degree m + y_power)."""
    terms = {}
    for i, c in enumerate(p.c):
        if c:
            terms[(i, y_power, m - i)] = c
    return HomPoly(field, terms, m + y_power)


def jonq_to_cremona(j) -> CremonaMap:
    """Homogenize (eta(x), (A y + B)/(C y + D)) with x = X/Z, y = Y/Z."""
    K = j.field
    (A, B), (C, D) = j.fiber
    m = max(p.deg for p in (A, B, C, D))
    Z = HomPoly.var(K, 2)
    num2 = _hom_from_univariate(A, m, K, 1) + _hom_from_univariate(B, m, K) * Z
    den2 = _hom_from_univariate(C, m, K, 1) + _hom_from_univariate(D, m, K) * Z
    eta = j.base
    X = HomPoly.var(K, 0)
    ax_b = X.scale(eta.a) + Z.scale(eta.b)
    cx_d = X.scale(eta.c) + Z.scale(eta.d)
    comps = [ax_b * den2, num2 * cx_d, cx_d * den2]
    return CremonaMap(comps, K)


# ---------------------------------------------------------------- text

def format_hompoly(p: HomPoly) -> str:
    if not p.terms:
        return "0"
    from .poly import _coeff_text

    parts = []
    for (i, j, k), c in p.sorted_terms():
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in (("X", i), ("Y", j), ("Z", k)) if e
        )
        neg, body = _coeff_text(c)
        if mono:
            text = mono if body == "1" else f"{body}*{mono}"
        else:
            text = body
        parts.append((neg, text))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, t in parts[1:]:
        out += (" - " if neg else " + ") + t
    return out


def degree_csv(seq) -> str:
    lines = ["n,degree"] + [f"{n},{d}" for n, d in enumerate(seq)]
    return "\n".join(lines) + "\n"
