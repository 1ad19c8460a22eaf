"""Example factories, commuting-pair classification and degree profiles."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .centralizer import (
    cent_membership,
    conjugate_matrix,
    diagonalize_over_Kx,
    elliptic_normal_form_recognize,
    is_elliptic,
)
from .cremona import jonq_to_cremona
from .errors import DegreeBudgetExceeded, NotCommuting, NotFreeRankTwo, NotRecognized, UnresolvedFixedPoints
from .fields import QQ, Cyclotomic, root_of_unity
from .jonq import JonqMap, commutes
from .mobius import Mobius
from .poly import Poly, RatFunc

# ---------------------------------------------------------------- factories


def _lift(R, K) -> RatFunc:
    """Coerce a RatFunc (or Poly) over Q into K(x)."""
    if isinstance(R, Poly):
        R = RatFunc(R)
    if R.field is K:
        return R
    return RatFunc(Poly(K, [K(c) for c in R.num.c]), Poly(K, [K(c) for c in R.den.c]))


def _xpow_times(K, n, c=None) -> RatFunc:
    """c * x^n as a RatFunc."""
    c = K.one if c is None else c
    return RatFunc(Poly.monomial(K, n, c))


def _torsion_field(q, depth, field):
    if field is not None:
        return field
    n = q**depth
    return QQ if n <= 2 else Cyclotomic(n)


def _torsion_terms(q, depth, R_choices, K, combine):
    xis = [None] + [root_of_unity(K, q**n) for n in range(1, depth + 1)]
    Rs = [None] + [_lift(R, K) for R in R_choices]
    if depth > 1 and len(Rs) < depth:
        raise ValueError(f"need at least {depth - 1} rational functions, got {len(Rs) - 1}")
    maps = []
    for i in range(depth):
        # f_{i+1} = (xi_{i+1} x, ...) built from R_1, ..., R_i
        S = None
        for j in range(1, i + 1):
            n = q**j
            term = combine(Rs[j].compose(_xpow_times(K, n)), Rs[j].compose(_xpow_times(K, n, xis[i + 1 - j])))
            if S is None:
                S = term
            elif combine is _diff:
                S = S + term
            else:
                S = S * term
        maps.append((xis[i + 1], S))
    return maps


def _ratio(a, b):
    return a / b


def _diff(a, b):
    return a - b


def example_torsion_multiplicative(q: int, depth: int, R_choices=(), field=None):
    """f_{i+1} = (xi_{i+1} x, y S_{i+1}(x)) with f_{i+1}^q = f_i."""
    if depth <= 0:
        return []
    K = _torsion_field(q, depth, field)
    one, zero = Poly.const(K, 1), Poly(K, ())
    out = []
    for xi, S in _torsion_terms(q, depth, R_choices, K, _ratio):
        S = S if S is not None else RatFunc.const(K, 1)
        out.append(JonqMap(Mobius.scaling(K, xi), ((S, zero), (zero, one))))
    _check_tower(out, q)
    return out


def example_torsion_additive(q: int, depth: int, R_choices=(), field=None):
    """f_{i+1} = (xi_{i+1} x, y + S_{i+1}(x)) with f_{i+1}^q = f_i."""
    if depth <= 0:
        return []
    K = _torsion_field(q, depth, field)
    one, zero = Poly.const(K, 1), Poly(K, ())
    out = []
    for xi, S in _torsion_terms(q, depth, R_choices, K, _diff):
        S = S if S is not None else RatFunc.const(K, 0)
        out.append(JonqMap(Mobius.scaling(K, xi), ((one, S), (zero, one))))
    _check_tower(out, q)
    return out


def _check_tower(maps, q):
    for lo, hi in zip(maps, maps[1:]):
        if hi.power(q) != lo:  # pragma: no cover - guarded by tests
            raise ArithmeticError("tower identity f_{i+1}^q = f_i failed")


def example_deserti(alpha, beta, field=QQ) -> JonqMap:
    """(alpha x, (beta y + x)/(y + 1))."""
    K = field
    x = Poly.x(K)
    return JonqMap(Mobius.scaling(K, alpha), ((Poly.const(K, beta), x), (Poly.const(K, 1), Poly.const(K, 1))))


def example_centb(k: int, alpha, mu=None, field=None):
    """(alpha x, ((1+x^k) y + x^k)/((2+x^k) y + 1+x^k)) and (mu x, y), mu^k = 1."""
    K = field if field is not None else (QQ if k <= 2 else Cyclotomic(k))
    if mu is None:
        mu = root_of_unity(K, k)
    xk = Poly.monomial(K, k, K.one)
    one = Poly.const(K, 1)
    f = JonqMap(Mobius.scaling(K, alpha), ((one + xk, xk), (one + one + xk, one + xk)))
    g = JonqMap(Mobius.scaling(K, mu), ((one, Poly(K, ())), (Poly(K, ()), one)))
    if not commutes(f, g):  # pragma: no cover - guarded by tests
        raise ArithmeticError("example pair does not commute")
    return f, g


# ---------------------------------------------------------------- pairs


@dataclass
class PairClassification:
    kind: str  # EllipticPair | TorusPair | BaseWanderingPlusElliptic | OutOfScope
    subcase: str | None = None
    reason: str | None = None
    witness: dict = dc_field(default_factory=dict)

    def describe(self):
        if self.kind == "BaseWanderingPlusElliptic":
            return f"{self.kind}({self.subcase})"
        if self.kind == "OutOfScope":
            return f"OutOfScope({self.reason})"
        return self.kind

    def as_dict(self):
        return {"kind": self.kind, "subcase": self.subcase, "reason": self.reason, "witness": self.witness}


def _check_free(f, g, bound):
    seen = {}
    for i in range(-bound, bound + 1):
        seen.setdefault(f.power(i), i)
    for j in range(-bound, bound + 1):
        i = seen.get(g.power(-j))
        if i is not None and (i, j) != (0, 0):
            raise NotFreeRankTwo(f"relation f^{i} o g^{j} = id found within bound {bound}")


def _base_order(f):
    try:
        return f.base.order()
    except UnresolvedFixedPoints:  # pragma: no cover
        return None


def _common_torus(F: JonqMap, G: JonqMap):
    """Shared conjugator putting both fiber matrices in one torus, or None."""
    for a, b in ((F, G), (G, F)):
        dg = diagonalize_over_Kx(a)
        if dg.kind == "Scalar":
            continue
        Mb = tuple(tuple(RatFunc(p) for p in row) for row in b.fiber)
        N = conjugate_matrix(Mb, dg.conj)
        if dg.kind == "Split":
            ok = not N[0][1] and not N[1][0]
        elif dg.kind == "NonSplit":
            # commutant of [[A, B], [1, A]] is {[[u, v B], [v, u]]}
            B = dg.normal[0][1]
            ok = N[0][0] == N[1][1] and N[0][1] == N[1][0] * B
        else:
            ok = not N[1][0] and N[0][0] == N[1][1]
        if ok:
            return dg
    return None


def classify_pair(f: JonqMap, g: JonqMap, bound: int = 12) -> PairClassification:
    if not commutes(f, g):
        raise NotCommuting("f and g do not commute")
    _check_free(f, g, bound)
    ef, mf, _ = is_elliptic(f)
    eg, mg, _ = is_elliptic(g)
    witness = {"commutes": True, "freeness_bound": bound, "f_ellipticity": mf, "g_ellipticity": mg}
    if ef and eg:
        return PairClassification("EllipticPair", witness=witness)
    of, og = _base_order(f), _base_order(g)
    if of is not None and og is not None:
        F, G = f.power(of), g.power(og)
        dg = _common_torus(F, G)
        witness.update(m=of, n=og)
        if dg is not None:
            witness["torus"] = dg.describe()
            return PairClassification("TorusPair", witness=witness)
        return PairClassification(
            "OutOfScope", reason=f"no common torus for f^{of}, g^{og}", witness=witness
        )
    wf = of is None and not ef
    wg = og is None and not eg
    if wf and wg:
        return PairClassification("OutOfScope", reason="two base-wandering twists", witness=witness)
    if (wf and eg) or (wg and ef):
        tw, el = (f, g) if wf else (g, f)
        try:
            nf = elliptic_normal_form_recognize(el)
        except NotRecognized as exc:
            return PairClassification(
                "OutOfScope", reason=f"elliptic partner not in normal form: {exc}", witness=witness
            )
        member, clause = cent_membership(nf, tw)
        witness.update(normal_form=nf.describe(), clause=clause, twist="f" if wf else "g")
        if not member:
            return PairClassification("OutOfScope", reason=f"shape mismatch: {clause}", witness=witness)
        sub = "MultiplicativeForm" if nf.kind in ("DiagonalKK", "FiberDiagonal") else "AdditiveForm"
        return PairClassification("BaseWanderingPlusElliptic", sub, witness=witness)
    return PairClassification("OutOfScope", reason="no constructive case applies", witness=witness)


# ---------------------------------------------------------------- degree profiles


@dataclass
class DegreeProfile:
    window: int
    rows: list  # (i, j, degree or None)
    fit: str = ""

    def to_csv(self):
        lines = ["i,j,degree"]
        for i, j, d in self.rows:
            lines.append(f"{i},{j},{'' if d is None else d}")
        return "\n".join(lines) + "\n"

    def grid(self):
        return {(i, j): d for i, j, d in self.rows}


def _fit(grid, w):
    inner = [d for (i, j), d in grid.items() if max(abs(i), abs(j)) < w and d is not None]
    allv = [d for d in grid.values() if d is not None]
    if w >= 1 and inner and max(allv) == max(inner):
        return "bounded"
    try:
        c = grid[(0, 0)]
        a = grid[(1, 0)] - c
        b = grid[(0, 1)] - c
    except (KeyError, TypeError):
        return "undetermined"
    quad = [(i, j, d) for (i, j), d in grid.items() if i >= 0 and j >= 0 and d is not None]
    if all(d == c + a * i + b * j for i, j, d in quad):
        if b == 0:
            return f"affine in |i| (deg = {c} + {a}*i for i, j >= 0)"
        if a == 0:
            return f"affine in |j| (deg = {c} + {b}*j for i, j >= 0)"
        return f"bilinear (deg = {c} + {a}*i + {b}*j for i, j >= 0)"
    return "undetermined"


def degree_profile(f: JonqMap, g: JonqMap, window: int = 3) -> DegreeProfile:
    if not commutes(f, g):
        raise NotCommuting("degree profiles need a commuting pair")
    fp = {i: f.power(i) for i in range(-window, window + 1)}
    gp = {j: g.power(j) for j in range(-window, window + 1)}
    rows = []
    for i in range(-window, window + 1):
        for j in range(-window, window + 1):
            try:
                d = jonq_to_cremona(fp[i].compose(gp[j])).deg
            except DegreeBudgetExceeded:
                d = None
            rows.append((i, j, d))
    prof = DegreeProfile(window, rows)
    prof.fit = _fit(prof.grid(), window)
    return prof
