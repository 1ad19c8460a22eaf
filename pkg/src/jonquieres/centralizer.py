"""Delta invariant, ellipticity tests, normal forms and centralizer predicates."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    Char2NonSplit,
    CharPUnsupported,
    ChartMismatch,
    NotBaseWandering,
    NotElliptic,
    NotFiberwise,
    NotInvolutionForm,
    NotRecognized,
    NotSplittable,
    PreconditionError,
    RootNotInField,
    UnresolvedFixedPoints,
)
from .fields import QQ, format_scalar, multiplicative_order, nth_root_in_field, relation_lattice
from .jonq import JonqMap
from .mobius import Mobius, normalizing_coordinate
from .poly import Poly, RatFunc, is_square_ratfunc, poly_gcd, poly_xgcd, squarefree_part, substitute_mobius

# ---------------------------------------------------------------- delta


def _require_fiberwise(f: JonqMap):
    if not f.base.is_identity():
        raise NotFiberwise(f"base action {f.base.format()} is not the identity")


def delta(f: JonqMap) -> RatFunc:
    """Trace^2 / det of the fiber matrix (well defined projectively)."""
    _require_fiberwise(f)
    t = RatFunc(f.trace())
    return t * t / RatFunc(f.det())


def is_elliptic_fiberwise(f: JonqMap) -> bool:
    return delta(f).is_constant()


# ---------------------------------------------------------------- telescoping


@dataclass(frozen=True)
class TelescopeDecomposition:
    """R(x) * S(eta(x)) = r * S(x), verified exactly."""

    r: object
    S: RatFunc
    eta: Mobius
    R: RatFunc
    verified: bool

    def as_dict(self):
        return {
            "r": format_scalar(self.r),
            "S": self.S.format(),
            "certificate": f"R(x)*S(eta(x)) = r*S(x) with eta = {self.eta.format()}",
            "verified": self.verified,
        }


def _orbit_product(R: RatFunc, eta: Mobius, d: int) -> RatFunc:
    out = R
    cur = R
    for _ in range(d - 1):
        cur = substitute_mobius(cur, eta)
        out = out * cur
    return out


def _verify_telescope(R, S, eta, r):
    return R * substitute_mobius(S, eta) == S * r


def telescope_split(eta: Mobius, R: RatFunc) -> TelescopeDecomposition:
    """Write R = r S / S(eta) or raise NotElliptic.

    Finite-order eta: norm test plus a Lagrange resolvent (multiplicative
    Hilbert 90). Infinite-order eta: cancel zeros against poles along
    eta-orbits in the normalizing coordinate.
    """
    K = R.field
    if K.char:
        raise CharPUnsupported("multiplicative splitting needs characteristic zero")
    if not R:
        raise NotElliptic("zero multiplier")
    d = eta.order()
    if d is not None:
        T = _orbit_product(R, eta, d)
        if not T.is_constant():
            raise NotElliptic(f"norm over the base orbit is not constant: {T.format()}")
        alpha = T.constant_value()
        beta = nth_root_in_field(alpha, d)
        if beta is None:
            raise RootNotInField(
                f"no {d}-th root of {format_scalar(alpha)} in {K.name}", needed_degree=d
            )
        Rp = R / RatFunc.const(K, beta)
        S = _tidy(_lagrange_resolvent(Rp, eta, d), eta, d)
        return TelescopeDecomposition(beta, S, eta, R, _verify_telescope(R, S, eta, beta))
    kind, phi, _ = normalizing_coordinate(eta)
    eta_n = phi.compose(eta).compose(phi.inverse())
    Rn = substitute_mobius(R, phi.inverse())
    r, Sn = _split_infinite(Rn, eta_n, kind)
    S = substitute_mobius(Sn, phi)
    S = S * RatFunc.const(K, S.den.lc() / S.num.lc())
    ok = _verify_telescope(R, S, eta, r)
    if not ok:  # pragma: no cover - would indicate an algebra bug
        raise ArithmeticError("telescoping certificate failed")
    return TelescopeDecomposition(r, S, eta, R, ok)


def _lagrange_resolvent(Rp: RatFunc, eta: Mobius, d: int) -> RatFunc:
    K = Rp.field
    x = Poly.x(K)
    for t in range(2 * d + 1):
        theta = RatFunc(x**t)
        S = RatFunc.const(K, 0)
        P = RatFunc.const(K, 1)
        th = theta
        Rj = Rp
        for i in range(d):
            S = S + P * th
            P = P * Rj
            Rj = substitute_mobius(Rj, eta)
            th = substitute_mobius(th, eta)
        if S:
            return S
    raise ArithmeticError("Lagrange resolvent vanished for every probe")  # pragma: no cover


def _size(S: RatFunc):
    return S.num.deg + S.den.deg


def _tidy(S: RatFunc, eta: Mobius, d: int) -> RatFunc:
    """Simplify S by eta-invariant factors; the certificate is unaffected."""
    if not S.den.is_constant():
        cand = S * _orbit_product(RatFunc(S.den), eta, d)
        if _size(cand) <= _size(S):
            S = cand
    return S * RatFunc.const(S.field, S.den.lc() / S.num.lc())


def _root_bounds(p: Poly):
    """(lower, upper) bounds on |nonzero roots| of p over Q (Cauchy)."""
    c = [abs(float(a)) for a in p.c]
    v = next(i for i, a in enumerate(c) if a)
    c = c[v:]
    if len(c) <= 1:
        return None
    up = 1 + max(a / c[-1] for a in c[:-1])
    low = 1 / (1 + max(a / c[0] for a in c[1:]))
    return low, up


def _shift_bound(A: Poly, B: Poly, eta_n: Mobius, kind):
    """Largest |k| worth trying in gcd(A, B o eta^k)."""
    if A.field is not QQ:
        return 64
    bs = [b for b in (_root_bounds(A), _root_bounds(B)) if b]
    if not bs:
        return 1
    low = min(b[0] for b in bs)
    up = max(b[1] for b in bs)
    if kind == "parabolic":
        return int(2 * up) + 2
    alpha = abs(float(eta_n.a / eta_n.d))
    return int(math.ceil(math.log(up / low) / abs(math.log(alpha)))) + 2


def _split_infinite(R: RatFunc, eta: Mobius, kind):
    """R = r S/S(eta) with eta = alpha x or x + 1; NotElliptic otherwise."""
    K = R.field
    S = RatFunc.const(K, 1)
    cur = R
    bound = _shift_bound(R.num, R.den, eta, kind)
    while not cur.is_constant():
        A, B = cur.num, cur.den
        hit = None
        for mag in range(1, bound + 1):
            for k in (-mag, mag):
                g = poly_gcd(A, _poly_comp(B, eta.power(k)))
                if not g.is_constant():
                    hit = (k, g)
                    break
            if hit:
                break
        if hit is None:
            raise NotElliptic(
                f"zeros and poles of {cur.format()} do not cancel along orbits of {eta.format()}"
            )
        k, g = hit
        gr = RatFunc(g)
        if k < 0:
            part = RatFunc.const(K, 1)
            for j in range(-k):
                part = part * substitute_mobius(gr, eta.power(j))
        else:
            part = RatFunc.const(K, 1)
            for j in range(k):
                part = part * substitute_mobius(gr, eta.power(j - k))
            part = part.inverse()
        cur = cur / (part / substitute_mobius(part, eta))
        S = S * part
    return cur.constant_value(), S


def _poly_comp(p: Poly, eta: Mobius) -> Poly:
    """p o eta for affine eta (c = 0), as a polynomial."""
    assert not eta.c
    lin = Poly(p.field, (eta.b / eta.d, eta.a / eta.d))
    return p(lin)


def additive_telescope_split(eta: Mobius, R: RatFunc):
    """R = S(eta) - S + C/d with C the orbit trace; returns (C, S)."""
    K = R.field
    d = eta.order()
    if d is None:
        raise PreconditionError("additive splitting needs a base action of finite order")
    if K.char and d % K.char == 0:
        raise CharPUnsupported("orbit length divisible by the characteristic")
    terms = [R]
    for _ in range(d - 1):
        terms.append(substitute_mobius(terms[-1], eta))
    C = sum(terms[1:], terms[0])
    if not C.is_constant():
        raise NotSplittable(f"orbit trace is not constant: {C.format()}")
    c = C.constant_value()
    shift = RatFunc.const(K, c / d)
    Rp = [t - shift for t in terms]
    S = RatFunc.const(K, 0)
    P = RatFunc.const(K, 0)
    for i in range(d - 1):
        P = P + Rp[i]
        S = S + P
    S = S * RatFunc.const(K, K(-1) / d)
    if substitute_mobius(S, eta) - S + shift != R:  # pragma: no cover
        raise ArithmeticError("additive certificate failed")
    return c, S


# ---------------------------------------------------------------- ellipticity


def _conjugate_base(f: JonqMap, phi: Mobius) -> JonqMap:
    """(phi(x), y) o f o (phi^-1(x), y)."""
    K = f.field
    one, zero = Poly.const(K, 1), Poly(K, ())
    P = JonqMap(phi, ((one, zero), (zero, one)), _normalized=True)
    return P.compose(f).compose(P.inverse())


def fiber_shape(f: JonqMap) -> str:
    A, B, C, D = f.entries()
    if not B and not C:
        return "scalar" if A == D else "diagonal"
    if not A and not D:
        return "antidiagonal"
    if not C and A == D:
        return "upper_unipotent"
    if not B and A == D:
        return "lower_unipotent"
    return "general"


def _swap_y(f: JonqMap) -> JonqMap:
    """Conjugate by (x, 1/y)."""
    A, B, C, D = f.entries()
    return JonqMap(f.base, ((D, C), (B, A)))


def is_elliptic(f: JonqMap, n_max: int = 16):
    """(elliptic, method_note, exact)."""
    try:
        d = f.base.order()
    except UnresolvedFixedPoints:  # pragma: no cover - order() handles this itself
        d = None
    if d is not None:
        g = f.power(d)
        D = delta(g)
        return (
            D.is_constant(),
            f"base order {d}; Δ of iterate {d} = {D.format()}",
            True,
        )
    try:
        kind, phi, _ = normalizing_coordinate(f.base)
    except UnresolvedFixedPoints:
        return _heuristic(f, n_max, "fixed points of the base action lie outside K")
    if f.field.char:
        return _heuristic(f, n_max, "positive characteristic")
    g = _conjugate_base(f, phi)
    shape = fiber_shape(g)
    if shape == "antidiagonal":
        g = g.power(2)
        shape = fiber_shape(g)
        prefix = "square of anti-diagonal fiber; "
    else:
        prefix = ""
    if shape == "lower_unipotent":
        g = _swap_y(g)
        shape = "upper_unipotent"
    if shape in ("scalar", "diagonal"):
        A, _, _, D = g.entries()
        R = RatFunc(A, D)
        try:
            dec = telescope_split(g.base, R)
        except NotElliptic as exc:
            return False, prefix + f"telescoping test: {exc}", True
        return True, prefix + f"telescoping test: r = {format_scalar(dec.r)}, S = {dec.S.format()}", True
    if shape == "upper_unipotent":
        A, B, _, D = g.entries()
        R = RatFunc(B, D)
        try:
            c, S = _split_translation_infinite(R, g.base, kind)
        except NotElliptic as exc:
            return False, prefix + f"translation test: {exc}", True
        return (
            True,
            prefix + f"translation test: R = S(eta) - S + c with S = {S.format()}, c = {format_scalar(c)}",
            True,
        )
    return _heuristic(f, n_max, "general fiber over a wandering base")


def _split_translation_infinite(R: RatFunc, eta: Mobius, kind):
    """R = S(eta) - S + c for eta = alpha x or x + 1 (infinite order), char 0.

    Poles are moved along eta-orbits until the denominator is shift-free;
    a nonzero shift-free proper part is not a coboundary.  Returns (c, S).
    """
    K = R.field
    zero = RatFunc.const(K, 0)
    poly, N = divmod(R.num, R.den)
    Q = R.den
    lead = Poly(K, ())  # Laurent head: part with poles only at the fixed point 0
    if kind == "multiplicative" and Q.valuation():
        v = Q.valuation()
        xv = Poly.x(K) ** v
        Q1 = Q.exact_div(xv)
        _, s_, t_ = poly_xgcd(xv, Q1)
        # N/Q = N t/x^v + N s/Q1 since s x^v + t Q1 = 1
        lead_rf = RatFunc(N * t_ % xv, xv)
        N = N * s_ % Q1
        Q = Q1
    else:
        lead_rf = zero
    U = zero
    cur = RatFunc(N, Q) if N else zero
    bound = _shift_bound(Q, Q, eta, kind) if N else 0
    while cur:
        Q, N = cur.den, cur.num
        hit = None
        for k in range(1, bound + 1):
            g = poly_gcd(Q, _poly_comp(Q, eta.power(k)))
            if not g.is_constant():
                hit = (k, g)
                break
        if hit is None:
            raise NotElliptic(
                f"poles of {cur.format()} are not paired along orbits of {eta.format()}; not a coboundary"
            )
        k, g = hit
        h = _poly_comp(g, eta.power(-k)).monic()
        H = poly_gcd(Q, h ** Q.deg)
        W = Q.exact_div(H)
        _, s_, t_ = poly_xgcd(H, W)
        top = RatFunc(N * t_ % H, H)  # the part of cur with poles at the roots of H
        T = substitute_mobius(top, eta.power(k))
        for i in range(1, k + 1):
            U = U - substitute_mobius(T, eta.power(-i))
        cur = cur - top + T
    # what is left has poles only at the fixed points: polynomial (+ Laurent head)
    S, c = _solve_polynomial_part(RatFunc(poly) + lead_rf, eta, kind)
    S = S + U
    if substitute_mobius(S, eta) - S + RatFunc.const(K, c) != R:  # pragma: no cover
        raise ArithmeticError("translation certificate failed")
    return c, S


def _solve_polynomial_part(L: RatFunc, eta: Mobius, kind):
    """S, c with L = S(eta) - S + c for L in K[x] (parabolic) or K[x, 1/x]."""
    K = L.field
    S = RatFunc.const(K, 0)
    if kind == "parabolic":
        P = L.num * (K.one / L.den.lc())
        V = Poly(K, ())
        one = Poly(K, (K.one, K.one))
        while P:
            n = P.deg
            term = Poly(K, [K.zero] * (n + 1) + [P.lc() / (n + 1)])
            V = V + term
            P = P - (term(one) - term)
        return RatFunc(V), K.zero
    alpha = eta.a / eta.d
    v = L.den.deg  # denominator is a power of x
    c = K.zero
    for i, a in enumerate(L.num.c):
        if not a:
            continue
        n = i - v
        a = a / L.den.lc()
        if n == 0:
            c = a
            continue
        mono = RatFunc(Poly(K, [K.zero] * n + [K.one])) if n > 0 else RatFunc(Poly.const(K, 1), Poly(K, [K.zero] * (-n) + [K.one]))
        S = S + mono * RatFunc.const(K, a / (alpha**n - 1))
    return S, c


def _heuristic(f, n_max, why):
    from .cremona import GrowthType, classify_growth, degree_sequence, jonq_to_cremona

    seq = degree_sequence(jonq_to_cremona(f), n_max)
    g = classify_growth(seq)
    return g.kind == GrowthType.Elliptic, f"degree heuristic ({why}): {g.summary()}", False


# ---------------------------------------------------------------- diagonalization


@dataclass(frozen=True)
class Diagonalization:
    kind: str  # Split | NonSplit | Scalar | Parabolic
    conj: tuple | None = None
    eigen: tuple | None = None
    normal: tuple | None = None
    verified: bool = True

    def describe(self):
        if self.kind == "Scalar":
            return "Scalar"
        if self.kind == "Split":
            a, b = self.eigen
            return f"Split(eigenvalues {a.format()}, {b.format()}; conj {_fmt_mat(self.conj)})"
        if self.kind == "NonSplit":
            (A, B), _ = self.normal
            return f"NonSplit(A = {A.format()}, B = {B.format()}; conj {_fmt_mat(self.conj)})"
        return f"Parabolic(normal {_fmt_mat(self.normal)}; conj {_fmt_mat(self.conj)})"


def _fmt_mat(m):
    (a, b), (c, d) = m
    return f"[[{a.format()}, {b.format()}], [{c.format()}, {d.format()}]]"


def _mat_mul(m, n):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _mat_inv(m):
    (a, b), (c, d) = m
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


def conjugate_matrix(M, P):
    """P^-1 M P."""
    return _mat_mul(_mat_inv(P), _mat_mul(M, P))


def diagonalize_over_Kx(f: JonqMap) -> Diagonalization:
    _require_fiberwise(f)
    K = f.field
    A, B, C, D = (RatFunc(p) for p in f.entries())
    one, zero = RatFunc.const(K, 1), RatFunc.const(K, 0)
    M = ((A, B), (C, D))
    if not B and not C:
        if A == D:
            return Diagonalization("Scalar")
        return Diagonalization("Split", ((one, zero), (zero, one)), (A, D))
    if K.char == 2:
        raise Char2NonSplit("diagonalization over K(x) is not supported in characteristic 2")
    tr = A + D
    det = A * D - B * C
    disc = tr * tr - det * 4
    if not disc:
        # one eigenvalue, not scalar: conjugate to [[lam, 1], [0, lam]]
        lam = tr / 2
        if B:
            v1, v2 = (B, lam - A), (zero, one)
            if not (v1[0] * v2[1] - v1[1] * v2[0]):
                v2 = (one, zero)
        else:
            v1, v2 = (lam - D, C), (one, zero)
            if not (v1[0] * v2[1] - v1[1] * v2[0]):
                v2 = (zero, one)
        P = ((v1[0], v2[0]), (v1[1], v2[1]))
        N = conjugate_matrix(M, P)
        # rescale so the upper-right entry is 1
        s = N[0][1]
        Q = ((one, zero), (zero, one / s))
        P = _mat_mul(P, Q)
        N = conjugate_matrix(M, P)
        ok = not N[1][0] and N[0][0] == N[1][1] and N[0][1] == one
        return Diagonalization("Parabolic", P, normal=N, verified=ok)
    sq, s = is_square_ratfunc(disc)
    if sq:
        l1, l2 = (tr + s) / 2, (tr - s) / 2
        vecs = []
        for lam in (l1, l2):
            if B:
                vecs.append((B, lam - A))
            else:
                vecs.append((lam - D, C))
        P = ((vecs[0][0], vecs[1][0]), (vecs[0][1], vecs[1][1]))
        N = conjugate_matrix(M, P)
        ok = not N[0][1] and not N[1][0] and N[0][0] == l1 and N[1][1] == l2
        return Diagonalization("Split", P, (l1, l2), verified=ok)
    # non-split: lower-left entry 1, then equal diagonal entries
    P1 = ((one, zero), (zero, C))
    N = conjugate_matrix(M, P1)
    t = (N[0][0] - N[1][1]) / 2
    P2 = ((one, t), (zero, one))
    P = _mat_mul(P1, P2)
    N = conjugate_matrix(M, P)
    sq2, _ = is_square_ratfunc(N[0][1])
    ok = N[1][0] == one and N[0][0] == N[1][1] and not sq2
    return Diagonalization("NonSplit", P, normal=N, verified=ok)


# ---------------------------------------------------------------- involutions


@dataclass(frozen=True)
class InvolutionCurve:
    a: RatFunc
    squarefree: Poly
    verified: bool

    def describe(self):
        return f"y^2 = {self.a.format()} (squarefree model y^2 = {self.squarefree.format()})"


def involution_curve(f: JonqMap) -> InvolutionCurve:
    _require_fiberwise(f)
    A, B, C, D = f.entries()
    if A or D or not B or not C:
        raise NotInvolutionForm("fiber matrix is not anti-diagonal")
    a = RatFunc(B, C)
    sqf = squarefree_part(a.num * a.den) * a.num.lc() if (a.num * a.den).deg > 0 else Poly.const(f.field, a.num.lc())
    ok = f.compose(f) == JonqMap.identity(f.field)
    return InvolutionCurve(a, sqf, ok)


# ---------------------------------------------------------------- normal forms


@dataclass(frozen=True)
class EllipticNormalForm:
    kind: str  # DiagonalKK | AffineTranslation | FiberDiagonal | FiberTranslation
    field: object
    alpha: object = None
    beta: object = None
    kernel: tuple = ()
    k: int = 0
    scale: object = None

    def as_jonq(self) -> JonqMap:
        K = self.field
        one, zero = Poly.const(K, 1), Poly(K, ())
        if self.kind in ("DiagonalKK", "FiberDiagonal"):
            alpha = self.alpha if self.kind == "DiagonalKK" else K.one
            return JonqMap(Mobius.scaling(K, alpha), ((Poly.const(K, self.beta), zero), (zero, one)))
        alpha = self.alpha if self.kind == "AffineTranslation" else K.one
        return JonqMap(Mobius.scaling(K, alpha), ((one, one), (zero, one)))

    def describe(self):
        if self.kind == "DiagonalKK":
            return (
                f"DiagonalKK(alpha={format_scalar(self.alpha)}, beta={format_scalar(self.beta)}, "
                f"kernel={list(self.kernel)}, k={self.k})"
            )
        if self.kind == "FiberDiagonal":
            return f"FiberDiagonal(beta={format_scalar(self.beta)})"
        if self.kind == "AffineTranslation":
            return f"AffineTranslation(alpha={format_scalar(self.alpha)})"
        return "FiberTranslation"


def _base_scaling(eta: Mobius):
    """alpha if eta is x -> alpha x, else None."""
    if eta.b or eta.c:
        return None
    return eta.a / eta.d


def diagonal_kk(alpha, beta) -> EllipticNormalForm:
    """Normal form (alpha x, beta y); needs a kernel lattice of the form <(k, 0)>."""
    K = _field_of(alpha)
    lat = relation_lattice(K(alpha), K(beta))
    if not lat:
        k = 0
    elif len(lat) == 1 and lat[0][1] == 0:
        k = lat[0][0]
    else:
        raise NotRecognized(
            f"kernel lattice {list(lat)} is not generated by some (k, 0); a monomial change of coordinates is needed"
        )
    return EllipticNormalForm("DiagonalKK", K, K(alpha), K(beta), lat, k)


def _field_of(a):
    from .fields import field_of

    return field_of(a)


def elliptic_normal_form_recognize(f: JonqMap) -> EllipticNormalForm:
    ell, method, _ = is_elliptic(f)
    if not ell:
        raise NotElliptic(method)
    K = f.field
    alpha = _base_scaling(f.base)
    if alpha is None:
        raise NotRecognized("base action is not of the form x -> alpha x")
    A, B, C, D = f.entries()
    if not B and not C and A.is_constant() and D.is_constant():
        beta = A.constant_value() / D.constant_value()
        if alpha == 1:
            return EllipticNormalForm("FiberDiagonal", K, K.one, beta, relation_lattice(K.one, beta), 1)
        nf = diagonal_kk(alpha, beta)
        return nf
    if not C and A == D and A.is_constant() and B.is_constant() and B:
        c = B.constant_value() / D.constant_value()
        if K.char and multiplicative_order(alpha) is not None and alpha != 1:
            raise NotRecognized("translation normal form needs alpha of infinite order in positive characteristic")
        if alpha == 1:
            return EllipticNormalForm("FiberTranslation", K, K.one, scale=c)
        return EllipticNormalForm("AffineTranslation", K, alpha, scale=c)
    raise NotRecognized("map is not in a normal-form shape; conjugation search is not performed")


# ---------------------------------------------------------------- membership


def _commutes_with_scaling(eta: Mobius, alpha) -> bool:
    S = Mobius.scaling(eta.field, alpha)
    return eta.compose(S) == S.compose(eta)


def cent_membership(nf: EllipticNormalForm, g: JonqMap):
    """(member, matched clause) for the centralizer of a normal form."""
    K = nf.field
    if g.field is not K:
        raise ChartMismatch(f"map over {g.field.name} tested against a normal form over {K.name}")
    A, B, C, D = g.entries()
    eta = g.base
    if nf.kind in ("DiagonalKK", "FiberDiagonal"):
        alpha = nf.alpha if nf.kind == "DiagonalKK" else K.one
        k = nf.k
        if B or C:
            return False, "fiber is not diagonal (need y*R(x^k))"
        if not _commutes_with_scaling(eta, alpha):
            return False, f"base does not commute with x -> {format_scalar(alpha)}*x"
        R = RatFunc(A, D)
        if k == 0:
            if not R.is_constant():
                return False, "trivial kernel forces R constant"
            return True, "case (alpha x, beta y), trivial kernel: (eta(x), c*y)"
        # alpha generates the k-th roots of unity here
        zeta = alpha if multiplicative_order(alpha) == k else _primitive(K, k)
        if R.scale_arg(zeta) != R:
            return False, f"R is not a function of x^{k}"
        return True, f"case (alpha x, beta y), kernel <({k},0)>: (eta(x), y*R(x^{k}))"
    alpha = nf.alpha if nf.kind == "AffineTranslation" else K.one
    if K.char:
        # (R(y) x, y + t) with R(y+1) = R(y); as a Jonquieres map only R constant fits
        if B and not C and A == D and B.is_constant() and eta.b == 0 and eta.c == 0:
            return True, "case (alpha x, y+1), char p: (gamma*x, y + t)"
        return False, "char p centralizer elements are (R(y) x, y + t)"
    if C or A != D:
        return False, "fiber is not a translation y + R(x)"
    if not _commutes_with_scaling(eta, alpha):
        return False, f"base does not commute with x -> {format_scalar(alpha)}*x"
    R = RatFunc(B, D)
    if R.scale_arg(alpha) != R:
        return False, f"R(alpha x) != R(x) for alpha = {format_scalar(alpha)}"
    return True, "case (alpha x, y+1): (eta(x), y + R(x)) with R(alpha x) = R(x)"


def _primitive(K, k):
    from .fields import root_of_unity

    return root_of_unity(K, k)


def char_p_translation_member(R: RatFunc, t=None) -> bool:
    """Predicate R(y+1) = R(y) for (R(y) x, y + t) in characteristic p."""
    K = R.field
    shifted = R.compose(RatFunc(Poly(K, (K.one, K.one))))
    return shifted == R


# ---------------------------------------------------------------- Cent_0


@dataclass(frozen=True)
class Cent0:
    """Shape of Cent_0(f); ``twist`` records whether f was confirmed non-elliptic."""

    kind: str  # MultiplicativeFlow | AdditiveFlow | OrderTwo | TorsionOrTrivial
    witness: JonqMap | None = None
    twist: bool | None = None

    def describe(self):
        if self.witness is not None:
            return f"{self.kind} (witness {self.witness.format()})"
        return self.kind


def cent0_structure(f: JonqMap) -> Cent0:
    """Pattern-match the fiber shape of a map with wandering base action.

    Only the base action is required to have infinite order; whether f is a
    twist (non-elliptic) is reported in ``twist`` rather than enforced.
    """
    try:
        order = f.base.order()
    except UnresolvedFixedPoints as exc:  # pragma: no cover
        raise NotBaseWandering(str(exc)) from exc
    if order is not None:
        raise NotBaseWandering(f"base action has finite order {order}")
    ell, _, exact = is_elliptic(f)
    twist = (not ell) if exact else None
    K = f.field
    one, zero = Poly.const(K, 1), Poly(K, ())
    shape = fiber_shape(f)
    ident = Mobius.identity(K)
    if shape in ("diagonal", "scalar"):
        t = 5 if K.char != 5 else 2
        w = JonqMap(ident, ((Poly.const(K, t), zero), (zero, one)))
        return Cent0("MultiplicativeFlow", w, twist)
    if shape == "antidiagonal":
        return Cent0("OrderTwo", JonqMap(ident, ((Poly.const(K, -1), zero), (zero, one))), twist)
    if shape == "upper_unipotent":
        return Cent0("AdditiveFlow", JonqMap(ident, ((one, one), (zero, one))), twist)
    return Cent0("TorsionOrTrivial", None, twist)
