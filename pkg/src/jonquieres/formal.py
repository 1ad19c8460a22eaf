"""Formal diagonalization of a Jonquieres map along an invariant fiber.

Given f = (alpha x, (A y + B)/(C y + D)) with B(0) = C(0) = D(0) = 0 and
A(0) != 0, find E, F, G, H in K[[x]] such that

    P(alpha x)^-1 M(x) P(x),   P = [[E, F], [G, H]],  M = [[A, B], [C, D]]

is diagonal modulo x^(N+1). The two off-diagonal equations are solved one
coefficient at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateStep, PreconditionError
from .fields import format_scalar, multiplicative_order
from .poly import Poly
from .series import LaurentSeries, TruncSeries

PINNINGS = ("zero", "unit")


@dataclass(frozen=True)
class LocalModel:
    alpha: object
    A: Poly
    B: Poly
    C: Poly
    D: Poly
    N: int = 8

    def __post_init__(self):
        K = self.A.field
        if not self.A[0]:
            raise PreconditionError("A(0) must be nonzero")
        for name in ("B", "C", "D"):
            if getattr(self, name)[0]:
                raise PreconditionError(f"{name}(0) must vanish")
        if not (self.A * self.D - self.B * self.C):
            raise PreconditionError("fiber matrix is singular")
        if multiplicative_order(K(self.alpha)) is not None:
            raise PreconditionError("alpha must have infinite multiplicative order")
        if self.N < 0:
            raise PreconditionError("truncation order must be non-negative")

    @property
    def field(self):
        return self.A.field


@dataclass(frozen=True)
class FormalConjugation:
    E: TruncSeries
    F: TruncSeries
    G: TruncSeries
    H: TruncSeries
    beta: LaurentSeries
    residual_order: int
    pinning: str = "zero"

    def as_dict(self):
        return {
            "valuation": self.beta.valuation,
            "beta": [[v, format_scalar(a)] for v, a in self.beta.coefficients()],
            "E": [format_scalar(a) for a in self.E.c],
            "F": [format_scalar(a) for a in self.F.c],
            "G": [format_scalar(a) for a in self.G.c],
            "H": [format_scalar(a) for a in self.H.c],
            "residual_order": self.residual_order,
            "pinning": self.pinning,
        }

    def certificate_text(self):
        lines = [f"valuation of beta: {self.beta.valuation}", "  i  beta_i"]
        for v, a in self.beta.coefficients():
            lines.append(f"{v:3d}  {format_scalar(a)}")
        lines.append(f"off-diagonal residual vanishes mod x^{self.residual_order + 1}")
        return "\n".join(lines)


def _coef(s: TruncSeries, t: TruncSeries, u, i):
    """x^i coefficient of s * t * u (u a Poly)."""
    acc = s.field.zero
    for a in range(i + 1):
        if not s[a]:
            continue
        for b in range(i + 1 - a):
            if not t[b]:
                continue
            st = s[a] * t[b]
            c = u[i - a - b]
            if c:
                acc = acc + st * c
    return acc


def _upper(F, H, Fa, Ha, m, i):
    """x^i coefficient of F H(ax) A + H H(ax) B - F F(ax) C - H F(ax) D."""
    return (
        _coef(F, Ha, m.A, i)
        + _coef(H, Ha, m.B, i)
        - _coef(F, Fa, m.C, i)
        - _coef(H, Fa, m.D, i)
    )


def _lower(E, G, Ea, Ga, m, i):
    """x^i coefficient of -E G(ax) A - G G(ax) B + E E(ax) C + G E(ax) D."""
    return (
        -_coef(E, Ga, m.A, i)
        - _coef(G, Ga, m.B, i)
        + _coef(E, Ea, m.C, i)
        + _coef(G, Ea, m.D, i)
    )


def _step(eq, m, pin_value, i, solve_first):
    """Solve one affine equation c0 + cs*s + cp*p = 0 for (s, p).

    ``s`` is solved for, ``p`` is pinned; falls back to the other way round.
    Returns (s, p).
    """
    K = m.field
    z = K.zero
    c0 = eq(z, z)
    cs = eq(K.one, z) - c0
    cp = eq(z, K.one) - c0
    if cs:
        return -(c0 + cp * pin_value) / cs, pin_value
    if cp:
        return z, -c0 / cp
    if c0:
        raise DegenerateStep(f"no solution at order {i} ({solve_first}); alpha or the normalization is degenerate")
    return z, pin_value


def solve_efgh(m: LocalModel, pinning: str = "zero") -> FormalConjugation:
    """Term-by-term solution; ``pinning`` fixes the free unknown of each step.

    "zero" sets e_i = h_i = 0 for i >= 1, "unit" sets them to 1.
    """
    if pinning not in PINNINGS:
        raise PreconditionError(f"unknown pinning {pinning!r}")
    K, N, alpha = m.field, m.N, m.field(m.alpha)
    pin = K.zero if pinning == "zero" else K.one
    e, f, g, h = [K.one], [K.zero], [K.zero], [K.one]
    apow = K.one
    for i in range(1, N + 1):
        apow = apow * alpha

        def upper(fi, hi):
            F = TruncSeries(K, f + [fi], i)
            H = TruncSeries(K, h + [hi], i)
            return _upper(F, H, F.scale_arg(alpha), H.scale_arg(alpha), m, i)

        def lower(gi, ei):
            E = TruncSeries(K, e + [ei], i)
            G = TruncSeries(K, g + [gi], i)
            return _lower(E, G, E.scale_arg(alpha), G.scale_arg(alpha), m, i)

        fi, hi = _step(upper, m, pin, i, "f, h")
        gi, ei = _step(lower, m, pin, i, "e, g")
        f.append(fi)
        h.append(hi)
        g.append(gi)
        e.append(ei)
    E, F, G, H = (TruncSeries(K, s, N) for s in (e, f, g, h))
    beta = diagonal_ratio(m, E, F, G, H)
    res = residual_order(m, E, F, G, H)
    if res < N:  # pragma: no cover - the recurrence guarantees res >= N
        raise DegenerateStep(f"certificate failed: residual only vanishes to order {res}")
    return FormalConjugation(E, F, G, H, beta, res, pinning)


def conjugated_matrix(m: LocalModel, E, F, G, H):
    """adj(P(alpha x)) M P(x) with polynomial arithmetic (independent of the solver)."""
    alpha = m.field(m.alpha)
    P = [[s.to_poly() for s in row] for row in ((E, F), (G, H))]
    Pa = [[p.scale_arg(alpha) for p in row] for row in P]
    M = [[m.A, m.B], [m.C, m.D]]
    adj = [[Pa[1][1], -Pa[0][1]], [-Pa[1][0], Pa[0][0]]]

    def mul(X, Y):
        return [[X[r][0] * Y[0][c] + X[r][1] * Y[1][c] for c in range(2)] for r in range(2)]

    return mul(mul(adj, M), P)


def residual_order(m: LocalModel, E, F, G, H) -> int:
    """Largest r with both off-diagonal entries = 0 mod x^(r+1), capped at N."""
    Q = conjugated_matrix(m, E, F, G, H)
    N = min(s.order for s in (E, F, G, H))
    for r in range(N + 1):
        if Q[0][1][r] or Q[1][0][r]:
            return r - 1
    return N


def diagonal_ratio(m: LocalModel, E, F, G, H) -> LaurentSeries:
    """beta = n11 / n22 of the conjugated matrix, as a Laurent series."""
    Q = conjugated_matrix(m, E, F, G, H)
    N = min(s.order for s in (E, F, G, H))
    n11 = TruncSeries.from_poly(Q[0][0], N)
    n22 = TruncSeries.from_poly(Q[1][1], N)
    if n22.is_zero():
        raise DegenerateStep(f"second diagonal entry vanishes mod x^{N + 1}; raise N")
    return LaurentSeries.from_ratio(n11, n22)


def same_up_to_scalar(b1: LaurentSeries, b2: LaurentSeries) -> bool:
    """b1 = c * b2 on the common range of known coefficients, c a nonzero constant."""
    if b1.valuation != b2.valuation:
        return False
    u1, u2 = b1.unit, b2.unit
    if u1.is_zero() or u2.is_zero():
        return u1.is_zero() and u2.is_zero()
    c = u1[0] / u2[0]
    n = min(u1.order, u2.order)
    return all(u1[i] == c * u2[i] for i in range(n + 1))


def fixed_formal_section_check(alpha, beta: TruncSeries, theta: TruncSeries, N: int) -> bool:
    """beta(x/alpha) * theta(x/alpha) == theta(x) mod x^(N+1)."""
    K = beta.field
    inv = 1 / K(alpha)
    lhs = (beta.scale_arg(inv) * theta.scale_arg(inv)).truncate(N)
    return lhs == theta.truncate(N)


def fixed_formal_sections(alpha, beta: TruncSeries, N: int):
    """Basis of the theta with theta(0) = 0 solving the fixed-section equation mod x^(N+1).

    The x^n coefficient reads alpha^-n sum_{j<=n} beta_{n-j} theta_j = theta_n,
    a triangular system; a free coefficient appears only when beta_0 = alpha^n.
    """
    K = beta.field
    alpha = K(alpha)
    basis = []
    for start in range(1, N + 1):
        if beta[0] != alpha**start:
            continue
        th = [K.zero] * (N + 1)
        th[start] = K.one
        ok = True
        for n in range(start + 1, N + 1):
            acc = K.zero
            for j in range(start, n):
                acc = acc + beta[n - j] * th[j]
            lead = beta[0] - alpha**n
            if lead:
                th[n] = -acc / lead
            elif acc:
                ok = False
                break
        if ok:
            basis.append(TruncSeries(K, th, N))
    return basis


def diagonal_commutant_check(alpha, beta: TruncSeries, gamma, delta, N: int) -> bool:
    """beta(x) == beta(gamma x) mod x^(N+1); alpha and delta do not enter the test."""
    K = beta.field
    return beta.truncate(N) == beta.scale_arg(K(gamma)).truncate(N)
