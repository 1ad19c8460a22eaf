"""The Jonquieres group PGL_2(K) x| PGL_2(K(x)).

A map is ``(x, y) -> (eta(x), (A y + B)/(C y + D))``. The fiber matrix is kept
as a primitive polynomial matrix whose first nonzero entry (in the order A, B,
C, D) is monic, so two maps are projectively equal iff they are structurally
equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .errors import NotBaseWandering, RankZeroFiber, SpecMismatch, UnresolvedFixedPoints
from .fields import format_scalar
from .mobius import INF, Mobius, format_point, normalizing_coordinate
from .poly import Poly, RatFunc, poly_gcd, roots_in_field, substitute_mobius


def _normalize_fiber(entries, K):
    """Primitive polynomial matrix from four RatFunc/Poly entries."""
    rs = [e if isinstance(e, RatFunc) else RatFunc(e if isinstance(e, Poly) else Poly.const(K, e)) for e in entries]
    den = Poly.const(K, 1)
    for r in rs:
        den = den * r.den.exact_div(poly_gcd(den, r.den))
    polys = [(r * RatFunc(den)).num for r in rs]
    g = None
    for p in polys:
        if p:
            g = p if g is None else poly_gcd(g, p)
    if g is None:
        raise RankZeroFiber("zero fiber matrix")
    if not g.is_constant():
        polys = [p.exact_div(g) for p in polys]
    lead = next(p for p in polys if p).lc()
    if lead != 1:
        inv = 1 / lead
        polys = [p * inv for p in polys]
    A, B, C, D = polys
    if not (A * D - B * C):
        raise RankZeroFiber("fiber matrix is singular over K(x)")
    return ((A, B), (C, D))


class JonqMap:
    __slots__ = ("base", "fiber", "_hash")

    def __init__(self, base: Mobius, fiber, _normalized=False):
        K = base.field
        if not _normalized:
            (a, b), (c, d) = fiber
            fiber = _normalize_fiber([a, b, c, d], K)
        self.base = base
        self.fiber = fiber
        self._hash = None

    @property
    def field(self):
        return self.base.field

    @classmethod
    def identity(cls, K):
        one, zero = Poly.const(K, 1), Poly(K, ())
        return cls(Mobius.identity(K), ((one, zero), (zero, one)), _normalized=True)

    @classmethod
    def make(cls, K, eta, A, B, C, D):
        """Convenience constructor; eta may be a Mobius or a tuple (a, b, c, d)."""
        if not isinstance(eta, Mobius):
            eta = Mobius(K, *eta)
        return cls(eta, ((A, B), (C, D)))

    def entries(self):
        (A, B), (C, D) = self.fiber
        return A, B, C, D

    def det(self) -> Poly:
        A, B, C, D = self.entries()
        return A * D - B * C

    def trace(self) -> Poly:
        A, _, _, D = self.entries()
        return A + D

    def is_fiberwise(self):
        return self.base.is_identity()

    def key(self):
        return (self.base.key(), tuple(p.c for p in self.entries()))

    def __eq__(self, o):
        return isinstance(o, JonqMap) and self.field is o.field and self.key() == o.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def fiber_ratfuncs(self):
        return tuple(RatFunc(p) for p in self.entries())

    def compose(self, g: "JonqMap") -> "JonqMap":
        """self o g."""
        if g.field is not self.field:
            raise SpecMismatch("maps over different fields")
        A, B, C, D = (substitute_mobius(RatFunc(p), g.base) for p in self.entries())
        a, b, c, d = g.fiber_ratfuncs()
        fiber = ((A * a + B * c, A * b + B * d), (C * a + D * c, C * b + D * d))
        return JonqMap(self.base.compose(g.base), fiber)

    def __matmul__(self, g):
        return self.compose(g)

    def inverse(self) -> "JonqMap":
        inv = self.base.inverse()
        A, B, C, D = (substitute_mobius(RatFunc(p), inv) for p in self.entries())
        return JonqMap(inv, ((D, -B), (-C, A)))

    def power(self, n: int) -> "JonqMap":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = JonqMap.identity(self.field)
        while n:
            if n & 1:
                out = out.compose(base)
            n >>= 1
            if n:
                base = base.compose(base)
        return out

    def __call__(self, point):
        """Image of an affine point (x, y); raises DivisionByZero at poles."""
        x, y = point
        A, B, C, D = (p(x) for p in self.entries())
        X = self.base(x)
        if y is INF:
            return X, (A / C if C else INF)
        den = C * y + D
        if not den:
            return X, INF
        return X, (A * y + B) / den

    def format(self):
        from .parser import render_map

        return render_map(self)

    def __repr__(self):
        return f"JonqMap{self.format()}"

    def __str__(self):
        return self.format()


def jonq_compose(f: JonqMap, g: JonqMap) -> JonqMap:
    return f.compose(g)


def jonq_inverse(f: JonqMap) -> JonqMap:
    return f.inverse()


def jonq_equal(f: JonqMap, g: JonqMap) -> bool:
    """Projective equality (structural, thanks to the canonical normalization)."""
    return f == g


def commutes(f: JonqMap, g: JonqMap) -> bool:
    return f.compose(g) == g.compose(f)


# ---------------------------------------------------------------- fiber data

@dataclass(frozen=True)
class FiberEvent:
    """A contracted fiber over x0 with its indeterminacy point, or an unresolved factor."""

    kind: str  # "ContractedFiber" or "UnresolvedFactor"
    x0: object = None
    y0: object = None
    persistent: bool = False
    factor: Poly | None = None

    def as_dict(self):
        if self.kind == "UnresolvedFactor":
            return {"kind": self.kind, "factor": self.factor.format()}
        return {
            "kind": self.kind,
            "x0": format_point(self.x0),
            "indeterminacy_point": [format_point(self.x0), format_point(self.y0)],
            "persistent": self.persistent,
        }


def _kernel_point(A, B, C, D):
    """Projective kernel direction y0 of [[A, B], [C, D]] (rank one)."""
    if A or B:
        return INF if not A else -B / A
    if C or D:
        return INF if not C else -D / C
    raise RankZeroFiber("fiber matrix vanishes identically at a contracted fiber")


def fiber_events(f: JonqMap):
    """Contracted fibers (zeros of det M, including infinity) and their indeterminacy points."""
    K = f.field
    A, B, C, D = f.entries()
    det = f.det()
    order = f.base.order()
    wandering = order is None
    events = []
    roots, unresolved = roots_in_field(det)
    for x0 in roots:
        y0 = _kernel_point(A(x0), B(x0), C(x0), D(x0))
        events.append(FiberEvent("ContractedFiber", x0, y0, wandering and not _is_fixed(f.base, x0)))
    m = max(p.deg for p in (A, B, C, D))
    if det.deg < 2 * m:
        # fiber over infinity: chart u = 1/x, entries u^m M(1/u) at u = 0
        tops = [p[m] for p in (A, B, C, D)]
        y0 = _kernel_point(*tops)
        events.append(FiberEvent("ContractedFiber", INF, y0, wandering and not _is_fixed(f.base, INF)))
    for q in unresolved:
        events.append(FiberEvent("UnresolvedFactor", factor=q))
    return events


def _is_fixed(eta: Mobius, x0):
    return eta(x0) == x0 if x0 is not INF else eta(INF) is INF


@dataclass(frozen=True)
class BaseOrder:
    kind: str  # FiniteOrder | InfiniteMultiplicative | InfiniteParabolic
    order: int | None = None
    coordinate: Mobius | None = None
    multiplier: object = None

    def describe(self):
        if self.kind == "FiniteOrder":
            return f"FiniteOrder({self.order})"
        if self.kind == "InfiniteMultiplicative":
            return f"InfiniteMultiplicative(multiplier {format_scalar(self.multiplier)}, coordinate {self.coordinate.format()})"
        return f"InfiniteParabolic(coordinate {self.coordinate.format()})"


def base_order_report(f) -> BaseOrder:
    """Classify the base action; ``f`` may be a JonqMap or a Mobius."""
    eta = f.base if isinstance(f, JonqMap) else f
    kind, phi, data = normalizing_coordinate(eta)
    if kind == "finite":
        return BaseOrder("FiniteOrder", order=data)
    if kind == "multiplicative":
        return BaseOrder("InfiniteMultiplicative", coordinate=phi, multiplier=data)
    return BaseOrder("InfiniteParabolic", coordinate=phi)


@dataclass
class Report:
    """Structured report with a statement, the result it rests on, and witness data."""

    statement: str
    anchor: str
    witness_data: dict = dc_field(default_factory=dict)

    def as_dict(self):
        return {"statement": self.statement, "anchor": self.anchor, "witness_data": self.witness_data}

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def to_text(self):
        lines = [self.statement, f"  anchor: {self.anchor}"]
        for k, v in self.witness_data.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def centralizer_persistence_report(f: JonqMap) -> Report:
    """Centralizer of a base-wandering twist on the base, via persistent indeterminacy."""
    from .centralizer import is_elliptic

    try:
        base = base_order_report(f)
    except UnresolvedFixedPoints as exc:
        raise NotBaseWandering(str(exc)) from exc
    if base.kind == "FiniteOrder":
        raise NotBaseWandering(f"base action has finite order {base.order}")
    ell, method, _ = is_elliptic(f)
    if ell:
        raise NotBaseWandering(f"map is elliptic ({method})")
    events = fiber_events(f)
    persistent = [e for e in events if e.kind == "ContractedFiber" and e.persistent]
    witness = {
        "base": base.describe(),
        "events": [e.as_dict() for e in events],
        "ellipticity": method,
    }
    if persistent:
        witness["persistent_over"] = [format_point(e.x0) for e in persistent]
        if base.kind == "InfiniteParabolic":
            return Report(
                "Cent_b(f) ≅ ℤ",
                "persistent indeterminacy, translation base action",
                witness,
            )
        return Report(
            "Cent_b(f) ≅ ℤ × finite cyclic",
            "persistent indeterminacy, multiplicative base action",
            witness,
        )
    return Report(
        "Cent_b(f) ≅ ℤ × finite cyclic group, ⟨f̄⟩ of finite index (no persistent indeterminacy found over K)",
        "centralizer structure of base-wandering twists",
        witness,
    )
