"""Truncated power series K[[x]] with an explicit truncation order."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DivisionByZero, NonUnitConstantTerm
from .poly import Poly, RatFunc


class TruncSeries:
    """sum_{i<=order} c_i x^i + O(x^(order+1))."""

    __slots__ = ("field", "c", "order")

    def __init__(self, field, coeffs, order):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        coeffs = [field(a) for a in list(coeffs)[: order + 1]]
        coeffs += [field.zero] * (order + 1 - len(coeffs))
        self.field = field
        self.c = tuple(coeffs)
        self.order = order

    @classmethod
    def from_poly(cls, p: Poly, order):
        return cls(p.field, p.c, order)

    @classmethod
    def from_ratfunc(cls, f: RatFunc, order):
        """Expansion at 0; the denominator must not vanish there."""
        num = cls.from_poly(f.num, order)
        den = cls.from_poly(f.den, order)
        return num * den.invert()

    @classmethod
    def const(cls, field, a, order):
        return cls(field, [a], order)

    def __getitem__(self, i):
        return self.c[i] if 0 <= i <= self.order else self.field.zero

    def _coerce(self, o):
        if isinstance(o, TruncSeries):
            return o
        if isinstance(o, Poly):
            return TruncSeries.from_poly(o, self.order)
        return TruncSeries(self.field, [o], self.order)

    def __add__(self, o):
        o = self._coerce(o)
        n = min(self.order, o.order)
        return TruncSeries(self.field, [self.c[i] + o.c[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.field, [-a for a in self.c], self.order)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if not isinstance(o, (TruncSeries, Poly)):
            s = self.field(o)
            return TruncSeries(self.field, [a * s for a in self.c], self.order)
        o = self._coerce(o)
        n = min(self.order, o.order)
        out = [self.field.zero] * (n + 1)
        for i in range(n + 1):
            a = self.c[i]
            if a:
                for j in range(n + 1 - i):
                    b = o.c[j]
                    if b:
                        out[i + j] = out[i + j] + a * b
        return TruncSeries(self.field, out, n)

    __rmul__ = __mul__

    def invert(self):
        """Multiplicative inverse; needs a unit constant term."""
        a0 = self.c[0]
        if not a0:
            raise NonUnitConstantTerm("series with zero constant term is not invertible")
        inv0 = 1 / a0
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = self.field.zero
            for j in range(1, k + 1):
                if self.c[j]:
                    acc = acc + self.c[j] * out[k - j]
            out.append(-acc * inv0)
        return TruncSeries(self.field, out, self.order)

    def __truediv__(self, o):
        if isinstance(o, (TruncSeries, Poly)):
            return self * self._coerce(o).invert()
        s = self.field(o)
        if not s:
            raise DivisionByZero("division by zero")
        return self * (1 / s)

    def scale_arg(self, s):
        """self(s*x)."""
        out = []
        pw = self.field.one
        for a in self.c:
            out.append(a * pw)
            pw = pw * s
        return TruncSeries(self.field, out, self.order)

    def truncate(self, order):
        return TruncSeries(self.field, self.c, min(order, self.order))

    def valuation(self):
        for i, a in enumerate(self.c):
            if a:
                return i
        return None

    def shift_down(self, k):
        """Divide by x^k; the lowest k coefficients must vanish. Order drops by k."""
        if any(self.c[:k]):
            raise NonUnitConstantTerm("cannot divide by x^k: low coefficients nonzero")
        return TruncSeries(self.field, self.c[k:], self.order - k)

    def is_zero(self):
        return not any(self.c)

    def __eq__(self, o):
        if not isinstance(o, TruncSeries):
            o = self._coerce(o)
        n = min(self.order, o.order)
        return all(self.c[i] == o.c[i] for i in range(n + 1))

    __hash__ = None

    def to_poly(self):
        return Poly(self.field, self.c)

    def __repr__(self):
        return f"TruncSeries({self.to_poly().format()} + O(x^{self.order + 1}))"


@dataclass(frozen=True)
class LaurentSeries:
    """x^valuation * unit, where ``unit`` has nonzero constant term (or is zero)."""

    valuation: int
    unit: TruncSeries

    @classmethod
    def from_ratio(cls, num: TruncSeries, den: TruncSeries):
        vn, vd = num.valuation(), den.valuation()
        if vd is None:
            raise DivisionByZero("Laurent ratio with zero denominator")
        if vn is None:
            return cls(0, TruncSeries(num.field, [], min(num.order, den.order)))
        n = num.shift_down(vn)
        d = den.shift_down(vd)
        return cls(vn - vd, n * d.invert())

    @property
    def order(self):
        """Absolute truncation order of the represented series."""
        return self.valuation + self.unit.order

    def coefficients(self):
        return [(self.valuation + i, a) for i, a in enumerate(self.unit.c)]

    def scaled(self, lam):
        return LaurentSeries(self.valuation, self.unit * lam)

    def equal_up_to(self, other, order):
        """Coefficient-wise equality of x^v-terms with v <= order."""
        lo = min(self.valuation, other.valuation)
        for v in range(lo, order + 1):
            if self._coef(v) != other._coef(v):
                return False
        return True

    def _coef(self, v):
        i = v - self.valuation
        if i < 0:
            return self.unit.field.zero
        if i > self.unit.order:
            raise ValueError("coefficient beyond truncation order")
        return self.unit.c[i]
