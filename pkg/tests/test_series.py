import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, strategies as st

from jonquieres import QQ, LaurentSeries, Poly, RatFunc, TruncSeries
from jonquieres.errors import NonUnitConstantTerm

from conftest import X

series = st.lists(st.integers(-5, 5), min_size=1, max_size=9).map(lambda c: TruncSeries(QQ, c, 8))
units = series.filter(lambda s: s[0] != 0)


@given(units)
def test_inverse(s):
    assert s * s.invert() == TruncSeries.const(QQ, 1, 8)


@given(series, series, series)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


def test_order_is_minimum():
    a = TruncSeries(QQ, [1, 2, 3], 5)
    b = TruncSeries(QQ, [1], 3)
    assert (a * b).order == 3
    assert (a + b).order == 3


def test_from_ratfunc_matches_sympy():
    x = Poly.x(QQ)
    r = RatFunc(x + 1, Poly(QQ, (1, -2, 0, 1)))
    s = TruncSeries.from_ratfunc(r, 10)
    ref = sp.series((X + 1) / (1 - 2 * X + X**3), X, 0, 11).removeO()
    want = [sp.Poly(ref, X).coeff_monomial(X**i) for i in range(11)]
    assert [sp.Rational(int(c.numerator), int(c.denominator)) for c in s.c] == want


def test_non_unit_inverse():
    with pytest.raises(NonUnitConstantTerm):
        TruncSeries(QQ, [0, 1], 4).invert()


def test_scale_arg():
    s = TruncSeries(QQ, [1, 1, 1], 2).scale_arg(QQ(2))
    assert list(s.c) == [1, 2, 4]


def test_laurent_ratio():
    num = TruncSeries(QQ, [0, 0, 1, 1], 6)
    den = TruncSeries(QQ, [0, 2], 6)
    L = LaurentSeries.from_ratio(num, den)
    assert L.valuation == 1
    assert L.unit[0] == mpq(1, 2)
    assert L.equal_up_to(L.scaled(1), 4)


def test_spec_examples():
    s = TruncSeries(QQ, [1, 1], 3).invert()
    assert list(s.c) == [1, -1, 1, -1]
    p = TruncSeries(QQ, [1, 1], 5) * TruncSeries(QQ, [1, -1], 5)
    assert list(p.c) == [1, 0, -1, 0, 0, 0]
