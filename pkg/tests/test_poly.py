import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, strategies as st

from jonquieres import GF, QQ, Cyclotomic, Mobius, Poly, RatFunc, squarefree_decomposition, substitute_mobius
from jonquieres.errors import DegreeBudgetExceeded, DivisionByZero
from jonquieres.poly import (
    DEGREE_CAP,
    format_factored,
    is_square_ratfunc,
    poly_gcd,
    poly_xgcd,
    roots_in_field,
    squarefree_part,
)

from conftest import X, to_sympy_poly, to_sympy_rat

coeffs = st.lists(st.integers(-6, 6), min_size=1, max_size=6)
qpolys = coeffs.map(lambda c: Poly(QQ, [QQ(v) for v in c]))
nonzero_qpolys = qpolys.filter(bool)


@given(qpolys, qpolys, qpolys)
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Poly(QQ, ())


@given(qpolys, nonzero_qpolys)
def test_divmod(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert not r or r.deg < b.deg


@given(nonzero_qpolys, nonzero_qpolys)
def test_gcd_against_sympy(a, b):
    g = poly_gcd(a, b)
    ref = sp.Poly(sp.gcd(to_sympy_poly(a), to_sympy_poly(b)), X)
    assert g.deg == ref.degree()
    assert not (a % g) and not (b % g)
    g2, s, t = poly_xgcd(a, b)
    assert s * a + t * b == g2


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=3))
def test_squarefree_reconstructs(factors):
    p = Poly.const(QQ, 2)
    for r, m in factors:
        p = p * Poly(QQ, (QQ(-r), QQ(1))) ** m
    prod = Poly.const(QQ, p.lc())
    for a, m in squarefree_decomposition(p):
        prod = prod * a**m
        assert poly_gcd(a, a.derivative()).is_constant()
    assert prod == p


def test_squarefree_frozen():
    x = Poly.x(QQ)
    p = (x + 1) ** 3 * (x - 2) ** 2 * x
    dec = squarefree_decomposition(p)
    assert [(a.format(), m) for a, m in dec] == [("x", 1), ("x - 2", 2), ("x + 1", 3)]
    assert squarefree_part(p) == x * (x + 1)


def test_squarefree_char_p():
    F = GF(3)
    x = Poly.x(F)
    p = (x + 1) ** 2 * x
    prod = Poly.const(F, 1)
    for a, m in squarefree_decomposition(p):
        prod = prod * a**m
    assert prod == p


def ratfuncs():
    return st.tuples(qpolys, nonzero_qpolys).map(lambda t: RatFunc(*t))


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_ratfunc_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    if b:
        assert (a / b) * b == a
    assert sp.cancel(to_sympy_rat(a * b) - to_sympy_rat(a) * to_sympy_rat(b)) == 0


@given(ratfuncs(), st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)))
def test_substitute_mobius_matches_sympy(r, m):
    a, b, c, d = m
    if a * d - b * c == 0:
        return
    eta = Mobius(QQ, a, b, c, d)
    got = substitute_mobius(r, eta)
    ref = to_sympy_rat(r).subs(X, (a * X + b) / (c * X + d))
    assert sp.cancel(to_sympy_rat(got) - ref) == 0


def test_ratfunc_reduced_form():
    x = Poly.x(QQ)
    r = RatFunc(x * x - 1, 2 * x - 2)
    assert r.num == (x + 1) * QQ(mpq(1, 2))
    assert r.den == Poly.const(QQ, 1)
    with pytest.raises(DivisionByZero):
        RatFunc(x, Poly(QQ, ()))


def test_is_square():
    x = RatFunc.x(QQ)
    ok, s = is_square_ratfunc((x + 1) ** 2 * 4 / x**4)
    assert ok and s * s == (x + 1) ** 2 * 4 / x**4
    assert not is_square_ratfunc(x * x + x)[0]
    assert not is_square_ratfunc(RatFunc.const(QQ, 2))[0]


def test_roots():
    x = Poly.x(QQ)
    roots, rest = roots_in_field((x - 3) * (2 * x + 1) * (x * x + 1))
    assert roots == [mpq(-1, 2), mpq(3)]
    assert [p.format() for p in rest] == ["x^2 + 1"]
    F = GF(7)
    y = Poly.x(F)
    roots, rest = roots_in_field(y * y + 1)
    assert roots == [] and len(rest) == 1
    K = Cyclotomic(4)
    z = Poly.x(K)
    roots, rest = roots_in_field(z * z + 1)
    assert len(roots) == 2 and not rest


def test_format_factored():
    x = RatFunc.x(QQ)
    assert format_factored((x + 1) ** 2 / x) == "(x+1)^2/x"


def test_degree_cap():
    x = Poly.x(QQ)
    with pytest.raises(DegreeBudgetExceeded):
        x ** (DEGREE_CAP + 1)


def test_spec_examples():
    from jonquieres.poly import ratfunc_arith

    x = RatFunc.x(QQ)
    one = RatFunc.const(QQ, 1)
    assert ratfunc_arith(x / (x + 1), one / (x + 1), "add") == one
    px = Poly.x(QQ)
    assert RatFunc(px * px - 1, px - 1) == x + 1
    assert ((x + 1) / (1 - x)) * ((1 - x) / (x + 1)) == one
    assert substitute_mobius(x * x, Mobius(QQ, 2, 0, 0, 1)) == x * x * 4
    assert substitute_mobius((x + 1) / (1 - x), Mobius(QQ, -1, 0, 0, 1)) == (1 - x) / (1 + x)
    assert substitute_mobius(x, Mobius(QQ, 0, 1, 1, 0)) == one / x
    fmt = lambda p: [(a.format(), m) for a, m in squarefree_decomposition(p)]
    assert fmt(px**3 + px**2) == [("x + 1", 1), ("x", 2)]
    assert fmt(px**2 + 2 * px + 1) == [("x + 1", 2)]
    assert fmt(px**2 + 1) == [("x^2 + 1", 1)]
    assert is_square_ratfunc((x * x + 2 * x + 1) / (x * x)) == (True, (x + 1) / x)
    assert is_square_ratfunc(x) == (False, None)
    assert is_square_ratfunc(x * x * 4) == (True, x * 2)


@given(ratfuncs(), st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)))
def test_substitute_round_trip(r, m):
    a, b, c, d = m
    if a * d - b * c == 0:
        return
    eta = Mobius(QQ, a, b, c, d)
    back = substitute_mobius(substitute_mobius(r, eta), eta.inverse())
    assert back == r
    back._check()


@given(ratfuncs())
def test_square_of_random(r):
    if not r:
        return
    ok, s = is_square_ratfunc(r * r)
    assert ok and s * s == r * r
