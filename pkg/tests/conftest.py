import random

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings, strategies as st

from jonquieres import QQ, JonqMap, Mobius, Poly, RatFunc

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

X, Y = sp.symbols("x y")


def small_poly(rng, K=QQ, deg=2, height=3):
    while True:
        p = Poly(K, [K(rng.randint(-height, height)) for _ in range(rng.randint(0, deg) + 1)])
        if p:
            return p


def random_mobius(rng, K=QQ, height=3):
    while True:
        a, b, c, d = (rng.randint(-height, height) for _ in range(4))
        if a * d - b * c:
            return Mobius(K, a, b, c, d)


def random_jonq(rng, K=QQ, deg=2, fiberwise=False):
    eta = Mobius.identity(K) if fiberwise else random_mobius(rng, K)
    while True:
        A, B, C, D = (small_poly(rng, K, deg) if rng.random() < 0.8 else Poly(K, ()) for _ in range(4))
        if A * D - B * C:
            return JonqMap(eta, ((A, B), (C, D)))


@pytest.fixture
def rng():
    return random.Random(20240611)


seeds = st.integers(min_value=0, max_value=10**6)


# ---------------------------------------------------------------- sympy oracles


def to_sympy_poly(p: Poly):
    return sum(sp.Rational(int(c.numerator), int(c.denominator)) * X**i for i, c in enumerate(p.c))


def to_sympy_rat(r: RatFunc):
    return to_sympy_poly(r.num) / to_sympy_poly(r.den)


def jonq_to_sympy(f: JonqMap):
    """(eta(x), fiber(y)) as sympy expressions over Q."""
    A, B, C, D = (to_sympy_poly(p) for p in f.entries())
    return to_sympy_rat(f.base.as_ratfunc()), (A * Y + B) / (C * Y + D)


def sympy_compose(f, g):
    """Components of f o g computed by substitution."""
    f1, f2 = f
    g1, g2 = g
    return sp.cancel(f1.subs(X, g1)), sp.cancel(f2.subs({X: g1, Y: g2}, simultaneous=True))


def sympy_equal(u, v):
    return all(sp.cancel(a - b) == 0 for a, b in zip(u, v))


# ---------------------------------------------------------------- commuting-pair corpus

PAIR_CORPUS = [
    ("(2*x, 3*y)", "(5*x, 7*y)", "Q", "EllipticPair"),
    ("(x, 2*y)", "(x, 3*y)", "Q", "EllipticPair"),
    ("(2*x, y + 1)", "(3*x, y + 5)", "Q", "EllipticPair"),
    ("(x + 1, y)", "(x, y + 1)", "Q", "EllipticPair"),
    ("(x, x*y)", "(x, (x^2 + 1)*y)", "Q", "TorusPair"),
    ("(x, x*y)", "(x, 2*y)", "Q", "TorusPair"),
    ("(x, (x*y + x^2 + x)/(y + x))", "(x, (y + x^2 + x)/(y + 1))", "Q", "TorusPair"),
    ("(-x, x*y)", "(x, 2*y)", "Q", "TorusPair"),
    ("(3*x, x^2*y)", "(-x, 2*y)", "Q", "BaseWanderingPlusElliptic(MultiplicativeForm)"),
    ("(2*x, (x^2 + 1)*y)", "(-x, 3*y)", "Q", "BaseWanderingPlusElliptic(MultiplicativeForm)"),
    ("(2*x, (x^3 + 1)*y)", "(zeta_3*x, 2*y)", "Qzeta:3", "BaseWanderingPlusElliptic(MultiplicativeForm)"),
    ("(2*x, y + 1/(x^2 - 1))", "(-x, y + 1)", "Q", "BaseWanderingPlusElliptic(AdditiveForm)"),
]
