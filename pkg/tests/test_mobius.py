import pytest
from hypothesis import given, strategies as st

from jonquieres import GF, INF, QQ, Cyclotomic, Mobius, normalizing_coordinate
from jonquieres.errors import DivisionByZero, UnresolvedFixedPoints
from jonquieres.fields import root_of_unity

entries = st.tuples(*[st.integers(-4, 4)] * 4).filter(lambda t: t[0] * t[3] - t[1] * t[2] != 0)


def test_normalization_and_singular():
    assert Mobius(QQ, 2, 4, 0, 2) == Mobius(QQ, 1, 2, 0, 1)
    with pytest.raises(DivisionByZero):
        Mobius(QQ, 1, 2, 2, 4)


@given(entries, entries, entries)
def test_group_laws(a, b, c):
    f, g, h = (Mobius(QQ, *t) for t in (a, b, c))
    assert (f @ g) @ h == f @ (g @ h)
    assert (f @ f.inverse()).is_identity()
    assert f.power(3) == f @ f @ f
    assert f.power(-2) == f.inverse() @ f.inverse()


@given(entries, st.integers(-5, 5))
def test_action_matches_composition(t, v):
    f = Mobius(QQ, *t)
    g = Mobius(QQ, 1, 1, 0, 2)
    x = QQ(v)
    lhs = (f @ g)(x)
    gx = g(x)
    assert lhs == f(gx)


@pytest.mark.parametrize(
    "m,order",
    [
        ((2, 0, 0, 1), None),
        ((-1, 0, 0, 1), 2),
        ((0, 1, 1, 0), 2),
        ((1, 1, 0, 1), None),
        ((0, -1, 1, 1), 3),
        ((1, 0, 0, 1), 1),
    ],
)
def test_order(m, order):
    assert Mobius(QQ, *m).order() == order


def test_order_cyclotomic_and_prime_field():
    K = Cyclotomic(5)
    assert Mobius.scaling(K, root_of_unity(K, 5)).order() == 5
    assert Mobius.translation(GF(7), 1).order() == 7
    assert Mobius.scaling(GF(7), 3).order() == 6


def test_fixed_points_and_multipliers():
    eta = Mobius(QQ, 2, 0, 0, 1)
    assert eta.fixed_points() == [0, INF]
    assert eta.multiplier(QQ(0)) == 2
    assert eta.multiplier(INF) * eta.multiplier(QQ(0)) == 1
    assert Mobius(QQ, 1, 1, 0, 1).fixed_points() == [INF]
    with pytest.raises(UnresolvedFixedPoints) as exc:
        Mobius(QQ, 1, 1, -1, 1).fixed_points()
    assert exc.value.quadratic.deg == 2


@given(entries)
def test_normalizing_coordinate(t):
    eta = Mobius(QQ, *t)
    try:
        kind, phi, data = normalizing_coordinate(eta)
    except UnresolvedFixedPoints:
        return
    if kind == "finite":
        assert eta.power(data).is_identity()
        return
    conj = phi @ eta @ phi.inverse()
    if kind == "multiplicative":
        assert conj == Mobius.scaling(QQ, data)
        assert data not in (0, 1, -1)
    else:
        assert conj == Mobius.translation(QQ, 1)
        assert eta.order() is None


def test_normalizing_examples():
    kind, phi, alpha = normalizing_coordinate(Mobius(QQ, 3, 1, 1, 3))
    assert kind == "multiplicative" and phi(QQ(1)) == 0 and phi(QQ(-1)) is INF
    assert alpha in (QQ(2), QQ(1) / 2)
    kind, phi, _ = normalizing_coordinate(Mobius(QQ, 2, 1, -1, 4))
    assert kind == "parabolic" and phi(QQ(1)) is INF


def test_format():
    assert Mobius(QQ, 2, 1, 0, 1).format() == "2*x + 1"
    assert str(INF) == "oo"
