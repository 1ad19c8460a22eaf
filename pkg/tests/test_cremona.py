import random

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from jonquieres import (
    GF,
    QQ,
    CremonaMap,
    GrowthType,
    HomPoly,
    JonqMap,
    Mobius,
    Poly,
    classify_growth,
    compose,
    degree_sequence,
    jonq_to_cremona,
    parse_map,
)
from jonquieres.cremona import degree_csv
from jonquieres.errors import DegreeBudgetExceeded, InconsistentDegrees, SequenceTooShort

from conftest import random_jonq, seeds

SX, SY, SZ = sp.symbols("X Y Z")
SIGMA = parse_map("[Y*Z : X*Z : X*Y]")
HENON = parse_map("[Y*Z : Y^2 - X*Z : Z^2]")
T = parse_map("[X*Z : X*Y : Z^2]")


def to_sympy(p: HomPoly):
    return sum(
        sp.Rational(int(c.numerator), int(c.denominator)) * SX**i * SY**j * SZ**k
        for (i, j, k), c in p.terms.items()
    )


def sympy_compose(f: CremonaMap, g: CremonaMap):
    """Independent oracle: substitute, cancel the gcd, compare projectively."""
    gs = [to_sympy(c) for c in g.comps]
    comps = [sp.expand(to_sympy(c).subs({SX: gs[0], SY: gs[1], SZ: gs[2]}, simultaneous=True)) for c in f.comps]
    g_all = sp.gcd(sp.gcd(comps[0], comps[1]), comps[2])
    return [sp.cancel(c / g_all) for c in comps]


def projectively_equal(u, v):
    ratios = set()
    for a, b in zip(u, v):
        if a == 0 or b == 0:
            if sp.expand(a) != 0 or sp.expand(b) != 0:
                return False
            continue
        ratios.add(sp.cancel(a / b))
    return len(ratios) == 1 and all(r.is_number for r in ratios)


def test_compose_spec_examples():
    assert compose(SIGMA, SIGMA) == CremonaMap.identity(QQ)
    assert compose(CremonaMap.identity(QQ), HENON) == HENON
    hh = compose(HENON, HENON)
    assert hh.deg == 4
    assert projectively_equal([to_sympy(c) for c in hh.comps], sympy_compose(HENON, HENON))


def test_degree_sequence_examples():
    assert degree_sequence(SIGMA, 4) == [1, 2, 1, 2, 1]
    assert degree_sequence(T, 5) == [1, 2, 3, 4, 5, 6]
    assert degree_sequence(HENON, 6) == [1, 2, 4, 8, 16, 32, 64]


def test_t_power_triple():
    # t^n = (x, x^n y) is [X Z^n : X^n Y : Z^(n+1)]
    for n in range(1, 6):
        want = parse_map(f"[X*Z^{n} : X^{n}*Y : Z^{n + 1}]")
        assert T.power(n) == want


@pytest.mark.parametrize(
    "seq,kind",
    [
        ([1, 2, 1, 2, 1, 2, 1, 2, 1], GrowthType.Elliptic),
        ([1, 2, 3, 4, 5, 6, 7, 8, 9], GrowthType.JonquieresTwist),
        ([1, 2, 4, 8, 16, 32, 64, 128, 256], GrowthType.Loxodromic),
        ([1, 3, 7, 13, 21, 31, 43, 57, 73, 91, 111, 133], GrowthType.HalphenTwist),
        ([1, 1, 1, 1, 1, 1, 1, 1], GrowthType.Elliptic),
        ([1, 5, 2, 9, 3, 1, 7, 4, 8, 2, 11], GrowthType.Undetermined),
    ],
)
def test_classify_growth(seq, kind):
    g = classify_growth(seq)
    assert g.kind == kind
    assert "window" in g.note


def test_classify_notes():
    assert classify_growth([1, 2, 4, 8, 16, 32, 64, 128, 256]).summary() == "Loxodromic (ratio 2)"
    assert classify_growth([1, 2, 3, 4, 5, 6, 7, 8, 9]).summary() == "JonquieresTwist (slope 1)"
    assert "no effective bound" in classify_growth([1, 3, 7, 13, 21, 31, 43, 57, 73, 91, 111, 133]).note
    assert classify_growth([1, 2, 4, 8, 16, 32, 64, 128], truncated=True).kind == GrowthType.Undetermined
    with pytest.raises(SequenceTooShort):
        classify_growth([1, 2, 3])


def test_truncation_is_in_band():
    seq = degree_sequence(HENON, 40, budget=300)
    assert seq.truncated
    assert seq == [1, 2, 4, 8, 16, 32, 64, 128, 256]
    assert classify_growth(seq).kind == GrowthType.Undetermined
    with pytest.raises(DegreeBudgetExceeded):
        T.compose(HENON.power(5)).compose(parse_map("[X^4096 : Y^4096 : Z^4096]"))


def test_jonq_to_cremona_examples():
    x = Poly.x(QQ)
    one, zero = Poly.const(QQ, 1), Poly(QQ, ())
    F = jonq_to_cremona(JonqMap.make(QQ, (2, 0, 0, 1), one, zero, zero, one))
    assert F == parse_map("[2*X : Y : Z]") and F.deg == 1
    assert jonq_to_cremona(JonqMap.make(QQ, (1, 0, 0, 1), x, zero, zero, one)) == T
    f = parse_map("(2*x, (3*y + x)/(y + 1))")
    F = jonq_to_cremona(f)
    assert F.deg == 2
    assert F == parse_map("[2*X*Y + 2*X*Z : 3*Y*Z + X*Z : Y*Z + Z^2]")


def test_normalization_invariants():
    F = CremonaMap([HomPoly.var(QQ, 0).scale(3) * HomPoly.var(QQ, 2), HomPoly.var(QQ, 1) * HomPoly.var(QQ, 2).scale(3), HomPoly.var(QQ, 2) ** 2], QQ)
    assert F == parse_map("[3*X : 3*Y : Z]")
    assert F.comps[0].leading_coeff() == 1
    with pytest.raises(InconsistentDegrees):
        CremonaMap([HomPoly.var(QQ, 0), HomPoly.var(QQ, 1) ** 2, HomPoly.var(QQ, 2)], QQ)


def test_degree_csv():
    assert degree_csv([1, 2, 1]) == "n,degree\n0,1\n1,2\n2,1\n"


def _random_hom(rng, field, d, n_terms):
    terms = {}
    for _ in range(n_terms):
        i = rng.randint(0, d)
        j = rng.randint(0, d - i)
        terms[(i, j, d - i - j)] = field(mpq(rng.randint(-50, 50), rng.randint(1, 4)) if field is QQ else rng.randint(0, 100))
    return HomPoly(field, terms, d)


@pytest.mark.parametrize("field", [QQ, GF(101)], ids=["Q", "F101"])
def test_kronecker_matches_naive(field):
    rng = random.Random(7)
    for _ in range(10):
        a = _random_hom(rng, field, rng.randint(5, 14), 40)
        b = _random_hom(rng, field, rng.randint(5, 14), 40)
        if not a or not b:
            continue
        naive = {}
        for ea, u in a.terms.items():
            for eb, v in b.terms.items():
                e = tuple(p + q for p, q in zip(ea, eb))
                naive[e] = naive.get(e, field.zero) + u * v
        naive = {e: c for e, c in naive.items() if c}
        assert (a * b).terms == naive


@settings(max_examples=25)
@given(seeds)
def test_compose_matches_sympy_oracle(seed):
    rng = random.Random(seed)
    f = jonq_to_cremona(random_jonq(rng, deg=1))
    g = jonq_to_cremona(random_jonq(rng, deg=1))
    fg = compose(f, g)
    assert fg.deg <= f.deg * g.deg
    assert projectively_equal([to_sympy(c) for c in fg.comps], sympy_compose(f, g))


@settings(max_examples=25)
@given(seeds)
def test_compose_associative(seed):
    rng = random.Random(seed)
    f, g, h = (jonq_to_cremona(random_jonq(rng, deg=1)) for _ in range(3))
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=30)
@given(seeds)
def test_homomorphism(seed):
    rng = random.Random(seed)
    f, g = random_jonq(rng), random_jonq(rng)
    assert jonq_to_cremona(f.compose(g)) == compose(jonq_to_cremona(f), jonq_to_cremona(g))
