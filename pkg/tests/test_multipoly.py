import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(os.getcwd())

from core.errors import DivisionByZeroPoly
from core.exact_arith import QQ, DvrDescriptor, PrimeField
from core.multipoly import GREVLEX, LEX, RLEX, Poly, RatFunc, elimination, minors, squarefree

GENS = ("x", "y")

polys = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-5, 5), max_size=4).map(
    lambda d: Poly(GENS, {e: Fraction(c) for e, c in d.items()}, QQ))


def test_arithmetic(xy):
    x, y = xy
    assert (x + y) ** 2 == x ** 2 + 2 * x * y + y ** 2
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    assert x - x == Poly.zero(GENS, QQ)
    assert (3 * x).constant_value() == 0
    assert (x * y + 2).constant_value() == 2


def test_printing(xy):
    x, y = xy
    assert str((x + y) ** 2) == "x^2 + 2*x*y + y^2"
    assert str(x - Fraction(1, 2)) == "x - 1/2"
    assert str(-x ** 3 + y) == "-x^3 + y"
    assert str(Poly.zero(GENS, QQ)) == "0"


def test_monomial_orders(xy):
    x, y = xy
    f = x * y ** 2 + x ** 3
    assert f.leading_monomial(GREVLEX) == (3, 0)
    assert f.leading_monomial(LEX) == (3, 0)
    assert f.leading_monomial(RLEX) == (1, 2)
    g = x ** 2 + y ** 3
    assert g.leading_monomial(elimination(1)) == (2, 0)
    assert g.leading_monomial(GREVLEX) == (0, 3)


def test_diff_and_evaluate(xy):
    x, y = xy
    f = x ** 2 * y + 3 * y
    assert f.diff("x") == 2 * x * y
    assert f.diff("y") == x ** 2 + 3
    assert f.evaluate({"x": Fraction(2), "y": Fraction(3)}) == 21
    assert f.evaluate([Fraction(1), Fraction(-1)]) == -4


def test_substitute(xy):
    x, y = xy
    f = x ** 2 + y
    assert f.substitute({"x": y + 1}) == y ** 2 + 3 * y + 1
    g = f.substitute({"x": RatFunc(Poly.constant(1, GENS, QQ), y)})
    assert isinstance(g, RatFunc)
    assert g == RatFunc(1 + y ** 3, y ** 2)


def test_change_of_ring(xy):
    x, y = xy
    f = x * y
    g = f.with_gens(("y", "z", "x"))
    assert g.gens == ("y", "z", "x")
    assert g.terms == {(1, 0, 1): Fraction(1)}
    assert f.rename({"x": "a", "y": "b"}).gens == ("a", "b")
    with pytest.raises(ValueError):
        f.with_gens(("x",))


def test_mixed_rings_are_rejected(xy):
    x, _ = xy
    other = Poly.gen("x", ("x", "z"), QQ)
    with pytest.raises(ValueError):
        x + other
    with pytest.raises(TypeError):
        x + Poly.gen("x", GENS, PrimeField(5))


def test_ratfunc_cancellation(xy):
    x, y = xy
    r = RatFunc(x ** 2 - y ** 2, x - y)
    assert r.is_polynomial()
    assert r.as_poly() == x + y
    assert RatFunc(2 * x, 4 * y).den == y
    with pytest.raises(DivisionByZeroPoly):
        RatFunc(x, Poly.zero(GENS, QQ))


def test_ratfunc_over_prime_field():
    F = PrimeField(5)
    x, y = Poly.generators(GENS, F)
    r = RatFunc(x ** 2 + 4 * y ** 2, x + y)
    # x^2 - y^2 = (x + y)(x - y) in characteristic 5
    assert r.as_poly() == x - y


def test_ratfunc_over_a_dvr():
    d = DvrDescriptor.integers(5)
    x, y = Poly.generators(GENS, d.ring)
    r = RatFunc(x * y, x)
    assert r.is_polynomial()
    assert not RatFunc(x, Poly.constant(5, GENS, d.ring)).is_polynomial()


def test_ratfunc_calculus(xy):
    x, y = xy
    r = RatFunc(Poly.constant(1, GENS, QQ), 1 + x)
    assert r.diff("x") == RatFunc(Poly.constant(-1, GENS, QQ), (1 + x) ** 2)
    assert r.evaluate({"x": Fraction(1), "y": Fraction(0)}) == Fraction(1, 2)
    with pytest.raises(DivisionByZeroPoly):
        r.evaluate({"x": Fraction(-1), "y": Fraction(0)})
    assert str(r) == "(1)/(x + 1)"


@settings(max_examples=50, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(f, g, h):
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f + g) - g == f
    assert (f * g).diff("x") == f.diff("x") * g + f * g.diff("x")


def test_minors(xy):
    x, y = xy
    m = [[x, y, Poly.constant(1, GENS, QQ)], [y, x, x * y]]
    assert minors(m, 2) == [x ** 2 - y ** 2, x ** 2 * y - y, x * y ** 2 - x]
    assert minors(m, 1)[:3] == [x, y, Poly.constant(1, GENS, QQ)]
    F5 = PrimeField(5)
    z = Poly.generators(GENS, F5)
    assert minors([[z[0], z[1]], [z[1], z[0]]], 2) == [z[0] ** 2 - z[1] ** 2]


def test_squarefree(xy):
    x, y = xy
    assert squarefree(y ** 2 - x ** 3 - x)
    assert squarefree(Poly.constant(3, GENS, QQ))
    assert not squarefree((x + y) ** 3)
    assert not squarefree(x ** 2 * (y - 1))
    assert not squarefree(Poly.zero(GENS, QQ))
    a, b = Poly.generators(GENS, PrimeField(5))
    # x^5 has zero derivative over F_5
    assert not squarefree(a ** 5 + b ** 5)
    assert squarefree(b ** 2 - a ** 3 - a ** 2)
    d = DvrDescriptor.integers(5)
    assert not squarefree(Poly.generators(GENS, d.ring)[0])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
