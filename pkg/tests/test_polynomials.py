from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poisdirac.polynomials import Poly, PolyMap, compose, compose_map

X3 = ("x1", "x2", "x3")

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=3)


def poly_st(variables=X3, max_terms=4, max_power=3):
    n = len(variables)
    exponent = st.tuples(*([st.integers(0, max_power)] * n))
    return st.dictionaries(exponent, fractions, max_size=max_terms).map(lambda d: Poly.make(variables, d))


def test_partial_derivative_product():
    p = Poly.parse("x1^2*x2", X3)
    assert p.partial("x1") == Poly.parse("2*x1*x2", X3)


def test_partial_derivative_absent_variable():
    assert Poly.parse("x1^2", X3).partial("x3").is_zero()


def test_partial_unknown_variable_rejected():
    with pytest.raises(ValueError):
        Poly.parse("x1", X3).partial("z9")


def test_product_difference_of_squares():
    left = Poly.parse("x1+x2", X3) * Poly.parse("x1-x2", X3)
    assert left == Poly.parse("x1^2-x2^2", X3)


def test_evaluate_exactly():
    p = Poly.parse("x1^2+x2", ("x1", "x2"))
    assert p.evaluate((Fraction(3), Fraction(1, 2))) == Fraction(19, 2)


def test_jacobian_of_identity():
    m = PolyMap.identity(X3)
    point = (Fraction(1), Fraction(2), Fraction(3))
    assert m.jacobian_at(point) == m.jacobian_at(point).identity(3)


def test_jacobian_of_curve():
    m = PolyMap.parse(["t1^2", "0", "t1", "0"], ("t1",))
    jac = m.jacobian_at((Fraction(1),))
    assert [row[0] for row in jac.entries] == [2, 0, 1, 0]


def test_compose_identity():
    p = Poly.parse("x1^2", X3)
    assert compose(p, PolyMap.identity(X3)) == p


def test_compose_diagonal():
    p = Poly.parse("x1*x2", ("x1", "x2"))
    diag = PolyMap.parse(["t1", "t1"], ("t1",))
    assert compose(p, diag) == Poly.parse("t1^2", ("t1",))


def test_compose_constant():
    p = Poly.parse("5", ("x1",))
    m = PolyMap.parse(["t1^3"], ("t1",))
    assert compose(p, m) == Poly.parse("5", ("t1",))


def test_compose_arity_mismatch_rejected():
    from poisdirac.errors import SpaceMismatchError

    with pytest.raises(SpaceMismatchError):
        compose(Poly.parse("x1", ("x1",)), PolyMap.parse(["t1", "t1"], ("t1",)))


def test_parse_rejects_unknown_variable():
    with pytest.raises(ValueError):
        Poly.parse("x9", X3)


def test_parse_rejects_missing_star():
    with pytest.raises(ValueError):
        Poly.parse("2x1", X3)


@settings(max_examples=150)
@given(poly_st())
def test_print_parse_round_trip(p):
    assert Poly.parse(str(p), X3) == p


@settings(max_examples=150)
@given(poly_st(), st.tuples(fractions, fractions, fractions))
def test_eval_after_compose(p, point):
    inner = PolyMap.parse(["t1+t2", "t1*t2", "t2^2"], ("t1", "t2"))
    q = compose(p, inner)
    t = (point[0], point[1])
    assert q.evaluate(t) == p.evaluate(inner.evaluate(t))


@settings(max_examples=150)
@given(poly_st())
def test_mixed_partials_commute(p):
    assert p.partial("x1").partial("x2") == p.partial("x2").partial("x1")


@settings(max_examples=60)
@given(st.data())
def test_chain_rule_at_points(data):
    comps = [data.draw(poly_st(("t1", "t2"), max_terms=3, max_power=2)) for _ in range(2)]
    inner = PolyMap(("t1", "t2"), tuple(comps))
    outer = PolyMap(("x1", "x2"), tuple(
        data.draw(poly_st(("x1", "x2"), max_terms=3, max_power=2)) for _ in range(2)
    ))
    point = (data.draw(fractions), data.draw(fractions))
    composed = compose_map(outer, inner)
    left = composed.jacobian_at(point)
    right = outer.jacobian_at(inner.evaluate(point)) @ inner.jacobian_at(point)
    assert left == right
