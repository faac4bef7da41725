from __future__ import annotations

from hypothesis import given, strategies as st

from logjet.jetcore import Jet1
from logjet.polynomial import JetPolynomial, Z, det, z
from logjet.scalars import QQi


def test_weights_and_degree():
    w = Z(2, 1) * Z(1, 2) - Z(1, 1) * Z(2, 2)
    assert w.weighted_degree() == 3
    assert (Z(1, 1) + Z(1, 2)).weighted_degree() is None
    assert (Z(1, 1) * z(2)).weighted_degree() == 1
    assert Z(1, 1).is_homogeneous(1)
    assert JetPolynomial().is_homogeneous(7)


def test_total_derivative_rules():
    assert Z(1, 1).total_derivative() == Z(1, 2)
    assert z(1).total_derivative() == Z(1, 1)
    assert z(1).total_derivative(log_coords=[1]) == z(1) * Z(1, 1)
    assert (Z(1, 1) ** 2).total_derivative() == 2 * Z(1, 1) * Z(1, 2)


def test_det_expansion():
    d = det([[Z(1, 1), Z(2, 1)], [Z(1, 2), Z(2, 2)]])
    assert d == Z(1, 1) * Z(2, 2) - Z(1, 2) * Z(2, 1)
    assert det([[1, 2], [3, 4]]) == -2


def test_evaluate_with_jets():
    p = Z(1, 1) * z(1)
    vals = {("Z", 1, 1): Jet1((2, 1)), ("z", 1, 0): Jet1((3, 0))}
    assert p.evaluate(vals) == Jet1((6, 3))


def test_complex_coefficients_print_parenthesized():
    p = QQi(1, 2) * Z(1, 1)
    assert p.to_text() == "(1+2i)*Z[1,1]"


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 2), st.integers(1, 3)), max_size=4))
def test_derivative_is_linear_and_leibniz(terms):
    p = JetPolynomial()
    for c, i, j in terms:
        p = p + c * Z(i, j)
    q = Z(1, 1) * z(2) + 3
    assert (p * q).total_derivative() == p.total_derivative() * q + p * q.total_derivative()
