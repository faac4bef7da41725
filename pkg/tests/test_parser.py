from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from logjet.errors import ParseError
from logjet.parser import analyze_expression, parse_expression
from logjet.polynomial import JetPolynomial, Z, z
from logjet.scalars import QQi


def test_single_variable():
    r = analyze_expression("Z[1,1]")
    assert r.polynomial == Z(1, 1)
    assert r.weight == 1
    assert not r.warnings


def test_wronskian_determinant():
    r = analyze_expression("det[Z[1,1], Z[2,1]; Z[1,2], Z[2,2]]")
    assert r.polynomial == Z(1, 1) * Z(2, 2) - Z(2, 1) * Z(1, 2)
    assert r.weight == 3


def test_non_homogeneous_warns():
    r = analyze_expression("Z[1,1] + Z[1,2]")
    assert r.weight is None
    assert r.warnings and "not weighted homogeneous" in r.warnings[0]


def test_numbers_powers_and_base_variables():
    p = parse_expression("-3/2*z[2]*Z[1,1]^2 + 0.5i*(Z[2,1] - 1)")
    expected = -JetPolynomial.constant(QQi(3, 0) / 2) * z(2) * Z(1, 1) ** 2 \
        + QQi(0, 1) / 2 * (Z(2, 1) - 1)
    assert p == expected


@pytest.mark.parametrize("text,pos", [
    ("Z[1,", 4),
    ("Z[1,1] + ", 9),
    ("Z[1,1] $ 2", 7),
    ("det[Z[1,1], Z[2,1]]", 0),
    ("Z[0,1]", 0),
])
def test_syntax_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse_expression(text)
    assert err.value.position == pos


terms = st.lists(
    st.tuples(st.integers(-4, 4), st.integers(0, 3), st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), max_size=3)),
    max_size=4,
)


@given(terms)
def test_round_trip(data):
    p = JetPolynomial()
    for c, im, vars_ in data:
        mono = JetPolynomial.constant(QQi(c, im))
        for i, j in vars_:
            mono = mono * Z(i, j)
        p = p + mono
    assert parse_expression(p.to_text()) == p
