from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from logjet.scalars import QQi, format_scalar, inverse, is_exact, make_context, parse_scalar, to_bigfloat
from strategies import gaussian


def test_gaussian_arithmetic():
    a = QQi(1, 2)
    b = QQi(Fraction(1, 2), -1)
    assert a * b == QQi(Fraction(5, 2), 0)
    assert a / a == 1
    assert (a + b) - b == a
    assert QQi(0, 1) ** 2 == -1
    assert a ** -1 * a == 1


def test_int_and_fraction_compare_with_qqi():
    assert QQi(3, 0) == 3
    assert QQi(Fraction(1, 2)) == Fraction(1, 2)
    assert hash(QQi(3, 0)) == hash(3)


def test_inverse_of_int_is_exact():
    assert inverse(4) == Fraction(1, 4)
    with pytest.raises(ZeroDivisionError):
        inverse(0)


@pytest.mark.parametrize("text,value", [
    ("3", 3),
    ("-3/2", Fraction(-3, 2)),
    ("0.25", Fraction(1, 4)),
    ("1/2+3i", QQi(Fraction(1, 2), 3)),
    ("-i", QQi(0, -1)),
    ("2i", QQi(0, 2)),
    ("1.5-0.5i", QQi(Fraction(3, 2), Fraction(-1, 2))),
])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("1+")


@given(gaussian())
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


def test_bigfloat_conversion_keeps_precision():
    ctx = make_context(256)
    v = to_bigfloat(QQi(Fraction(1, 3), 1), ctx)
    assert not is_exact(v)
    assert abs(v * 3 - ctx.mpc(1, 3)) < ctx.mpf(2) ** -250
