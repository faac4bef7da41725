from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from logjet.directed import DirectedStructure, integrate_germ, is_regular_jet
from logjet.errors import ChartDomainError, DomainError, ShapeError
from logjet.jetcore import CurveJet, Jet1, PolynomialGerm, Reparam
from logjet.logcoords import LogChart, LogJetCoords, to_log_coords
from logjet.polynomial import z
from logjet.semple import (
    LiftedCurve,
    change_chart,
    chart_coords,
    check_lift_invariance,
    lift_curve,
    on_gamma,
    project,
    projectivized_lift,
)
from strategies import curves, reparams

PARABOLA = PolynomialGerm([[0, 1], [0, 0, 1]])
CUSP = PolynomialGerm([[0, 0, 1], [0, 0, 0, 1]])


def plain(f, k):
    return to_log_coords(f.jet(k) if isinstance(f, PolynomialGerm) else f, LogChart(f.n, 0))


def test_parabola_level_one():
    assert chart_coords(plain(PARABOLA, 1), 1).blocks == ((0,),)
    assert lift_curve(PARABOLA, 1, t=1).blocks == ((2,),)


def test_parabola_lift():
    p = lift_curve(PARABOLA, 2)
    assert p.base == (0, 0)
    assert p.blocks == ((0,), (2,))
    assert p.line == (1, 2)


@pytest.mark.parametrize("c", [0, 3, F(-1, 2)])
def test_lines_have_flat_lifts(c):
    line = PolynomialGerm([[1, 1], [2, c]])
    for t in (0, 1, F(5, 3)):
        p = lift_curve(line, 3, t)
        assert p.blocks == ((c,), (0,), (0,))


def test_lifts_against_symbolic_projectivization():
    f = PolynomialGerm([[0, 1], [0, 0, 1, 1]])
    assert lift_curve(f, 3).blocks == ((0,), (2,), (6,))
    assert lift_curve(f, 3, t=1).blocks == ((5,), (8,), (6,))
    g = PolynomialGerm([[0, 2, 1], [0, 1, 0, -1]])
    assert lift_curve(g, 3).blocks == ((F(1, 2),), (F(-1, 4),), (F(-3, 8),))


def test_unit_speed_chart_is_undistorted():
    Z = LogJetCoords(((1, 0, 0), (4, -2, 7), (0, 3, 1)), (0, 0, 0), LogChart(3, 0))
    p = chart_coords(Z, 1)
    assert p.blocks == ((4, 0), (-2, 3), (7, 1))


def test_outside_chart():
    Z = LogJetCoords(((0, 1), (1, 0)), (0, 0), LogChart(2, 0))
    with pytest.raises(ChartDomainError):
        chart_coords(Z, 1)
    with pytest.raises(DomainError):
        lift_curve(CUSP, 2)


def test_invariance_examples():
    f = PolynomialGerm([[0, 1, 2], [1, -1, 0, 3]])
    for k in range(1, 5):
        rep = check_lift_invariance(f, Reparam.identity(k))
        assert rep.ok and rep.scalar == 1
        rep = check_lift_invariance(f, Reparam.linear(2, k))
        assert rep.ok and rep.scalar == 2
    rep = check_lift_invariance(f, Reparam((0, 1, 5, -2)))
    assert rep.positions_equal and rep.scalar == 1


def test_project_examples():
    p = lift_curve(PARABOLA, 3)
    assert project(p, 0).blocks == () and project(p, 0).base == (0, 0)
    assert project(p, 3) is p
    assert project(p, 2) == lift_curve(PARABOLA, 2)
    with pytest.raises(ShapeError):
        project(p, 4)


def test_lifted_curve_family():
    fam = LiftedCurve(PARABOLA, 2)
    assert fam.at(0) == lift_curve(PARABOLA, 2)
    assert fam.at(3).blocks == ((6,), (2,))


def test_on_gamma_examples():
    assert not on_gamma(plain(PARABOLA, 3), 2)
    assert on_gamma(plain(CUSP, 4), 2, rho=1)
    line = PolynomialGerm([[0, 1], [0, 3]])
    assert not any(on_gamma(plain(line, 4), j) for j in (2, 3))


def test_regular_iff_some_chart_in_A():
    ds = DirectedStructure(2, (1,), {(2, 1): z(2)})
    rng = random.Random(2)
    for _ in range(30):
        first = rng.choice([0, 1, 2])
        f = integrate_germ(ds, [Jet1((0, first, rng.randint(-3, 3), 1))], [0, 1])
        Z = to_log_coords(f, LogChart(2, 0))
        try:
            chart_coords(Z, 1)
            in_chart = True
        except ChartDomainError:
            in_chart = False
        assert is_regular_jet(Z, ds) == in_chart


def _nondegenerate(f, chart, need):
    Z = to_log_coords(f, chart)
    return all(Z.entry(i, 1) != 0 for i in need)


@given(st.data())
def test_tower_compatibility(data):
    n, k = data.draw(st.integers(2, 3)), data.draw(st.integers(1, 5))
    chart = LogChart(n, data.draw(st.integers(0, n)))
    f = data.draw(curves(n, k, nonzero=chart.log_indices))
    assume(_nondegenerate(f, chart, [1]))
    top = lift_curve(f, k, chart=chart)
    for j in range(1, k + 1):
        assert project(top, j) == lift_curve(f.truncate(j), j, chart=chart)


@given(st.data())
def test_reparametrization_invariance(data):
    n, k = data.draw(st.integers(2, 3)), data.draw(st.integers(1, 5))
    chart = LogChart(n, data.draw(st.integers(0, n)))
    f = data.draw(curves(n, k, nonzero=chart.log_indices))
    assume(_nondegenerate(f, chart, [1]))
    phi = data.draw(reparams(k))
    rep = check_lift_invariance(f, phi, chart=chart)
    assert rep.positions_equal
    assert rep.scalar == phi.first and rep.line_residual == 0


@given(st.data())
def test_chart_overlap(data):
    n, k = data.draw(st.integers(2, 3)), data.draw(st.integers(1, 5))
    chart = LogChart(n, data.draw(st.integers(0, n)))
    f = data.draw(curves(n, k, nonzero=chart.log_indices))
    assume(_nondegenerate(f, chart, [1, 2]))
    Z = to_log_coords(f, chart)
    p1, p2 = chart_coords(Z, 1), chart_coords(Z, 2)
    q = change_chart(p1, 2)
    assert q == p2 and q.line == p2.line
    assert change_chart(p2, 1) == p1


@given(st.data())
def test_series_lift_agrees_with_charts(data):
    n, k = data.draw(st.integers(2, 3)), data.draw(st.integers(1, 5))
    f = data.draw(curves(n, k))
    Z = to_log_coords(f, LogChart(n, 0))
    assume(Z.entry(1, 1) != 0)
    p = chart_coords(Z, 1)
    levels = projectivized_lift(Z, k, 1)
    assert [tuple(lv.values[i] for i in p.others) for lv in levels] == list(p.blocks)


def test_saturated_branch_is_tagged():
    f = CurveJet([Jet1((1, 1, 2)), Jet1((2, 1, 0))])
    assert chart_coords(to_log_coords(f, LogChart(2, 2)), 1).branch == "a=r"
    assert chart_coords(to_log_coords(f, LogChart(2, 1)), 1).branch == "a<r"
