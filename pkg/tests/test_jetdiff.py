from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from logjet.errors import ConfigurationError, DomainError, ShapeError
from logjet.jetcore import CurveJet, Jet1, PolynomialGerm, Reparam
from logjet.jetdiff import (
    check_equivariance,
    d_operator,
    default_schedule,
    evaluate,
    normalized_derivative_check,
    theta_sequence,
    weighted_degree,
    wronskian,
    wronskian_dependence,
    wronskian_equivariance_check,
    wronskian_polynomial,
)
from logjet.logcoords import LogChart, to_log_coords
from logjet.polynomial import JetPolynomial, Z, z
from logjet.sampling import random_jet
from logjet.suites import random_homogeneous
from strategies import curves, jets, reparams

W2 = Z(2, 1) * Z(1, 2) - Z(1, 1) * Z(2, 2)


def test_weighted_degree_examples():
    assert weighted_degree(Z(1, 1)) == 1
    assert weighted_degree(W2) == 3
    assert weighted_degree(Z(1, 1) + Z(1, 2)) is None


def test_evaluate_examples():
    f = to_log_coords(PolynomialGerm([[0, 1], [0, 0, 1]]).jet(2), LogChart(2, 0))
    assert evaluate(Z(1, 1), f) == 1
    assert evaluate(-W2, f) == 2
    assert evaluate(JetPolynomial(), f) == 0


def test_equivariance_examples():
    assert check_equivariance(Z(1, 1), 1, trials=50).ok
    assert check_equivariance(W2, 3, trials=50).ok
    rep = check_equivariance(Z(1, 2), 2, trials=20)
    assert rep.failures > 0
    w = rep.witness
    germ = CurveJet([Jet1([_parse(x) for x in row]) for row in w["germ"]])
    phi = Reparam([_parse(x) for x in w["phi"]])
    # the witness reproduces: (f o phi)'' = f'' phi'^2 + f' phi''
    lhs = germ.reparametrize(phi).coords[0].derivs[2]
    assert lhs == _parse(w["lhs"])
    assert lhs != phi.first ** 2 * germ.coords[0].derivs[2]


def _parse(text):
    from logjet.scalars import parse_scalar

    return parse_scalar(text)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_symbolic_wronskians_are_invariant(r):
    W = wronskian_polynomial(r)
    assert W.weighted_degree() == r * (r + 1) // 2
    for k in range(r, 6):
        assert check_equivariance(W, trials=40, seed=k, k=k).ok


def test_wronskian_values():
    assert wronskian([[5]]) == 5
    assert wronskian([[1, 0], [2, 2]]) == 2
    # (t + t^2, t^2 - t^3, t + 2t^3), sympy determinant
    assert wronskian([[1, 2, 0], [0, 2, -6], [1, 0, 12]]) == 12


def test_wronskian_ratio():
    t = Jet1.variable(3)
    assert wronskian_equivariance_check([t + t * t], Reparam((0, 3, 1, 0)), 1) == 3
    gs = [t.truncate(3), (t * t).truncate(3)]
    assert wronskian_equivariance_check(gs, Reparam((0, 2, 5, 1)), 2) == 8
    gs = [t, t * t, t * t * t]
    assert wronskian_equivariance_check(gs, Reparam((0, 3, -1, 2)), 3) == 3 ** 6


def test_d_operator_examples():
    assert d_operator(Z(1, 1), Z(2, 1)) == Z(2, 1) * Z(1, 2) - Z(1, 1) * Z(2, 2)
    assert d_operator(W2, W2).is_zero()
    with pytest.raises(DomainError):
        d_operator(Z(1, 1), Z(1, 2))
    with pytest.raises(DomainError):
        d_operator(Z(1, 1) + Z(1, 2), Z(1, 1))


@given(st.integers(0, 10**6))
def test_d_operator_weight_law(seed):
    rng = random.Random(seed)
    m, n, k = rng.randint(1, 4), rng.randint(1, 3), rng.randint(1, 3)
    s, t = random_homogeneous(rng, m, n, k), random_homogeneous(rng, m, n, k)
    d = d_operator(s, t)
    assert d.is_zero() or d.weighted_degree() == 2 * m + 1


@given(st.integers(0, 10**6))
def test_d_operator_commutes_with_evaluation(seed):
    rng = random.Random(seed)
    n, k = rng.randint(1, 3), rng.randint(1, 3)
    m = rng.randint(1, 3)
    s, t = random_homogeneous(rng, m, n, k), random_homogeneous(rng, m, n, k)
    f = CurveJet([random_jet(rng, k + 1) for _ in range(n)])

    def along(v):
        d = f.coords[v[1] - 1].derivs
        return Jet1(d[v[2]: v[2] + 2])

    sv, tv = s.evaluate(along), t.evaluate(along)
    sv = sv if isinstance(sv, Jet1) else Jet1.constant(sv, 1)
    tv = tv if isinstance(tv, Jet1) else Jet1.constant(tv, 1)
    series = tv.derivs[0] * sv.derivs[1] - sv.derivs[0] * tv.derivs[1]
    point = to_log_coords(f, LogChart(n, 0))
    assert evaluate(d_operator(s, t), point) == series


def test_theta_sequence_schedule():
    k, m = 2, 3
    sched = default_schedule(k, m, 3)
    assert sched == [9, 30, 84, 216]
    seq = theta_sequence(W2, schedule=sched, k=k)
    assert [th.weighted_degree() for th in seq] == sched
    assert theta_sequence(W2, schedule=[9], k=2) == [W2 * Z(1, 1) ** 6]
    assert theta_sequence(W2, schedule=[3], k=2) == [W2]
    with pytest.raises(ConfigurationError):
        theta_sequence(W2, schedule=[9, 15], k=2)
    with pytest.raises(ConfigurationError):
        theta_sequence(W2, schedule=[2], k=2)


def test_normalized_derivative_examples():
    t = Jet1.variable(3)
    f = CurveJet([t, Jet1((1, 2, -1, 3))])
    rep = normalized_derivative_check(Z(2, 1) ** 2, f, 1, 1)
    assert rep.ok
    assert rep.lhs[1] == 2 * 2 * -1
    assert normalized_derivative_check(Z(2, 1) ** 2, f, 1, 0).residuals == (0,)
    with pytest.raises(DomainError):
        normalized_derivative_check(Z(2, 1), CurveJet([2 * t, t]), 1, 1)


@given(st.integers(0, 10**6))
def test_normalized_derivative_exact(seed):
    rng = random.Random(seed)
    n, k, l = rng.randint(2, 3), rng.randint(1, 3), rng.randint(0, 3)
    f = CurveJet([Jet1.variable(k + l)] + [random_jet(rng, k + l) for _ in range(n - 1)])
    N = random_homogeneous(rng, rng.randint(1, 3), n, k) + z(2)
    rep = normalized_derivative_check((N, rng.randint(0, 2)), f, k, l)
    assert rep.ok


def test_dependence_examples():
    one = Jet1((1, 0, 0, 0))
    t = Jet1((0, 1, 0, 0))
    res = wronskian_dependence([one, t, t * t])
    assert not res.dependent and res.minor_rows == (0, 1, 2) and res.minor_value == 2
    res = wronskian_dependence([Jet1((1, 1, 0)), Jet1((2, 2, 0))])
    assert res.dependent and res.coefficients == (1, F(-1, 2))
    assert not wronskian_dependence([Jet1((0, 3))]).dependent
    # 1 + t + t^2, 2 - t, 4 + t + 2t^2: sympy nullspace (-2, -1, 1)
    fam = [Jet1((1, 1, 2, 0)), Jet1((2, -1, 0, 0)), Jet1((4, 1, 4, 0))]
    assert wronskian_dependence(fam).coefficients == (1, F(1, 2), F(-1, 2))


def test_dependence_needs_enough_derivatives():
    with pytest.raises(ShapeError):
        wronskian_dependence([Jet1((1, 0)), Jet1((0, 1)), Jet1((1, 1))])


@given(st.lists(jets(5), min_size=1, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_dependence_soundness(family, mix):
    family = family + [sum((c * g for c, g in zip(mix, family)), Jet1.zero(5))]
    res = wronskian_dependence(family)
    assert res.dependent
    total = Jet1.zero(5)
    for c, g in zip(res.coefficients, family):
        total = total + c * g
    assert total == Jet1.zero(5)


@given(st.data())
def test_wronskian_polynomial_invariance_property(data):
    r = data.draw(st.integers(1, 3))
    k = data.draw(st.integers(r, 5))
    f = data.draw(curves(r, k))
    phi = data.draw(reparams(k))
    W = wronskian_polynomial(r)
    chart = LogChart(r, 0)
    before = evaluate(W, to_log_coords(f, chart))
    after = evaluate(W, to_log_coords(f.reparametrize(phi), chart))
    assert after == phi.first ** (r * (r + 1) // 2) * before
