from __future__ import annotations

import random
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from logjet.errors import DomainError
from logjet.jetcore import CurveJet, Jet1, compose_derivatives
from logjet.linalg import nullspace
from logjet.logcoords import (
    LogChart,
    LogJetCoords,
    dlog_monomial,
    dlog_theta_jet,
    g_polynomials,
    hat_from_log,
    log_from_hat,
    reparametrize,
    shift_trivialization,
    to_log_coords,
)
from logjet.polynomial import JetPolynomial
from strategies import curves, reparams


def W(j):
    return JetPolynomial.var(("Z", 1, j))


def test_to_log_coords_examples():
    Z = to_log_coords(CurveJet([Jet1((1, 1, 1, 1))]), LogChart(1, 1))
    assert Z.Z == ((1, 0, 0),) and Z.base == (1,)
    Z = to_log_coords(CurveJet([Jet1((1, 1, 0, 0)), Jet1((0, 1, 0, 0))]), LogChart(2, 1))
    assert Z.Z == ((1, -1, 2), (1, 0, 0))
    f = CurveJet([Jet1((3, 1, 4)), Jet1((0, 5, 9))])
    assert to_log_coords(f, LogChart(2, 0)).Z == ((1, 4), (5, 9))


def test_germ_touching_divisor_names_coordinate():
    with pytest.raises(DomainError, match="z_2"):
        to_log_coords(CurveJet([Jet1((1, 1)), Jet1((0, 1))]), LogChart(2, 2))


def test_g_polynomials_small():
    g1, g2, g3 = g_polynomials(3)
    assert g1.is_zero()
    assert g2 == W(1) ** 2
    assert g3 == 3 * W(1) * W(2) + W(1) ** 3
    assert [g.to_text("order") for g in (g1, g2, g3)] == ["0", "Z_1^2", "3*Z_1*Z_2+Z_1^3"]


def test_g_polynomials_against_symbolic_oracle():
    # f = exp(w): f^(j)/f - w^(j), expanded by sympy
    Z1, Z2, Z3, Z4, Z5 = (W(j) for j in range(1, 6))
    g = g_polynomials(6)
    assert g[3] == Z1**4 + 6*Z1**2*Z2 + 4*Z1*Z3 + 3*Z2**2
    assert g[4] == Z1**5 + 10*Z1**3*Z2 + 10*Z1**2*Z3 + 15*Z1*Z2**2 + 5*Z1*Z4 + 10*Z2*Z3
    assert g[5] == (Z1**6 + 15*Z1**4*Z2 + 20*Z1**3*Z3 + 45*Z1**2*Z2**2 + 15*Z1**2*Z4
                    + 60*Z1*Z2*Z3 + 6*Z1*Z5 + 15*Z2**3 + 15*Z2*Z4 + 10*Z3**2)


def test_g_structure():
    for j, g in enumerate(g_polynomials(6), start=1):
        assert g.constant_term() == 0
        assert all(v[2] < j for v in g.variables())
        assert g.is_homogeneous(j)


def _partitions(m, largest):
    if m == 0:
        yield ()
        return
    for p in range(min(m, largest), 0, -1):
        for rest in _partitions(m - p, p):
            yield (p,) + rest


@pytest.mark.parametrize("j", [2, 3, 4, 5])
def test_g_recovered_by_numerical_fit(j):
    """Fit g_j over weight-j monomials in Z_1..Z_{j-1} from Faa di Bruno data."""
    monos = list(_partitions(j, j - 1))
    rng = random.Random(j)
    rows = []
    for _ in range(len(monos) + 3):
        w = Jet1([0] + [F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(j)])
        target = compose_derivatives([1] * (j + 1), w).derivs[j] - w.derivs[j]
        vals = []
        for m in monos:
            v = 1
            for p in m:
                v *= w.derivs[p]
            vals.append(v)
        rows.append(vals + [-target])
    kernel = nullspace(rows, len(monos) + 1)
    assert len(kernel) == 1
    coeffs = kernel[0]
    coeffs = [c / coeffs[-1] for c in coeffs[:-1]]
    fitted = JetPolynomial()
    for c, m in zip(coeffs, monos):
        term = JetPolynomial.constant(c)
        for p in m:
            term = term * W(p)
        fitted = fitted + term
    assert fitted == g_polynomials(j)[j - 1]


def test_hat_leading_term():
    Z = LogJetCoords(((F(1, 2), 3),), (5,), LogChart(1, 1))
    f = hat_from_log(Z)
    assert f.coords[0].derivs[1] == 5 * F(1, 2)


def test_hat_rejects_zero_log_base():
    with pytest.raises(DomainError):
        hat_from_log(LogJetCoords(((1,),), (0,), LogChart(1, 1)))


@given(st.data())
def test_round_trip(data):
    n = data.draw(st.integers(1, 4))
    k = data.draw(st.integers(1, 6))
    l = data.draw(st.integers(0, n))
    chart = LogChart(n, l)
    f = data.draw(curves(n, k, nonzero=chart.log_indices))
    Z = to_log_coords(f, chart)
    assert hat_from_log(Z) == f
    assert log_from_hat(f, chart) == Z


def test_dlog_theta_examples():
    assert dlog_theta_jet(Jet1((1, 1, 1, 1))) == (1, 0, 0)
    f = CurveJet([Jet1((1, 1, 0, 0)), Jet1((2, 1, 3, 0))])
    Z = to_log_coords(f, LogChart(2, 2))
    assert dlog_theta_jet(f.coords[0]) == (1, -1, 2)
    prod = f.coords[0] * f.coords[1]
    assert dlog_theta_jet(prod) == tuple(a + b for a, b in zip(Z.Z[0], Z.Z[1]))
    assert dlog_monomial(Z, (1, 1)) == dlog_theta_jet(prod)


def test_shift_examples():
    Z = LogJetCoords(((1, 2), (3, 4)), (2, 5), LogChart(2, 1))
    s = shift_trivialization(Z)
    assert s.Z == Z.Z and s.base == (1, 0)
    assert shift_trivialization(s) == s


@given(st.data())
def test_shift_commutes_with_reparametrization(data):
    n, k = data.draw(st.integers(1, 3)), data.draw(st.integers(1, 5))
    chart = LogChart(n, data.draw(st.integers(0, n)))
    f = data.draw(curves(n, k, nonzero=chart.log_indices))
    phi = data.draw(reparams(k))
    Z = to_log_coords(f, chart)
    direct = to_log_coords(f.reparametrize(phi), chart)
    assert reparametrize(Z, phi) == direct
    assert shift_trivialization(direct) == reparametrize(shift_trivialization(Z), phi)


def test_shift_preserves_singular_jets():
    for first in product([0, 1], repeat=2):
        Z = LogJetCoords(((first[0], 1), (first[1], 2)), (3, 7), LogChart(2, 2))
        s = shift_trivialization(Z)
        assert all(s.entry(i, 1) == 0 for i in (1, 2)) == all(Z.entry(i, 1) == 0 for i in (1, 2))
