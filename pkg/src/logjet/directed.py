"""Directed jets: curves tangent to a subbundle ``V`` given by linear equations.

``V`` is cut out by ``xi_i = sum_{m in A} a_im(x) xi_m`` for ``i in B``, where
``xi`` are the components of a (logarithmic) tangent vector.  A germ is
tangent to ``V`` iff ``w_i' = sum a_im(f) w_m'`` for all ``i in B``, with
``w_i = log f_i`` on logarithmic coordinates and ``w_i = f_i`` otherwise.

Differentiating that relation ``h - 1`` times gives the constraint
polynomials ``Q_h^i`` in base variables ``z`` and jet variables ``Z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import ShapeError
from .jetcore import CurveJet, Jet1, jet_from_log
from .logcoords import LogChart, LogJetCoords, hat_from_log, to_log_coords
from .polynomial import JetPolynomial
from .scalars import magnitude

__all__ = [
    "DirectedStructure",
    "ConstraintSet",
    "ResidualReport",
    "constraint_polynomials",
    "log_constraint_polynomials",
    "reduce_constraints",
    "is_directed_jet",
    "integrate_germ",
    "integrate_log_coords",
    "is_regular_jet",
    "pulled_back_constraint_value",
]


@dataclass(frozen=True)
class DirectedStructure:
    """Coefficients ``a[(i, m)]`` (i in B, m in A) as polynomials in ``z``.

    Missing pairs mean ``a_im = 0``.  Labels are 1-based.
    """

    n: int
    A: tuple
    a: Mapping = field(default_factory=dict)

    def __post_init__(self):
        A = tuple(sorted(self.A))
        if len(set(A)) != len(A) or any(not 1 <= m <= self.n for m in A):
            raise ShapeError("A must list distinct labels in 1..n")
        coeffs = {}
        for (i, m), p in dict(self.a).items():
            if i in A or m not in A or not 1 <= i <= self.n:
                raise ShapeError(f"coefficient a_{i}{m} must have i in B and m in A")
            p = JetPolynomial.coerce(p)
            if any(v[0] != "z" for v in p.variables()):
                raise ShapeError("coefficients may only involve base variables z[i]")
            if not p.is_zero():
                coeffs[(i, m)] = p
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "a", coeffs)

    @property
    def B(self) -> tuple:
        return tuple(i for i in range(1, self.n + 1) if i not in self.A)

    @property
    def r(self) -> int:
        return len(self.A)

    def coefficient(self, i: int, m: int) -> JetPolynomial:
        return self.a.get((i, m), JetPolynomial())

    def __hash__(self):
        return hash((self.n, self.A, frozenset(self.a.items())))


@dataclass(frozen=True)
class ConstraintSet:
    """``polys[(h, i)]`` for ``h = 1..k`` and ``i in B``."""

    polys: Mapping
    k: int
    structure: DirectedStructure
    log_indices: tuple = ()
    reduced: bool = False

    def __getitem__(self, key) -> JetPolynomial:
        return self.polys[key]


def _first_order(ds: DirectedStructure, i: int) -> JetPolynomial:
    total = JetPolynomial()
    for m in ds.A:
        total = total + ds.coefficient(i, m) * JetPolynomial.var(("Z", m, 1))
    return total


def _differentiate(ds: DirectedStructure, k: int, log_indices: tuple) -> dict:
    polys = {}
    for i in ds.B:
        q = _first_order(ds, i)
        polys[(1, i)] = q
        for h in range(2, k + 1):
            q = q.total_derivative(log_indices)
            polys[(h, i)] = q
    return polys


def constraint_polynomials(ds: DirectedStructure, k: int) -> ConstraintSet:
    """``P_h^i`` for the holomorphic case: ``Z^i_h = P_h^i`` on tangent jets.

    The polynomials are reported as produced by formal differentiation; jet
    variables of B-coordinates of order ``< h`` may appear
    (see :func:`reduce_constraints`).
    """
    return ConstraintSet(_differentiate(ds, k, ()), k, ds, ())


def log_constraint_polynomials(ds: DirectedStructure, chart: LogChart, k: int) -> ConstraintSet:
    """``Q_h^i`` for the logarithmic case.

    Differentiating a coefficient along the curve uses ``z_mu Z^mu_1`` in place
    of ``Z^mu_1`` for logarithmic ``mu``, so no division by ``z_mu`` occurs.
    """
    if chart.n != ds.n:
        raise ShapeError("chart and structure dimensions differ")
    return ConstraintSet(_differentiate(ds, k, chart.log_indices), k, ds, chart.log_indices)


def reduce_constraints(cs: ConstraintSet) -> ConstraintSet:
    """Eliminate every B-variable, lowest order first.

    The result expresses ``Z^i_h`` (i in B) through ``z`` and A-variables only.
    """
    B = cs.structure.B
    done: dict = {}
    for h in range(1, cs.k + 1):
        for i in B:
            mapping = {("Z", b, j): done[(j, b)] for (j, b) in done}
            done[(h, i)] = cs.polys[(h, i)].substitute(mapping)
    return ConstraintSet(done, cs.k, cs.structure, cs.log_indices, reduced=True)


@dataclass(frozen=True)
class ResidualReport:
    residuals: dict
    max_residual: float

    @property
    def ok(self) -> bool:
        return all(r == 0 for r in self.residuals.values())

    def violations(self) -> list:
        return sorted(key for key, r in self.residuals.items() if r != 0)


def is_directed_jet(Z: LogJetCoords, cs: ConstraintSet, tol: float = 0.0) -> ResidualReport:
    """Residuals ``Z^i_h - Q_h^i(z, Z)`` for every constraint."""
    if Z.order < cs.k:
        raise ShapeError(f"jet of order {Z.order} cannot be tested against order {cs.k}")
    vals = Z.variables()
    res = {}
    worst = 0.0
    for (h, i), q in sorted(cs.polys.items()):
        r = Z.entry(i, h) - q.evaluate(vals)
        size = magnitude(r)
        if size <= tol and size != 0:
            r = 0
        res[(h, i)] = r
        worst = max(worst, size)
    return ResidualReport(res, worst)


def integrate_log_coords(ds: DirectedStructure, free: Mapping | Sequence, base: Sequence,
                         chart: LogChart | None = None) -> LogJetCoords:
    """Solve for the B-rows of a tangent jet given the A-rows and the base point.

    ``free`` gives, for each ``m in A`` (in order, or as a mapping), the
    sequence ``(Z^m_1, ..., Z^m_k)``.  The system is triangular in ``h``.
    """
    chart = chart or LogChart(ds.n, 0)
    rows_in = dict(free) if isinstance(free, Mapping) else dict(zip(ds.A, free))
    if set(rows_in) != set(ds.A):
        raise ShapeError("free data must cover exactly the indices in A")
    k = len(next(iter(rows_in.values()))) if rows_in else 0
    cs = log_constraint_polynomials(ds, chart, k)
    vals = {("z", i, 0): base[i - 1] for i in range(1, ds.n + 1)}
    for m, row in rows_in.items():
        if len(row) != k:
            raise ShapeError("free rows must share one order")
        for j, x in enumerate(row, start=1):
            vals[("Z", m, j)] = x
    for h in range(1, k + 1):
        for i in ds.B:
            vals[("Z", i, h)] = cs.polys[(h, i)].evaluate(vals)
    Z = tuple(tuple(vals[("Z", i, j)] for j in range(1, k + 1)) for i in range(1, ds.n + 1))
    return LogJetCoords(Z, tuple(base), chart)


def integrate_germ(ds: DirectedStructure, free: Sequence[Jet1], basepoint,
                   chart: LogChart | None = None) -> CurveJet:
    """k-jet of the germ tangent to ``V`` with prescribed A-components.

    ``free`` lists the jets of ``f_m`` for ``m in A`` (their values are the
    A-part of the base point); ``basepoint`` supplies ``f_i(0)`` for ``i in B``,
    either as a mapping or as a full length-n sequence (A entries ignored).
    """
    chart = chart or LogChart(ds.n, 0)
    if len(free) != ds.r:
        raise ShapeError(f"expected {ds.r} free jets, got {len(free)}")
    if isinstance(basepoint, Mapping):
        bmap = dict(basepoint)
    elif len(basepoint) == ds.n:
        bmap = {i: basepoint[i - 1] for i in ds.B}
    else:
        bmap = dict(zip(ds.B, basepoint))
    base = [None] * ds.n
    rows = {}
    for m, jet in zip(ds.A, free):
        base[m - 1] = jet.derivs[0]
        partial = CurveJet([jet])
        sub = LogChart(1, 1 if chart.is_log(m) else 0)
        rows[m] = to_log_coords(partial, sub).Z[0]
    for i in ds.B:
        base[i - 1] = bmap[i]
    Z = integrate_log_coords(ds, rows, base, chart)
    return hat_from_log(Z)


def is_regular_jet(Z: LogJetCoords, ds: DirectedStructure) -> bool:
    """Regular iff some first-order A-coordinate is nonzero."""
    return any(Z.entry(m, 1) != 0 for m in ds.A)


def pulled_back_constraint_value(ds: DirectedStructure, chart: LogChart, h: int, i: int,
                                 base: Sequence, W: Sequence[Sequence]):
    """``d^(h-1)/dt^(h-1) [sum_m a_im(Psi(w(t))) w_m'(t)]`` at 0, by jet arithmetic.

    ``Psi`` exponentiates the logarithmic coordinates: along a curve with
    ``w`` derivatives ``W[i-1] = (w_i', ..., w_i^(k))`` the logarithmic base
    coordinate is ``x_i exp(w_i(t) - w_i(0))``.  This is an independent route
    to the values of ``Q_h^i``.
    """
    order = h - 1
    x = {}
    for mu in range(1, ds.n + 1):
        derivs = tuple(W[mu - 1][: order])
        if chart.is_log(mu):
            x[("z", mu, 0)] = jet_from_log(base[mu - 1], derivs)
        else:
            x[("z", mu, 0)] = Jet1((base[mu - 1],) + derivs)
    total = Jet1.zero(order)
    for m in ds.A:
        coeff = ds.coefficient(i, m)
        if coeff.is_zero():
            continue
        a_jet = coeff.evaluate(lambda v: x[v])
        if not isinstance(a_jet, Jet1):
            a_jet = Jet1.constant(a_jet, order)
        wm = Jet1(tuple(W[m - 1][: h]))
        total = total + a_jet * wm
    return total.derivs[order]
