"""Logarithmic jet coordinates on a normal-crossing chart.

On a chart with coordinates ``z_1..z_n`` whose boundary is ``z_i = 0`` for the
logarithmic indices, a k-jet of a germ ``f`` off the boundary is recorded as

* ``Z[i][j-1] = d^j log f_i (0)`` for logarithmic ``i``,
* ``Z[i][j-1] = d^j f_i (0)`` otherwise,

together with the base point ``f(0)``.  Writing ``w_i = log z_i`` for the
logarithmic coordinates (and ``w_i = z_i`` for the others), the rows of ``Z``
are just the derivative vectors of ``w o f``, which is why reparametrization
acts on them by plain jet composition.
"""

from __future__ import annotations

import threading
from math import comb
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, ShapeError
from .jetcore import CurveJet, Jet1, Reparam, jet_compose, jet_log
from .polynomial import JetPolynomial
from .scalars import inverse

__all__ = [
    "LogChart",
    "LogJetCoords",
    "to_log_coords",
    "g_polynomials",
    "hat_from_log",
    "log_from_hat",
    "dlog_theta_jet",
    "dlog_monomial",
    "shift_trivialization",
    "reparametrize",
]


@dataclass(frozen=True)
class LogChart:
    """Chart of dimension ``n`` with ``l`` logarithmic coordinates.

    By default the logarithmic coordinates are ``1..l``; ``log_indices`` allows
    any other choice of ``l`` labels (1-based) without reordering data.
    """

    n: int
    l: int = 0
    k: int | None = None
    log_indices: tuple = field(default=None)

    def __post_init__(self):
        if not 0 <= self.l <= self.n:
            raise ShapeError(f"need 0 <= l <= n, got l={self.l}, n={self.n}")
        idx = self.log_indices
        if idx is None:
            idx = tuple(range(1, self.l + 1))
        idx = tuple(sorted(idx))
        if len(idx) != self.l or len(set(idx)) != self.l:
            raise ShapeError("log_indices must list l distinct labels")
        if idx and (idx[0] < 1 or idx[-1] > self.n):
            raise ShapeError("log_indices out of range")
        object.__setattr__(self, "log_indices", idx)

    def is_log(self, i: int) -> bool:
        return i in self.log_indices

    @property
    def distinguished_point(self) -> tuple:
        """``P = (1, ..., 1, 0, ..., 0)``: 1 on log coordinates, 0 elsewhere."""
        return tuple(1 if self.is_log(i) else 0 for i in range(1, self.n + 1))


@dataclass(frozen=True)
class LogJetCoords:
    """Jet coordinates ``Z`` (n rows of k entries) plus the base point."""

    Z: tuple
    base: tuple
    chart: LogChart

    def __post_init__(self):
        Z = tuple(tuple(row) for row in self.Z)
        base = tuple(self.base)
        if len(Z) != self.chart.n or len(base) != self.chart.n:
            raise ShapeError("coordinate count does not match the chart")
        if len({len(r) for r in Z}) > 1:
            raise ShapeError("all rows of Z must have the same order")
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "base", base)

    @property
    def order(self) -> int:
        return len(self.Z[0])

    @property
    def n(self) -> int:
        return self.chart.n

    def entry(self, i: int, j: int):
        """``Z^i_j`` with 1-based ``i`` and ``j``."""
        return self.Z[i - 1][j - 1]

    def w_jets(self) -> list[Jet1]:
        """Derivative vectors of ``w o f - w(f(0))`` for every coordinate."""
        return [Jet1((0,) + row) for row in self.Z]

    def variables(self) -> dict:
        """Assignment of every jet and base variable, for polynomial evaluation."""
        vals = {}
        for i, row in enumerate(self.Z, start=1):
            vals[("z", i, 0)] = self.base[i - 1]
            for j, x in enumerate(row, start=1):
                vals[("Z", i, j)] = x
        return vals

    def truncate(self, order: int) -> "LogJetCoords":
        if order > self.order:
            raise ShapeError(f"cannot raise order {self.order} to {order}")
        return LogJetCoords(tuple(r[:order] for r in self.Z), self.base, self.chart)


def _check_order(f: CurveJet, chart: LogChart):
    if f.n != chart.n:
        raise ShapeError(f"germ has {f.n} coordinates, chart expects {chart.n}")
    if chart.k is not None and f.order != chart.k:
        raise ShapeError(f"germ has order {f.order}, chart expects {chart.k}")


def to_log_coords(f: CurveJet, chart: LogChart) -> LogJetCoords:
    _check_order(f, chart)
    rows = []
    for i, fi in enumerate(f.coords, start=1):
        if chart.is_log(i):
            if fi.derivs[0] == 0:
                raise DomainError(f"germ meets the boundary: coordinate z_{i} vanishes at 0")
            rows.append(jet_log(fi))
        else:
            rows.append(fi.derivs[1:])
    return LogJetCoords(tuple(rows), f.value(), chart)


_G_CACHE: dict[int, tuple] = {}
_G_LOCK = threading.Lock()


def _complete_bell(k: int) -> list[JetPolynomial]:
    """``d^j f / f`` as a polynomial in ``Z_m = d^m log f``, for j = 0..k."""
    Zs = [JetPolynomial.var(("Z", 1, m)) for m in range(1, k + 1)]
    # f' = f (log f)': Leibniz gives B_{j+1} = sum_s C(j,s) B_s Z_{j+1-s}
    B = [JetPolynomial.constant(1)]
    for j in range(k):
        acc = JetPolynomial()
        for s in range(j + 1):
            acc = acc + B[s] * Zs[j - s] * comb(j, s)
        B.append(acc)
    return B


def g_polynomials(k: int) -> tuple[JetPolynomial, ...]:
    """Universal polynomials ``g_1..g_k`` in the variables ``Z[1,m]``.

    They satisfy ``d^j f = f (Z_j + g_j(Z_1, ..., Z_{j-1}))`` with
    ``Z_m = d^m log f``.  Printed with ``to_text("order")`` they read
    ``g_3 = 3*Z_1*Z_2+Z_1^3``.  The tuple is computed once per order.
    """
    if k < 1:
        raise ShapeError("g_polynomials needs k >= 1")
    cached = _G_CACHE.get(k)
    if cached is not None:
        return cached
    with _G_LOCK:
        cached = _G_CACHE.get(k)
        if cached is None:
            B = _complete_bell(k)
            cached = tuple(B[j] - JetPolynomial.var(("Z", 1, j)) for j in range(1, k + 1))
            _G_CACHE[k] = cached
    return cached


def _g_values(g: JetPolynomial, row: Sequence):
    return g.evaluate(lambda v: row[v[2] - 1])


def hat_from_log(Z: LogJetCoords) -> CurveJet:
    """Raw derivative vectors from log coordinates: ``z_i (Z_j + g_j)``."""
    k = Z.order
    gs = g_polynomials(k) if k else ()
    coords = []
    for i, row in enumerate(Z.Z, start=1):
        z0 = Z.base[i - 1]
        if Z.chart.is_log(i):
            if z0 == 0:
                raise DomainError(f"log coordinate z_{i} has zero base value")
            coords.append(Jet1((z0,) + tuple(z0 * (row[j] + _g_values(gs[j], row)) for j in range(k))))
        else:
            coords.append(Jet1((z0,) + row))
    return CurveJet(coords)


def log_from_hat(f: CurveJet, chart: LogChart) -> LogJetCoords:
    """Inverse of :func:`hat_from_log`, solving the triangular system in ``j``."""
    _check_order(f, chart)
    k = f.order
    gs = g_polynomials(k) if k else ()
    rows = []
    for i, fi in enumerate(f.coords, start=1):
        z0 = fi.derivs[0]
        if not chart.is_log(i):
            rows.append(fi.derivs[1:])
            continue
        if z0 == 0:
            raise DomainError(f"log coordinate z_{i} has zero base value")
        inv = inverse(z0)
        row: list = []
        for j in range(k):
            # g_{j+1} only reads Z_1..Z_j, all known by now
            padded = row + [0] * (k - j)
            row.append(fi.derivs[j + 1] * inv - _g_values(gs[j], padded))
        rows.append(tuple(row))
    return LogJetCoords(tuple(rows), f.value(), chart)


def dlog_theta_jet(theta_along_f: Jet1) -> tuple:
    """``(d^1 log theta, ..., d^k log theta)`` along a germ off the divisor."""
    return jet_log(theta_along_f)


def dlog_monomial(Z: LogJetCoords, exponents: Sequence[int]) -> tuple:
    """``d^j log(prod z_i^e_i)`` along the jet, for j = 1..k.

    On log coordinates this is the linear form ``sum e_i Z^i_j``, so it stays
    polynomial even where the monomial vanishes.  A non-log coordinate with a
    nonzero exponent must have a nonzero base value.
    """
    if len(exponents) != Z.n:
        raise ShapeError("one exponent per coordinate is required")
    k = Z.order
    total = [0] * k
    for i, e in enumerate(exponents, start=1):
        if not e:
            continue
        if Z.chart.is_log(i):
            part = Z.Z[i - 1]
        else:
            z0 = Z.base[i - 1]
            if z0 == 0:
                raise DomainError(f"monomial has a pole or zero along z_{i}")
            part = jet_log(Jet1((z0,) + Z.Z[i - 1]))
        total = [a + e * b for a, b in zip(total, part)]
    return tuple(total)


def shift_trivialization(Z: LogJetCoords) -> LogJetCoords:
    """Move the jet to the distinguished base point keeping its ``Z`` array.

    In ``w`` coordinates the move is a translation, under which the derivative
    data does not change.
    """
    return LogJetCoords(Z.Z, Z.chart.distinguished_point, Z.chart)


def reparametrize(Z: LogJetCoords, phi: Reparam) -> LogJetCoords:
    """Log coordinates of ``f o phi`` computed directly from those of ``f``."""
    if phi.order != Z.order:
        raise ShapeError(f"jet order mismatch: {Z.order} vs {phi.order}")
    rows = tuple(jet_compose(w, phi).derivs[1:] for w in Z.w_jets())
    return LogJetCoords(rows, Z.base, Z.chart)
