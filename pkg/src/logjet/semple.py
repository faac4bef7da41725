"""Chart-level Demailly-Semple tower.

Points of the k-th tower level over a regular jet are described in the affine
chart of a coordinate ``rho`` with ``Z^rho_1 != 0``.  Working in ``w``
coordinates (``w = log z`` on logarithmic coordinates), the jet is first moved
by a unipotent reparametrization to the slice where ``w_rho`` is linear,
``w_rho o phi = a t`` with ``a = Z^rho_1``.  On that slice block ``j`` is
``Z^i_j / a^j``, which is the j-th derivative of ``w_i`` with respect to
``w_rho``.

The last level also carries the tautological line coordinates: the vector
``(Z^i_k / a^(k-1), ..., a)``.  When every coordinate in play is logarithmic
the displayed chart formula adds ``(k-1) a`` to the non-normalizing entries;
that variant is recorded as ``branch == "a=r"`` and only affects ``line``.

:func:`projectivized_lift` is an independent series computation of the same
tower (it also handles singular jets by stripping common powers of ``t``) and
backs :func:`on_gamma`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ChartDomainError, DomainError, ShapeError
from .jetcore import CurveJet, Jet1, PolynomialGerm, Reparam, jet_compose
from .logcoords import LogChart, LogJetCoords, to_log_coords
from .scalars import inverse, is_exact, magnitude

__all__ = [
    "SemplePoint",
    "LiftedCurve",
    "LiftInvarianceReport",
    "chart_coords",
    "lift_curve",
    "check_lift_invariance",
    "project",
    "change_chart",
    "projectivized_lift",
    "on_gamma",
]


@dataclass(frozen=True)
class SemplePoint:
    """Inhomogeneous coordinates of a tower point.

    ``blocks[j-1]`` holds level-j coordinates for ``coords`` minus ``rho`` (in
    order).  Equality compares the position only.
    """

    level: int
    base: tuple
    blocks: tuple
    rho: int
    coords: tuple
    line: tuple | None = field(default=None, compare=False)
    branch: str | None = field(default=None, compare=False)
    chart: LogChart | None = field(default=None, compare=False, repr=False)

    @property
    def others(self) -> tuple:
        return tuple(i for i in self.coords if i != self.rho)

    def line_scalar(self):
        """The line coordinate at ``rho``, i.e. ``Z^rho_1``."""
        if self.line is None:
            raise DomainError("point carries no tautological line data")
        return self.line[self.coords.index(self.rho)]


def _coords_for(Z: LogJetCoords, coords) -> tuple:
    c = tuple(coords) if coords is not None else tuple(range(1, Z.n + 1))
    if any(not 1 <= i <= Z.n for i in c) or len(set(c)) != len(c):
        raise ShapeError("coords must list distinct labels of the chart")
    return c


def _normalizer(w_rho: Jet1, a, k: int) -> Reparam:
    """Unipotent phi with ``w_rho o phi = a t``."""
    return Reparam(w_rho).inverse().compose(Reparam.linear(a, k))


def chart_coords(Z: LogJetCoords, rho: int, k: int | None = None, coords=None) -> SemplePoint:
    k = Z.order if k is None else k
    if k > Z.order:
        raise ShapeError(f"jet of order {Z.order} cannot reach level {k}")
    coords = _coords_for(Z, coords)
    if rho not in coords:
        raise ShapeError(f"chart index {rho} is not among the coordinates")
    base = Z.base
    if k == 0:
        return SemplePoint(0, base, (), rho, coords, None, None, Z.chart)
    a = Z.entry(rho, 1)
    if a == 0:
        raise ChartDomainError(f"Z^{rho}_1 = 0: point is outside the chart of z_{rho}")
    wj = {i: Jet1((0,) + Z.Z[i - 1][:k]) for i in coords}
    phi = _normalizer(wj[rho], a, k)
    hat = {i: jet_compose(wj[i], phi) for i in coords if i != rho}
    inv_a = inverse(a)
    powers = [1]
    for _ in range(k):
        powers.append(powers[-1] * inv_a)
    others = [i for i in coords if i != rho]
    blocks = tuple(tuple(hat[i].derivs[j] * powers[j] for i in others) for j in range(1, k + 1))
    saturated = all(Z.chart.is_log(i) for i in coords)
    branch = "a=r" if saturated else "a<r"
    line = []
    for i in coords:
        if i == rho:
            line.append(a)
        else:
            v = hat[i].derivs[k] * powers[k - 1]
            if saturated:
                v = v + (k - 1) * a
            line.append(v)
    return SemplePoint(k, base, blocks, rho, coords, tuple(line), branch, Z.chart)


def _pick_rho(Z: LogJetCoords, coords: tuple) -> int:
    firsts = [(i, Z.entry(i, 1)) for i in coords]
    nonzero = [(i, x) for i, x in firsts if x != 0]
    if not nonzero:
        raise DomainError("singular point: the first derivative vanishes")
    if all(is_exact(x) for _, x in nonzero):
        return nonzero[0][0]
    return max(nonzero, key=lambda p: magnitude(p[1]))[0]


def _jet_of(f, k: int, t) -> CurveJet:
    if isinstance(f, PolynomialGerm):
        return f.jet(k, at=t)
    if isinstance(f, CurveJet):
        if t != 0:
            raise DomainError("a jet can only be lifted at its own base point t = 0")
        return f.truncate(k)
    raise TypeError("expected a PolynomialGerm or a CurveJet")


def lift_curve(f, k: int, t=0, chart: LogChart | None = None, coords=None,
               rho: int | None = None) -> SemplePoint:
    """``f_[k](t)`` in the chart picked by the first nonzero (or largest) ``Z^rho_1``."""
    if k < 1:
        jet = _jet_of(f, 1, t)
        chart = chart or LogChart(jet.n, 0)
        Z = to_log_coords(jet, chart)
        return chart_coords(Z, rho or _pick_rho(Z, _coords_for(Z, coords)), 0, coords)
    jet = _jet_of(f, k, t)
    chart = chart or LogChart(jet.n, 0)
    Z = to_log_coords(jet, chart)
    c = _coords_for(Z, coords)
    return chart_coords(Z, rho or _pick_rho(Z, c), k, c)


@dataclass(frozen=True)
class LiftedCurve:
    """A polynomial germ together with its lifts to level ``k``."""

    germ: PolynomialGerm
    k: int
    chart: LogChart | None = None

    def at(self, t) -> SemplePoint:
        return lift_curve(self.germ, self.k, t, self.chart)


@dataclass(frozen=True)
class LiftInvarianceReport:
    positions_equal: bool
    scalar: object
    expected: object
    line_residual: float
    rho: int

    @property
    def ok(self) -> bool:
        return self.positions_equal and self.scalar == self.expected and self.line_residual == 0


def check_lift_invariance(f, phi: Reparam, k: int | None = None, chart: LogChart | None = None,
                          rho: int | None = None) -> LiftInvarianceReport:
    """Compare the lifts of ``f`` and ``f o phi`` at ``t = 0``.

    Positions must agree; the line coordinates must scale by ``phi'(0)``.
    """
    if not phi.is_regular:
        raise DomainError("invariance is stated for regular reparametrizations")
    k = phi.order if k is None else k
    jet = _jet_of(f, phi.order, 0)
    chart = chart or LogChart(jet.n, 0)
    Z = to_log_coords(jet, chart)
    Zphi = to_log_coords(jet.reparametrize(phi), chart)
    rho = rho or _pick_rho(Z, _coords_for(Z, None))
    p = chart_coords(Z, rho, k)
    q = chart_coords(Zphi, rho, k)
    c = phi.first
    scalar = q.line_scalar() * inverse(p.line_scalar())
    resid = max(magnitude(y - c * x) for x, y in zip(p.line, q.line))
    return LiftInvarianceReport(p == q, scalar, c, resid, rho)


def project(p: SemplePoint, j: int) -> SemplePoint:
    """Image under the tower projection to level ``j``."""
    if j > p.level or j < 0:
        raise ShapeError(f"cannot project a level-{p.level} point to level {j}")
    if j == p.level:
        return p
    return SemplePoint(j, p.base, p.blocks[:j], p.rho, p.coords, None, None, p.chart)


def jet_from_chart(p: SemplePoint) -> LogJetCoords:
    """A representative jet on the normalized slice of ``p``.

    The scale ``a`` is taken from the line data when present, else 1.
    """
    k = p.level
    a = p.line_scalar() if p.line is not None else 1
    n = len(p.base) if p.chart is None else p.chart.n
    rows = [tuple([0] * k) for _ in range(n)]
    rows[p.rho - 1] = tuple([a] + [0] * (k - 1))
    for pos, i in enumerate(p.others):
        scale = 1
        row = []
        for j in range(k):
            scale = scale * a
            row.append(scale * p.blocks[j][pos])
        rows[i - 1] = tuple(row)
    chart = p.chart or LogChart(n, 0)
    return LogJetCoords(tuple(rows), p.base, chart)


def change_chart(p: SemplePoint, rho: int) -> SemplePoint:
    """Coordinates of the same point in the chart of ``rho``."""
    if rho == p.rho:
        return p
    return chart_coords(jet_from_chart(p), rho, p.level, p.coords)


# --- independent series computation -------------------------------------

def _taylor_row(row: Sequence) -> list:
    """Taylor coefficients of ``w'`` from ``(w', w'', ...)`` at 0."""
    out = []
    fact = 1
    for n, x in enumerate(row):
        if n:
            fact *= n
        out.append(x * Fraction(1, fact))
    return out


def _series_div(a: list, b: list) -> list:
    inv0 = inverse(b[0])
    q = []
    for n in range(len(a)):
        acc = a[n]
        for s in range(1, n + 1):
            acc = acc - b[s] * q[n - s]
        q.append(acc * inv0)
    return q


def _series_deriv(a: list) -> list:
    return [a[n] * n for n in range(1, len(a))]


@dataclass(frozen=True)
class LiftLevel:
    rho: int
    strip: int
    values: dict
    direction: dict


def projectivized_lift(Z: LogJetCoords, levels: int, rho: int | None = None, coords=None) -> list:
    """Lift level by level by projectivizing the derivative of the previous lift.

    Each entry records the chart index used, the power of ``t`` stripped from
    the derivative, the inhomogeneous coordinates at ``t = 0`` and the
    normalized derivative direction at ``t = 0`` (indexed by frame slot; the
    slot of the previous chart index carries the tautological component).
    """
    coords = _coords_for(Z, coords)
    v = {i: _taylor_row(Z.Z[i - 1]) for i in coords}
    out = []
    for _ in range(levels):
        length = len(next(iter(v.values())))
        vals = [next((n for n, x in enumerate(v[i]) if x != 0), None) for i in coords]
        present = [e for e in vals if e is not None]
        if not present:
            raise DomainError("jet order too small: the lifted derivative vanishes to available order")
        e = min(present)
        tilde = {i: v[i][e:] for i in coords}
        r = rho if rho in coords and tilde[rho][0] != 0 else next(i for i in coords if tilde[i][0] != 0)
        u = {i: _series_div(tilde[i], tilde[r]) for i in coords if i != r}
        out.append(LiftLevel(r, e, {i: u[i][0] for i in u}, {i: tilde[i][0] for i in coords}))
        new_len = length - e - 1
        if new_len <= 0:
            break
        nv = {r: v[r][:new_len]}
        for i in u:
            nv[i] = _series_deriv(u[i])[:new_len]
        v = {i: nv[i] for i in coords}
    return out


def on_gamma(Z: LogJetCoords, j: int, rho: int | None = None, coords=None) -> bool:
    """Whether the level-j lift lies on the divisor ``Gamma_j``.

    That is the case iff the derivative of the level ``j-1`` lift has vanishing
    tautological component, i.e. its direction is vertical for the projection
    to level ``j-2``.
    """
    if j < 2:
        raise DomainError("Gamma_j is defined for j >= 2")
    levels = projectivized_lift(Z, j, rho, coords)
    if len(levels) < j:
        raise DomainError("jet order too small to decide membership in Gamma")
    prev, cur = levels[j - 2], levels[j - 1]
    return cur.direction[prev.rho] == 0
