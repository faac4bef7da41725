"""Invariant jet differentials.

A jet differential is a :class:`~logjet.polynomial.JetPolynomial` in the
variables ``Z[i,j]`` (weight ``j``) and base variables ``z[i]`` (weight 0).  It
is invariant of weight ``m`` when ``Q(j_k(f o phi)) = phi'(0)^m Q(j_k(f))`` for
every reparametrization ``phi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConfigurationError, DomainError, ShapeError
from .jetcore import Jet1, PolynomialGerm, Reparam, jet_compose, jet_reciprocal
from .linalg import first_nonzero_minor, nullspace, scalar_det
from .logcoords import LogChart, LogJetCoords, to_log_coords
from .polynomial import JetPolynomial, det as poly_det
from .sampling import random_curve, random_reparam, trial_rng
from .scalars import format_scalar, inverse, is_exact, magnitude

__all__ = [
    "weighted_degree",
    "evaluate",
    "EquivarianceReport",
    "check_equivariance",
    "wronskian",
    "wronskian_polynomial",
    "wronskian_equivariance_check",
    "d_operator",
    "default_schedule",
    "validate_schedule",
    "theta_sequence",
    "NormalizedDerivativeReport",
    "normalized_derivative_check",
    "DependenceResult",
    "wronskian_dependence",
]


def weighted_degree(Q: JetPolynomial) -> int | None:
    """The weight ``m`` if ``Q`` is homogeneous, else ``None``."""
    return Q.weighted_degree()


def evaluate(Q: JetPolynomial, Z: LogJetCoords):
    if Q.max_order() > Z.order:
        raise ShapeError(f"polynomial needs order {Q.max_order()}, jet has {Z.order}")
    return Q.evaluate(Z.variables())


def _variable_extent(Q: JetPolynomial) -> tuple[int, int]:
    n = max((v[1] for v in Q.variables()), default=1)
    return n, max(Q.max_order(), 1)


@dataclass
class EquivarianceReport:
    trials: int
    failures: int
    max_residual: float
    seed: object
    m: int
    k: int
    n: int
    witness: dict | None = field(default=None)

    @property
    def ok(self) -> bool:
        return self.failures == 0


def check_equivariance(Q: JetPolynomial, m: int | None = None, trials: int = 200, seed=0,
                       k: int | None = None, n: int | None = None,
                       chart: LogChart | None = None) -> EquivarianceReport:
    """Test ``Q(j_k(f o phi)) = phi'(0)^m Q(j_k(f))`` on random exact data."""
    if m is None:
        m = Q.weighted_degree()
        if m is None:
            raise DomainError("polynomial is not weighted homogeneous; pass m explicitly")
    qn, qk = _variable_extent(Q)
    n = max(n or 0, qn, chart.n if chart else 0)
    k = max(k or 0, qk)
    chart = chart or LogChart(n, 0)
    failures = 0
    worst = 0.0
    witness = None
    for t in range(trials):
        rng = trial_rng(seed, t)
        f = random_curve(rng, n, k, nonzero_values=chart.log_indices)
        phi = random_reparam(rng, k)
        lhs = evaluate(Q, to_log_coords(f.reparametrize(phi), chart))
        rhs = phi.first ** m * evaluate(Q, to_log_coords(f, chart))
        diff = lhs - rhs
        res = magnitude(diff)
        worst = max(worst, res)
        if diff != 0:
            failures += 1
            if witness is None:
                witness = {
                    "trial": t,
                    "germ": [[format_scalar(x) for x in c.derivs] for c in f.coords],
                    "phi": [format_scalar(x) for x in phi.derivs],
                    "lhs": format_scalar(lhs),
                    "rhs": format_scalar(rhs),
                }
    return EquivarianceReport(trials, failures, worst, seed, m, k, n, witness)


def wronskian(rows: Sequence[Sequence]):
    """Determinant of ``rows[i] = (d^1 g_i, ..., d^r g_i)``."""
    r = len(rows)
    if any(len(row) != r for row in rows):
        raise ShapeError("a Wronskian needs r rows of r derivatives")
    if all(is_exact(x) or hasattr(x, "real") for row in rows for x in row):
        return scalar_det(rows)
    return poly_det(rows)


def wronskian_polynomial(r: int, coords: Sequence[int] | None = None) -> JetPolynomial:
    """``det(Z[i,j])`` for the given coordinates and ``j = 1..r``; weight ``r(r+1)/2``."""
    coords = tuple(coords) if coords is not None else tuple(range(1, r + 1))
    if len(coords) != r:
        raise ShapeError("need exactly r coordinates")
    rows = [[JetPolynomial.var(("Z", i, j)) for j in range(1, r + 1)] for i in coords]
    return JetPolynomial.coerce(poly_det(rows))


def wronskian_equivariance_check(germs: Sequence[Jet1], phi: Reparam, r: int | None = None):
    """Ratio ``W(g o phi) / W(g)``; equals ``phi'(0)^(r(r+1)/2)``."""
    r = len(germs) if r is None else r
    if not phi.is_regular:
        raise DomainError("phi must be regular")
    if phi.order < r or any(g.order < phi.order for g in germs):
        raise ShapeError("jets and phi must have order at least r")
    gs = [g.truncate(phi.order) for g in germs[:r]]
    before = wronskian([g.derivs[1: r + 1] for g in gs])
    if before == 0:
        raise DomainError("Wronskian of the input vanishes; ratio undefined")
    after = wronskian([jet_compose(g, phi).derivs[1: r + 1] for g in gs])
    return after * inverse(before)


def d_operator(s: JetPolynomial, t: JetPolynomial, log_coords: Sequence[int] = ()) -> JetPolynomial:
    """``t ds - s dt`` (that is ``t^2 d(s/t)``); weight ``2m+1`` for weight-m inputs."""
    ws, wt = s.weighted_degree(), t.weighted_degree()
    if t.is_zero():
        raise DomainError("t must not vanish identically")
    if ws is None and not s.is_zero():
        raise DomainError("s is not weighted homogeneous")
    if wt is None:
        raise DomainError("t is not weighted homogeneous")
    if ws is not None and ws != wt:
        raise DomainError(f"weights differ: {ws} vs {wt}")
    return t * s.total_derivative(log_coords) - s * t.total_derivative(log_coords)


def default_schedule(k: int, m: int, L: int) -> list[int]:
    """``n_l = 2^l (2(k+l)-1) m`` for ``l = 0..L``."""
    return [2 ** l * (2 * (k + l) - 1) * m for l in range(L + 1)]


def validate_schedule(schedule: Sequence[int], k: int, m: int) -> None:
    if not schedule:
        raise ConfigurationError("schedule must contain n_0")
    if schedule[0] < m:
        raise ConfigurationError(f"n_0 = {schedule[0]} is smaller than the weight {m}")
    for l, nl in enumerate(schedule):
        if nl % (2 * (k + l) - 1):
            raise ConfigurationError(f"n_{l} = {nl} is not divisible by {2 * (k + l) - 1}")
        if l and nl < 2 * (schedule[l - 1] + 1):
            raise ConfigurationError(f"n_{l} = {nl} is below 2(n_{l-1}+1) = {2 * (schedule[l - 1] + 1)}")


def theta_sequence(theta: JetPolynomial, s0: JetPolynomial | None = None,
                   schedule: Sequence[int] | None = None, k: int | None = None,
                   L: int = 1) -> list[JetPolynomial]:
    """``Theta_0 = Theta s0^(n_0-m)`` and ``Theta_l = d(Theta_{l-1}/s0^n_{l-1}) s0^(n_l-1)``.

    The quotient is cleared through :func:`d_operator`, so every step stays
    polynomial: ``Theta_l = d_operator(Theta_{l-1}, s0^n) * s0^(n_l-1-2n)``.
    """
    s0 = JetPolynomial.var(("Z", 1, 1)) if s0 is None else s0
    if s0.weighted_degree() != 1:
        raise DomainError("s0 must have weight 1")
    m = theta.weighted_degree()
    if m is None:
        raise DomainError("Theta is not weighted homogeneous")
    k = theta.max_order() if k is None else k
    schedule = list(schedule) if schedule is not None else default_schedule(k, m, L)
    validate_schedule(schedule, k, m)
    seq = [theta * s0 ** (schedule[0] - m)]
    for l in range(1, len(schedule)):
        prev_n = schedule[l - 1]
        step = d_operator(seq[-1], s0 ** prev_n)
        seq.append(step * s0 ** (schedule[l] - 1 - 2 * prev_n))
    return seq


@dataclass
class NormalizedDerivativeReport:
    residuals: tuple
    lhs: tuple
    rhs: tuple

    @property
    def max_residual(self) -> float:
        return max((magnitude(r) for r in self.residuals), default=0.0)

    @property
    def ok(self) -> bool:
        return all(r == 0 for r in self.residuals)


def _is_identity_coordinate(f) -> bool:
    if isinstance(f, PolynomialGerm):
        c = list(f.coeffs[0])
        while c and c[-1] == 0:
            c.pop()
        return c == [0, 1]
    c = f.coords[0].derivs
    return c[0] == 0 and c[1] == 1 and all(x == 0 for x in c[2:])


def normalized_derivative_check(F, f, k: int, l: int, s0: JetPolynomial | None = None) -> NormalizedDerivativeReport:
    """Compare ``d^i/dt^i (F o f_[k])`` at 0 with ``F_(i) o f_[k+i]`` for ``i <= l``.

    ``F`` is ``(N, e)`` meaning ``N / s0^e`` (or a bare polynomial, ``e = 0``);
    ``F_(i) = d F_(i-1) / s0`` is kept as a pair
    ``(s0 dN - e N ds0, e + 2)``.  The germ must have ``f_1(t) = t`` so that
    ``s0 = Z[1,1]`` is identically 1 along it.
    """
    N, e = (F, 0) if isinstance(F, JetPolynomial) else F
    s0 = JetPolynomial.var(("Z", 1, 1)) if s0 is None else s0
    if N.max_order() > k:
        raise ShapeError(f"F involves order {N.max_order()} > k = {k}")
    if not _is_identity_coordinate(f):
        raise DomainError("normalization requires f_1(t) = t")
    jet = f.jet(k + l) if isinstance(f, PolynomialGerm) else f
    if jet.order < k + l:
        raise ShapeError(f"germ jet of order {jet.order} is too short for k + l = {k + l}")

    def along(v):
        kind, i, j = v
        d = jet.coords[i - 1].derivs
        return Jet1(d[j: j + l + 1])

    num = N.evaluate(along)
    num = num if isinstance(num, Jet1) else Jet1.constant(num, l)
    den = s0.evaluate(along)
    left = num * jet_reciprocal(den) ** e if e else num

    point = LogJetCoords(tuple(c.derivs[1:] for c in jet.coords), jet.value(), LogChart(jet.n, 0))
    rhs = []
    Ni, ei = N, e
    for i in range(l + 1):
        if i:
            Ni = s0 * Ni.total_derivative() - Ni * s0.total_derivative() * ei
            ei += 2
        val = evaluate(Ni, point) * inverse(evaluate(s0, point)) ** ei if ei else evaluate(Ni, point)
        rhs.append(val)
    lhs = tuple(left.derivs)
    residuals = tuple(a - b for a, b in zip(lhs, rhs))
    return NormalizedDerivativeReport(residuals, lhs, tuple(rhs))


@dataclass
class DependenceResult:
    dependent: bool
    coefficients: tuple | None = None
    minor_rows: tuple | None = None
    minor_value: object = None


def wronskian_dependence(series: Sequence[Jet1]) -> DependenceResult:
    """Linear dependence over constants of truncated series.

    The generalized Wronskian matrix ``M[j][i] = d^j g_i(0)`` (all available
    ``j``) has a kernel iff the series are dependent to truncation order.  A
    dependent family returns a kernel vector scaled so its first nonzero entry
    is 1; an independent one returns the first nonzero maximal minor.
    """
    count = len(series)
    if count == 0:
        raise ShapeError("need at least one series")
    order = series[0].order
    if any(s.order != order for s in series):
        raise ShapeError("all series must share one truncation order")
    if order < count:
        raise ShapeError(f"truncation order {order} is below the number of series {count}")
    M = [[s.derivs[j] for s in series] for j in range(order + 1)]
    kernel = nullspace(M, count)
    if kernel:
        v = kernel[0]
        lead = next(x for x in v if x != 0)
        inv = inverse(lead)
        return DependenceResult(True, tuple(x * inv for x in v))
    rows, value = first_nonzero_minor(M)
    return DependenceResult(False, None, rows, value)
