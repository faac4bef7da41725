"""Genus-1 theta function in arbitrary precision.

``theta(z) = sum_{|n| <= N} exp(pi i n^2 tau + 2 pi i n z)`` satisfies
``theta(z + p + q tau) = exp(L(z)) theta(z)`` with the affine function
``L(z) = -2 pi i q z - pi i q^2 tau``.  Its logarithmic derivatives along a
curve feed the Wronskian jet differential

    det( d^j log theta(f), d^j f_1, ..., d^j f_n' )_{j = 1..n'+1}

of weight ``(n'+1)(n'+2)/2``.  Coordinates beyond the first model a
multiplicative factor whose theta is a Laurent monomial ``exp(sum l_i w_i)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigurationError, DomainError, PrecisionError, ShapeError
from .jetcore import CurveJet, Jet1, PolynomialGerm, compose_derivatives, jet_log
from .linalg import scalar_det
from .scalars import is_exact, make_context, parse_scalar, to_bigfloat

__all__ = [
    "ThetaSeries",
    "LatticeVector",
    "QuasiPeriodicity",
    "quasi_periodicity_check",
    "wronskian_theta",
    "wronskian_theta_weight",
    "TranslationCheck",
    "translation_invariance_check",
    "sample_points",
]

DIVISOR_FLOOR = 1e-3


@dataclass(frozen=True)
class LatticeVector:
    """``gamma = p + q tau``."""

    p: int
    q: int

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def value(self, tau):
        return self.p + self.q * tau


class ThetaSeries:
    def __init__(self, tau=None, N: int = 30, prec: int = 256, tol: float = 1e-10):
        self.ctx = make_context(prec)
        ctx = self.ctx
        if tau is None:
            tau = ctx.mpc(0, 1)
        elif isinstance(tau, str):
            tau = to_bigfloat(parse_scalar(tau), ctx)
        else:
            tau = self.big(tau)
        if tau.imag <= 0:
            raise ConfigurationError("tau must have positive imaginary part")
        if N < 1:
            raise ConfigurationError("truncation N must be positive")
        self.tau = tau
        self.N = N
        self.prec = prec
        self.tol = tol
        pi = ctx.pi
        self._q = [ctx.exp(1j * pi * n * n * tau) for n in range(N + 1)]

    def __repr__(self):
        return f"ThetaSeries(tau={self.ctx.nstr(self.tau, 10)}, N={self.N}, prec={self.prec})"

    def big(self, x):
        """Bring an exact scalar, float or bigfloat into this series' context."""
        if is_exact(x):
            return to_bigfloat(x, self.ctx)
        if isinstance(x, complex):
            return self.ctx.mpc(x.real, x.imag)
        return self.ctx.mpc(x)

    def tail_bound(self, z, k: int = 0) -> float:
        """Bound on the omitted terms of ``d^k theta`` at ``z``."""
        ctx = self.ctx
        M = self.N + 1
        y = abs(self.big(z).imag)
        expo = -ctx.pi * self.tau.imag * M * M + 2 * ctx.pi * M * y
        # successive ratios are below 1/2 once the Gaussian dominates, hence factor 4
        return float(4 * (2 * ctx.pi * M) ** k * ctx.exp(expo))

    def derivatives(self, z, k: int = 0) -> list:
        """``[theta(z), theta'(z), ..., theta^(k)(z)]``."""
        z = self.big(z)
        bound = self.tail_bound(z, k)
        if bound > self.tol:
            raise PrecisionError(f"truncation N={self.N} leaves a tail of {bound:.3g} at z")
        ctx = self.ctx
        two_pi_i = 2j * ctx.pi
        w = ctx.exp(two_pi_i * z)
        winv = 1 / w
        out = [self._q[0]] + [ctx.mpc(0)] * k
        wp, wm = ctx.mpc(1), ctx.mpc(1)
        for n in range(1, self.N + 1):
            wp *= w
            wm *= winv
            plus = self._q[n] * wp
            minus = self._q[n] * wm
            c = two_pi_i * n
            cj = ctx.mpc(1)
            for j in range(k + 1):
                out[j] += cj * (plus + (minus if j % 2 == 0 else -minus))
                cj *= c
        return out

    def __call__(self, z):
        return self.derivatives(z, 0)[0]

    def big_jet(self, jet: Jet1) -> Jet1:
        return Jet1(self.big(x) for x in jet.derivs)

    def jet(self, f, k: int) -> Jet1:
        """Derivative vector of ``theta o f_1`` at 0."""
        g = _first_coordinate(f, k)
        g = self.big_jet(g)
        return compose_derivatives(self.derivatives(g.derivs[0], k), g)

    def dlog_jet(self, f, k: int) -> tuple:
        """``(d^1 log theta(f), ..., d^k log theta(f))`` at 0."""
        th = self.jet(f, k)
        if abs(th.derivs[0]) < self.ctx.mpf(2) ** (-self.prec // 2):
            raise DomainError("germ starts on the theta divisor")
        return jet_log(th)


def _curve(f, k: int) -> CurveJet:
    if isinstance(f, PolynomialGerm):
        return f.jet(k)
    if isinstance(f, Jet1):
        return CurveJet([f.truncate(k)])
    if isinstance(f, CurveJet):
        if f.order < k:
            raise ShapeError(f"jet of order {f.order} is too short for k = {k}")
        return f.truncate(k)
    raise TypeError("expected a polynomial germ or a jet")


def _first_coordinate(f, k: int) -> Jet1:
    return _curve(f, k).coords[0]


def sample_points(theta: ThetaSeries, count: int, seed=0, shift=None) -> list:
    """Points in a fundamental domain with ``|theta| > 1e-3`` (also at ``z + shift``)."""
    rng = random.Random(f"theta:{seed}")
    ctx = theta.ctx
    out = []
    while len(out) < count:
        x = rng.random()
        y = (rng.random() - 0.5) * float(theta.tau.imag)
        z = ctx.mpc(x, y)
        if abs(theta(z)) <= DIVISOR_FLOOR:
            continue
        if shift is not None and abs(theta(z + shift)) <= DIVISOR_FLOOR:
            continue
        out.append(z)
    return out


@dataclass
class QuasiPeriodicity:
    alpha: object
    beta: object
    expected_alpha: object
    expected_beta: object
    alpha_error: float
    beta_error: float
    residual: float


def _reduce_2pii(ctx, x):
    """Representative of ``x`` modulo ``2 pi i`` with imaginary part in (-pi, pi]."""
    two_pi = 2 * ctx.pi
    k = ctx.floor((x.imag + ctx.pi) / two_pi)
    y = x - 1j * two_pi * k
    if y.imag <= -ctx.pi:
        y += 1j * two_pi
    return y


def quasi_periodicity_check(theta: ThetaSeries, gamma: LatticeVector, samples: Sequence | None = None,
                            seed=0) -> QuasiPeriodicity:
    """Fit ``L(z) = alpha z + beta`` with ``theta(z + gamma) = exp(L(z)) theta(z)``.

    ``alpha`` comes from the difference of logarithmic derivatives at the first
    sample and ``beta`` from the logarithm of the ratio there; the remaining
    samples measure the residual.
    """
    ctx = theta.ctx
    exp_alpha = -2j * ctx.pi * gamma.q
    exp_beta = _reduce_2pii(ctx, -1j * ctx.pi * gamma.q ** 2 * theta.tau)
    if gamma.is_zero():
        zero = ctx.mpc(0)
        return QuasiPeriodicity(zero, zero, zero, zero, 0.0, 0.0, 0.0)
    g = gamma.value(theta.tau)
    pts = [theta.big(z) for z in samples] if samples is not None else sample_points(theta, 4, seed, g)
    if len(pts) < 2:
        raise ShapeError("need at least two sample points")
    for z in pts:
        if abs(theta(z)) <= DIVISOR_FLOOR or abs(theta(z + g)) <= DIVISOR_FLOOR:
            raise DomainError("sample point too close to the theta divisor")
    z1 = pts[0]
    d0 = theta.derivatives(z1, 1)
    d1 = theta.derivatives(z1 + g, 1)
    alpha = d1[1] / d1[0] - d0[1] / d0[0]
    beta = _reduce_2pii(ctx, ctx.log(d1[0] / d0[0]) - alpha * z1)
    resid = 0.0
    for z in pts[1:]:
        lhs = theta(z + g)
        rhs = ctx.exp(alpha * z + beta) * theta(z)
        resid = max(resid, float(abs(lhs - rhs) / abs(lhs)))
        e = theta.derivatives(z, 1)
        f = theta.derivatives(z + g, 1)
        resid = max(resid, float(abs(f[1] / f[0] - e[1] / e[0] - alpha)))
    beta_err = float(abs(_reduce_2pii(ctx, beta - exp_beta)))
    return QuasiPeriodicity(alpha, beta, exp_alpha, exp_beta, float(abs(alpha - exp_alpha)), beta_err, resid)


def wronskian_theta_weight(n_prime: int) -> int:
    return (n_prime + 1) * (n_prime + 2) // 2


def _wronskian_matrix(theta: ThetaSeries, f, monomial: Sequence[int] = ()):
    n_prime = f.n
    k = n_prime + 1
    curve = _curve(f, k)
    if monomial and len(monomial) != n_prime - 1:
        raise ShapeError("monomial exponents are given for coordinates 2..n'")
    big = [theta.big_jet(c) for c in curve.coords]
    th = compose_derivatives(theta.derivatives(big[0].derivs[0], k), big[0])
    if abs(th.derivs[0]) <= theta.ctx.mpf(2) ** (-theta.prec // 2):
        raise DomainError("theta vanishes at f(0): the germ meets the divisor")
    first = list(jet_log(th))
    for e, c in zip(monomial, big[1:]):
        if e:
            first = [a + e * b for a, b in zip(first, c.derivs[1:])]
    rows = []
    for j in range(1, k + 1):
        rows.append([first[j - 1]] + [c.derivs[j] for c in big])
    return rows


def wronskian_theta(f, theta: ThetaSeries | None = None, monomial: Sequence[int] = ()):
    """Numeric value of the theta Wronskian along ``f`` at ``t = 0``.

    ``f`` is a germ into ``C^n'`` (polynomial germ or curve jet of order at
    least ``n'+1``); its first coordinate runs in the elliptic curve.
    """
    theta = theta or ThetaSeries()
    return scalar_det(_wronskian_matrix(theta, f, monomial))


@dataclass
class TranslationCheck:
    value: object
    shifted_value: object
    residual: float
    column_residual: float


def _shift_first(f, g, k: int) -> CurveJet:
    curve = _curve(f, k)
    first = curve.coords[0]
    return CurveJet([first.shifted(g)] + list(curve.coords[1:]))


def translation_invariance_check(f, gamma: LatticeVector, theta: ThetaSeries | None = None,
                                 monomial: Sequence[int] = ()) -> TranslationCheck:
    """``Theta(f + gamma) - Theta(f)`` and the column-operation identity behind it.

    The first column changes by ``d^j L(f) = alpha d^j f_1`` with
    ``alpha = -2 pi i q``, a multiple of the ``f_1`` column.
    """
    theta = theta or ThetaSeries()
    k = f.n + 1
    big = CurveJet([theta.big_jet(c) for c in _curve(f, k).coords])
    if gamma.is_zero():
        v = scalar_det(_wronskian_matrix(theta, big, monomial))
        return TranslationCheck(v, v, 0.0, 0.0)
    g = gamma.value(theta.tau)
    shifted = _shift_first(big, g, k)
    m0 = _wronskian_matrix(theta, big, monomial)
    m1 = _wronskian_matrix(theta, shifted, monomial)
    alpha = -2j * theta.ctx.pi * gamma.q
    col = max(float(abs((r1[0] - r0[0]) - alpha * r0[1])) for r0, r1 in zip(m0, m1))
    v0, v1 = scalar_det(m0), scalar_det(m1)
    return TranslationCheck(v0, v1, float(abs(v1 - v0)), col)
