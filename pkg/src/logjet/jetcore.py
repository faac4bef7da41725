"""Truncated jets of one-variable germs.

A jet of order ``k`` stores the *derivative vector*
``(f(0), f'(0), ..., f^(k)(0))``, not Taylor coefficients; the two differ by
``j!`` in slot ``j`` (see :meth:`Jet1.from_taylor` / :meth:`Jet1.taylor`).

Entries may be any commutative ring elements that support ``+``, ``-``,
``*`` and multiplication by Python integers: exact scalars, ``mpc`` values,
or :class:`~logjet.polynomial.JetPolynomial` for symbolic work.  Operations
that divide (reciprocal, logarithm, reparametrization inversion) additionally
need :func:`~logjet.scalars.inverse` of the relevant leading entry.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError, ShapeError
from .scalars import inverse

__all__ = [
    "Jet1",
    "CurveJet",
    "Reparam",
    "PolynomialGerm",
    "bell_table",
    "compose_derivatives",
    "jet_compose",
    "jet_log",
    "jet_exp",
    "jet_from_log",
    "jet_reciprocal",
]


@lru_cache(maxsize=None)
def _binomials(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(math.comb(a, b) for b in range(a + 1)) for a in range(n + 1))


def _sum(items):
    items = iter(items)
    try:
        total = next(items)
    except StopIteration:
        return 0
    for x in items:
        total = total + x
    return total


class Jet1:
    __slots__ = ("derivs",)

    def __init__(self, derivs: Iterable):
        d = tuple(derivs)
        if not d:
            raise ShapeError("a jet needs at least its value")
        object.__setattr__(self, "derivs", d)

    def __setattr__(self, name, value):
        raise AttributeError("Jet1 is immutable")

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, order: int) -> "Jet1":
        return cls((c,) + (0,) * order)

    @classmethod
    def zero(cls, order: int) -> "Jet1":
        return cls((0,) * (order + 1))

    @classmethod
    def one(cls, order: int) -> "Jet1":
        return cls.constant(1, order)

    @classmethod
    def variable(cls, order: int, at=0) -> "Jet1":
        """Jet of ``t -> at + t``."""
        if order == 0:
            return cls((at,))
        return cls((at, 1) + (0,) * (order - 1))

    @classmethod
    def from_taylor(cls, coeffs: Sequence, order: int) -> "Jet1":
        """Jet of the polynomial ``sum c_j t^j`` (extra coefficients are dropped)."""
        c = list(coeffs[: order + 1]) + [0] * max(0, order + 1 - len(coeffs))
        return cls(c[j] * math.factorial(j) for j in range(order + 1))

    # accessors ----------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.derivs) - 1

    def __getitem__(self, j):
        return self.derivs[j]

    def __len__(self):
        return len(self.derivs)

    def __iter__(self):
        return iter(self.derivs)

    def taylor(self) -> tuple:
        """Taylor coefficients ``f^(j)(0) / j!``."""
        return tuple(d * Fraction(1, math.factorial(j)) for j, d in enumerate(self.derivs))

    def derivative(self) -> "Jet1":
        """Jet of ``f'`` (order drops by one)."""
        if self.order == 0:
            raise ShapeError("cannot differentiate an order-0 jet")
        return Jet1(self.derivs[1:])

    def truncate(self, order: int) -> "Jet1":
        if order > self.order:
            raise ShapeError(f"cannot raise order {self.order} to {order}")
        return Jet1(self.derivs[: order + 1])

    def shifted(self, c) -> "Jet1":
        """Jet of ``f + c``."""
        return Jet1((self.derivs[0] + c,) + self.derivs[1:])

    def centered(self) -> "Jet1":
        """Jet of ``f - f(0)``."""
        return Jet1((0,) + self.derivs[1:])

    # ring operations ----------------------------------------------------
    def _check(self, other: "Jet1"):
        if len(self.derivs) != len(other.derivs):
            raise ShapeError(f"jet order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if isinstance(other, Jet1):
            self._check(other)
            return Jet1(a + b for a, b in zip(self.derivs, other.derivs))
        return self.shifted(other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet1):
            self._check(other)
            return Jet1(a - b for a, b in zip(self.derivs, other.derivs))
        return self.shifted(-other)

    def __rsub__(self, other):
        return (-self).shifted(other)

    def __neg__(self):
        return Jet1(-a for a in self.derivs)

    def __mul__(self, other):
        if isinstance(other, Jet1):
            self._check(other)
            a, b = self.derivs, other.derivs
            C = _binomials(len(a) - 1)
            return Jet1(
                _sum(C[n][s] * a[s] * b[n - s] for s in range(n + 1)) for n in range(len(a))
            )
        return Jet1(d * other for d in self.derivs)

    def __rmul__(self, other):
        return Jet1(other * d for d in self.derivs)

    def __truediv__(self, other):
        if isinstance(other, Jet1):
            return self * jet_reciprocal(other)
        inv = inverse(other)
        return Jet1(d * inv for d in self.derivs)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = Jet1.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Jet1):
            return NotImplemented
        return self.derivs == other.derivs

    def __hash__(self):
        return hash(self.derivs)

    def __repr__(self):
        return f"Jet1({', '.join(map(str, self.derivs))})"


def jet_reciprocal(f: Jet1) -> Jet1:
    """Jet of ``1/f``; the value ``f(0)`` must be nonzero."""
    a = f.derivs
    if a[0] == 0:
        raise DomainError("reciprocal of a jet with vanishing constant term")
    inv0 = inverse(a[0])
    C = _binomials(len(a) - 1)
    h = [inv0]
    for n in range(1, len(a)):
        acc = _sum(C[n][s] * a[s] * h[n - s] for s in range(1, n + 1))
        h.append(-(acc * inv0))
    return Jet1(h)


@lru_cache(maxsize=None)
def _bell_index(n: int) -> tuple:
    """Partial Bell polynomials ``B_{m,j}`` as coefficient dictionaries.

    Entry ``[m][j]`` maps a multiset of derivative orders (sorted tuple) to its
    integer coefficient.
    """
    table = [[{} for _ in range(n + 1)] for _ in range(n + 1)]
    table[0][0] = {(): 1}
    C = _binomials(n)
    for m in range(1, n + 1):
        for j in range(1, m + 1):
            acc: dict = {}
            for i in range(1, m - j + 2):
                for mono, c in table[m - i][j - 1].items():
                    key = tuple(sorted(mono + (i,)))
                    acc[key] = acc.get(key, 0) + C[m - 1][i - 1] * c
            table[m][j] = acc
    return tuple(tuple(row) for row in table)


def bell_table(values: Sequence, n: int) -> list[list]:
    """Evaluate the partial Bell polynomials ``B_{m,j}(x_1, x_2, ...)``.

    ``values[i]`` plays the role of ``x_i`` (``values[0]`` is ignored), which
    matches a derivative vector whose constant term is skipped.
    """
    idx = _bell_index(n)
    out = [[0] * (n + 1) for _ in range(n + 1)]
    out[0][0] = 1
    for m in range(1, n + 1):
        for j in range(1, m + 1):
            terms = []
            for mono, c in idx[m][j].items():
                p = values[mono[0]]
                for i in mono[1:]:
                    p = p * values[i]
                terms.append(c * p)
            out[m][j] = _sum(terms)
    return out


def compose_derivatives(outer: Sequence, inner: Jet1) -> Jet1:
    """Faa di Bruno: derivatives of ``g o h`` at 0.

    ``outer[j]`` must hold ``g^(j)`` evaluated at ``h(0)``; ``inner`` is the jet
    of ``h``.  Only ``outer[0..k]`` is read.
    """
    k = inner.order
    if len(outer) < k + 1:
        raise ShapeError("outer derivative list shorter than inner order")
    B = bell_table(inner.derivs, k)
    result = [outer[0]]
    for m in range(1, k + 1):
        result.append(_sum(outer[j] * B[m][j] for j in range(1, m + 1)))
    return Jet1(result)


def jet_compose(g: Jet1, phi: "Reparam | Jet1") -> Jet1:
    """Jet of ``g o phi`` where ``phi(0) = 0``; phi need not be regular."""
    inner = phi.inner if isinstance(phi, Reparam) else phi
    if inner.derivs[0] != 0:
        raise DomainError("inner jet must vanish at 0 to compose with a jet at 0")
    if inner.order != g.order:
        raise ShapeError(f"jet order mismatch: {g.order} vs {inner.order}")
    return compose_derivatives(g.derivs, inner)


def jet_log(f: Jet1) -> tuple:
    """``(d^1 log f, ..., d^k log f)`` at 0 via ``(log f)' = f'/f``."""
    if f.derivs[0] == 0:
        raise DomainError("logarithm of a jet vanishing at 0 (logarithmic pole)")
    if f.order == 0:
        return ()
    q = f.derivative() * jet_reciprocal(f.truncate(f.order - 1))
    return q.derivs


def jet_from_log(value, logderivs: Sequence) -> Jet1:
    """Rebuild ``f`` from ``f(0)`` and ``(d^1 log f, ..., d^k log f)``.

    Uses ``f' = f * (log f)'`` order by order; exact whenever ``value`` is.
    """
    w = (0,) + tuple(logderivs)
    k = len(logderivs)
    C = _binomials(k)
    f = [value]
    for n in range(k):
        f.append(_sum(C[n][s] * f[s] * w[n + 1 - s] for s in range(n + 1)))
    return Jet1(f)


def jet_exp(g: Jet1) -> Jet1:
    """Jet of ``exp(g)``.

    In exact arithmetic ``g(0)`` must be 0 (``exp`` of a nonzero rational is
    not exact); bigfloat entries use their own context's ``exp``.
    """
    g0 = g.derivs[0]
    if g0 == 0:
        base = 1
    elif hasattr(g0, "context"):
        base = g0.context.exp(g0)
    else:
        raise DomainError("exact exp needs a vanishing constant term")
    return jet_from_log(base, g.derivs[1:])


class CurveJet:
    """k-jet of a germ ``(C, 0) -> C^n``: one :class:`Jet1` per coordinate."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[Jet1]):
        c = tuple(coords)
        if not c:
            raise ShapeError("a curve jet needs at least one coordinate")
        k = c[0].order
        if any(j.order != k for j in c):
            raise ShapeError("all coordinates of a curve jet must share one order")
        object.__setattr__(self, "coords", c)

    def __setattr__(self, name, value):
        raise AttributeError("CurveJet is immutable")

    @classmethod
    def from_derivatives(cls, rows: Sequence[Sequence]) -> "CurveJet":
        return cls(Jet1(r) for r in rows)

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def order(self) -> int:
        return self.coords[0].order

    def __getitem__(self, i) -> Jet1:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def value(self) -> tuple:
        return tuple(c.derivs[0] for c in self.coords)

    def truncate(self, order: int) -> "CurveJet":
        return CurveJet(c.truncate(order) for c in self.coords)

    def reparametrize(self, phi: "Reparam") -> "CurveJet":
        """Jet of ``f o phi``."""
        return CurveJet(jet_compose(c, phi) for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, CurveJet):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"CurveJet({list(self.coords)})"


class Reparam:
    """Element of the reparametrization jets ``t -> a_1 t + a_2 t^2 + ...``.

    Regular iff ``phi'(0) != 0`` (then it lies in the group ``G_k``); unipotent
    iff ``phi'(0) = 1``.
    """

    __slots__ = ("inner",)

    def __init__(self, inner: Jet1 | Sequence):
        j = inner if isinstance(inner, Jet1) else Jet1(inner)
        if j.derivs[0] != 0:
            raise DomainError("reparametrization must fix the origin")
        if j.order < 1:
            raise ShapeError("reparametrization jets have order >= 1")
        object.__setattr__(self, "inner", j)

    def __setattr__(self, name, value):
        raise AttributeError("Reparam is immutable")

    @classmethod
    def identity(cls, order: int) -> "Reparam":
        return cls(Jet1.variable(order))

    @classmethod
    def linear(cls, c, order: int) -> "Reparam":
        return cls((0, c) + (0,) * (order - 1))

    @classmethod
    def from_taylor(cls, coeffs: Sequence, order: int) -> "Reparam":
        return cls(Jet1.from_taylor(coeffs, order))

    @property
    def order(self) -> int:
        return self.inner.order

    @property
    def derivs(self) -> tuple:
        return self.inner.derivs

    @property
    def first(self):
        """``phi'(0)``."""
        return self.inner.derivs[1]

    @property
    def is_regular(self) -> bool:
        return self.first != 0

    @property
    def is_unipotent(self) -> bool:
        return self.first == 1

    def compose(self, other: "Reparam") -> "Reparam":
        """``self o other``."""
        return Reparam(jet_compose(self.inner, other))

    def inverse(self) -> "Reparam":
        if not self.is_regular:
            raise DomainError("only regular reparametrizations are invertible")
        k = self.order
        a1_inv = inverse(self.first)
        psi = [0, a1_inv] + [0] * (k - 1)
        # (phi o psi)^(n) = phi'(0) psi^(n) + terms in lower derivatives of psi
        for n in range(2, k + 1):
            partial = compose_derivatives(self.inner.derivs, Jet1(psi[: n + 1]))
            psi[n] = -(partial.derivs[n] * a1_inv)
        return Reparam(psi)

    def __eq__(self, other):
        if not isinstance(other, Reparam):
            return NotImplemented
        return self.inner == other.inner

    def __hash__(self):
        return hash(self.inner)

    def __repr__(self):
        return f"Reparam({', '.join(map(str, self.inner.derivs))})"


class PolynomialGerm:
    """Germ whose coordinates are polynomials ``sum_m c_m t^m`` (Taylor form)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Sequence]):
        object.__setattr__(self, "coeffs", tuple(tuple(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("PolynomialGerm is immutable")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def degree(self) -> int:
        return max((len(c) - 1 for c in self.coeffs), default=0)

    def jet(self, order: int, at=0) -> CurveJet:
        """Derivative vectors of every coordinate at ``t = at``."""
        return CurveJet(_poly_jet(c, order, at) for c in self.coeffs)

    def compose(self, phi: Sequence) -> "PolynomialGerm":
        """Exact polynomial substitution ``f(phi(t))`` for a Taylor list ``phi``."""
        out = []
        for c in self.coeffs:
            acc = [0]
            for coef in reversed(c):
                acc = _poly_add(_poly_mul(acc, phi), [coef])
            out.append(acc)
        return PolynomialGerm(out)

    def __repr__(self):
        return f"PolynomialGerm({self.coeffs})"


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_jet(coeffs: Sequence, order: int, at) -> Jet1:
    out = []
    for j in range(order + 1):
        acc = 0
        for m in range(len(coeffs) - 1, j - 1, -1):
            acc = acc * at + coeffs[m] * (math.factorial(m) // math.factorial(m - j))
        out.append(acc)
    return Jet1(out)
