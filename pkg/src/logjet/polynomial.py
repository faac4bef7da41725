"""Sparse multivariate polynomials in jet variables.

Variables are triples ``(kind, i, j)``:

``("Z", i, j)``
    jet coordinate of coordinate ``i`` and derivative order ``j`` (weight ``j``);
``("z", i, 0)``
    base coordinate ``z_i`` (weight 0);
``("Y", i, j)``
    auxiliary weighted variable used for internal symbolic work.

Coordinate labels ``i`` are 1-based, matching the printed form ``Z[i,j]``.
Values are treated as immutable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import ShapeError
from .scalars import QQi, format_scalar

__all__ = ["JetPolynomial", "Z", "z", "det", "Var"]

Var = tuple  # (kind, i, j)
Monomial = tuple  # sorted tuple of (Var, exponent)


def Z(i: int, j: int) -> "JetPolynomial":
    return JetPolynomial.var(("Z", i, j))


def z(i: int) -> "JetPolynomial":
    return JetPolynomial.var(("z", i, 0))


def var_weight(v: Var) -> int:
    return v[2] if v[0] in ("Z", "Y") else 0


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QQi))


class JetPolynomial:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c != 0:
                    clean[m] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("JetPolynomial is immutable")

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "JetPolynomial":
        return cls({(): c})

    @classmethod
    def var(cls, v: Var) -> "JetPolynomial":
        return cls({((tuple(v), 1),): 1})

    @classmethod
    def coerce(cls, x) -> "JetPolynomial":
        if isinstance(x, JetPolynomial):
            return x
        if _is_scalar(x):
            return cls.constant(x)
        raise TypeError(f"cannot use {x!r} as a polynomial")

    # basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_term(self):
        return self.terms.get((), 0)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def monomial_weights(self) -> set:
        return {sum(var_weight(v) * e for v, e in m) for m in self.terms}

    def weighted_degree(self) -> int | None:
        """The common weight of all monomials, or ``None`` if they differ.

        The zero polynomial has no well defined weight and also yields ``None``;
        use :meth:`is_homogeneous` to test against a given weight.
        """
        w = self.monomial_weights()
        return w.pop() if len(w) == 1 else None

    def is_homogeneous(self, m: int | None = None) -> bool:
        w = self.monomial_weights()
        if m is None:
            return len(w) <= 1
        return w <= {m}

    def max_order(self) -> int:
        return max((v[2] for v in self.variables() if v[0] == "Z"), default=0)

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    # arithmetic ---------------------------------------------------------
    def _combine(self, other, sign: int) -> "JetPolynomial":
        o = JetPolynomial.coerce(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + (c if sign > 0 else -c)
        return JetPolynomial(out)

    def __add__(self, other):
        if not (isinstance(other, JetPolynomial) or _is_scalar(other)):
            return NotImplemented
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if not (isinstance(other, JetPolynomial) or _is_scalar(other)):
            return NotImplemented
        return self._combine(other, -1)

    def __rsub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return JetPolynomial.constant(other)._combine(self, -1)

    def __neg__(self):
        return JetPolynomial({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if _is_scalar(other):
            if other == 0:
                return JetPolynomial()
            return JetPolynomial({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return JetPolynomial(out)

    def __rmul__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return self * other

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        inv = Fraction(1, other) if isinstance(other, int) else 1 / other
        return self * inv

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = JetPolynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if _is_scalar(other):
            other = JetPolynomial.constant(other)
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    # calculus -----------------------------------------------------------
    def diff(self, v: Var) -> "JetPolynomial":
        """Partial derivative with respect to the variable ``v``."""
        v = tuple(v)
        out: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            key = tuple(sorted(d.items()))
            out[key] = out.get(key, 0) + c * e
        return JetPolynomial(out)

    def total_derivative(self, log_coords: Iterable[int] = ()) -> "JetPolynomial":
        """Formal derivative along a curve.

        ``Z[i,j] -> Z[i,j+1]``; ``z[i] -> Z[i,1]`` for ordinary coordinates and
        ``z[i] -> z[i]*Z[i,1]`` for logarithmic ones (``z = exp(w)``).
        """
        logs = set(log_coords)
        image = {}
        for v in self.variables():
            kind, i, j = v
            if kind in ("Z", "Y"):
                image[v] = JetPolynomial.var((kind, i, j + 1))
            elif i in logs:
                image[v] = JetPolynomial.var(v) * JetPolynomial.var(("Z", i, 1))
            else:
                image[v] = JetPolynomial.var(("Z", i, 1))
        total = JetPolynomial()
        for v, dv in image.items():
            total = total + self.diff(v) * dv
        return total

    # evaluation ---------------------------------------------------------
    def evaluate(self, values: Mapping | Callable):
        """Evaluate with ``values[var]`` (or ``values(var)``) for each variable.

        Values may be scalars, jets or polynomials; only ring operations and
        multiplication by the coefficients are used.
        """
        lookup = values if callable(values) else values.__getitem__
        cache: dict = {}
        total = 0
        for m, c in self.terms.items():
            term = c
            for v, e in m:
                if v not in cache:
                    cache[v] = lookup(v)
                x = cache[v]
                p = x
                for _ in range(e - 1):
                    p = p * x
                term = p * term if not _is_scalar(p) else term * p
            total = term + total if not _is_scalar(term) else total + term
        return total

    def substitute(self, mapping: Mapping[Var, "JetPolynomial"]) -> "JetPolynomial":
        """Replace some variables by polynomials, keeping the others."""
        return JetPolynomial.coerce(
            self.evaluate(lambda v: mapping.get(v, JetPolynomial.var(v)))
        )

    # text ---------------------------------------------------------------
    def to_text(self, style: str = "bracket") -> str:
        """Canonical form: sorted monomials, explicit exponents, no spaces.

        ``style="bracket"`` prints ``Z[i,j]``/``z[i]`` (re-parseable);
        ``style="order"`` prints ``Z_j`` and is meant for single-coordinate
        universal polynomials.
        """
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            factors = [_var_text(v, e, style) for v, e in m]
            ctext = format_scalar(c)
            needs_paren = isinstance(c, QQi) and c.im != 0 and c.re != 0
            if needs_paren:
                ctext = f"({ctext})"
            if not factors:
                body = ctext
            elif c == 1:
                body = "*".join(factors)
            elif c == -1:
                body = "-" + "*".join(factors)
            else:
                body = ctext + "*" + "*".join(factors)
            if parts and not body.startswith("-"):
                body = "+" + body
            parts.append(body)
        return "".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"JetPolynomial({self.to_text()!r})"


def _var_text(v: Var, e: int, style: str) -> str:
    kind, i, j = v
    if kind == "z":
        name = f"z[{i}]"
    elif style == "order":
        name = f"{kind}_{j}"
    else:
        name = f"{kind}[{i},{j}]"
    return name if e == 1 else f"{name}^{e}"


def det(matrix):
    """Determinant over any commutative ring (Laplace expansion, memoized).

    Intended for the small matrices of Wronskians; for exact field entries
    the elimination in :func:`logjet.jetdiff.scalar_det` is faster.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ShapeError("determinant of a non-square matrix")
    if n == 0:
        return 1
    memo: dict = {}

    def minor(row: int, cols: tuple):
        if row == n:
            return 1
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = 0
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if isinstance(entry, JetPolynomial) and entry.is_zero():
                continue
            if not isinstance(entry, JetPolynomial) and entry == 0:
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            total = total + term if pos % 2 == 0 else total - term
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))
