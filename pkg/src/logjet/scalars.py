"""Scalar field elements.

Two kinds of scalars flow through the kernel:

* exact Gaussian rationals, :class:`QQi` (plain ``int`` and ``Fraction`` are
  accepted wherever a ``QQi`` is and behave as real Gaussian rationals);
* arbitrary precision complex floats, i.e. ``mpc`` values owned by an
  ``mpmath.MPContext`` whose ``prec`` records the mantissa width.

The jet kernel never inspects which kind it was handed; it only uses ring
operations plus :func:`inverse`.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

import mpmath

__all__ = [
    "QQi",
    "I",
    "inverse",
    "is_exact",
    "magnitude",
    "to_bigfloat",
    "format_scalar",
    "parse_scalar",
    "make_context",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not a rational: {x!r}")


class QQi:
    """Gaussian rational ``re + im*i`` with ``Fraction`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    @classmethod
    def _new(cls, re: Fraction, im: Fraction) -> "QQi":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("QQi is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, QQi):
            return other
        if isinstance(other, (int, Fraction)):
            return QQi._new(Fraction(other), Fraction(0))
        return None

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi._new(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi._new(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi._new(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QQi._new(self.re * other, self.im * other)
        if not isinstance(other, QQi):
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        return QQi._new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o._reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self._reciprocal()

    def _reciprocal(self) -> "QQi":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("QQi division by zero")
        return QQi._new(self.re / n, -self.im / n)

    def __neg__(self):
        return QQi._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self._reciprocal() ** (-e)
        result = QQi._new(Fraction(1), Fraction(0))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "QQi":
        return QQi._new(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({format_scalar(self)})"

    __str__ = lambda self: format_scalar(self)


I = QQi(0, 1)


def inverse(x):
    """Multiplicative inverse that keeps ``int`` inputs exact."""
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QQi))


def magnitude(x) -> float:
    """Modulus as a float, for reporting residuals only."""
    return float(abs(complex(x))) if not isinstance(x, QQi) else abs(x)


def make_context(prec: int = 256) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def to_bigfloat(x, ctx):
    """Convert an exact scalar into an ``mpc`` of ``ctx``."""
    if isinstance(x, QQi):
        return ctx.mpc(ctx.mpf(x.re.numerator) / x.re.denominator,
                       ctx.mpf(x.im.numerator) / x.im.denominator)
    if isinstance(x, Fraction):
        return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
    return ctx.mpc(x)


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Canonical text: ``3``, ``-3/2``, ``1/2+3i``, ``-i``; bigfloats via ``nstr``."""
    if isinstance(x, (int, Fraction)):
        return _fmt_fraction(Fraction(x))
    if isinstance(x, QQi):
        if x.im == 0:
            return _fmt_fraction(x.re)
        if x.im == 1:
            im = "i"
        elif x.im == -1:
            im = "-i"
        else:
            im = _fmt_fraction(x.im) + "i"
        if x.re == 0:
            return im
        sign = "" if im.startswith("-") else "+"
        return f"{_fmt_fraction(x.re)}{sign}{im}"
    return mpmath.nstr(x, 20)


_RAT = r"[+-]?\d+(?:\.\d+)?(?:/\d+)?"
_COMPLEX_RE = re.compile(rf"^(?P<re>{_RAT})?(?:(?P<im>[+-](?:\d+(?:\.\d+)?(?:/\d+)?)?)i)?$")


def _parse_rational(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        return Fraction(num) / Fraction(den)
    return Fraction(text)


def parse_scalar(text) -> QQi | Fraction | int:
    """Parse ``"p/q"``, decimals and ``"a+bi"`` into an exact scalar.

    Decimal literals are read exactly (``"0.1"`` is ``1/10``).
    """
    if isinstance(text, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(text, (int, Fraction, QQi)):
        return text
    if isinstance(text, float):
        return Fraction(text)
    s = str(text).replace(" ", "")
    if s in ("i", "+i"):
        return QQi(0, 1)
    if s == "-i":
        return QQi(0, -1)
    if s.endswith("i") and not any(c in s[1:] for c in "+-") and s[0] not in "+-":
        s = "+" + s
    m = _COMPLEX_RE.match(s)
    if not m or not s:
        raise ValueError(f"cannot parse scalar {text!r}")
    re_part = _parse_rational(m.group("re")) if m.group("re") else Fraction(0)
    im_txt = m.group("im")
    if im_txt is None:
        return re_part
    if im_txt in ("+", "-"):
        im_txt += "1"
    return QQi(re_part, _parse_rational(im_txt))
