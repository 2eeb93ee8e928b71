"""Exact scalars: rationals and elements of a quadratic extension Q(sqrt(delta)).

Rationals are ``gmpy2.mpq`` values.  Elements ``a + b*sqrt(delta)`` with
``b != 0`` are :class:`QuadExt` instances; any arithmetic result whose
irrational part vanishes collapses back to a plain ``mpq``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpq, mpz

__all__ = [
    "QuadExt",
    "DeltaMismatchError",
    "as_scalar",
    "parse_scalar",
    "format_scalar",
    "scalar_delta",
    "is_rational",
    "sqrt_rational",
    "squarefree_decomposition",
    "TwoDistinct",
    "DoubleRoot",
    "DegenerateLinear",
    "binary_quadratic_roots",
    "binary_form_roots",
    "binary_form_gcd",
    "normalize_projective",
]


class DeltaMismatchError(ValueError):
    """Operands live in different quadratic extensions."""


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class QuadExt:
    """The number ``a + b*sqrt(delta)`` with ``a, b`` rational.

    ``delta`` is a squarefree integer different from 0 and 1.  Negative
    values are allowed and give complex conjugate pairs symbolically.
    """

    __slots__ = ("a", "b", "delta")

    def __init__(self, a, b, delta: int):
        delta = int(delta)
        if delta in (0, 1):
            raise ValueError(f"delta must not be 0 or 1, got {delta}")
        if squarefree_decomposition(delta) != (1, delta):
            raise ValueError(f"delta must be squarefree, got {delta}")
        object.__setattr__(self, "a", _q(a))
        object.__setattr__(self, "b", _q(b))
        object.__setattr__(self, "delta", delta)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def _make(cls, a: mpq, b: mpq, delta: int):
        # skips validation; delta is already known to be valid here
        if b == 0:
            return a
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "delta", delta)
        return obj

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.delta != self.delta:
                raise DeltaMismatchError(
                    f"cannot combine sqrt({self.delta}) with sqrt({other.delta})"
                )
            return other.a, other.b
        if isinstance(other, (int, mpz, mpq, Fraction)):
            return _q(other), mpq(0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._make(self.a + o[0], self.b + o[1], self.delta)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._make(self.a - o[0], self.b - o[1], self.delta)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._make(o[0] - self.a, o[1] - self.b, self.delta)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c, d = o
        return QuadExt._make(
            self.a * c + self.b * d * self.delta, self.a * d + self.b * c, self.delta
        )

    __rmul__ = __mul__

    def norm(self) -> mpq:
        return self.a * self.a - self.delta * self.b * self.b

    def conjugate(self):
        return QuadExt._make(self.a, -self.b, self.delta)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return QuadExt._make(self.a / n, -self.b / n, self.delta)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(other, QuadExt):
            return self * other.inverse()
        if o[0] == 0:
            raise ZeroDivisionError("division by zero")
        return QuadExt._make(self.a / o[0], self.b / o[0], self.delta)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.inverse() * o[0]

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = mpq(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self):
        return QuadExt._make(-self.a, -self.b, self.delta)

    def __pos__(self):
        return self

    def __abs__(self):
        raise TypeError("QuadExt has no canonical absolute value")

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.delta) == (other.a, other.b, other.delta)
        if isinstance(other, (int, mpz, mpq, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.delta))

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, {self.delta})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.delta})"


def as_scalar(x):
    """Coerce ``x`` to an exact scalar (``mpq`` or :class:`QuadExt`).

    Accepts ints, ``Fraction``, ``mpq``/``mpz``, ``"p/q"`` strings and the
    serialized extension form ``{"a": ..., "b": ..., "delta": n}``.
    Floats are rejected: the pipeline never sees inexact input.
    """
    if isinstance(x, QuadExt):
        return x
    if isinstance(x, mpq):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, mpz, Fraction)):
        return _q(x)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, dict):
        return parse_scalar(x)
    raise TypeError(f"cannot interpret {type(x).__name__} {x!r} as an exact scalar")


def parse_scalar(obj):
    if isinstance(obj, dict):
        try:
            a, b, delta = obj["a"], obj["b"], obj["delta"]
        except KeyError as exc:
            raise ValueError(f"extension scalar is missing key {exc}") from None
        return QuadExt._make(parse_scalar(a), parse_scalar(b), QuadExt(0, 1, delta).delta)
    if isinstance(obj, int) and not isinstance(obj, bool):
        return mpq(obj)
    if not isinstance(obj, str):
        raise ValueError(f"expected a 'p/q' string, got {obj!r}")
    text = obj.strip()
    num, sep, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {obj!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {obj!r}")
    return mpq(n, d)


def format_scalar(x):
    """Serialize: ``"p/q"`` (``"p"`` for integers) or an extension dict."""
    if isinstance(x, QuadExt):
        return {"a": str(x.a), "b": str(x.b), "delta": x.delta}
    return str(_q(x))


def is_rational(x) -> bool:
    return not isinstance(x, QuadExt)


def scalar_delta(values) -> int | None:
    """The common extension delta of ``values``, or None if all are rational."""
    delta = None
    for v in values:
        if isinstance(v, QuadExt):
            if delta is None:
                delta = v.delta
            elif delta != v.delta:
                raise DeltaMismatchError(f"mixed deltas {delta} and {v.delta}")
    return delta


@lru_cache(maxsize=1024)
def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(s, m)`` with ``n = s**2 * m``, ``s > 0`` and ``m`` squarefree."""
    n = int(n)
    if n == 0:
        raise ValueError("0 has no squarefree part")
    if gmpy2.is_square(abs(n)):
        return int(gmpy2.isqrt(abs(n))), (1 if n > 0 else -1)
    from sympy import factorint

    s, m = 1, 1 if n > 0 else -1
    for p, e in factorint(abs(n)).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


def sqrt_rational(x):
    """Exact square root of a rational, in Q or in Q(sqrt(m)) for squarefree m."""
    x = _q(x)
    if x == 0:
        return mpq(0)
    num, den = int(x.numerator), int(x.denominator)
    s, m = squarefree_decomposition(num * den)
    if m == 1:
        return mpq(s, den)
    return QuadExt._make(mpq(0), mpq(s, den), m)


def normalize_projective(point):
    """Scale a homogeneous point so its last nonzero coordinate is 1."""
    for c in reversed(point):
        if c != 0:
            return tuple(p / c for p in point)
    raise ValueError("zero vector is not a projective point")


@dataclass(frozen=True)
class TwoDistinct:
    roots: tuple
    delta: int | None = None


@dataclass(frozen=True)
class DoubleRoot:
    root: tuple


@dataclass(frozen=True)
class DegenerateLinear:
    root: tuple


def binary_quadratic_roots(a, b, c):
    """Projective roots of ``a*l**2 + b*l*m + c*m**2``.

    Rational roots come sorted ascending with the root at infinity ``(1:0)``
    last; conjugate roots come as ``(-b + r)/2a`` then ``(-b - r)/2a``.
    A form ``c*m**2`` is the double root ``(1:0)``.
    """
    a, b, c = _q(a), _q(b), _q(c)
    if a == 0 and b == 0 and c == 0:
        raise ValueError("zero form")
    if a == 0:
        if b == 0:
            return DoubleRoot((mpq(1), mpq(0)))
        return TwoDistinct(((-c / b, mpq(1)), (mpq(1), mpq(0))))
    disc = b * b - 4 * a * c
    if disc == 0:
        return DoubleRoot((-b / (2 * a), mpq(1)))
    r = sqrt_rational(disc)
    r1 = (-b + r) / (2 * a)
    r2 = (-b - r) / (2 * a)
    if isinstance(r, QuadExt):
        return TwoDistinct(((r1, mpq(1)), (r2, mpq(1))), delta=r.delta)
    lo, hi = sorted((r1, r2))
    return TwoDistinct(((lo, mpq(1)), (hi, mpq(1))))


def binary_form_roots(coeffs):
    """Root structure of a binary form of degree 1 or 2.

    ``coeffs`` lists the coefficients by descending power of the first
    variable, e.g. ``(a, b, c)`` for ``a*l**2 + b*l*m + c*m**2``.
    """
    coeffs = tuple(_q(x) for x in coeffs)
    if all(x == 0 for x in coeffs):
        raise ValueError("zero form")
    if len(coeffs) == 3:
        return binary_quadratic_roots(*coeffs)
    if len(coeffs) == 2:
        p, r = coeffs
        return DegenerateLinear(normalize_projective((-r, p)))
    raise ValueError(f"forms of degree {len(coeffs) - 1} have no root structure here")


def _poly_rem(f, g):
    # univariate, coefficients by ascending degree, g monic with nonzero lead
    f = list(f)
    while len(f) >= len(g):
        lead = f[-1]
        shift = len(f) - len(g)
        for i, gc in enumerate(g):
            f[shift + i] -= lead * gc
        f.pop()
        while f and f[-1] == 0:
            f.pop()
    return f


def _monic(f):
    return [x / f[-1] for x in f]


def _poly_gcd(f, g):
    while g:
        g = _monic(g)
        f, g = g, _poly_rem(f, g)
    return _monic(f) if f else f


def binary_form_gcd(forms):
    """Greatest common divisor of binary forms of a common degree.

    Each form is a coefficient tuple by descending power of the first
    variable.  Zero forms are ignored.  Returns the monic gcd as a
    coefficient tuple (length ``degree + 1``), or None if every form is zero.
    """
    mu_power = None
    acc = None
    for form in forms:
        form = [_q(x) for x in form]
        if all(x == 0 for x in form):
            continue
        lead_zeros = next(i for i, x in enumerate(form) if x != 0)
        mu_power = lead_zeros if mu_power is None else min(mu_power, lead_zeros)
        dehom = list(reversed(form[lead_zeros:]))
        acc = _monic(dehom) if acc is None else _poly_gcd(acc, dehom)
    if acc is None:
        return None
    # multiplying by m lowers every power of l, so the zeros go in front
    return (mpq(0),) * mu_power + tuple(reversed(acc))
