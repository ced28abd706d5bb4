"""Dual-mode scalars.

Every weight, moment and test value in the package is one of

* an exact rational (``int`` or :class:`fractions.Fraction`),
* a :class:`Radical`, i.e. a positive real of the form ``R**(1/d)`` with
  ``R`` rational, which is closed under products, quotients and rational
  powers and therefore keeps Aluthge transforms and Schur powers of
  rational-weight shifts exact,
* a plain ``float``.

Sums of radicals are not representable and degrade to ``float``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, "Radical", float]

#: Bit-size above which exact sign decisions fall back to floating point.
MAX_EXACT_BITS = 10**6


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


def _iroot(n: int, k: int) -> int | None:
    """Return the exact integer ``k``-th root of ``n >= 0`` or ``None``."""
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == n else None


def _prime_factors(d: int) -> list[int]:
    out, p = [], 2
    while p * p <= d:
        if d % p == 0:
            out.append(p)
            while d % p == 0:
                d //= p
        p += 1
    if d > 1:
        out.append(d)
    return out


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class Radical:
    """Positive real number ``base ** (1/degree)`` in lowest terms.

    Instances are only created through :func:`radical`, which reduces the
    degree as far as possible and returns a plain ``Fraction`` when the
    value is rational. Two radicals are therefore equal iff their
    canonical ``(base, degree)`` pairs are equal.
    """

    __slots__ = ("base", "degree")

    def __init__(self, base: Fraction, degree: int):
        self.base = base
        self.degree = degree

    # arithmetic -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Radical):
            return other.base, other.degree
        if isinstance(other, (int, Fraction)):
            return Fraction(other), 1
        return None

    def __mul__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            if isinstance(other, float):
                return float(self) * other
            return NotImplemented
        b, d = lifted
        D = math.lcm(self.degree, d)
        return radical(self.base ** (D // self.degree) * b ** (D // d), D)

    __rmul__ = __mul__

    def __truediv__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            if isinstance(other, float):
                return float(self) / other
            return NotImplemented
        b, d = lifted
        if b == 0:
            raise ZeroDivisionError("division by zero")
        D = math.lcm(self.degree, d)
        return radical(self.base ** (D // self.degree) / b ** (D // d), D)

    def __rtruediv__(self, other):
        lifted = self._lift(other)
        if lifted is None:
            if isinstance(other, float):
                return other / float(self)
            return NotImplemented
        b, d = lifted
        D = math.lcm(self.degree, d)
        return radical(b ** (D // d) / self.base ** (D // self.degree), D)

    def __pow__(self, p):
        if isinstance(p, (int, Fraction)):
            p = Fraction(p)
            return radical(self.base**p.numerator, self.degree * p.denominator)
        return float(self) ** p

    # anything additive leaves the exact world
    def __add__(self, other):
        return float(self) + float(other)

    __radd__ = __add__

    def __sub__(self, other):
        return float(self) - float(other)

    def __rsub__(self, other):
        return float(other) - float(self)

    def __neg__(self):
        return -float(self)

    # comparisons ------------------------------------------------------------
    def _cmp(self, other) -> int:
        lifted = self._lift(other)
        if lifted is None:
            a, b = float(self), float(other)
            return (a > b) - (a < b)
        b, d = lifted
        if b <= 0:
            return 1
        D = math.lcm(self.degree, d)
        lhs = self.base ** (D // self.degree)
        rhs = b ** (D // d)
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        if isinstance(other, Radical):
            return self.base == other.base and self.degree == other.degree
        if isinstance(other, (int, Fraction)):
            return False
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.base, self.degree))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # conversions --------------------------------------------------------------
    def __float__(self):
        return math.exp(self.log())

    def log(self) -> float:
        return _log_fraction(self.base) / self.degree

    def __repr__(self):
        return f"Radical({self.base}, {self.degree})"

    def __str__(self):
        if self.degree == 2:
            return f"sqrt({self.base})"
        return f"({self.base})^(1/{self.degree})"


def radical(base, degree: int = 1) -> Fraction | Radical:
    """Return ``base ** (1/degree)`` in canonical form.

    >>> radical(Fraction(1, 4), 2)
    Fraction(1, 2)
    >>> radical(Fraction(8), 6)
    Radical(2, 2)
    """
    base = _as_fraction(base)
    if base <= 0:
        raise DomainError(f"radicand must be positive, got {base}")
    if degree < 1:
        raise DomainError("degree must be a positive integer")
    num, den = base.numerator, base.denominator
    for p in _prime_factors(degree):
        while degree % p == 0:
            rn = _iroot(num, p)
            if rn is None:
                break
            rd = _iroot(den, p)
            if rd is None:
                break
            num, den, degree = rn, rd, degree // p
    if degree == 1:
        return Fraction(num, den)
    return Radical(Fraction(num, den), degree)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Radical))


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def sqrt(x) -> Scalar:
    """Square root that stays exact on rationals and radicals."""
    if isinstance(x, Radical):
        return x ** Fraction(1, 2)
    if isinstance(x, (int, Fraction)):
        if x == 0:
            return Fraction(0)
        return radical(x, 2)
    if x < 0:
        raise DomainError(f"sqrt of negative number {x}")
    return math.sqrt(x)


def power(x, p) -> Scalar:
    """``x ** p`` for positive ``x``; exact when ``x`` and ``p`` are rational."""
    if isinstance(p, float) and p.is_integer():
        p = int(p)
    if isinstance(p, (int, Fraction)) and is_exact(x):
        if isinstance(x, Radical):
            return x**p
        x = Fraction(x)
        p = Fraction(p)
        if p.denominator == 1:
            return x**p.numerator
        if x <= 0:
            raise DomainError("fractional power of a non-positive number")
        return radical(x**p.numerator, p.denominator)
    return float(x) ** float(p)


def to_float(x) -> float:
    return float(x)


def _log_fraction(q: Fraction) -> float:
    # math.log handles big ints without overflow
    return math.log(q.numerator) - math.log(q.denominator)


def log(x) -> float:
    """Natural logarithm as a float, accurate for huge rationals."""
    if isinstance(x, Radical):
        return x.log()
    if isinstance(x, (int, Fraction)):
        if x <= 0:
            raise DomainError(f"log of non-positive number {x}")
        return _log_fraction(Fraction(x))
    if x <= 0:
        raise DomainError(f"log of non-positive number {x}")
    return math.log(x)


def format_scalar(x) -> str:
    """Stable textual form used in reports."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Radical):
        return str(x)
    return repr(float(x))


def log_combination_sign(values: Sequence, coeffs: Sequence[int]) -> tuple[int, bool]:
    """Sign of ``sum(c * log(v))`` for positive exact ``values``.

    Returns ``(sign, exact)``. ``exact`` is False only when the operands are
    not all exact or the integer comparison would exceed
    :data:`MAX_EXACT_BITS`; the sign is then decided from the float sum.

    A float filter with a conservative error bound settles most cases; the
    remainder are decided by comparing two big integers.
    """
    logs = [log(v) for v in values]
    total = math.fsum(c * lv for c, lv in zip(coeffs, logs))
    if not all(is_exact(v) for v in values):
        return (total > 0) - (total < 0), False

    # each log(num) - log(den) carries a few ulps relative to its operands;
    # 64 ulps per term is far above the actual rounding error
    bound = 0.0
    for c, v in zip(coeffs, values):
        b = v.base if isinstance(v, Radical) else Fraction(v)
        d = v.degree if isinstance(v, Radical) else 1
        bound += abs(c) * (math.log(b.numerator + 1) + math.log(b.denominator + 1) + 1.0) / d
    bound *= 64 * 2.220446049250313e-16
    if abs(total) > bound:
        return (total > 0) - (total < 0), True

    D = 1
    for v in values:
        if isinstance(v, Radical):
            D = math.lcm(D, v.degree)
    bits = 0
    exps = []
    for c, v in zip(coeffs, values):
        b = v.base if isinstance(v, Radical) else Fraction(v)
        d = v.degree if isinstance(v, Radical) else 1
        e = c * (D // d)
        exps.append((b, e))
        bits += abs(e) * (b.numerator.bit_length() + b.denominator.bit_length())
    if bits > MAX_EXACT_BITS:
        return (total > 0) - (total < 0), False
    lhs, rhs = 1, 1
    for b, e in exps:
        if e > 0:
            lhs *= b.numerator**e
            rhs *= b.denominator**e
        elif e < 0:
            rhs *= b.numerator ** (-e)
            lhs *= b.denominator ** (-e)
    return (lhs > rhs) - (lhs < rhs), True


def exact_sum(terms: Iterable) -> Scalar:
    """Sum that stays rational when every term is rational, else float."""
    terms = list(terms)
    if all(is_rational(t) for t in terms):
        return sum((Fraction(t) for t in terms), Fraction(0))
    return math.fsum(float(t) for t in terms)


def as_number(x) -> Scalar:
    """Coerce user input (str, int, Fraction, float, Radical) to a Scalar."""
    if isinstance(x, (Fraction, Radical, float)):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a scalar")
