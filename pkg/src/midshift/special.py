"""Log-gamma with exact shortcuts at integers and half-integers."""

from __future__ import annotations

import math
from fractions import Fraction

from .scalar import DomainError

_LOG_SQRT_PI = 0.5 * math.log(math.pi)
_EULER_GAMMA = 0.57721566490153286061
# B_2, B_4, ..., B_12
_BERNOULLI = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730]
_SERIES_RADIUS = 0.25
_SERIES_TERMS = 40


def _zeta(k: int, cutoff: int = 12) -> float:
    """Riemann zeta at an integer ``k >= 2`` via Euler-Maclaurin."""
    N = cutoff
    head = math.fsum(n ** -k for n in range(1, N))
    tail = N ** (1 - k) / (k - 1) + 0.5 * N**-k
    rising = k  # k (k+1) ... (k+2j-2)
    for j, b in enumerate(_BERNOULLI, start=1):
        tail += b / math.factorial(2 * j) * rising * N ** (-k - 2 * j + 1)
        rising *= (k + 2 * j - 1) * (k + 2 * j)
    return head + tail


_ZETA = [0.0, 0.0] + [_zeta(k) for k in range(2, _SERIES_TERMS + 1)]


def _log_gamma_1p(z: float) -> float:
    """``ln Γ(1 + z)`` for small ``|z|`` from its Taylor series."""
    terms = [-_EULER_GAMMA * z]
    zk = -z
    for k in range(2, _SERIES_TERMS + 1):
        zk *= -z  # (-z)^k
        terms.append(_ZETA[k] * zk / k)
    return math.fsum(terms)


def log_gamma(x) -> float:
    """``ln Γ(x)`` for ``x > 0``.

    Integer arguments use ``ln((x-1)!)`` and half-integers use
    ``Γ(m + 1/2) = (2m)! √π / (4^m m!)``, both from exact big integers.
    Near the zeros at 1 and 2 a Taylor series keeps the relative error
    small; other arguments go through :func:`math.lgamma`.
    """
    if x <= 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    twice = 2 * Fraction(x) if not isinstance(x, float) else (2 * x if (2 * x).is_integer() else None)
    if twice is not None and (not isinstance(twice, Fraction) or twice.denominator == 1):
        t = int(twice)
        if t % 2 == 0:
            m = t // 2
            if m <= 2:
                return 0.0
            return math.log(math.factorial(m - 1))
        m = (t - 1) // 2
        num = math.factorial(2 * m)
        den = 4**m * math.factorial(m)
        return math.log(num) - math.log(den) + _LOG_SQRT_PI
    x = float(x)
    if abs(x - 1) < _SERIES_RADIUS:
        return _log_gamma_1p(x - 1)
    if abs(x - 2) < _SERIES_RADIUS:
        return _log_gamma_1p(x - 2) + math.log1p(x - 2)
    return math.lgamma(x)


def gamma_ratio(a, b) -> float:
    """``Γ(a) / Γ(b)`` evaluated through logs."""
    return math.exp(log_gamma(a) - log_gamma(b))
