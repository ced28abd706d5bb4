"""Aluthge transforms of weighted shifts and their inverses.

For a shift with weights ``α`` the Aluthge transform has weights
``sqrt(α_n α_{n+1})``; the asymmetric version ``AT_q`` uses
``α_n^(1-q) α_{n+1}^q``. Pre-images satisfy ``α_{n+1} = β_n² / α_n`` with
``α_0`` free; when the weights of the pre-image must converge, ``α_0`` is
pinned by the limit of the odd-index partial products.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .extrapolation import Extrapolation, richardson
from .scalar import DomainError, Scalar, as_number, power, sqrt
from .shift_model import WeightedShift, _fmt, weight_limit
from .special import log_gamma

#: Richardson depth and sampling range for the automatic α_0.
EXTRAPOLATION_DEPTH = 6
MIN_EXPONENT = 8
MAX_EXPONENT = 18
#: Stop refining once successive extrapolants agree this well.
TARGET_RESIDUAL = 1e-12
#: Fail if the final residual is worse than this.
ACCEPT_RESIDUAL = 1e-8


class NonConverged(RuntimeError):
    """Extrapolation did not reach the residual target; carries the best estimate."""

    def __init__(self, message: str, estimate: float, residual: float):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual


def aluthge(shift: WeightedShift) -> WeightedShift:
    """Aluthge transform: weights ``sqrt(α_n α_{n+1})``."""
    return WeightedShift(lambda n: sqrt(shift.weight_squared(n) * shift.weight_squared(n + 1)),
                         weight_sq_float=lambda n: math.sqrt(shift.weight_squared_float(n)
                                                             * shift.weight_squared_float(n + 1)),
                         limit=shift.declared_limit, kind="derived", label=f"at({shift.label})",
                         parents=(shift,))


def aluthge_q(shift: WeightedShift, q) -> WeightedShift:
    """Generalized transform with weights ``α_n^(1-q) α_{n+1}^q``, ``0 <= q <= 1``."""
    q = q if isinstance(q, float) else as_number(q)
    if not 0 <= q <= 1:
        raise DomainError(f"q must lie in [0, 1], got {q}")
    qf = float(q)
    if isinstance(q, float):
        def w2(n):
            return shift.weight_squared_float(n) ** (1 - qf) * shift.weight_squared_float(n + 1) ** qf
    else:
        def w2(n):
            return power(shift.weight_squared(n), 1 - q) * power(shift.weight_squared(n + 1), q)
    return WeightedShift(w2,
                         weight_sq_float=lambda n: shift.weight_squared_float(n) ** (1 - qf)
                         * shift.weight_squared_float(n + 1) ** qf,
                         limit=shift.declared_limit, kind="derived",
                         label=f"atq({_fmt(q)}, {shift.label})", parents=(shift,))


def aluthge_iter(shift: WeightedShift, m: int) -> WeightedShift:
    """``m``-fold Aluthge transform; ``m = 0`` returns the input."""
    if m < 0:
        raise ValueError("iteration count must be non-negative")
    for _ in range(m):
        shift = aluthge(shift)
    return shift


@dataclass(frozen=True)
class LimitDiagnostics:
    terms_used: int
    extrapolation_order: int
    residual: float
    target_limit: float
    target_limit_source: str


@dataclass(frozen=True)
class InverseATResult:
    shift: WeightedShift
    alpha0: Scalar
    alpha0_source: str  # "user", "numeric_limit" or "closed_form"
    limit_diagnostics: Optional[LimitDiagnostics] = None


def _preimage_from_alpha0(target: WeightedShift, alpha0, label: str) -> WeightedShift:
    cache = [alpha0 * alpha0]
    lock = threading.Lock()

    def w2(n):
        with lock:
            while len(cache) <= n:
                m = len(cache) - 1
                b2 = target.weight_squared(m)
                cache.append(b2 * b2 / cache[m])
            return cache[n]

    fcache = [float(alpha0) ** 2]

    def w2f(n):
        with lock:
            while len(fcache) <= n:
                m = len(fcache) - 1
                b2 = target.weight_squared_float(m)
                fcache.append(b2 * b2 / fcache[m])
            return fcache[n]

    return WeightedShift(w2, weight_sq_float=w2f, limit=target.declared_limit, kind="derived",
                         label=label, parents=(target,))


def odd_partial_products(target: WeightedShift, max_exponent: int = MAX_EXPONENT):
    """Yield ``(m, c_m)`` at ``m = 2^j`` where ``c_m = α_0 α_{2m+1}``.

    ``c_m = β_0² β_2² ⋯ β_{2m}² / (β_1² β_3² ⋯ β_{2m-1}²)``, i.e. the odd
    pre-image weights with the free parameter removed.
    """
    c = target.weight_squared_float(0)
    m = 0
    for j in range(max_exponent + 1):
        stop = 1 << j
        while m < stop:
            m += 1
            c *= target.weight_squared_float(2 * m) / target.weight_squared_float(2 * m - 1)
        yield m, c


def automatic_alpha0(target: WeightedShift, max_exponent: int = MAX_EXPONENT,
                     depth: int = EXTRAPOLATION_DEPTH) -> tuple[float, LimitDiagnostics]:
    """Initial weight making the pre-image converge.

    With ``λ`` the limit of the target weights the odd pre-image weights tend
    to ``c/α_0`` and the even ones to ``α_0 λ²/c``, where ``c = lim c_m``;
    they agree exactly when ``α_0 = c/λ``.
    """
    lam, source = weight_limit(target)
    lam = float(lam)
    samples: list[float] = []
    best: Optional[Extrapolation] = None
    for j, (m, c) in enumerate(odd_partial_products(target, max_exponent)):
        samples.append(c)
        if j < MIN_EXPONENT:
            continue
        ex = richardson(samples[-(depth + 2):], depth=depth)
        if best is None or ex.residual < best.residual:
            best = Extrapolation(ex.value, ex.residual, m, ex.order)
        if ex.residual <= TARGET_RESIDUAL * abs(ex.value):
            break
    diag = LimitDiagnostics(best.terms_used, best.order, best.residual, lam, source)
    if best.residual > ACCEPT_RESIDUAL * abs(best.value):
        raise NonConverged(f"partial products of {target.label} did not converge "
                           f"(residual {best.residual:.3g})", best.value / lam, best.residual)
    return best.value / lam, diag


def inverse_aluthge(target: WeightedShift, alpha0=None) -> InverseATResult:
    """Shift ``α`` with ``aluthge(α) = target``.

    With ``alpha0`` given the pre-image follows from the recurrence (exact
    for exact input). Without it, ``α_0`` is chosen so the pre-image weights
    converge, using Richardson extrapolation of the odd partial products.
    """
    if alpha0 is not None:
        alpha0 = alpha0 if isinstance(alpha0, float) else as_number(alpha0)
        if not alpha0 > 0:
            raise DomainError("alpha0 must be positive")
        shift = _preimage_from_alpha0(target, alpha0, f"atinv({_fmt(alpha0)}, {target.label})")
        return InverseATResult(shift, alpha0, "user")
    a0, diag = automatic_alpha0(target)
    shift = _preimage_from_alpha0(target, a0, f"atinv({target.label})")
    return InverseATResult(shift, a0, "numeric_limit", diag)


def unrolled_preimage_weight(target: WeightedShift, alpha0, n: int) -> float:
    """``α_n`` from the explicit alternating products (float); test oracle only."""
    b2 = [target.weight_squared_float(i) for i in range(n + 1)]
    a0 = float(alpha0)
    if n == 0:
        return a0
    if n % 2:
        h = (n - 1) // 2
        num = math.prod(b2[2 * j] for j in range(h + 1))
        den = math.prod(b2[2 * j - 1] for j in range(1, h + 1))
        return num / (a0 * den)
    h = n // 2
    num = math.prod(b2[2 * j - 1] for j in range(1, h + 1))
    den = math.prod(b2[2 * j] for j in range(h))
    return a0 * num / den


# --------------------------------------------------------------------------
# closed-form pre-images of the Agler shifts

def agler_preimage_alpha0(k: int) -> float:
    """``Γ(k/2) / (√π Γ((k+1)/2))``."""
    if int(k) != k or k < 2:
        raise DomainError("k must be an integer >= 2")
    half = Fraction(1, 2)
    return math.exp(log_gamma(k * half) - 0.5 * math.log(math.pi) - log_gamma((k + 1) * half))


def agler_preimage_weight(k: int, n: int) -> float:
    """Weight ``n`` of the shift whose Aluthge transform is ``agler(k)``."""
    half = Fraction(1, 2)
    a0 = agler_preimage_alpha0(k)
    if n == 0:
        return a0
    lg = log_gamma
    if n % 2:
        val = (lg(n * half + 1) + lg((k + n) * half)
               - lg((n + 1) * half) - lg((k + n + 1) * half))
        return math.exp(val)
    val = (0.5 * math.log(math.pi) + math.log(k) + lg(n * half + 1) + lg((k + 1) * half)
           + lg((k + n) * half) - math.log(2) - lg((n + 1) * half) - lg(k * half + 1)
           - lg((k + n + 1) * half))
    return a0 * math.exp(val)


def agler_preimage(k: int) -> WeightedShift:
    """Closed-form pre-image of ``agler(k)`` under the Aluthge transform."""
    agler_preimage_alpha0(k)  # validates k

    def w2(n):
        return agler_preimage_weight(k, n) ** 2

    return WeightedShift(w2, weight_sq_float=w2, limit=Fraction(1), kind="closed_form",
                         label=f"agler_preimage({k})")


def agler_preimage_result(k: int) -> InverseATResult:
    shift = agler_preimage(k)
    return InverseATResult(shift, agler_preimage_alpha0(k), "closed_form")


def agler_preimage_alpha0_exact(k: int) -> tuple[Fraction, bool]:
    """Exact initial weight as ``(r, over_pi)`` meaning ``r`` or ``r/π``.

    Even ``k = 2j`` gives ``(j-1)! j! 4^j / ((2j)! π)``; odd ``k = 2j+1``
    gives ``(2j)! / (4^j j!^2)``.
    """
    if int(k) != k or k < 2:
        raise DomainError("k must be an integer >= 2")
    if k % 2 == 0:
        j = k // 2
        return Fraction(math.factorial(j - 1) * math.factorial(j) * 4**j, math.factorial(2 * j)), True
    j = (k - 1) // 2
    return Fraction(math.factorial(2 * j), 4**j * math.factorial(j) ** 2), False


def format_over_pi(r: Fraction, over_pi: bool) -> str:
    if not over_pi:
        return str(r)
    if r.denominator == 1:
        return f"{r.numerator}/π"
    return f"{r.numerator}/({r.denominator}π)"
