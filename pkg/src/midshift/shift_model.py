"""Weighted shifts, their moments, and shift-to-shift constructions.

A :class:`WeightedShift` is defined by its squared weights ``α_n²``; the
weights themselves are exact square roots (see :mod:`midshift.scalar`).
Each shift also carries a float evaluator for the squared weights so that
long numeric scans (limits, extrapolation) avoid exact arithmetic.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .scalar import DomainError, Radical, Scalar, as_number, is_exact, power, sqrt
from .seq_core import Sequence

#: Window and threshold of the numeric convergence probe.
PROBE_WINDOW = 32
PROBE_THRESHOLD = 1e-12


class LimitUnavailable(RuntimeError):
    """No weight limit is declared and none could be detected numerically."""


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Radical):
        if x.degree == 2:
            return f"sqrt({_fmt(x.base)})"
        return f"({_fmt(x.base)})^(1/{x.degree})"
    return repr(x)


class WeightedShift:
    """Unilateral weighted shift ``W_α e_j = α_j e_{j+1}``.

    Parameters
    ----------
    weight_sq : callable
        ``n -> α_n²`` as a Scalar. Must be positive.
    weight_sq_float : callable, optional
        Fast float version of ``weight_sq``; defaults to ``float(weight_sq(n))``.
    limit : Scalar, optional
        Declared limit of the weights (not squared).
    label : str
        Expression describing the shift; doubles as its derivation tree.
    kind : str
        One of ``closed_form``, ``prefix_plus_tail``, ``measure_derived``
        or ``derived``.
    log_weight_sq : callable, optional
        Exact ``log(α_n²)`` for shifts defined through logarithms.
    """

    def __init__(
        self,
        weight_sq: Callable[[int], Scalar],
        *,
        weight_sq_float: Optional[Callable[[int], float]] = None,
        limit: Optional[Scalar] = None,
        label: str = "shift",
        kind: str = "closed_form",
        parents: tuple = (),
        log_weight_sq: Optional[Callable[[int], Scalar]] = None,
        limit_source: str = "declared",
    ):
        self._w2 = Sequence(weight_sq, positive=True, log_func=log_weight_sq, name=label)
        self._w2f = weight_sq_float
        self.declared_limit = limit
        self.limit_source = limit_source if limit is not None else None
        self.label = label
        self.kind = kind
        self.parents = parents
        self._moments: list[Scalar] = [Fraction(1)]
        self._log_moments: list[Scalar] = [Fraction(0)]
        self._lock = threading.Lock()

    # weights ------------------------------------------------------------
    def weight_squared(self, n: int) -> Scalar:
        return self._w2(n)

    def weight(self, n: int) -> Scalar:
        return sqrt(self._w2(n))

    def weight_squared_float(self, n: int) -> float:
        if self._w2f is not None:
            return self._w2f(n)
        return float(self._w2(n))

    def weights(self, count: int, start: int = 0) -> list[Scalar]:
        return [self.weight(n) for n in range(start, start + count)]

    def weight_sequence(self) -> Sequence:
        return Sequence(self.weight, positive=True, name=f"weights of {self.label}",
                        log_func=None if self._w2.log_func is None
                        else (lambda n: self._w2.log_func(n) / 2))

    def weight_squared_sequence(self) -> Sequence:
        return self._w2

    # moments ----------------------------------------------------------------
    def moment(self, n: int) -> Scalar:
        """``γ_n = α_0² ⋯ α_{n-1}²`` with memoized prefix products."""
        if n < 0:
            raise IndexError(n)
        with self._lock:
            while len(self._moments) <= n:
                m = len(self._moments)
                self._moments.append(self._moments[-1] * self._w2(m - 1))
            return self._moments[n]

    def log_moment(self, n: int) -> Scalar:
        """Exact ``log γ_n`` for shifts with exact log weights."""
        with self._lock:
            while len(self._log_moments) <= n:
                m = len(self._log_moments)
                self._log_moments.append(self._log_moments[-1] + self._w2.log_func(m - 1))
            return self._log_moments[n]

    def moment_sequence(self) -> Sequence:
        return Sequence(self.moment, positive=True, name=f"moments of {self.label}",
                        log_func=None if self._w2.log_func is None else self.log_moment)

    @property
    def is_exact(self) -> bool:
        return is_exact(self._w2(0))

    def __repr__(self):
        return f"WeightedShift({self.label})"

    def __str__(self):
        return self.label


# --------------------------------------------------------------------------
# catalog

def agler(k: int) -> WeightedShift:
    """Agler shift ``A_k`` with weights ``sqrt((n+1)/(n+k))``, ``k >= 2``."""
    if int(k) != k or k < 2:
        raise DomainError(f"agler(k) needs an integer k >= 2, got {k}")
    k = int(k)
    return WeightedShift(lambda n: Fraction(n + 1, n + k),
                         weight_sq_float=lambda n: (n + 1) / (n + k),
                         limit=Fraction(1), label="bergman" if k == 2 else f"agler({k})")


def bergman() -> WeightedShift:
    return agler(2)


def agler_family(s) -> WeightedShift:
    """Shift with squared weights ``(n+1)/(n+s)``, real ``s > 1``.

    Its Berger measure is ``(s-1)(1-t)^(s-2) dt`` on ``[0, 1]``.
    """
    s = as_number(s)
    if not s > 1:
        raise DomainError(f"agler_family(s) needs s > 1, got {s}")
    sf = float(s)
    if isinstance(s, Fraction):
        w2 = lambda n: (n + 1) / (n + s)
    else:
        w2 = lambda n: (n + 1) / (n + sf)
    return WeightedShift(w2, weight_sq_float=lambda n: (n + 1) / (n + sf),
                         limit=Fraction(1), label=f"agler_family({_fmt(s)})")


def dirichlet() -> WeightedShift:
    return WeightedShift(lambda n: Fraction(n + 2, n + 1),
                         weight_sq_float=lambda n: (n + 2) / (n + 1),
                         limit=Fraction(1), label="dirichlet")


def geom2() -> WeightedShift:
    """Weights ``sqrt((2^(n+2) - 2) / (2^(n+2) - 1))``."""
    def w2(n):
        p = 1 << (n + 2)
        return Fraction(p - 2, p - 1)

    def w2f(n):
        if n > 1000:
            return 1.0
        p = 2.0 ** (n + 2)
        return (p - 2) / (p - 1)

    return WeightedShift(w2, weight_sq_float=w2f, limit=Fraction(1), label="geom2")


def unweighted() -> WeightedShift:
    return WeightedShift(lambda n: Fraction(1), weight_sq_float=lambda n: 1.0,
                         limit=Fraction(1), label="unweighted")


def constant(c) -> WeightedShift:
    """Every weight equal to ``c > 0``."""
    c = as_number(c)
    if not c > 0:
        raise DomainError("constant(c) needs c > 0")
    c2 = c * c
    c2f = float(c) ** 2
    return WeightedShift(lambda n: c2, weight_sq_float=lambda n: c2f, limit=c,
                         label=f"constant({_fmt(c)})")


def from_weights(weights: Callable[[int], Scalar], label: str = "weights",
                 limit: Optional[Scalar] = None) -> WeightedShift:
    """Shift from a weight rule ``n -> α_n`` (not squared)."""
    return WeightedShift(lambda n: _square(weights(n)), limit=limit, label=label)


def from_prefix(prefix: list, tail: WeightedShift, label: Optional[str] = None) -> WeightedShift:
    """Shift with the given leading weights followed by the weights of ``tail``."""
    sq = [_square(as_number(w)) for w in prefix]
    m = len(sq)
    return WeightedShift(lambda n: sq[n] if n < m else tail.weight_squared(n - m),
                         weight_sq_float=lambda n: float(sq[n]) if n < m else tail.weight_squared_float(n - m),
                         limit=tail.declared_limit, kind="prefix_plus_tail",
                         label=label or f"prefix({', '.join(_fmt(w) for w in prefix)}; {tail.label})",
                         parents=(tail,))


def from_log_weight_squared(log_w2: Callable[[int], Scalar], label: str,
                            limit: Optional[Scalar] = None) -> WeightedShift:
    """Shift with ``α_n² = exp(log_w2(n))``; log tests use ``log_w2`` exactly."""
    return WeightedShift(lambda n: math.exp(float(log_w2(n))), limit=limit, label=label,
                         log_weight_sq=log_w2)


def _square(x):
    return x * x


def moments(shift: WeightedShift) -> Sequence:
    """Moment sequence ``γ_0 = 1``, ``γ_n = α_0² ⋯ α_{n-1}²``."""
    return shift.moment_sequence()


def shift_from_moments(gamma, label: str = "moments", limit: Optional[Scalar] = None,
                       kind: str = "closed_form") -> WeightedShift:
    """Inverse of :func:`moments`: ``α_n² = γ_{n+1} / γ_n``."""
    g = gamma if isinstance(gamma, Sequence) else Sequence(gamma)
    if g(0) != 1:
        raise DomainError(f"moment sequences start with 1, got {g(0)}")

    def w2(n):
        a, b = g(n), g(n + 1)
        if not (a > 0 and b > 0):
            raise DomainError(f"non-positive moment at index {n if not a > 0 else n + 1}")
        return b / a

    return WeightedShift(w2, limit=limit, label=label, kind=kind)


# --------------------------------------------------------------------------
# constructions

def _derived_limit(shift: WeightedShift, f):
    return None if shift.declared_limit is None else f(shift.declared_limit)


def scale(shift: WeightedShift, c) -> WeightedShift:
    """Multiply every weight by ``c > 0``."""
    c = as_number(c)
    if not c > 0:
        raise DomainError("scale factor must be positive")
    if c == 1:
        return shift
    c2 = c * c
    c2f = float(c) ** 2
    return WeightedShift(lambda n: shift.weight_squared(n) * c2,
                         weight_sq_float=lambda n: shift.weight_squared_float(n) * c2f,
                         limit=_derived_limit(shift, lambda L: L * c), kind="derived",
                         label=f"scale({_fmt(c)}, {shift.label})", parents=(shift,))


@dataclass(frozen=True)
class NormEstimate:
    value: Scalar
    estimated: bool  # True when no declared limit bounds the tail

    def __float__(self):
        return float(self.value)


def norm_estimate(shift: WeightedShift, K: int = 40) -> NormEstimate:
    """``max(α_0, ..., α_K, declared limit)``.

    Flagged as an estimate when no limit is declared, since the tail past
    ``K`` is then unconstrained.
    """
    best = shift.weight(0)
    for n in range(1, K + 1):
        w = shift.weight(n)
        if w > best:
            best = w
    L = shift.declared_limit
    if L is None:
        return NormEstimate(best, True)
    return NormEstimate(L if L > best else best, False)


def normalize(shift: WeightedShift, K: int = 40) -> WeightedShift:
    """Divide by the norm estimate so the shift is a contraction on ``[0, K]``."""
    norm = norm_estimate(shift, K).value
    if norm == 1:
        return shift
    out = scale(shift, 1 / norm)
    out.label = f"normalize({shift.label})"
    return out


def schur_product(s1: WeightedShift, s2: WeightedShift) -> WeightedShift:
    """Weights ``α_n β_n``."""
    lim = None
    if s1.declared_limit is not None and s2.declared_limit is not None:
        lim = s1.declared_limit * s2.declared_limit
    return WeightedShift(lambda n: s1.weight_squared(n) * s2.weight_squared(n),
                         weight_sq_float=lambda n: s1.weight_squared_float(n) * s2.weight_squared_float(n),
                         limit=lim, kind="derived", label=f"schur({s1.label}, {s2.label})",
                         parents=(s1, s2))


def schur_power(shift: WeightedShift, p) -> WeightedShift:
    """Weights ``α_n^p``; exact for rational ``p``, float otherwise."""
    p = as_number(p) if not isinstance(p, float) else p
    if not p > 0:
        raise DomainError("Schur power needs p > 0")
    pf = float(p)
    if isinstance(p, float):
        w2 = lambda n: shift.weight_squared_float(n) ** pf
    else:
        w2 = lambda n: power(shift.weight_squared(n), p)
    return WeightedShift(w2, weight_sq_float=lambda n: shift.weight_squared_float(n) ** pf,
                         limit=_derived_limit(shift, lambda L: power(L, p)), kind="derived",
                         label=f"power({_fmt(p)}, {shift.label})", parents=(shift,))


def quotient_shift(shift: WeightedShift, N: int = 1) -> WeightedShift:
    """Weights ``α_n / α_{n+N}``."""
    if int(N) != N or N < 1:
        raise DomainError("quotient spacing N must be a positive integer")
    N = int(N)
    lim = None
    if shift.declared_limit is not None and shift.declared_limit > 0:
        lim = Fraction(1)
    return WeightedShift(lambda n: shift.weight_squared(n) / shift.weight_squared(n + N),
                         weight_sq_float=lambda n: shift.weight_squared_float(n) / shift.weight_squared_float(n + N),
                         limit=lim, kind="derived", label=f"quotient({N}, {shift.label})",
                         parents=(shift,))


def reconstruct_from_quotient(b: WeightedShift, a0) -> WeightedShift:
    """Shift ``a`` with ``a_n = a_0 / (b_0 ⋯ b_{n-1})``, so ``quotient_shift(a, 1) = b``."""
    a0 = as_number(a0) if not isinstance(a0, float) else a0
    if not a0 > 0:
        raise DomainError("a0 must be positive")
    cache = [a0 * a0]
    lock = threading.Lock()

    def w2(n):
        with lock:
            while len(cache) <= n:
                cache.append(cache[-1] / b.weight_squared(len(cache) - 1))
            return cache[n]

    return WeightedShift(w2, kind="derived", label=f"unquotient({_fmt(a0)}, {b.label})",
                         parents=(b,))


def subshift(shift: WeightedShift, p: int, k: int = 0) -> WeightedShift:
    """``p``-subshift with weights ``α_{pn+k}``."""
    if int(p) != p or p < 1 or int(k) != k or k < 0:
        raise DomainError("subshift needs integers p >= 1, k >= 0")
    p, k = int(p), int(k)
    if p == 1 and k == 0:
        return shift
    return WeightedShift(lambda n: shift.weight_squared(p * n + k),
                         weight_sq_float=lambda n: shift.weight_squared_float(p * n + k),
                         limit=shift.declared_limit, kind="derived",
                         label=f"subshift({p}, {k}, {shift.label})", parents=(shift,))


def backstep(shift: WeightedShift, alpha_new) -> WeightedShift:
    """Prefix one weight: ``α'_0 = alpha_new``, ``α'_{n+1} = α_n``."""
    alpha_new = as_number(alpha_new) if not isinstance(alpha_new, float) else alpha_new
    if not alpha_new > 0:
        raise DomainError("back-step weight must be positive")
    a2 = alpha_new * alpha_new
    return WeightedShift(lambda n: a2 if n == 0 else shift.weight_squared(n - 1),
                         weight_sq_float=lambda n: float(a2) if n == 0 else shift.weight_squared_float(n - 1),
                         limit=shift.declared_limit, kind="derived",
                         label=f"backstep({_fmt(alpha_new)}, {shift.label})", parents=(shift,))


def reciprocal(shift: WeightedShift) -> WeightedShift:
    """Weights ``1 / α_n``."""
    lim = _derived_limit(shift, lambda L: 1 / L)
    return WeightedShift(lambda n: 1 / shift.weight_squared(n),
                         weight_sq_float=lambda n: 1.0 / shift.weight_squared_float(n),
                         limit=lim, kind="derived", label=f"reciprocal({shift.label})",
                         parents=(shift,))


def is_flat(shift: WeightedShift, K: int = 40, tol: float = 0) -> bool:
    """``α_0 <= α_1 = α_2 = ... = α_K`` (exactly when ``tol == 0``)."""
    if K < 2:
        raise ValueError("flatness needs K >= 2")
    if tol == 0:
        a1 = shift.weight_squared(1)
        if shift.weight_squared(0) > a1:
            return False
        return all(shift.weight_squared(j) == a1 for j in range(2, K + 1))
    a1 = float(shift.weight(1))
    if float(shift.weight(0)) > a1 + tol:
        return False
    return all(abs(float(shift.weight(j)) - a1) <= tol for j in range(2, K + 1))


def probe_limit(shift: WeightedShift, max_exponent: int = 22) -> float:
    """Numerically detect the limit of the weights.

    Looks at windows of ``PROBE_WINDOW`` consecutive weights starting at
    ``2^j`` and accepts the first window whose successive differences all
    fall below ``PROBE_THRESHOLD``.
    """
    for j in range(4, max_exponent + 1):
        start = 1 << j
        w = [math.sqrt(shift.weight_squared_float(n)) for n in range(start, start + PROBE_WINDOW + 1)]
        if max(abs(b - a) for a, b in zip(w, w[1:])) < PROBE_THRESHOLD:
            return w[-1]
    raise LimitUnavailable(f"no weight limit detected for {shift.label}")


def weight_limit(shift: WeightedShift) -> tuple[Scalar, str]:
    """Declared limit if present, else the probed one; returns ``(L, source)``."""
    if shift.declared_limit is not None:
        return shift.declared_limit, "declared"
    return probe_limit(shift), "numeric"


CATALOG = {
    "bergman": bergman,
    "dirichlet": dirichlet,
    "geom2": geom2,
    "unweighted": unweighted,
}
