"""Difference calculus on sequences and finite-order sign sweeps.

For a sequence ``a`` the forward difference is ``(∇a)_j = a_j - a_{j+1}`` and

    T_a(n, k) = (∇^n a)_k = sum_i (-1)^i C(n, i) a_{k+i}
    LT_a(n, k) = (∇^n log a)_k

A sequence is *n-monotone* when ``T(n, k) >= 0`` for every ``k`` and
*n-alternating* when ``T(n, k) <= 0``; the ``log_`` variants test ``LT``.
"Completely" properties are certified here only up to an order bound ``N``
and an index bound ``K``.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .scalar import DomainError, Scalar, exact_sum, is_rational, log, log_combination_sign

#: Absolute tolerance for float sign tests.
FLOAT_TOL = 1e-10

DEFAULT_ORDER = 8
DEFAULT_RANGE = 40


class Sequence:
    """Lazily evaluated, memoized sequence indexed by ``j = 0, 1, ...``.

    Parameters
    ----------
    func : callable
        ``func(j)`` returns the ``j``-th term as a Scalar.
    positive : bool
        Declares every term positive; required for logarithmic tests and
        checked on every evaluation.
    log_func : callable, optional
        Exact logarithm of the terms, for sequences defined as ``exp`` of
        something rational. Log tests use it instead of ``log(func(j))``.
    name : str, optional
    """

    def __init__(
        self,
        func: Callable[[int], Scalar],
        positive: bool = False,
        log_func: Optional[Callable[[int], Scalar]] = None,
        name: Optional[str] = None,
    ):
        self._func = func
        self.positive = positive
        self.log_func = log_func
        self.name = name
        self._cache: dict[int, Scalar] = {}
        self._log_cache: dict[int, Scalar] = {}
        self._lock = threading.Lock()

    def __call__(self, j: int) -> Scalar:
        if j < 0:
            raise IndexError(f"negative index {j}")
        try:
            return self._cache[j]
        except KeyError:
            pass
        value = self._func(j)
        if self.positive and not value > 0:
            raise DomainError(f"term {j} of {self.name or 'sequence'} is not positive: {value}")
        with self._lock:
            self._cache.setdefault(j, value)
        return value

    __getitem__ = __call__

    def terms(self, start: int, stop: int) -> list[Scalar]:
        return [self(j) for j in range(start, stop)]

    def log_term(self, j: int) -> Scalar:
        """Exact log if available, else the float log of the term."""
        try:
            return self._log_cache[j]
        except KeyError:
            pass
        value = self.log_func(j) if self.log_func is not None else log(self(j))
        with self._lock:
            self._log_cache.setdefault(j, value)
        return value

    def map(self, f: Callable[[Scalar], Scalar], positive: Optional[bool] = None) -> "Sequence":
        return Sequence(lambda j: f(self(j)), positive=self.positive if positive is None else positive)

    def as_float(self) -> "Sequence":
        """Float-mode view of this sequence."""
        return Sequence(lambda j: float(self(j)), positive=self.positive,
                        log_func=None if self.log_func is None else (lambda j: float(self.log_func(j))),
                        name=self.name)

    def __repr__(self):
        return f"Sequence({self.name or self._func!r})"


def constant(c) -> Sequence:
    return Sequence(lambda j: c, positive=c > 0, name=f"constant({c})")


class Property(enum.Enum):
    MONOTONE = "monotone"
    ALTERNATING = "alternating"
    LOG_MONOTONE = "log_monotone"
    LOG_ALTERNATING = "log_alternating"

    @property
    def is_log(self) -> bool:
        return self in (Property.LOG_MONOTONE, Property.LOG_ALTERNATING)

    @property
    def sign(self) -> int:
        """+1 when differences must be >= 0, -1 when <= 0."""
        return 1 if self in (Property.MONOTONE, Property.LOG_MONOTONE) else -1


@dataclass(frozen=True)
class PropertyVerdict:
    property: str
    order_bound: int
    index_bound: int
    passed: bool
    witness: Optional[tuple] = None
    marginal: bool = False
    float_decided: bool = False

    def __post_init__(self):
        if self.passed == (self.witness is not None):
            raise ValueError("a verdict carries a witness exactly when it fails")

    def __bool__(self):
        return self.passed


def binomial_row(n: int) -> list[int]:
    return [(-1) ** i * math.comb(n, i) for i in range(n + 1)]


def _times(c: int, t):
    return c * t if is_rational(t) else c * float(t)


def forward_diff(seq: Sequence, n: int, k: int) -> Scalar:
    """``(∇^n a)_k``, exact when every term involved is rational."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    return exact_sum(_times(c, seq(k + i)) for i, c in enumerate(binomial_row(n)))


def _log_terms(seq: Sequence, n: int, k: int):
    if not seq.positive and seq.log_func is None:
        raise DomainError("log differences need a sequence declared positive")
    return [seq.log_term(k + i) for i in range(n + 1)]


def log_diff(seq: Sequence, n: int, k: int) -> float:
    """``LT_a(n, k) = (∇^n log a)_k`` as a float."""
    coeffs = binomial_row(n)
    if seq.log_func is not None:
        return float(exact_sum(c * t for c, t in zip(coeffs, _log_terms(seq, n, k))))
    _log_terms(seq, n, k)
    return math.fsum(c * log(seq(k + i)) for i, c in enumerate(coeffs))


def log_diff_sign(seq: Sequence, n: int, k: int) -> tuple[int, bool]:
    """Sign of ``LT_a(n, k)`` and whether it was decided exactly.

    Exact when the terms are rationals or radicals (big-integer power
    comparison) or when the sequence carries rational exact logs.
    """
    coeffs = binomial_row(n)
    if seq.log_func is not None:
        terms = _log_terms(seq, n, k)
        total = exact_sum(c * t for c, t in zip(coeffs, terms))
        return (total > 0) - (total < 0), is_rational(total)
    _log_terms(seq, n, k)
    return log_combination_sign([seq(k + i) for i in range(n + 1)], coeffs)


def _judge(value, sign: int, exact: bool, tol: float = FLOAT_TOL) -> str:
    """Classify ``value`` against the wanted ``sign``: pass, marginal or fail."""
    v = value * sign
    if v >= 0:
        return "pass"
    if not exact and v >= -tol:
        return "marginal"
    return "fail"


def _single_test(seq: Sequence, prop: Property, n: int, k: int, exact: bool):
    """Run one ``(n, k)`` test; return ``(outcome, value, float_decided)``."""
    if prop.is_log:
        if seq.log_func is not None:
            total = exact_sum(c * t for c, t in zip(binomial_row(n), _log_terms(seq, n, k)))
            if exact and is_rational(total):
                outcome = "pass" if total * prop.sign >= 0 else "fail"
                return outcome, float(total), False
            return _judge(float(total), prop.sign, False), float(total), True
        value = log_diff(seq, n, k)
        if exact:
            s, decided = log_diff_sign(seq, n, k)
            if decided:
                return ("pass" if s * prop.sign >= 0 else "fail"), value, False
        return _judge(value, prop.sign, False), value, True
    value = forward_diff(seq, n, k)
    rational = is_rational(value)
    return _judge(value, prop.sign, rational), value, not rational


def test_property(
    seq: Sequence,
    prop: Property | str,
    N: int = DEFAULT_ORDER,
    K: int = DEFAULT_RANGE,
    *,
    orders: Optional[Iterable[int]] = None,
    exact: bool = True,
) -> PropertyVerdict:
    """Sweep ``1 <= n <= N``, ``0 <= k <= K`` and check the sign condition.

    ``orders`` restricts the sweep (``orders=[n]`` tests plain n-monotone
    instead of "monotone up to n"). The witness of a failure is the
    lexicographically first ``(n, k)``. With ``exact=False`` every term is
    converted to float and a value within ``FLOAT_TOL`` of the wrong sign is
    reported as marginal rather than failing.
    """
    prop = Property(prop)
    if N < 1 or K < 0:
        raise ValueError("need N >= 1 and K >= 0")
    if prop.is_log and not (seq.positive or seq.log_func is not None):
        raise DomainError("log properties need a positive sequence")
    work = seq if exact else seq.as_float()
    marginal = False
    float_decided = False
    for n in (range(1, N + 1) if orders is None else orders):
        for k in range(K + 1):
            outcome, value, by_float = _single_test(work, prop, n, k, exact)
            float_decided = float_decided or by_float
            if outcome == "fail":
                return PropertyVerdict(prop.value, N, K, False, (n, k, value),
                                       marginal, float_decided)
            marginal = marginal or outcome == "marginal"
    return PropertyVerdict(prop.value, N, K, True, None, marginal, float_decided)


test_property.__test__ = False  # not a pytest test


def negatively_dominates(a: Sequence, b: Sequence, N: int = DEFAULT_ORDER,
                         K: int = DEFAULT_RANGE) -> PropertyVerdict:
    """Check ``(∇^m a)_j <= (∇^m b)_j`` for ``0 <= m <= N``, ``0 <= j <= K``."""
    marginal = False
    for m in range(N + 1):
        for j in range(K + 1):
            da, db = forward_diff(a, m, j), forward_diff(b, m, j)
            exact = is_rational(da) and is_rational(db)
            gap = exact_sum([db, -da]) if exact else float(db) - float(da)
            outcome = _judge(gap, 1, exact)
            if outcome == "fail":
                return PropertyVerdict("negative_domination", N, K, False, (m, j, gap), marginal,
                                       not exact)
            marginal = marginal or outcome == "marginal"
    return PropertyVerdict("negative_domination", N, K, True, None, marginal)


def linear_combination(coeffs_and_seqs, positive: bool = False) -> Sequence:
    """Termwise ``sum(c * s)`` of sequences."""
    pairs = list(coeffs_and_seqs)
    return Sequence(lambda j: exact_sum(Fraction(c) * s(j) if is_rational(c) else c * s(j)
                                        for c, s in pairs), positive=positive)
