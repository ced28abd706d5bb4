"""Subnormal and MID completions of initial weight segments.

* ``trivial_completion`` realizes two squared weights ``a < b`` by the
  two-atomic measure ``(1 - a/b) δ_0 + (a/b) δ_b``; the result is flat.
* ``agler_subshift_completion`` approximates ``(a, b)`` by two weights of a
  subshift of an Agler shift, which is MID and not flat. The ratio of the
  next gap to the first one is ``(m+n) / (2Δ+m+n)``.
* ``che_three_weight_test`` is a sufficient condition on three weights for
  an MID completion, through the reciprocal (hyperexpansive) shift.
* ``stampfli_completion`` extends three weights by the two-term moment
  recursion of a two-atomic measure.
"""

from __future__ import annotations

import math
import os
import threading
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

from .measures import BergerMeasure, shift_from_measure
from .scalar import DomainError, Scalar, as_number, is_rational, sqrt
from .shift_model import WeightedShift, _fmt, agler, subshift

#: Environment variable overriding the largest Agler index tried.
M_CAP_ENV = "MIDSHIFT_M_CAP"
DEFAULT_M_CAP = 10**6


class ResourceLimitError(RuntimeError):
    """The requested precision needs a search beyond the configured cap."""


class InvalidCompletion(DomainError):
    """A completion recursion produced a non-positive moment."""


def _rational(x) -> Fraction:
    """Rational input; floats are read through their shortest decimal form."""
    if isinstance(x, float):
        return Fraction(repr(x))
    x = as_number(x)
    if not is_rational(x):
        raise DomainError(f"{x} is not rational")
    return Fraction(x)


# --------------------------------------------------------------------------
# gap ratio

GapRatio = namedtuple("GapRatio", "p q r G1 G2 ratio")


def gap_ratio(m: int, n: int, delta: int) -> GapRatio:
    """Consecutive gaps of ``subshift(agler(m), Δ, n)``.

    ``p, q, r`` are its first three squared weights, ``G1 = q - p``,
    ``G2 = r - q``. The ratio ``G2 / G1`` equals both ``(1-q)/(1-2p+q)`` and
    ``(m+n)/(2Δ+m+n)``; the three are computed independently and must agree.
    """
    if m < 2 or n < 0 or delta < 1:
        raise DomainError("gap_ratio needs m >= 2, n >= 0, delta >= 1")
    p = Fraction(n + 1, m + n)
    q = Fraction(n + delta + 1, m + n + delta)
    r = Fraction(n + 2 * delta + 1, m + n + 2 * delta)
    G1, G2 = q - p, r - q
    ratio = G2 / G1
    if ratio != (1 - q) / (1 - 2 * p + q) or ratio != Fraction(m + n, 2 * delta + m + n):
        raise ArithmeticError("gap ratio closed forms disagree")
    return GapRatio(p, q, r, G1, G2, ratio)


def gap_ratio_bound(a, b) -> Fraction:
    """``(1-b)/(1-2a+b)``: the ratio ``G2/G1`` of any completion bracketing ``(a, b)``."""
    a, b = _rational(a), _rational(b)
    return (1 - b) / (1 - 2 * a + b)


# --------------------------------------------------------------------------
# two-weight completions

def _check_pair(a, b):
    if not 0 < a < b < 1:
        raise DomainError(f"need 0 < a < b < 1, got a={a}, b={b}")


def trivial_completion(a, b) -> WeightedShift:
    """Flat completion of squared weights ``a < b`` via ``c0 δ_0 + c1 δ_b``, ``c1 = a/b``."""
    a, b = as_number(a), as_number(b)
    _check_pair(a, b)
    c1 = a / b
    mu = BergerMeasure(((Fraction(0), 1 - c1), (b, c1)))
    shift = shift_from_measure(mu)
    shift.label = f"complete2_trivial({_fmt(a)}, {_fmt(b)})"
    return shift


@dataclass(frozen=True)
class GapCompletion:
    shift: WeightedShift
    m: int
    n: int
    delta: int
    achieved: tuple  # first two squared weights
    third: Fraction  # third squared weight
    target: tuple
    errors: tuple  # (a - achieved[0], achieved[1] - b), both >= 0
    gap_ratio: Fraction
    gap_ratio_bound: Fraction

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "delta": self.delta,
                "achieved": [str(x) for x in self.achieved], "third": str(self.third),
                "target": [str(x) for x in self.target],
                "errors": [float(e) for e in self.errors],
                "gap_ratio": str(self.gap_ratio), "gap_ratio_bound": str(self.gap_ratio_bound),
                "shift": self.shift.label}


def m_cap() -> int:
    raw = os.environ.get(M_CAP_ENV)
    if raw is None:
        return DEFAULT_M_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"{M_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 2:
        raise DomainError(f"{M_CAP_ENV} must be >= 2")
    return cap


def bracket(m: int, a: Fraction, b: Fraction):
    """Indices ``(n, n')`` with ``p_n <= a`` maximal and ``p_{n'} >= b`` minimal.

    ``p_j = (j+1)/(j+m)`` are the squared Agler weights; ``None`` for ``n``
    when even ``p_0 = 1/m`` exceeds ``a``.
    """
    # (n+1)/(m+n) <= a  <=>  n (1-a) <= a m - 1
    num = a * m - 1
    n = None if num < 0 else math.floor(num / (1 - a))
    n2 = max(0, math.ceil((b * m - 1) / (1 - b)))
    return n, n2


def agler_subshift_completion(a, b, eps: float) -> GapCompletion:
    """Non-flat MID completion approximating squared weights ``a < b``.

    Scans ``m = 2, 3, ...``; for each Agler shift ``agler(m)`` takes the
    largest squared weight ``p_n <= a`` and the smallest ``p_{n'} >= b``, and
    accepts the first ``m`` where both errors are at most ``eps`` and the gap
    ratio is at least ``(1-b)/(1-2a+b) - eps``. The completion is
    ``subshift(agler(m), Δ, n)`` with ``Δ = n' - n``: its squared weights
    start ``p_n <= a``, ``p_{n'} >= b``.
    """
    a, b = _rational(a), _rational(b)
    _check_pair(a, b)
    if not eps > 0:
        raise DomainError("eps must be positive")
    eps_q = _rational(eps)
    bound = gap_ratio_bound(a, b)
    cap = m_cap()
    # integer arithmetic: a = an/ad, b = bn/bd, eps = en/ed, bound = rn/rd
    an, ad, bn, bd = a.numerator, a.denominator, b.numerator, b.denominator
    en, ed = eps_q.numerator, eps_q.denominator
    lo = bound - eps_q
    rn, rd = lo.numerator, lo.denominator
    for m in range(2, cap + 1):
        num = an * m - ad
        if num < 0:
            continue
        n = num // (ad - an)
        n2 = -((bd - bn * m) // (bd - bn)) if bn * m > bd else 0
        # a - (n+1)/(m+n) <= eps  and  (n2+1)/(m+n2) - b <= eps
        if (an * (m + n) - ad * (n + 1)) * ed > en * ad * (m + n):
            continue
        if (bd * (n2 + 1) - bn * (m + n2)) * ed > en * bd * (m + n2):
            continue
        delta = n2 - n
        if (m + n) * rd < rn * (2 * delta + m + n):
            continue
        g = gap_ratio(m, n, delta)
        p, q = g.p, g.q
        shift = subshift(agler(m), delta, n)
        return GapCompletion(shift, m, n, delta, (p, q), g.r, (a, b), (a - p, q - b),
                             g.ratio, bound)
    raise ResourceLimitError(f"no Agler index up to {cap} meets eps={eps} "
                             f"(set {M_CAP_ENV} to raise it)")


# --------------------------------------------------------------------------
# three weights

@dataclass(frozen=True)
class CheThreeWeight:
    """Sufficient test for an MID completion of three weights.

    ``value_i`` is ``1/(x1 x2) - 2/x1 + 1`` (condition (i): ``<= 0``);
    condition (ii) is ``lhs_ii <= rhs_ii`` with ``lhs = x2 (1-x1)^2`` and
    ``rhs = (1-x0)(1-x2) x1``, where ``x_j`` are the squared weights.
    A failure is inconclusive: the test is only sufficient.
    """

    squares: tuple
    value_i: Scalar
    cond_i: bool
    lhs_ii: Scalar
    rhs_ii: Scalar
    cond_ii: bool

    @property
    def sufficient(self) -> bool:
        return self.cond_i and self.cond_ii

    def to_dict(self) -> dict:
        f = _fmt
        return {"squares": [f(x) for x in self.squares], "value_i": f(self.value_i),
                "cond_i": self.cond_i, "lhs_ii": f(self.lhs_ii), "rhs_ii": f(self.rhs_ii),
                "cond_ii": self.cond_ii, "sufficient": self.sufficient}


def che_three_weight_test(a0, a1, a2, *, squared: bool = False) -> CheThreeWeight:
    """Check both conditions for weights ``a0 < a1 < a2`` in ``(0, 1)``.

    With ``squared=True`` the arguments are already the squared weights.
    Floats are taken through their decimal form so that the arithmetic is
    exact.
    """
    vals = [x if isinstance(x, float) else as_number(x) for x in (a0, a1, a2)]
    xs = []
    for v in vals:
        if isinstance(v, float):
            v = Fraction(repr(v))
        x = v if squared else v * v
        if not is_rational(x):
            x = float(x)
        xs.append(x)
    x0, x1, x2 = xs
    if not 0 < x0 < x1 < x2 < 1:
        raise DomainError("three-weight test needs 0 < a0 < a1 < a2 < 1")
    v1 = 1 / (x1 * x2) - 2 / x1 + 1
    lhs = x2 * (1 - x1) ** 2
    rhs = (1 - x0) * (1 - x2) * x1
    return CheThreeWeight(tuple(xs), v1, v1 <= 0, lhs, rhs, lhs <= rhs)


# --------------------------------------------------------------------------
# Stampfli

class StampfliShift(WeightedShift):
    """Weighted shift carrying its recursion coefficients.

    ``geometric`` records ``b^2 = ac``; only then is ``norm_bound``
    (``sqrt(c(a+c))``) a bound on the norm. Other segments can exceed it,
    e.g. ``(1/10, 1/5, 1/2)`` has weights tending to about ``0.5577``.
    """

    phi0: Scalar
    phi1: Scalar
    norm_bound: Scalar
    geometric: bool


def stampfli_completion(a, b, c) -> StampfliShift:
    """Subnormal completion of weights ``a < b < c``.

    The moments ``γ_0..γ_3`` determine ``φ_0, φ_1`` with
    ``γ_{n+2} = φ_1 γ_{n+1} + φ_0 γ_n``; in terms of squared weights the
    tail is ``x_{n+1} = φ_1 + φ_0 / x_n``. The weights increase to the square
    root of the larger root of ``t^2 = φ_1 t + φ_0``.
    """
    a, b, c = (x if isinstance(x, float) else as_number(x) for x in (a, b, c))
    if not 0 < a < b < c:
        raise DomainError("Stampfli completion needs 0 < a < b < c")
    xs = []
    for w in (a, b, c):
        x = w * w
        xs.append(x if is_rational(x) else float(x))
    g = [Fraction(1) if is_rational(xs[0]) else 1.0]
    for x in xs:
        g.append(g[-1] * x)
    det = g[1] * g[1] - g[0] * g[2]
    phi1 = (g[1] * g[2] - g[0] * g[3]) / det
    phi0 = (g[1] * g[3] - g[2] * g[2]) / det

    cache = list(xs)
    lock = threading.Lock()

    def w2(n):
        with lock:
            while len(cache) <= n:
                prev = cache[-1]
                nxt = phi1 + phi0 / prev
                if not nxt > 0:
                    raise InvalidCompletion(f"recursion gives non-positive moment at index {len(cache) + 1}")
                cache.append(nxt)
            return cache[n]

    f1, f0 = float(phi1), float(phi0)
    top = (f1 + math.sqrt(f1 * f1 + 4 * f0)) / 2
    shift = StampfliShift(w2, limit=math.sqrt(top),
                          label=f"stampfli({_fmt(a)}, {_fmt(b)}, {_fmt(c)})",
                          kind="prefix_plus_tail", limit_source="closed_form")
    shift.phi0, shift.phi1 = phi0, phi1
    shift.geometric = b * b == a * c if is_rational(b * b) and is_rational(a * c) \
        else math.isclose(float(b) ** 2, float(a) * float(c), rel_tol=1e-12)
    bound2 = c * (a + c)  # squared norm bound, in the weights themselves
    shift.norm_bound = sqrt(bound2) if is_rational(bound2) else math.sqrt(float(bound2))
    w2(64)  # surface an invalid recursion at construction time
    return shift


def stampfli_norm_ok(shift: StampfliShift, K: int = 40) -> bool:
    """Whether every weight on ``[0, K]`` and the limit respect ``norm_bound``.

    Meaningful for geometric segments; see :class:`StampfliShift`.
    """
    bound2 = float(shift.norm_bound) ** 2 * (1 + 1e-12)
    ok = all(shift.weight_squared_float(n) <= bound2 for n in range(K + 1))
    return ok and float(shift.declared_limit) ** 2 <= bound2
