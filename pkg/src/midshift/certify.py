"""Finite-order certificates for weighted shifts.

Every certificate covers a finite sweep: orders ``1 <= n <= N`` and
starting indices ``0 <= k <= K`` for the difference tests, or Hankel
matrices ``A(n, k)`` for ``0 <= n <= n_max``. A pass is therefore evidence
up to the stated bounds, while a fail carries a concrete witness and is a
genuine disproof.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .scalar import format_scalar, is_rational
from .seq_core import (DEFAULT_ORDER, DEFAULT_RANGE, FLOAT_TOL, Property, PropertyVerdict,
                       log_diff, log_diff_sign, test_property)
from .shift_model import WeightedShift, is_flat, norm_estimate, normalize

DEFAULT_KHYPO = 4
DEFAULT_NMAX = 40
EIG_FLOOR = 1e-10


class InternalConsistencyError(AssertionError):
    """Two computations that must agree by a proven identity did not."""


class ImplicationViolation(InternalConsistencyError):
    """A verdict pattern contradicting a proven implication."""


def _jsonable(x):
    if isinstance(x, float):
        return x
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return format_scalar(x)


@dataclass
class Certificate:
    """Outcome of one certified claim about one shift.

    ``verdict`` is ``pass``, ``fail`` or ``marginal`` (passed except for
    float values within the boundary tolerance). ``witness`` names the first
    failing index pair in lexicographic order together with the offending
    value.
    """

    subject: str
    claim: str
    bounds: dict
    verdict: str
    witness: Optional[dict] = None
    arithmetic_mode: str = "exact"
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in ("pass", "fail", "marginal"):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if (self.verdict == "fail") != (self.witness is not None):
            raise ValueError("a certificate carries a witness exactly when it fails")

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "claim": self.claim,
            "bounds": dict(self.bounds),
            "verdict": self.verdict,
            "witness": None if self.witness is None
            else {k: _jsonable(v) for k, v in self.witness.items()},
            "arithmetic_mode": self.arithmetic_mode,
            "details": {k: _jsonable(v) if not isinstance(v, (dict, list)) else v
                        for k, v in self.details.items()},
            "notes": list(self.notes),
        }


def _verdict_word(v: PropertyVerdict) -> str:
    if not v.passed:
        return "fail"
    return "marginal" if v.marginal else "pass"


def _witness(v: PropertyVerdict, names=("n", "k")) -> Optional[dict]:
    if v.witness is None:
        return None
    n, k, value = v.witness
    return {names[0]: n, names[1]: k, "value": value}


def _mode(exact: bool, float_decided: bool) -> str:
    if not exact:
        return "float"
    return "exact+float" if float_decided else "exact"


def is_contraction(shift: WeightedShift, K: int = DEFAULT_RANGE) -> bool:
    """Whether the norm estimate over ``[0, K]`` (and the declared limit) is at most 1."""
    return norm_estimate(shift, K).value <= 1


# --------------------------------------------------------------------------
# MID

def certify_mid(shift: WeightedShift, N: int = DEFAULT_ORDER, K: int = DEFAULT_RANGE,
                exact: bool = True) -> Certificate:
    """Certify moment infinite divisibility up to order ``N`` on ``[0, K]``.

    The primary test is log complete alternation of the squared weights.
    It is repeated on the moment side (log complete monotonicity at orders
    ``2..N+1``), where ``LT_γ(n+1, k) = -LT_{α²}(n, k)`` forces identical
    outcomes; a disagreement raises :class:`InternalConsistencyError`.
    Shifts that are not contractions are normalized first, which leaves the
    weight test unchanged.
    """
    notes = []
    work = shift
    if not is_contraction(shift, K):
        work = normalize(shift, K)
        notes.append("normalized to a contraction before the moment-side sweep")
    weights = test_property(work.weight_squared_sequence(), Property.LOG_ALTERNATING, N, K,
                            exact=exact)
    moments = test_property(work.moment_sequence(), Property.LOG_MONOTONE, N + 1, K,
                            orders=range(2, N + 2), exact=exact)
    _check_agreement(work, weights, moments)
    return Certificate(
        subject=shift.label, claim="mid", bounds={"N": N, "K": K},
        verdict=_verdict_word(weights), witness=_witness(weights),
        arithmetic_mode=_mode(exact, weights.float_decided or moments.float_decided),
        details={"weights_log_alternating": _verdict_word(weights),
                 "moments_log_monotone": _verdict_word(moments)},
        notes=notes)


def _check_agreement(shift: WeightedShift, weights: PropertyVerdict, moments: PropertyVerdict):
    wn = None if weights.witness is None else weights.witness[:2]
    mn = None if moments.witness is None else (moments.witness[0] - 1, moments.witness[1])
    if wn == mn:
        return
    # a float-decided boundary case may legitimately land on different sides
    for idx in (wn, mn):
        if idx is None:
            continue
        n, k = idx
        a = log_diff(shift.weight_squared_sequence(), n, k)
        g = log_diff(shift.moment_sequence(), n + 1, k)
        if abs(a + g) > FLOAT_TOL * max(1.0, abs(a)) or abs(a) > FLOAT_TOL:
            raise InternalConsistencyError(
                f"weight-side witness {wn} and moment-side witness {mn} disagree for {shift.label}")


# --------------------------------------------------------------------------
# Hankel matrices

@dataclass(frozen=True)
class HankelMatrix:
    """``A(n, k) = (γ_{n+i+j})_{i,j=0..k}``."""

    n: int
    k: int
    entries: tuple

    def entry(self, i: int, j: int):
        return self.entries[i][j]

    @property
    def size(self) -> int:
        return self.k + 1

    @property
    def is_exact(self) -> bool:
        return all(is_rational(x) for row in self.entries for x in row)

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])

    def as_fraction(self) -> list[list[Fraction]]:
        return [[Fraction(x) for x in row] for row in self.entries]


def hankel(shift: WeightedShift, n: int, k: int) -> HankelMatrix:
    if k < 0 or n < 0:
        raise ValueError("need n >= 0 and k >= 0")
    g = [shift.moment(n + i) for i in range(2 * k + 1)]
    return HankelMatrix(n, k, tuple(tuple(g[i + j] for j in range(k + 1)) for i in range(k + 1)))


def bareiss_det(rows: list[list[Fraction]]) -> Fraction:
    """Determinant by fraction-free elimination (exact)."""
    a = [list(r) for r in rows]
    size = len(a)
    sign, prev = 1, Fraction(1)
    for i in range(size - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, size) if a[r][i] != 0), None)
            if swap is None:
                return Fraction(0)
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, size):
            for c in range(i + 1, size):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) / prev
        prev = a[i][i]
    return sign * a[-1][-1]


def ldl_psd(rows: list[list[Fraction]]) -> tuple[bool, Optional[int]]:
    """Exact positive semidefiniteness by symmetric elimination.

    A negative pivot disproves PSD; a zero pivot is allowed only if the rest
    of its row vanishes (a PSD matrix with a zero diagonal entry has that
    whole row zero), after which the index is skipped. Returns
    ``(is_psd, failing_pivot)``.
    """
    a = [list(r) for r in rows]
    size = len(a)
    for i in range(size):
        d = a[i][i]
        if d < 0:
            return False, i
        if d == 0:
            if any(a[i][j] != 0 for j in range(i + 1, size)):
                return False, i
            continue
        for r in range(i + 1, size):
            f = a[r][i] / d
            if f:
                for c in range(i + 1, size):
                    a[r][c] -= f * a[i][c]
    return True, None


def principal_minors_psd(rows: list[list[Fraction]]) -> bool:
    """PSD via nonnegativity of every principal minor (exponential; oracle use)."""
    from itertools import combinations
    size = len(rows)
    for r in range(1, size + 1):
        for idx in combinations(range(size), r):
            if bareiss_det([[rows[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def float_psd(a: np.ndarray) -> tuple[str, float]:
    """``(outcome, min eigenvalue)`` with the floor ``-EIG_FLOOR * ||A||``."""
    eig = np.linalg.eigvalsh(a)
    scale = float(np.max(np.abs(eig))) if eig.size else 0.0
    lo = float(eig[0])
    if lo >= 0:
        return "pass", lo
    if lo >= -EIG_FLOOR * scale:
        return "marginal", lo
    return "fail", lo


def certify_k_hyponormal(shift: WeightedShift, k: int = DEFAULT_KHYPO, n_max: int = DEFAULT_NMAX,
                         exact: bool = True) -> Certificate:
    """Positive semidefiniteness of ``A(n, k)`` for ``0 <= n <= n_max``."""
    if k < 1:
        raise ValueError("k-hyponormality needs k >= 1")
    marginal = False
    used_float = not exact
    for n in range(n_max + 1):
        h = hankel(shift, n, k)
        if exact and h.is_exact:
            rows = h.as_fraction()
            ok, pivot = ldl_psd(rows)
            if not ok:
                return Certificate(shift.label, f"k_hyponormal({k})", {"k": k, "n_max": n_max},
                                   "fail", {"n": n, "k": k, "value": bareiss_det(rows), "pivot": pivot},
                                   _mode(exact, used_float))
            continue
        used_float = True
        outcome, lo = float_psd(h.as_float())
        if outcome == "fail":
            return Certificate(shift.label, f"k_hyponormal({k})", {"k": k, "n_max": n_max},
                               "fail", {"n": n, "k": k, "value": lo},
                               _mode(exact, used_float), details={"witness_kind": "min_eigenvalue"})
        marginal = marginal or outcome == "marginal"
    return Certificate(shift.label, f"k_hyponormal({k})", {"k": k, "n_max": n_max},
                       "marginal" if marginal else "pass", None, _mode(exact, used_float))


# --------------------------------------------------------------------------
# moment-side difference tests

def _moment_certificate(shift, claim, prop, N, K, exact, notes=()) -> Certificate:
    v = test_property(shift.moment_sequence(), prop, N, K, exact=exact)
    return Certificate(shift.label, claim, {"N": N, "K": K}, _verdict_word(v), _witness(v),
                       _mode(exact, v.float_decided), notes=list(notes))


def certify_n_contractive(shift: WeightedShift, N: int = DEFAULT_ORDER, K: int = DEFAULT_RANGE,
                          exact: bool = True) -> Certificate:
    """``T_γ(n, k) >= 0`` for ``n <= N``, ``k <= K``."""
    notes = []
    if not is_contraction(shift, K):
        msg = f"{shift.label} is not a contraction; n-contractivity is computed anyway"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    return _moment_certificate(shift, f"n_contractive({N})", Property.MONOTONE, N, K, exact, notes)


def certify_che(shift: WeightedShift, N: int = DEFAULT_ORDER, K: int = DEFAULT_RANGE,
                exact: bool = True) -> Certificate:
    """Complete hyperexpansivity: ``T_γ(n, k) <= 0`` for ``1 <= n <= N``."""
    return _moment_certificate(shift, "che", Property.ALTERNATING, N, K, exact)


# --------------------------------------------------------------------------
# implication diagram

@dataclass
class DiagramReport:
    subject: str
    bounds: dict
    weights_CA: PropertyVerdict
    weights_logCA: PropertyVerdict
    moments_logCM: PropertyVerdict
    moments_CM: PropertyVerdict
    contraction: bool
    extension: int

    def verdicts(self) -> dict:
        return {"weights_CA": self.weights_CA.passed, "weights_logCA": self.weights_logCA.passed,
                "moments_logCM": self.moments_logCM.passed, "moments_CM": self.moments_CM.passed}

    def to_dict(self) -> dict:
        out = {"subject": self.subject, "bounds": dict(self.bounds),
               "contraction": self.contraction, "extension": self.extension}
        for name in ("weights_CA", "weights_logCA", "moments_logCM", "moments_CM"):
            v = getattr(self, name)
            out[name] = {"verdict": _verdict_word(v),
                         "witness": None if v.witness is None else
                         {"n": v.witness[0], "k": v.witness[1], "value": _jsonable(v.witness[2])}}
        return out


def _strict_pass(v: PropertyVerdict) -> bool:
    return v.passed and not v.marginal


def diagram_check(shift: WeightedShift, N: int = DEFAULT_ORDER, K: int = DEFAULT_RANGE,
                  exact: bool = True) -> DiagramReport:
    """Run the four sequence conditions and check the implications among them.

    Reported verdicts cover orders up to ``N`` on ``[0, K]`` (moment log
    monotonicity up to ``N + 1``). Finite-order implications need the
    antecedent on a longer window, since a consequent difference at index
    ``k`` involves antecedent terms up to about ``k + N + 2``; antecedents
    are therefore also swept on ``[0, K + N + 2]``:

    * weights² CA  =>  weights² log CA;
    * weights² log CA  <=>  moments log CM at orders ``2..N+1`` (pointwise);
    * for contractions, moments log CM  =>  moments CM.

    A violation raises :class:`ImplicationViolation`.
    """
    M = N + 2
    w2 = shift.weight_squared_sequence()
    gam = shift.moment_sequence()
    contraction = is_contraction(shift, K + M + N + 1)

    ca_ext = test_property(w2, Property.ALTERNATING, N, K + M, exact=exact)
    ca = test_property(w2, Property.ALTERNATING, N, K, exact=exact)
    logca = test_property(w2, Property.LOG_ALTERNATING, N, K, exact=exact)
    logcm = test_property(gam, Property.LOG_MONOTONE, N + 1, K, exact=exact)
    logcm_hi = test_property(gam, Property.LOG_MONOTONE, N + 1, K, orders=range(2, N + 2),
                             exact=exact)
    cm = test_property(gam, Property.MONOTONE, N, K, exact=exact)

    label = shift.label
    if _strict_pass(ca_ext) and not logca.passed:
        raise ImplicationViolation(f"{label}: weights² CA on [0, {K + M}] but log CA fails at "
                                   f"{logca.witness[:2]}")
    _check_agreement(shift, logca, logcm_hi)
    if contraction and not cm.passed:
        logcm_ext = test_property(gam, Property.LOG_MONOTONE, N, K + M, exact=exact)
        if _strict_pass(logcm_ext):
            raise ImplicationViolation(f"{label}: moments log CM on [0, {K + M}] but CM fails at "
                                       f"{cm.witness[:2]}")
    return DiagramReport(label, {"N": N, "K": K}, ca, logca, logcm, cm, contraction, M)


# --------------------------------------------------------------------------
# flatness rigidity

@dataclass
class FlatnessReport:
    subject: str
    bounds: dict
    mid: Certificate
    zeros: list  # (n, k) with LT_α(n, k) = 0
    flat: bool
    alarm: bool

    def to_dict(self) -> dict:
        return {"subject": self.subject, "bounds": dict(self.bounds),
                "mid_verdict": self.mid.verdict, "zeros": [list(z) for z in self.zeros],
                "flat": self.flat, "alarm": self.alarm}


def log_weight_zeros(shift: WeightedShift, N: int, K: int, tol: float = 1e-12,
                     exact: bool = True) -> list[tuple[int, int]]:
    """Index pairs where ``LT_α(n, k)`` vanishes (exactly, or within ``tol``)."""
    seq = shift.weight_squared_sequence()
    zeros = []
    for n in range(1, N + 1):
        for k in range(K + 1):
            if exact:
                s, decided = log_diff_sign(seq, n, k)
                if decided:
                    if s == 0:
                        zeros.append((n, k))
                    continue
            # LT_α = LT_{α²} / 2
            if abs(log_diff(seq, n, k)) / 2 <= tol:
                zeros.append((n, k))
    return zeros


def flatness_rigidity_check(shift: WeightedShift, N: int = DEFAULT_ORDER, K: int = 30,
                            tol: float = 1e-12, exact: bool = True) -> FlatnessReport:
    """A certified MID shift with a vanishing ``LT_α(n, k)`` must be flat.

    The report raises ``alarm`` for MID + zero + not flat, a pattern that
    contradicts the rigidity theorem and therefore signals a bug.
    """
    mid = certify_mid(shift, N, K, exact=exact)
    zeros = log_weight_zeros(shift, N, K, tol, exact)
    flat_tol = 0 if exact and shift.is_exact else math.sqrt(tol)
    flat = is_flat(shift, K + N, tol=flat_tol)
    alarm = mid.verdict == "pass" and bool(zeros) and not flat
    return FlatnessReport(shift.label, {"N": N, "K": K, "tol": tol}, mid, zeros, flat, alarm)
