"""Berger measures on [0, 1] and the shifts they define.

A measure is a finite list of atoms plus at most one density from a small
catalog:

* ``uniform(c)``: ``c`` times Lebesgue measure on ``[0, 1]``;
* ``agler_family(s)``: ``(s-1)(1-t)^(s-2) dt`` on ``[0, 1]``, ``s > 1``,
  optionally scaled by a mass coefficient.

Power moments are evaluated in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .scalar import DomainError, Scalar, as_number, is_rational, sqrt
from .shift_model import WeightedShift, _fmt, shift_from_moments
from .special import log_gamma

MASS_TOL = 1e-12


@dataclass(frozen=True)
class Density:
    kind: str  # "uniform" or "agler_family"
    param: Scalar = Fraction(1)  # c for uniform, s for agler_family
    mass: Scalar = Fraction(1)  # scaling of agler_family (uniform keeps c)

    def __post_init__(self):
        if self.kind not in ("uniform", "agler_family"):
            raise DomainError(f"unknown density {self.kind!r}")
        if self.kind == "agler_family" and not self.param > 1:
            raise DomainError("agler_family density needs s > 1")
        if not self.total_mass() > 0:
            raise DomainError("density mass must be positive")

    def total_mass(self) -> Scalar:
        return self.param if self.kind == "uniform" else self.mass

    def moment(self, n: int) -> Scalar:
        if self.kind == "uniform":
            return self.param / (n + 1) if is_rational(self.param) else float(self.param) / (n + 1)
        s = self.param
        if is_rational(s) and is_rational(self.mass):
            # (s-1) B(n+1, s-1) = prod_{i<n} (i+1)/(s+i)
            out = Fraction(self.mass)
            for i in range(n):
                out *= Fraction(i + 1) / (s + i)
            return out
        s = float(s)
        lg = log_gamma(n + 1) + log_gamma(s) - log_gamma(n + s)
        return float(self.mass) * math.exp(lg)

    def __str__(self):
        if self.kind == "uniform":
            return f"uniform({_fmt(self.param)})"
        if self.mass == 1:
            return f"agler_family({_fmt(self.param)})"
        return f"agler_family({_fmt(self.param)}, {_fmt(self.mass)})"


def uniform(c=1) -> Density:
    return Density("uniform", as_number(c))


def agler_density(s, mass=1) -> Density:
    return Density("agler_family", as_number(s), as_number(mass))


@dataclass(frozen=True)
class BergerMeasure:
    """Probability measure ``sum m_i δ_{t_i} + density`` on ``[0, 1]``."""

    atoms: tuple = ()
    density: Optional[Density] = None
    check_mass: bool = field(default=True, compare=False)

    def __post_init__(self):
        atoms = tuple((as_number(t), as_number(m)) for t, m in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        for t, m in atoms:
            if not 0 <= t <= 1:
                raise DomainError(f"atom location {t} outside [0, 1]")
            if not m > 0:
                raise DomainError(f"atom mass {m} must be positive")
        if self.check_mass:
            total = self.total_mass()
            if is_rational(total):
                if total != 1:
                    raise DomainError(f"total mass is {total}, expected 1")
            elif abs(float(total) - 1) > MASS_TOL:
                raise DomainError(f"total mass is {float(total)}, expected 1")

    def total_mass(self) -> Scalar:
        total = sum((m for _, m in self.atoms), Fraction(0))
        if self.density is not None:
            total = total + self.density.total_mass()
        return total

    def support_max(self) -> Scalar:
        top = max((t for t, _ in self.atoms), default=Fraction(0))
        return Fraction(1) if self.density is not None else top

    def __str__(self):
        parts = []
        if self.atoms:
            parts.append("atoms[" + ", ".join(f"({_fmt(t)}, {_fmt(m)})" for t, m in self.atoms) + "]")
        if self.density is not None:
            parts.append(f"density[{self.density}]")
        return " + ".join(parts)


def two_atomic(c1, r) -> BergerMeasure:
    """``(1 - c1) δ_0 + c1 δ_r``."""
    c1, r = as_number(c1), as_number(r)
    c0 = 1 - c1
    atoms = ((Fraction(0), c0), (r, c1)) if c0 > 0 else ((r, c1),)
    return BergerMeasure(atoms)


def moment_of_measure(mu: BergerMeasure, n: int) -> Scalar:
    """``∫ t^n dμ(t)``, exact for rational data."""
    if n < 0:
        raise ValueError("moment order must be non-negative")
    total: Scalar = Fraction(0)
    for t, m in mu.atoms:
        total = total + m * t**n
    if mu.density is not None:
        total = total + mu.density.moment(n)
    return total


def shift_from_measure(mu: BergerMeasure) -> WeightedShift:
    """Shift whose moments are the power moments of ``mu``."""
    if moment_of_measure(mu, 1) == 0:
        raise DomainError("degenerate measure: all mass at 0 gives zero weights")
    limit = sqrt(mu.support_max())
    return shift_from_moments(lambda n: moment_of_measure(mu, n), label=f"measure({mu})",
                              limit=limit, kind="measure_derived")


@dataclass(frozen=True)
class MomentMatch:
    passed: bool
    checked: int
    first_mismatch: Optional[int] = None

    def __bool__(self):
        return self.passed


def moment_match(mu: BergerMeasure, shift: WeightedShift, upTo: int = 50, tol: float = 0) -> MomentMatch:
    """Compare shift moments against ``mu`` for ``n <= upTo``.

    ``tol`` is relative; ``tol == 0`` demands exact equality.
    """
    if upTo < 1:
        raise ValueError("upTo must be >= 1")
    for n in range(upTo + 1):
        g, m = shift.moment(n), moment_of_measure(mu, n)
        if tol == 0:
            ok = g == m
        else:
            ok = abs(float(g) - float(m)) <= tol * abs(float(m))
        if not ok:
            return MomentMatch(False, n + 1, n)
    return MomentMatch(True, upTo + 1)
