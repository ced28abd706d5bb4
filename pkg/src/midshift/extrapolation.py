"""Limits of slowly convergent sequences sampled at ``m = 2^j``.

Partial products of Wallis type behave like ``L (1 + a_1/m + a_2/m^2 + ...)``,
so samples at ``m = 2^j`` have error terms that are geometric in ``j`` with
ratios ``1/2, 1/4, ...``. Richardson extrapolation with those known ratios
removes them one at a time; iterated Aitken Δ² does the same without knowing
the ratios and serves as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Extrapolation:
    value: float
    residual: float
    terms_used: int
    order: int


def richardson(samples: list[float], depth: int = 6, ratio: float = 2.0) -> Extrapolation:
    """Richardson table for samples taken at ``m = ratio^j``.

    ``residual`` is the gap between the two deepest diagonal entries.
    """
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    depth = min(depth, len(samples) - 1)
    prev = list(samples)
    prev_best = prev[-2]
    best = prev[-1]
    for i in range(1, depth + 1):
        f = ratio**i
        cur = [(f * prev[j + 1] - prev[j]) / (f - 1) for j in range(len(prev) - 1)]
        prev_best, best = (cur[-2] if len(cur) > 1 else best), cur[-1]
        prev = cur
    return Extrapolation(best, abs(best - prev_best), len(samples), depth)


def aitken(samples: list[float], depth: int = 6) -> Extrapolation:
    """Iterated Aitken Δ² process.

    Stops early when second differences vanish (the sequence has already
    converged to working precision).
    """
    if len(samples) < 3:
        raise ValueError("need at least three samples")
    cur = list(samples)
    done = 0
    for _ in range(depth):
        if len(cur) < 3:
            break
        nxt = []
        for a, b, c in zip(cur, cur[1:], cur[2:]):
            d2 = c - 2 * b + a
            if d2 == 0 or abs(d2) < 1e-300:
                nxt.append(c)
            else:
                nxt.append(c - (c - b) ** 2 / d2)
        cur = nxt
        done += 1
    residual = abs(cur[-1] - cur[-2]) if len(cur) > 1 else 0.0
    return Extrapolation(cur[-1], residual, len(samples), done)
