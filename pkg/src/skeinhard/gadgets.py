"""Executable forms of the postselection, promise-comparison and rescaling gadgets.

Oracles are plain callables, so the same drivers run against exact
simulations, the bracket pipeline, or the Potts evaluator.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

ABOVE = "Above"
BELOW = "Below"


class PromiseViolated(RuntimeError):
    pass


class BoundViolated(RuntimeError):
    pass


@dataclass(frozen=True)
class GadgetParams:
    """``c``: separation constant, ``C``: threshold factor, ``p_bits``: exponent of ``2^-p``."""

    c: float = 2.0
    C: float = 2.0
    p_bits: int = 1
    promise_ratio: float = 8.0

    def __post_init__(self):
        if not (self.c > 1 and self.C > 1):
            raise ValueError("c and C must exceed 1")
        if self.p_bits < 1:
            raise ValueError("p_bits must be >= 1")


def postselected_success(a: float) -> float:
    """Probability of ``|->`` after postselection, ``(2a-1)^2 / (1 + (2a-1)^2)``."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a must lie in [0, 1], got {a}")
    s = (2 * a - 1) ** 2
    return s / (1 + s)


def threshold_bounds(a: float, b: float) -> dict:
    """Check the two threshold implications for ``a' = postselected_success(a)``.

    Premises: ``1/2 <= a < 1/2 + b`` (the "no" side, ``A >= 0``) and
    ``a > 1/2 + 2b`` (the "yes" side).  Conclusions: ``a' < 4b^2`` and
    ``a' > 8b^2`` respectively.  A ``None`` entry means the premise is false.
    """
    ap = postselected_success(a)
    low = ap < 4 * b * b if 0.5 <= a < 0.5 + b else None
    high = ap > 8 * b * b if a > 0.5 + 2 * b else None
    return {"a_prime": ap, "no_side": low, "yes_side": high}


# --------------------------------------------------------------------------
# Promise comparison


@dataclass
class ThresholdOracle:
    """Compares hidden probabilities ``a`` and ``b`` with ``2^-k``.

    Reliable ``Above`` when ``x > 2^-k`` and reliable ``Below`` when
    ``x < 2^-k / gap``; inside the gap the answer is ``mode``-dependent:
    ``"exact"`` compares with ``2^-k`` itself, ``"random"`` flips a seeded
    coin, ``"adversarial"`` answers whatever is less helpful (``Above`` for
    the smaller side, ``Below`` for the larger).
    """

    a: float
    b: float
    gap: float = 2.0
    mode: str = "exact"
    seed: int = 0
    calls: int = 0
    _rng: random.Random = field(default=None, repr=False)

    def __post_init__(self):
        self._rng = random.Random(self.seed)

    def __call__(self, side: str, k: int) -> str:
        self.calls += 1
        x = self.a if side == "a" else self.b
        t = 2.0**-k
        if x > t:
            return ABOVE
        if x < t / self.gap:
            return BELOW
        if self.mode == "exact":
            return ABOVE if x > t else BELOW
        if self.mode == "random":
            return self._rng.choice((ABOVE, BELOW))
        larger = "a" if self.a >= self.b else "b"
        return BELOW if side == larger else ABOVE


def promise_compare(oracle: Callable[[str, int], str], n: int) -> dict:
    """Decide whether ``a`` or ``b`` dominates using ``2(n+1)`` threshold queries.

    Pattern for ``a``: at every ``k``, ``a`` is reported above ``2^-k`` or
    ``b`` below it, and at some ``k`` both.  Symmetrically for ``b``.  Exactly
    one pattern must occur; otherwise the promise was violated.
    """
    ra = [oracle("a", k) for k in range(n + 1)]
    rb = [oracle("b", k) for k in range(n + 1)]

    def pattern(rx, ry):
        every = all(x == ABOVE or y == BELOW for x, y in zip(rx, ry))
        some = any(x == ABOVE and y == BELOW for x, y in zip(rx, ry))
        return every and some

    pa, pb = pattern(ra, rb), pattern(rb, ra)
    if pa == pb:
        raise PromiseViolated("both outcome patterns occurred" if pa else "neither outcome pattern occurred")
    return {"answer": "AoverB" if pa else "BoverA", "queries": 2 * (n + 1), "a_reports": ra, "b_reports": rb}


def promise_pair(rng: random.Random, n: int, ratio: float = 8.0, spread: float = 1000.0) -> tuple[float, float]:
    """Random ``(a, b)`` whose larger side exceeds ``2^-(n-1)`` and is more than ``ratio`` times the smaller."""
    big = 2.0 ** rng.uniform(-(n - 1), 0)
    small = big / rng.uniform(ratio * (1 + 1e-6), spread)
    return (big, small) if rng.random() < 0.5 else (small, big)


# --------------------------------------------------------------------------
# APV -> APX


@dataclass
class WindowDecider:
    """Reports ``Above`` if ``value > hi`` and ``Below`` if ``value < lo``.

    Inside ``[lo, hi]`` it answers by comparing with ``sqrt(lo hi)`` when
    ``mode="exact"``, or by a seeded coin when ``mode="random"``.
    """

    value: Callable
    lo: float
    hi: float
    mode: str = "exact"
    seed: int = 0
    calls: int = 0

    def __post_init__(self):
        self._rng = random.Random(self.seed)

    def __call__(self, y) -> str:
        self.calls += 1
        v = self.value(y)
        if v > self.hi:
            return ABOVE
        if v < self.lo:
            return BELOW
        if self.mode == "random":
            return self._rng.choice((ABOVE, BELOW))
        return ABOVE if v > math.sqrt(self.lo * self.hi) else BELOW


def apv_to_apx(
    decider: Callable,
    rescale: Callable[[int], object],
    k: float,
    c: float,
    m: int,
    window: tuple[float, float],
) -> dict:
    """Multiplicative estimate of ``f(x)`` from a window decider.

    ``rescale(n)`` returns ``y_n`` with ``k^-n f(x) < f(y_n) < c k^-n f(x)``.
    The decider is queried for ``n = -m..m``; with ``n*`` the first ``Below``,

        ``lo k^(n*-1) / c < f(x) < hi k^n*``

    and the geometric mean of the two bounds is returned.
    """
    lo, hi = window
    if not (k > 1 and c > 1 and 0 < lo < hi):
        raise ValueError("need k > 1, c > 1 and 0 < lo < hi")
    reports = []
    n_star = None
    for n in range(-m, m + 1):
        r = decider(rescale(n))
        reports.append(r)
        if r == BELOW:
            n_star = n
            break
    if n_star is None:
        raise BoundViolated(f"no n in [-{m}, {m}] was reported Below; |log f| exceeds the bound")
    upper = hi * k**n_star
    lower = lo * k ** (n_star - 1) / c if n_star > -m else k**-m
    lower = max(lower, k**-m)
    estimate = math.sqrt(lower * upper)
    return {
        "estimate": estimate,
        "lower": lower,
        "upper": upper,
        "n_star": n_star,
        "scale": k**n_star,
        "queries": len(reports),
        "guaranteed_factor": math.sqrt(upper / lower),
    }


def synthetic_family(f: float, k: float, c: float, seed: int = 0):
    """Exact rescaling family for a known ``f``: ``f(y_n) = u_n k^-n f`` with ``u_n`` in ``(1, c)``."""
    rng = np.random.default_rng(seed)
    cache = {}

    def rescale(n):
        if n not in cache:
            cache[n] = f * k**-n * float(rng.uniform(1.0, c) if c > 1 else 1.0)
        return cache[n]

    return rescale, (lambda y: y)


def bracket_family(plat, params, N: int):
    """Unknot padding as a rescaling family for ``f(L) = |<L>| / |delta|^g``.

    ``y_n`` is ``L`` plus ``N - n + 1`` unknots, valued as ``|<y_n>| / |delta|^(g+N)``,
    so ``f(y_n) = |delta|^(1-n) f(L)``: the family has ``k = |delta|`` and needs
    ``c > |delta|``.  Brackets are combined by multiplicativity.
    """
    from .bracket import bracket_morse

    base = abs(bracket_morse(plat, params))
    d = params.delta_abs
    norm = d ** (plat.g + N)

    def rescale(n):
        copies = N - n + 1
        if copies < 0:
            raise ValueError(f"rescale index {n} needs a negative number of unknots; raise N")
        return copies

    def value(copies):
        return base * d**copies / norm

    return rescale, value
