"""Kauffman bracket evaluation for plats and braid closures.

Two independent evaluators:

* :func:`bracket_bruteforce` sums over all ``2**c`` smoothings of the
  ``c`` crossings, tracking loops with an endpoint pairing.  No linear
  algebra is involved.
* :func:`bracket_morse` pushes the cup vector through the braid generator
  matrices on V(2g) and closes with the caps (the scanline algorithm).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .braid import BraidWord, PlatPresentation, trace_to_plat, writhe
from .params import BracketParams
from .skein import skein_rep, tl_dimension

MAX_BRUTE_CROSSINGS = 20
MAX_MORSE_DIM = 20_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class BracketValue:
    value: complex
    method: str
    params: BracketParams

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError("bracket value is not finite")


def _close(partner: list[int], a: int, b: int) -> int:
    """Join endpoints ``a`` and ``b`` by an arc; return 1 if that closes a loop."""
    x, y = partner[a], partner[b]
    if x == b:
        return 1
    partner[x] = y
    partner[y] = x
    return 0


def bracket_bruteforce(link: PlatPresentation | BraidWord, params: BracketParams) -> complex:
    """State sum over all smoothings.

    ``link`` is either a plat or a braid word (taken as its trace closure).
    """
    trace = isinstance(link, BraidWord)
    word = link if trace else link.braid
    n = word.n_strands
    letters = word.letters
    c = len(letters)
    if c > MAX_BRUTE_CROSSINGS:
        raise BudgetExceeded(f"{c} crossings exceed the brute-force budget of {MAX_BRUTE_CROSSINGS}")

    # endpoints 0..n-1: current top of each strand position; n..2n-1: bottom ends (trace only)
    partner = list(range(2 * n))
    if trace:
        for p in range(n):
            partner[p], partner[n + p] = n + p, p
    else:
        for j in range(0, n, 2):
            partner[j], partner[j + 1] = j + 1, j

    A, delta = params.A, params.delta
    total = 0j

    def finish(part, loops, expo):
        part = list(part)
        if trace:
            for p in range(n):
                loops += _close(part, p, n + p)
        else:
            for j in range(0, n, 2):
                loops += _close(part, j, j + 1)
        return A**expo * delta**loops

    def descend(k, part, loops, expo):
        nonlocal total
        if k == c:
            total += finish(part, loops, expo)
            return
        i, s = letters[k]
        # identity smoothing: A for a positive crossing, A^-1 for a negative one
        descend(k + 1, part, loops, expo + s)
        a, b = i - 1, i
        nxt = list(part)
        closed = _close(nxt, a, b)
        nxt[a], nxt[b] = b, a
        descend(k + 1, nxt, loops + closed, expo - s)

    descend(0, partner, 0, 0)
    return total


def _rep_for(n: int, params: BracketParams, basis: str | None):
    dim = tl_dimension(n, params)
    if dim > MAX_MORSE_DIM:
        raise BudgetExceeded(f"dim V({n}) = {dim} exceeds the transfer-matrix budget")
    return skein_rep(n, params, basis)


def bracket_morse(p: PlatPresentation, params: BracketParams, basis: str | None = None) -> complex:
    """``<caps| rho(word) |cups>`` on V(2g)."""
    rep = _rep_for(p.braid.n_strands, params, basis)
    v = rep.apply(p.braid.letters, rep.cup_vector())
    return complex(rep.cap_functional() @ v)


def bracket_trace_morse(w: BraidWord, params: BracketParams, basis: str | None = None) -> complex:
    """Bracket of the trace closure of ``w`` by the transfer-matrix method."""
    if basis == "diagram" or (basis is None and not params.is_root_of_unity):
        rep = _rep_for(2 * w.n_strands, params, "diagram")
        v = rep.apply(w.widened(2 * w.n_strands).letters, rep.cup_vector(nested=True))
        return complex(rep.cap_functional(nested=True) @ v)
    return bracket_morse(trace_to_plat(w), params, basis)


def bracket(link: PlatPresentation | BraidWord, params: BracketParams, method: str = "morse") -> BracketValue:
    if method == "brute":
        value = bracket_bruteforce(link, params)
    elif method == "morse":
        if isinstance(link, BraidWord):
            value = bracket_trace_morse(link, params)
        else:
            value = bracket_morse(link, params)
    else:
        raise ValueError(f"unknown method {method!r}")
    return BracketValue(value, method, params)


def jones_normalized(bracket_value: complex, w: int, params: BracketParams) -> complex:
    """Writhe-corrected bracket divided by the unknot, ``(-A^3)^-w <L> / delta``."""
    return (-params.A**3) ** (-w) * bracket_value / params.delta


def jones(link: PlatPresentation | BraidWord, params: BracketParams, method: str = "morse") -> complex:
    return jones_normalized(bracket(link, params, method).value, writhe(link), params)


def plat_amplitude(p: PlatPresentation, params: BracketParams) -> complex:
    """``<L> / delta**g`` computed as the cup-state return amplitude in the unitary path basis."""
    if not params.is_root_of_unity:
        raise ValueError("plat probabilities are defined at roots of unity only")
    rep = _rep_for(p.braid.n_strands, params, "path")
    cup = rep.cup_vector()
    return complex(np.vdot(cup, rep.apply(p.braid.letters, cup)))


def plat_probability(p: PlatPresentation, params: BracketParams) -> float:
    """``|<L>|**2 / |delta|**(2g)``, the acceptance probability of the plat experiment."""
    return abs(plat_amplitude(p, params)) ** 2
