"""Braid words, plat presentations and their combinatorics.

Text format::

    B4: s2 s2 s2^-1

``B<n>`` gives the strand count; each token ``s<i>`` is the generator
``sigma_i`` and ``s<i>^-1`` its inverse.  Letters are listed in the order
they act (the first letter sits at the bottom of the braid, next to the cups
of a plat).

Permutations are returned as tuples ``perm`` with ``perm[p-1]`` the final
position of the strand that starts at position ``p`` (1-based values).
Letters act left to right, so ``perm(w1 + w2) = perm(w2) o perm(w1)``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable

_HEADER = re.compile(r"\s*B(\d+)\s*:")
_TOKEN = re.compile(r"s(\d+)(\^(-?1))?$")


class BraidParseError(ValueError):
    """Malformed braid text; ``position`` is the character offset of the bad token."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class BraidWord:
    n_strands: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n_strands < 1:
            raise ValueError("a braid needs at least one strand")
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        for i, s in letters:
            if not 1 <= i <= self.n_strands - 1:
                raise ValueError(f"generator s{i} out of range for {self.n_strands} strands")
            if s not in (1, -1):
                raise ValueError(f"letter sign must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        if other.n_strands != self.n_strands:
            raise ValueError("cannot concatenate braids on different strand counts")
        return BraidWord(self.n_strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n_strands, tuple((i, -s) for i, s in reversed(self.letters)))

    def shifted(self, offset: int, n_strands: int | None = None) -> "BraidWord":
        """The same word acting on strands ``offset+1 ...`` of a wider braid."""
        n = n_strands if n_strands is not None else self.n_strands + offset
        return BraidWord(n, tuple((i + offset, s) for i, s in self.letters))

    def widened(self, n_strands: int) -> "BraidWord":
        return self.shifted(0, n_strands)

    def __str__(self) -> str:
        return serialize_braid(self)


@dataclass(frozen=True)
class PlatPresentation:
    """A braid on ``2g`` strands closed by ``g`` adjacent cups below and ``g`` adjacent caps above."""

    braid: BraidWord

    def __post_init__(self):
        n = self.braid.n_strands
        if n % 2 or n < 2:
            raise ValueError(f"a plat needs an even, positive strand count, got {n}")

    @property
    def g(self) -> int:
        return self.braid.n_strands // 2

    @classmethod
    def identity(cls, g: int) -> "PlatPresentation":
        return cls(BraidWord(2 * g))

    @classmethod
    def from_letters(cls, n_strands: int, letters: Iterable) -> "PlatPresentation":
        return cls(BraidWord(n_strands, tuple(letters)))


def writhe(w: BraidWord | PlatPresentation) -> int:
    """Positive minus negative crossings."""
    if isinstance(w, PlatPresentation):
        w = w.braid
    return sum(s for _, s in w.letters)


def underlying_permutation(w: BraidWord) -> tuple[int, ...]:
    """Start position -> end position of every strand (1-based)."""
    pos_of = list(range(w.n_strands))  # pos_of[strand] = current position
    at = list(range(w.n_strands))  # at[position] = strand
    for i, _ in w.letters:
        a, b = i - 1, i
        sa, sb = at[a], at[b]
        at[a], at[b] = sb, sa
        pos_of[sa], pos_of[sb] = b, a
    return tuple(p + 1 for p in pos_of)


def compose_permutations(first: tuple[int, ...], second: tuple[int, ...]) -> tuple[int, ...]:
    """Apply ``first`` then ``second``."""
    return tuple(second[p - 1] for p in first)


def plat_components(p: PlatPresentation) -> int:
    """Number of link components of the plat closure."""
    n = p.braid.n_strands
    perm = underlying_permutation(p.braid)
    # nodes 0..n-1 are bottom endpoints, n..2n-1 top endpoints
    parent = list(range(2 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for j in range(0, n, 2):
        union(j, j + 1)
        union(n + j, n + j + 1)
    for start, end in enumerate(perm):
        union(start, n + end - 1)
    return len({find(x) for x in range(2 * n)})


def plat_union(*plats: PlatPresentation) -> PlatPresentation:
    """Split union: place the plats side by side."""
    n = sum(p.braid.n_strands for p in plats)
    letters = []
    offset = 0
    for p in plats:
        letters.extend((i + offset, s) for i, s in p.braid.letters)
        offset += p.braid.n_strands
    return PlatPresentation(BraidWord(n, tuple(letters)))


def trace_to_plat(w: BraidWord) -> PlatPresentation:
    """A plat on ``2n`` strands isotopic to the trace closure of ``w`` (same writhe).

    Adjacent cups are turned into nested cups by sliding one leg of each cup
    over the cups to its right; the caps get the mirror-image correction.
    """
    n = w.n_strands
    m = 2 * n
    nest = []
    for k in range(n - 1):
        nest.extend((i, 1) for i in range(2 + k, m - k))
    gamma = BraidWord(m, tuple(nest))
    # strand p of the trace closure sits at position p; its return strand at 2n+1-p
    body = w.widened(m)
    return PlatPresentation(gamma + body + gamma.inverse())


# --------------------------------------------------------------------------
# Serialization


def parse_braid(text: str) -> BraidWord:
    m = _HEADER.match(text)
    if not m:
        raise BraidParseError("expected header 'B<n>:'", 0)
    n = int(m.group(1))
    if n < 1:
        raise BraidParseError("strand count must be positive", m.start(1))
    letters = []
    for tok in re.finditer(r"\S+", text[m.end():]):
        pos = m.end() + tok.start()
        tm = _TOKEN.match(tok.group())
        if not tm:
            raise BraidParseError(f"malformed token {tok.group()!r}", pos)
        i = int(tm.group(1))
        sign = int(tm.group(3)) if tm.group(3) else 1
        if not 1 <= i <= n - 1:
            raise BraidParseError(f"index out of range: s{i} on {n} strands", pos)
        letters.append((i, sign))
    return BraidWord(n, tuple(letters))


def serialize_braid(w: BraidWord) -> str:
    toks = [f"s{i}" if s == 1 else f"s{i}^-1" for i, s in w.letters]
    return " ".join([f"B{w.n_strands}:"] + toks)


def braid_to_json(w: BraidWord) -> str:
    return json.dumps({"n_strands": w.n_strands, "letters": [list(x) for x in w.letters]})


def braid_from_json(text: str | dict) -> BraidWord:
    data = json.loads(text) if isinstance(text, str) else text
    try:
        return BraidWord(int(data["n_strands"]), tuple(tuple(x) for x in data["letters"]))
    except (KeyError, TypeError) as exc:
        raise BraidParseError(f"bad braid JSON: {exc}", 0) from None


def load_braid(text: str) -> BraidWord:
    """Parse either the ``B<n>:`` grammar or the JSON form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return braid_from_json(stripped)
        except json.JSONDecodeError as exc:
            raise BraidParseError(f"bad braid JSON: {exc.msg}", exc.pos) from None
    return parse_braid(text)
