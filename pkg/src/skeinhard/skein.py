"""Temperley-Lieb diagrams, skein-space bases and braid generator matrices.

Two bases for the space V(n) of tangles with ``n`` endpoints (``n`` even) are
provided:

``"diagram"``
    non-crossing perfect matchings of the ``n`` top points (cup diagrams).
    Exact Catalan dimension for every evaluation point; not unitary.
``"path"``
    walks of length ``n`` on heights ``0..r-2`` from 0 back to 0.  Only at
    ``t = exp(2 pi i / r)``; the braid generators act unitarily.

Generators are indexed from 1, as in the braid group: ``sigma_i`` crosses
strands ``i`` and ``i + 1`` and acts as ``A * 1 + A**-1 * e_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .params import BracketParams

BASES = ("diagram", "path")


class SkeinError(ValueError):
    pass


# --------------------------------------------------------------------------
# Planar matchings


@dataclass(frozen=True)
class PlanarMatching:
    """A Temperley-Lieb diagram from ``n_bottom`` to ``n_top`` points.

    Points are labelled ``0..n_bottom-1`` along the bottom edge (left to right)
    and ``n_bottom..n_bottom+n_top-1`` along the top edge (left to right).
    ``partner[p]`` is the point joined to ``p``.
    """

    n_bottom: int
    n_top: int
    partner: tuple[int, ...]

    def __post_init__(self):
        size = self.n_bottom + self.n_top
        if len(self.partner) != size:
            raise SkeinError("partner table has the wrong length")
        for p, q in enumerate(self.partner):
            if not 0 <= q < size or q == p or self.partner[q] != p:
                raise SkeinError(f"not a perfect matching at point {p}")
        if not _is_noncrossing(self):
            raise SkeinError("matching is not planar")

    @classmethod
    def from_pairs(cls, n_bottom: int, n_top: int, pairs) -> "PlanarMatching":
        partner = [-1] * (n_bottom + n_top)
        for a, b in pairs:
            partner[a] = b
            partner[b] = a
        return cls(n_bottom, n_top, tuple(partner))

    @classmethod
    def identity(cls, n: int) -> "PlanarMatching":
        return cls.from_pairs(n, n, [(i, n + i) for i in range(n)])

    @classmethod
    def e(cls, i: int, n: int) -> "PlanarMatching":
        """The generator ``e_i`` (1-based) on ``n`` strands."""
        if not 1 <= i <= n - 1:
            raise SkeinError(f"e_{i} out of range for {n} strands")
        a = i - 1
        pairs = [(a, a + 1), (n + a, n + a + 1)]
        pairs += [(j, n + j) for j in range(n) if j not in (a, a + 1)]
        return cls.from_pairs(n, n, pairs)

    @classmethod
    def cups(cls, n: int) -> "PlanarMatching":
        """Adjacent cups ``(1 2)(3 4)...`` from 0 to ``n`` points."""
        _check_even(n)
        return cls.from_pairs(0, n, [(j, j + 1) for j in range(0, n, 2)])

    @classmethod
    def caps(cls, n: int) -> "PlanarMatching":
        """Adjacent caps from ``n`` points to 0."""
        _check_even(n)
        return cls.from_pairs(n, 0, [(j, j + 1) for j in range(0, n, 2)])

    @classmethod
    def nested_cups(cls, n: int) -> "PlanarMatching":
        """Cups pairing top point ``j`` with ``n - 1 - j``."""
        _check_even(n)
        return cls.from_pairs(0, n, [(j, n - 1 - j) for j in range(n // 2)])

    @classmethod
    def nested_caps(cls, n: int) -> "PlanarMatching":
        _check_even(n)
        return cls.from_pairs(n, 0, [(j, n - 1 - j) for j in range(n // 2)])

    def top_pairs(self) -> tuple[tuple[int, int], ...]:
        """Pairs among top points, as top-edge positions (for cup diagrams)."""
        nb = self.n_bottom
        out = []
        for p in range(nb, nb + self.n_top):
            q = self.partner[p]
            if q > p:
                out.append((p - nb, q - nb))
        return tuple(out)


def _check_even(n: int) -> None:
    if n < 0 or n % 2:
        raise SkeinError(f"need an even number of points, got {n}")


def _is_noncrossing(d: PlanarMatching) -> bool:
    nb, nt = d.n_bottom, d.n_top

    def cyc(p):
        # walk the boundary: bottom left->right, then top right->left
        return p if p < nb else nb + (nt - 1 - (p - nb))

    chords = sorted(
        tuple(sorted((cyc(p), cyc(q)))) for p, q in enumerate(d.partner) if p < q
    )
    # a set of chords is non-crossing iff they nest like parentheses
    stack: list[int] = []
    ends = {}
    for a, b in chords:
        ends[a] = ("open", b)
        ends[b] = ("close", a)
    for pos in range(nb + nt):
        kind, other = ends[pos]
        if kind == "open":
            stack.append(pos)
        else:
            if not stack or stack.pop() != other:
                return False
    return True


def compose_diagrams(d1: PlanarMatching, d2: PlanarMatching) -> tuple[PlanarMatching, int]:
    """Stack ``d2`` on top of ``d1``; return the reduced diagram and the number of closed loops."""
    if d1.n_top != d2.n_bottom:
        raise SkeinError(
            f"cannot stack: {d1.n_top} top points below {d2.n_bottom} bottom points"
        )
    nb, m, nt = d1.n_bottom, d1.n_top, d2.n_top
    seen_middle = [False] * m

    def walk_from_d1(p):
        # p is a label of d1 reached from outside; follow until an outer point
        while True:
            q = d1.partner[p]
            if q < nb:
                return ("b", q)
            j = q - nb
            seen_middle[j] = True
            r = d2.partner[j]
            if r >= m:
                return ("t", r - m)
            seen_middle[r] = True
            p = nb + r

    def walk_from_d2(p):
        while True:
            q = d2.partner[p]
            if q >= m:
                return ("t", q - m)
            seen_middle[q] = True
            r = d1.partner[nb + q]
            if r < nb:
                return ("b", r)
            j = r - nb
            seen_middle[j] = True
            p = j

    pairs = []
    for b in range(nb):
        end = walk_from_d1(b)
        label = end[1] if end[0] == "b" else nb + end[1]
        pairs.append((b, label))
    for t in range(nt):
        end = walk_from_d2(m + t)
        label = end[1] if end[0] == "b" else nb + end[1]
        pairs.append((nb + t, label))

    loops = 0
    for j in range(m):
        if seen_middle[j]:
            continue
        loops += 1
        cur = j
        while True:
            seen_middle[cur] = True
            other = d2.partner[cur]
            seen_middle[other] = True
            nxt = d1.partner[nb + other] - nb
            if nxt == j or seen_middle[nxt]:
                break
            cur = nxt
    return PlanarMatching.from_pairs(nb, nt, pairs), loops


@lru_cache(maxsize=None)
def cup_diagrams(n: int) -> tuple[PlanarMatching, ...]:
    """All cup diagrams (0 -> n non-crossing matchings), in a canonical order."""
    _check_even(n)

    def matchings(points):
        if not points:
            yield ()
            return
        first = points[0]
        for k in range(1, len(points), 2):
            inside, outside = points[1:k], points[k + 1:]
            for mi in matchings(inside):
                for mo in matchings(outside):
                    yield ((first, points[k]),) + mi + mo

    return tuple(
        PlanarMatching.from_pairs(0, n, pairs) for pairs in matchings(tuple(range(n)))
    )


# --------------------------------------------------------------------------
# Path basis


def qint(m: int, r: int) -> float:
    """Quantum integer ``[m]`` at ``q = exp(i pi / r)``."""
    return math.sin(m * math.pi / r) / math.sin(math.pi / r)


@lru_cache(maxsize=None)
def path_basis(n: int, r: int, end: int = 0) -> tuple[tuple[int, ...], ...]:
    """Walks ``(h_0, ..., h_n)`` with ``h_0 = 0``, ``h_n = end``, steps +-1, heights in ``[0, r-2]``."""
    if r < 3:
        raise SkeinError("path basis needs r >= 3")
    top = r - 2
    paths: list[tuple[int, ...]] = [(0,)]
    for _ in range(n):
        paths = [p + (p[-1] + s,) for p in paths for s in (1, -1) if 0 <= p[-1] + s <= top]
    return tuple(sorted(p for p in paths if p[-1] == end))


def tl_dimension(n: int, params: BracketParams) -> int:
    """Dimension of V(n): Catalan ``C_{n/2}`` generically, admissible path count at a root of unity."""
    _check_even(n)
    if params.is_root_of_unity:
        return len(path_basis(n, params.r))
    return math.comb(n, n // 2) // (n // 2 + 1)


# --------------------------------------------------------------------------
# Generator matrices


def _e_matrix_diagram(i: int, n: int, delta: complex) -> np.ndarray:
    basis = cup_diagrams(n)
    index = {d: k for k, d in enumerate(basis)}
    ei = PlanarMatching.e(i, n)
    E = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, d in enumerate(basis):
        out, loops = compose_diagrams(d, ei)
        E[index[out], col] += delta**loops
    return E


def _e_matrix_path(i: int, n: int, r: int) -> np.ndarray:
    basis = path_basis(n, r)
    index = {p: k for k, p in enumerate(basis)}
    top = r - 2
    E = np.zeros((len(basis), len(basis)))
    for col, p in enumerate(basis):
        h, mid, h2 = p[i - 1], p[i], p[i + 1]
        if h != h2:
            continue
        for new in (h - 1, h + 1):
            if not 0 <= new <= top:
                continue
            q = p[:i] + (new,) + p[i + 1:]
            if new == mid:
                coef = qint(h, r) / qint(h + 1, r) if new < h else qint(h + 2, r) / qint(h + 1, r)
            else:
                coef = math.sqrt(qint(h, r) * qint(h + 2, r)) / qint(h + 1, r)
            # the loop value here is -[2], so e_i is minus the usual Jones-Wenzl projector
            E[index[q], col] = -coef
    return E.astype(complex)


def _resolve_basis(params: BracketParams, basis: str | None) -> str:
    if basis is None:
        return "path" if params.is_root_of_unity else "diagram"
    if basis not in BASES:
        raise SkeinError(f"unknown basis {basis!r}")
    if basis == "path" and not params.is_root_of_unity:
        raise SkeinError("the path basis is only defined at roots of unity")
    return basis


def e_matrix(i: int, n: int, params: BracketParams, basis: str | None = None) -> np.ndarray:
    basis = _resolve_basis(params, basis)
    if not 1 <= i <= n - 1:
        raise SkeinError(f"generator index {i} out of range for {n} strands")
    if basis == "path":
        return _e_matrix_path(i, n, params.r)
    return _e_matrix_diagram(i, n, params.delta)


def braid_generator_matrix(
    i: int, n: int, params: BracketParams, basis: str | None = None, sign: int = 1
) -> np.ndarray:
    """Matrix of ``sigma_i**sign`` on V(n): ``A + A^-1 e_i`` (or ``A^-1 + A e_i`` for the inverse)."""
    E = e_matrix(i, n, params, basis)
    A = params.A
    eye = np.eye(E.shape[0])
    if sign == 1:
        return A * eye + E / A
    if sign == -1:
        return eye / A + A * E
    raise SkeinError(f"sign must be +1 or -1, got {sign}")


@dataclass(frozen=True, eq=False)
class SkeinRep:
    """Braid group representation on V(n) in a chosen basis."""

    n_strands: int
    basis: str
    params: BracketParams
    states: tuple
    generators: tuple[np.ndarray, ...]
    inverses: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return len(self.states)

    def letter(self, i: int, sign: int) -> np.ndarray:
        if not 1 <= i <= self.n_strands - 1:
            raise SkeinError(f"generator index {i} out of range for {self.n_strands} strands")
        return self.generators[i - 1] if sign > 0 else self.inverses[i - 1]

    def word_matrix(self, letters) -> np.ndarray:
        """Matrix of a braid word given as ``(i, sign)`` pairs; the first letter acts first."""
        M = np.eye(self.dim, dtype=complex)
        for i, s in letters:
            M = self.letter(i, s) @ M
        return M

    def apply(self, letters, vec: np.ndarray) -> np.ndarray:
        v = np.asarray(vec, dtype=complex)
        for i, s in letters:
            v = self.letter(i, s) @ v
        return v

    def cup_vector(self, nested: bool = False) -> np.ndarray:
        """Vector of the cup diagram (adjacent or nested) in this basis.

        In the path basis this is the unit vector on ``0,1,0,1,...,0``; the
        matching closing functional carries the factor ``delta**g``.
        """
        v = np.zeros(self.dim, dtype=complex)
        if self.basis == "diagram":
            d = PlanarMatching.nested_cups(self.n_strands) if nested else PlanarMatching.cups(self.n_strands)
            v[self.states.index(d)] = 1.0
            return v
        if nested:
            raise SkeinError("nested cups are only available in the diagram basis")
        p0 = tuple(k % 2 for k in range(self.n_strands + 1))
        v[self.states.index(p0)] = 1.0
        return v

    def cap_functional(self, nested: bool = False) -> np.ndarray:
        """Row vector evaluating a state against the caps closing the plat."""
        n = self.n_strands
        g = n // 2
        if self.basis == "diagram":
            caps = PlanarMatching.nested_caps(n) if nested else PlanarMatching.caps(n)
            delta = self.params.delta
            return np.array([delta ** compose_diagrams(d, caps)[1] for d in self.states], dtype=complex)
        if nested:
            raise SkeinError("nested caps are only available in the diagram basis")
        return self.params.delta**g * self.cup_vector().conj()


@lru_cache(maxsize=64)
def skein_rep(n: int, params: BracketParams, basis: str | None = None) -> SkeinRep:
    """Build (and cache) the representation of ``B_n`` on V(n)."""
    _check_even(n)
    basis = _resolve_basis(params, basis)
    states = cup_diagrams(n) if basis == "diagram" else path_basis(n, params.r)
    if n < 2:
        return SkeinRep(n, basis, params, states, (), ())
    gens = tuple(braid_generator_matrix(i, n, params, basis, 1) for i in range(1, n))
    invs = tuple(braid_generator_matrix(i, n, params, basis, -1) for i in range(1, n))
    for g in gens + invs:
        g.setflags(write=False)
    return SkeinRep(n, basis, params, states, gens, invs)


def braid_relation_defect(rep: SkeinRep) -> float:
    """Largest violation of the braid relations, in the max-entry norm."""
    worst = 0.0
    g = rep.generators
    for a in range(len(g)):
        for b in range(a + 1, len(g)):
            if b == a + 1:
                lhs = g[a] @ g[b] @ g[a]
                rhs = g[b] @ g[a] @ g[b]
            else:
                lhs, rhs = g[a] @ g[b], g[b] @ g[a]
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    for s, si in zip(rep.generators, rep.inverses):
        worst = max(worst, float(np.max(np.abs(s @ si - np.eye(rep.dim)))))
    return worst


def proportionality_residual(M1: np.ndarray, M2: np.ndarray) -> float:
    """``min_c ||M1 - c M2|| / ||M1||`` in the Frobenius norm."""
    a, b = np.ravel(M1), np.ravel(M2)
    c = np.vdot(b, a) / np.vdot(b, b)
    return float(np.linalg.norm(a - c * b) / np.linalg.norm(a))


def full_nontriviality_check(params: BracketParams, tol: float = 1e-9) -> dict:
    """Test the two conditions: crossings not proportional on V(4), and ``|delta| > 1``."""
    rep = skein_rep(4, params)
    residual = proportionality_residual(rep.generators[0], rep.inverses[0])
    independent = residual > tol
    big_loop = params.delta_abs > 1 + tol
    return {
        "ok": bool(independent and big_loop),
        "details": {
            "basis": rep.basis,
            "dim_V4": rep.dim,
            "proportionality_residual": residual,
            "crossings_independent": bool(independent),
            "loop_abs": params.delta_abs,
            "loop_exceeds_one": bool(big_loop),
        },
    }
