"""Boundary state spaces, edge operators and transfer-matrix evaluation.

A graph with ``k`` boundary vertices defines a functional on boundary
colourings.  The span of these functionals is ``V(k)``, with a basis indexed
by set partitions of the boundary (non-crossing ones in planar mode).  The
basis element for a partition is either a *shrub forest* (one centre vertex
per block, joined to the block by edges of weight ``y_shrub``) or, with
``y_shrub=None``, the identification state that merges each block into a
single vertex.

Edge operators act on ``V(k)`` by gluing a small graph onto each basis
state.  Their matrices come from the Gram system ``G M = R`` with
``R[B, A] = <state_B, op(state_A)>``, where the pairing glues two states
along the boundary and evaluates :func:`z_cluster`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .graph import PottsBudgetExceeded, PottsGraph, SingularParameters, _count_components, exact, z_cluster

MAX_K_NONPLANAR = 10
MAX_K_PLANAR = 12
MAX_TRANSFER_WIDTH = 8

Partition = tuple  # tuple of sorted blocks, each a tuple of 0-based positions


# --------------------------------------------------------------------------
# Partitions


def _set_partitions(k: int):
    """Restricted growth strings -> partitions, blocks ordered by least element."""
    if k == 0:
        yield ()
        return
    a = [0] * k

    def rec(i, m):
        if i == k:
            blocks = [[] for _ in range(m + 1)]
            for pos, b in enumerate(a):
                blocks[b].append(pos)
            yield tuple(tuple(b) for b in blocks)
            return
        for b in range(m + 2):
            a[i] = b
            yield from rec(i + 1, max(m, b))

    a[0] = 0
    yield from rec(1, 0)


def is_noncrossing(p: Partition) -> bool:
    label = {}
    for i, block in enumerate(p):
        for v in block:
            label[v] = i
    k = len(label)
    for a in range(k):
        for b in range(a + 1, k):
            for c in range(b + 1, k):
                if label[a] == label[c] != label[b]:
                    for d in range(c + 1, k):
                        if label[b] == label[d]:
                            return False
    return True


@dataclass(frozen=True)
class PartitionBasis:
    k: int
    planar: bool
    elements: tuple

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, p: Partition) -> int:
        return self._lookup()[p]

    def _lookup(self) -> dict:
        try:
            return self.__dict__["_idx"]
        except KeyError:
            idx = {p: i for i, p in enumerate(self.elements)}
            object.__setattr__(self, "_idx", idx)
            return idx


@lru_cache(maxsize=None)
def partition_basis(k: int, planar: bool = False) -> PartitionBasis:
    cap = MAX_K_PLANAR if planar else MAX_K_NONPLANAR
    if not 0 <= k <= cap:
        raise PottsBudgetExceeded(f"k={k} outside 0..{cap} for {'planar' if planar else 'non-planar'} mode")
    elems = [p for p in _set_partitions(k) if not planar or is_noncrossing(p)]
    return PartitionBasis(k, planar, tuple(elems))


def join(p: Partition, q: Partition, k: int) -> int:
    """Number of blocks of ``p v q``."""
    pairs = [(b[0], v) for b in p for v in b[1:]] + [(b[0], v) for b in q for v in b[1:]]
    return _count_components(k, pairs)


# --------------------------------------------------------------------------
# Open graphs: states with a boundary list that may repeat vertices


@dataclass(frozen=True)
class _Open:
    n_vertices: int
    edges: tuple
    boundary: tuple


def _state(p: Partition, k: int, y_shrub) -> _Open:
    if y_shrub is None:
        where = {}
        for i, block in enumerate(p):
            for v in block:
                where[v] = i
        return _Open(len(p), (), tuple(where[j] for j in range(k)))
    edges = []
    nv = k
    for block in p:
        if len(block) > 1:
            for v in block:
                edges.append((nv, v, y_shrub))
            nv += 1
    return _Open(nv, tuple(edges), tuple(range(k)))


def _glue(a: _Open, b: _Open) -> PottsGraph:
    off = a.n_vertices
    nv = a.n_vertices + b.n_vertices
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in zip(a.boundary, b.boundary):
        ru, rv = find(u), find(v + off)
        if ru != rv:
            parent[ru] = rv
    roots = sorted({find(v) for v in range(nv)})
    relabel = {r: i for i, r in enumerate(roots)}
    edges = [(relabel[find(u)], relabel[find(v)], y) for u, v, y in a.edges]
    edges += [(relabel[find(u + off)], relabel[find(v + off)], y) for u, v, y in b.edges]
    return PottsGraph(len(roots), tuple(edges))


def _pair(a: _Open, b: _Open, n):
    return z_cluster(_glue(a, b), n)


def _op_edge(s: _Open, i: int, j: int, y) -> _Open:
    return _Open(s.n_vertices, s.edges + ((s.boundary[i], s.boundary[j], y),), s.boundary)


def _op_vertical(s: _Open, j: int, y) -> _Open:
    w = s.n_vertices
    boundary = list(s.boundary)
    old = boundary[j]
    boundary[j] = w
    return _Open(w + 1, s.edges + ((w, old, y),), tuple(boundary))


# --------------------------------------------------------------------------
# Gram matrices and edge operators


def _to_array(rows) -> np.ndarray:
    if all(isinstance(x, (Fraction, int)) for r in rows for x in r):
        return np.array([[float(x) for x in r] for r in rows])
    return np.array(rows, dtype=complex if any(isinstance(x, complex) for r in rows for x in r) else float)


def gram_matrix(basis: PartitionBasis, n, y_shrub=None) -> np.ndarray:
    k = basis.k
    n = exact(n)
    if y_shrub is None:
        return _to_array([[n ** join(p, q, k) for q in basis.elements] for p in basis.elements])
    states = [_state(p, k, exact(y_shrub)) for p in basis.elements]
    return _to_array([[_pair(a, b, n) for b in states] for a in states])


def gram_rank(basis: PartitionBasis, n, y=None, tol: float = 1e-8) -> int:
    """Numerical rank of the Gram matrix, singular values above ``tol * max``."""
    if len(basis) > 52:
        raise PottsBudgetExceeded("gram_rank is limited to bases of size <= 52")
    s = np.linalg.svd(gram_matrix(basis, n, y), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


@dataclass(frozen=True)
class EdgeOp:
    kind: str  # "A" or "B"
    j: int  # 1-based position
    weight: object  # y for A, x for B
    matrix: np.ndarray
    residual: float  # ||G M - R|| / ||R|| of the Gram solve


def _solve(basis: PartitionBasis, n, y_shrub, op, allow_singular: bool = False) -> tuple[np.ndarray, float]:
    k = basis.k
    states = [_state(p, k, y_shrub) for p in basis.elements]
    G = gram_matrix(basis, n, y_shrub)
    R = _to_array([[_pair(sb, op(sa), n) for sa in states] for sb in states])
    s = np.linalg.svd(G, compute_uv=False)
    if not allow_singular and s.size and s[-1] <= 1e-10 * s[0]:
        raise SingularParameters(f"Gram matrix of V({k}) is singular at n={n} (cond {s[0] / max(s[-1], 1e-300):.3g})")
    M = np.linalg.pinv(G) @ R
    res = float(np.linalg.norm(G @ M - R) / max(np.linalg.norm(R), 1e-300))
    return M, res


def _check_position(kind: str, j: int, k: int):
    hi = k - 1 if kind == "A" else k
    if not 1 <= j <= hi:
        raise ValueError(f"{kind}_j needs 1 <= j <= {hi} for k={k}, got {j}")


def edge_operator(kind: str, j: int, weight, k: int, basis: PartitionBasis | None = None, n=2, y_shrub=None) -> EdgeOp:
    """``A_{j,y}``: edge of weight ``y`` between boundary positions ``j, j+1``.

    ``B_{j,x}``: boundary vertex ``j`` becomes internal and a new boundary
    vertex is joined to it by an edge of dual weight ``x`` (edge weight
    ``1 + n/(x-1)``).  Positions are 1-based.
    """
    kind = kind.upper()
    basis = basis or partition_basis(k, planar=False)
    if basis.k != k:
        raise ValueError("basis size does not match k")
    _check_position(kind, j, k)
    n = exact(n)
    w = exact(weight)
    if kind == "A":
        M, res = _solve(basis, n, y_shrub, lambda s: _op_edge(s, j - 1, j, w))
    elif kind == "B":
        if w == 1:
            raise SingularParameters("B_{j,x} needs x != 1")
        y = 1 + n / (w - 1)
        M, res = _solve(basis, n, y_shrub, lambda s: _op_vertical(s, j - 1, y))
    else:
        raise ValueError(f"unknown edge operator kind {kind!r}")
    return EdgeOp(kind, j, weight, M, res)


def pair_operator(i: int, j: int, y, basis: PartitionBasis, n, y_shrub=None, allow_singular=False) -> np.ndarray:
    """Edge of weight ``y`` between arbitrary 0-based positions ``i != j``.

    With ``allow_singular`` a degenerate Gram matrix is accepted: the
    least-squares solution is then correct modulo the Gram kernel, which
    every pairing annihilates.
    """
    n, y = exact(n), exact(y)
    return _solve(basis, n, y_shrub, lambda s: _op_edge(s, i, j, y), allow_singular)[0]


def vertical_operator(j: int, y, basis: PartitionBasis, n, y_shrub=None, allow_singular=False) -> np.ndarray:
    """Position ``j`` (0-based) becomes internal; new boundary vertex via an edge of weight ``y``."""
    n, y = exact(n), exact(y)
    return _solve(basis, n, y_shrub, lambda s: _op_vertical(s, j, y), allow_singular)[0]


# --------------------------------------------------------------------------
# Closed forms in the identification basis (second route for the Gram solve)


def identification_edge(i: int, j: int, y, basis: PartitionBasis) -> np.ndarray:
    """``f_A -> f_A + (y-1) f_{A with i, j merged}``."""
    d = len(basis)
    M = np.zeros((d, d))
    for a, p in enumerate(basis.elements):
        M[a, a] += 1
        M[basis.index(_merge(p, i, j)), a] += float(y) - 1
    return M


def identification_vertical(j: int, y, basis: PartitionBasis, n) -> np.ndarray:
    """``f_A -> (y-1) f_A + (n if {j} is a block else 1) f_{A with j split off}``."""
    d = len(basis)
    M = np.zeros((d, d))
    for a, p in enumerate(basis.elements):
        M[a, a] += float(y) - 1
        single = any(block == (j,) for block in p)
        M[basis.index(_split(p, j)), a] += float(n) if single else 1.0
    return M


def _canon(blocks) -> Partition:
    return tuple(sorted(tuple(sorted(b)) for b in blocks if b))


def _merge(p: Partition, i: int, j: int) -> Partition:
    bi = next(b for b in p if i in b)
    bj = next(b for b in p if j in b)
    if bi == bj:
        return p
    return _canon([b for b in p if b not in (bi, bj)] + [bi + bj])


def _split(p: Partition, j: int) -> Partition:
    return _canon([tuple(v for v in b if v != j) for b in p] + [(j,)])


# --------------------------------------------------------------------------
# Transfer-matrix evaluation


@dataclass
class TransferPlan:
    width: int
    order: list
    slot_of: dict
    steps: list  # ("restart", slot) | ("edge", s1, s2, y) | ("loop", y)


def plan_layout(G: PottsGraph, order: Sequence[int] | None = None) -> TransferPlan:
    """Assign slots along a linear vertex order.

    A slot is freed once every neighbour of its vertex has been placed.
    Edges are applied as soon as both ends are placed.
    """
    order = list(range(G.n_vertices)) if order is None else list(order)
    if sorted(order) != list(range(G.n_vertices)):
        raise ValueError("layout must be a permutation of the vertices")
    pos = {v: i for i, v in enumerate(order)}
    last_need = {v: pos[v] for v in order}
    for u, v, _ in G.edges:
        last_need[u] = max(last_need[u], pos[v])
        last_need[v] = max(last_need[v], pos[u])
    incident: dict[int, list] = {v: [] for v in order}
    for u, v, y in G.edges:
        incident[order[max(pos[u], pos[v])]].append((u, v, y))
    slot_of: dict[int, int] = {}
    occupant: list = []
    used: list[bool] = []
    steps = []
    for t, v in enumerate(order):
        free = [s for s, o in enumerate(occupant) if o is None or last_need[o] < t]
        if free:
            s = free[0]
        else:
            s = len(occupant)
            occupant.append(None)
            used.append(False)
        if used[s]:
            steps.append(("restart", s))
        used[s] = True
        occupant[s] = v
        slot_of[v] = s
        for a, b, y in incident[v]:
            if a == b:
                steps.append(("loop", y))
            else:
                steps.append(("edge", slot_of[a], slot_of[b], y))
    return TransferPlan(len(occupant), order, slot_of, steps)


def z_transfer(G: PottsGraph, n, order: Sequence[int] | None = None, via_gram: bool = True):
    """Partition function as a product of edge operators on ``V(width)``.

    The state starts as the all-singletons identification vector; each slot's
    first vertex uses the slot's fresh boundary vertex and later vertices
    restart it with ``B`` at edge weight 1.  The final functional sums a
    state ``f_A`` over boundary colourings, giving ``n^|A|``.
    """
    plan = plan_layout(G, order)
    k = plan.width
    if k > MAX_TRANSFER_WIDTH:
        raise PottsBudgetExceeded(f"layout width {k} exceeds {MAX_TRANSFER_WIDTH}")
    basis = partition_basis(k, planar=False)
    n_x = exact(n)
    vec = np.zeros(len(basis))
    vec[basis.index(tuple((j,) for j in range(k)))] = 1.0
    scalar = 1.0
    cache: dict = {}

    def op(key, build):
        if key not in cache:
            cache[key] = build()
        return cache[key]

    for step in plan.steps:
        if step[0] == "loop":
            scalar *= float(step[1])
        elif step[0] == "restart":
            j = step[1]
            if via_gram:
                M = op(("B", j), lambda: vertical_operator(j, 1, basis, n_x, allow_singular=True))
            else:
                M = op(("B", j), lambda: identification_vertical(j, 1, basis, n_x))
            vec = M @ vec
        else:
            _, a, b, y = step
            i, j = min(a, b), max(a, b)
            if via_gram:
                M = op(("A", i, j, y), lambda: pair_operator(i, j, y, basis, n_x, allow_singular=True))
            else:
                M = op(("A", i, j, y), lambda: identification_edge(i, j, y, basis))
            vec = M @ vec
    final = np.array([float(n_x) ** len(p) for p in basis.elements])
    return scalar * float(final @ vec)
