"""Potts partition functions of weighted multigraphs.

``Z(G; n, y) = sum over n-colourings of prod_e y_e^[e monochromatic]``.
Two evaluators: direct colouring enumeration (integer ``n``) and the
random-cluster expansion ``sum_{A subset E} n^{k(A)} prod_{e in A} (y_e - 1)``
(any real ``n``).  Rational inputs give exact :class:`fractions.Fraction`
results.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Hashable, Sequence

import numpy as np

MAX_COLORINGS = 10**8
MAX_CLUSTER_EDGES = 24
MAX_CD_EDGES = 20


class PottsBudgetExceeded(RuntimeError):
    pass


class SingularParameters(ValueError):
    pass


def exact(v):
    """Promote ints and Fractions to Fraction; leave floats alone."""
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, Rational):
        return Fraction(v)
    return v


@dataclass(frozen=True)
class PottsGraph:
    """Multigraph on vertices ``0..n_vertices-1`` with per-edge weights.

    ``edges`` holds ``(u, v, y)``; loops and parallel edges are allowed.
    ``boundary`` is an ordered list of distinct marked vertices.
    """

    n_vertices: int
    edges: tuple[tuple[int, int, object], ...] = ()
    boundary: tuple[int, ...] = ()
    planar: bool = False
    labels: tuple[Hashable, ...] | None = None

    def __post_init__(self):
        edges = tuple((int(u), int(v), exact(y)) for u, v, y in self.edges)
        for u, v, y in edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if isinstance(y, float) and not np.isfinite(y):
                raise ValueError("edge weights must be finite")
        if len(set(self.boundary)) != len(self.boundary):
            raise ValueError("boundary vertices must be distinct")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "boundary", tuple(int(b) for b in self.boundary))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def with_weight(self, y) -> "PottsGraph":
        return PottsGraph(self.n_vertices, tuple((u, v, y) for u, v, _ in self.edges), self.boundary, self.planar)

    def components(self) -> int:
        return _count_components(self.n_vertices, [(u, v) for u, v, _ in self.edges])

    def glue(self, other: "PottsGraph") -> "PottsGraph":
        """Identify ``self.boundary[i]`` with ``other.boundary[i]``; the result has no boundary."""
        if len(self.boundary) != len(other.boundary):
            raise ValueError("boundary sizes differ")
        # other's boundary maps onto ours, its interior vertices are appended
        mapping = {}
        for a, b in zip(self.boundary, other.boundary):
            mapping[b] = a
        nxt = self.n_vertices
        for v in range(other.n_vertices):
            if v not in mapping:
                mapping[v] = nxt
                nxt += 1
        edges = self.edges + tuple((mapping[u], mapping[v], y) for u, v, y in other.edges)
        return PottsGraph(nxt, edges)

    # ---- JSON

    def to_json(self) -> str:
        def enc(y):
            return str(y) if isinstance(y, Fraction) and y.denominator != 1 else (int(y) if isinstance(y, Fraction) else y)

        verts = list(self.labels) if self.labels is not None else list(range(self.n_vertices))
        return json.dumps(
            {
                "vertices": verts,
                "edges": [[verts[u], verts[v], enc(y)] for u, v, y in self.edges],
                "boundary": [verts[b] for b in self.boundary],
                "planar": self.planar,
            }
        )

    @classmethod
    def from_json(cls, text: str | dict) -> "PottsGraph":
        data = json.loads(text) if isinstance(text, str) else text
        verts = data["vertices"]
        if isinstance(verts, int):
            verts = list(range(verts))
        index = {v: i for i, v in enumerate(verts)}
        if len(index) != len(verts):
            raise ValueError("duplicate vertex labels")

        def dec(y):
            if isinstance(y, str):
                return Fraction(y)
            return y

        try:
            edges = tuple((index[u], index[v], dec(y)) for u, v, y in data.get("edges", []))
            boundary = tuple(index[b] for b in data.get("boundary", []))
        except KeyError as exc:
            raise ValueError(f"unknown vertex {exc.args[0]!r}") from None
        return cls(len(verts), edges, boundary, bool(data.get("planar", False)), tuple(verts))


def _count_components(n_vertices: int, pairs) -> int:
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n_vertices
    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps


def _weights(G: PottsGraph, weights):
    if weights is None:
        return [y for _, _, y in G.edges]
    if np.isscalar(weights) or isinstance(weights, Fraction):
        return [exact(weights)] * G.n_edges
    w = [exact(y) for y in weights]
    if len(w) != G.n_edges:
        raise ValueError("one weight per edge expected")
    return w


def z_colorings(G: PottsGraph, n: int, weights=None):
    """Sum over all ``n**v`` colourings, grouped by the set of monochromatic edges."""
    if int(n) != n or n < 1:
        raise ValueError("z_colorings needs an integer n >= 1")
    n = int(n)
    v = G.n_vertices
    if n**v > MAX_COLORINGS:
        raise PottsBudgetExceeded(f"{n}**{v} colourings exceed the budget of {MAX_COLORINGS}")
    w = _weights(G, weights)
    if G.n_edges > 62:
        raise PottsBudgetExceeded("at most 62 edges are supported by the colouring enumerator")
    counts: dict[int, int] = {}
    total = n**v
    chunk = 1 << 20
    powers = n ** np.arange(v - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        colors = (idx[:, None] // powers[None, :]) % n if v else np.zeros((len(idx), 0), dtype=np.int64)
        mask = np.zeros(len(idx), dtype=np.int64)
        for e, (a, b, _) in enumerate(G.edges):
            mask |= (colors[:, a] == colors[:, b]).astype(np.int64) << e
        keys, cnt = np.unique(mask, return_counts=True)
        for k, c in zip(keys.tolist(), cnt.tolist()):
            counts[k] = counts.get(k, 0) + c
    out = 0
    for mask, c in counts.items():
        term = Fraction(c)
        for e in range(G.n_edges):
            if mask >> e & 1:
                term = term * w[e]
        out = out + term
    return out


def z_cluster(G: PottsGraph, n, weights=None):
    """Random-cluster expansion, valid for any real (or complex) ``n``."""
    if G.n_edges > MAX_CLUSTER_EDGES:
        raise PottsBudgetExceeded(f"{G.n_edges} edges exceed the subset-sum budget of {MAX_CLUSTER_EDGES}")
    n = exact(n)
    w = [y - 1 for y in _weights(G, weights)]
    edges = [(a, b, wt) for (a, b, _), wt in zip(G.edges, w) if wt != 0]
    m = len(edges)
    powers = [n**k for k in range(G.n_vertices + 1)]

    def rec(i, parent, comps, prod):
        if i == m:
            return powers[comps] * prod
        a, b, wt = edges[i]
        total = rec(i + 1, parent, comps, prod)
        pa = parent[:]
        ra, rb = _find(pa, a), _find(pa, b)
        if ra != rb:
            pa[ra] = rb
            return total + rec(i + 1, pa, comps - 1, prod * wt)
        return total + rec(i + 1, pa, comps, prod * wt)

    return rec(0, list(range(G.n_vertices)), G.n_vertices, Fraction(1) if _all_exact([n] + w) else 1.0)


def _all_exact(values) -> bool:
    return all(isinstance(x, Fraction) for x in values)


def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


def dual_weight(y, n):
    """``x`` with ``n = (x - 1)(y - 1)``; ``None`` for ``y = 1``."""
    y, n = exact(y), exact(n)
    if y == 1:
        return None
    return 1 + n / (y - 1)


def tutte_from_potts(G: PottsGraph, x, y):
    """``T(G; x, y) = (y-1)^-v (x-1)^-c Z(G; (x-1)(y-1), y)``."""
    x, y = exact(x), exact(y)
    if x == 1 or y == 1:
        raise SingularParameters("x = 1 or y = 1 makes the conversion singular")
    n = (x - 1) * (y - 1)
    Z = z_cluster(G, n, [y] * G.n_edges)
    return Z / ((y - 1) ** G.n_vertices * (x - 1) ** G.components())


def tutte_cd_oracle(G: PottsGraph, x, y):
    """Contraction-deletion: bridge -> x T(G/e), loop -> y T(G-e), else T(G-e) + T(G/e)."""
    if G.n_edges > MAX_CD_EDGES:
        raise PottsBudgetExceeded(f"{G.n_edges} edges exceed the contraction-deletion budget of {MAX_CD_EDGES}")
    x, y = exact(x), exact(y)
    memo: dict = {}

    def canon(edges):
        return tuple(sorted((min(a, b), max(a, b)) for a, b in edges))

    def rec(nv, edges):
        if not edges:
            return 1
        key = (nv, canon(edges))
        if key in memo:
            return memo[key]
        (a, b), rest = edges[0], edges[1:]
        if a == b:
            out = y * rec(nv, rest)
        else:
            contracted = [(a if u == b else u, a if v == b else v) for u, v in rest]
            if _count_components(nv, rest) > _count_components(nv, edges):
                out = x * rec(nv, contracted)
            else:
                out = rec(nv, rest) + rec(nv, contracted)
        memo[key] = out
        return out

    return rec(G.n_vertices, [(u, v) for u, v, _ in G.edges])


# ---- small graph builders used in tests and demos


def path_graph(n_vertices: int, y=2) -> PottsGraph:
    return PottsGraph(n_vertices, tuple((i, i + 1, y) for i in range(n_vertices - 1)))


def cycle_graph(n_vertices: int, y=2) -> PottsGraph:
    return PottsGraph(n_vertices, tuple((i, (i + 1) % n_vertices, y) for i in range(n_vertices)))


def grid_graph(rows: int, cols: int, y=2) -> PottsGraph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, y))
            if r + 1 < rows:
                edges.append((v, v + cols, y))
    return PottsGraph(rows * cols, tuple(edges), planar=True)


def random_graph(rng, max_vertices: int = 6, max_edges: int = 8, weights: Sequence = (2,)) -> PottsGraph:
    nv = rng.randint(1, max_vertices)
    ne = rng.randint(0, max_edges)
    edges = tuple((rng.randrange(nv), rng.randrange(nv), rng.choice(list(weights))) for _ in range(ne))
    return PottsGraph(nv, edges)
