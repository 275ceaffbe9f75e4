"""Series/parallel shift operations and weight implementation.

Two edges in parallel act as one edge of weight ``y1 y2``.  Two edges in
series (through a summed internal vertex) act, up to the constant
``y1 + y2 + n - 2``, as one edge of weight
``(y1 y2 + n - 1) / (y1 + y2 + n - 2)``, whose dual is ``x1 x2``.

:func:`implement_weight` searches for a composition DAG over the start
weights whose effective weight approximates a target.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .graph import PottsGraph, dual_weight, exact

MAX_TREE_NODES = 100_000


class DegenerateSeries(ZeroDivisionError):
    pass


class SearchBudgetExhausted(RuntimeError):
    def __init__(self, message: str, best_distance: float):
        super().__init__(f"{message} (best distance {best_distance:.3g})")
        self.best_distance = best_distance


def shift_parallel(y1, y2):
    return exact(y1) * exact(y2)


@dataclass(frozen=True)
class SeriesResult:
    y_eff: object
    x_eff: object
    const_factor: object


def shift_series(y1, y2, n) -> SeriesResult:
    y1, y2, n = exact(y1), exact(y2), exact(n)
    const = y1 + y2 + n - 2
    if const == 0:
        raise DegenerateSeries("y1 + y2 + n - 2 = 0")
    y = (y1 * y2 + n - 1) / const
    return SeriesResult(y, dual_weight(y, n), const)


def series_witness(y1, y2) -> PottsGraph:
    """Path ``0 - 2 - 1`` with the middle vertex summed: the series composition as a graph."""
    return PottsGraph(3, ((0, 2, y1), (2, 1, y2)), boundary=(0, 1))


def parallel_witness(y1, y2) -> PottsGraph:
    return PottsGraph(2, ((0, 1, y1), (0, 1, y2)), boundary=(0, 1))


# --------------------------------------------------------------------------
# Composition DAGs


@dataclass
class CompositionTree:
    """A DAG of shift operations.

    ``nodes[i]`` is ``("leaf", k)`` (start weight ``Y[k]``), ``("par", a, b)`` or
    ``("ser", a, b)`` with ``a, b < i``.  ``root`` is the output node.
    """

    Y: tuple
    n: object
    nodes: list = field(default_factory=list)
    root: int = -1
    notes: list = field(default_factory=list)
    _index: dict = field(default_factory=dict, repr=False)

    def leaf(self, k: int) -> int:
        return self._add(("leaf", k))

    def par(self, a: int, b: int) -> int:
        return self._add(("par", a, b))

    def ser(self, a: int, b: int) -> int:
        return self._add(("ser", a, b))

    def _add(self, node) -> int:
        if node in self._index:
            return self._index[node]
        self.nodes.append(node)
        self._index[node] = len(self.nodes) - 1
        return len(self.nodes) - 1

    @property
    def size(self) -> int:
        """Number of DAG nodes reachable from the root."""
        seen = set()
        stack = [self.root]
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            if self.nodes[i][0] != "leaf":
                stack.extend(self.nodes[i][1:])
        return len(seen)

    def evaluate(self, node: int | None = None, exact_arith: bool = False):
        """Effective weight of ``node`` recomputed with :func:`shift_parallel` / :func:`shift_series` only."""
        node = self.root if node is None else node
        cache: dict[int, object] = {}
        n = exact(self.n) if exact_arith else float(self.n)
        Y = [exact(y) if exact_arith else float(y) for y in self.Y]
        for i in range(node + 1):
            kind = self.nodes[i]
            if kind[0] == "leaf":
                cache[i] = Y[kind[1]]
            elif kind[0] == "par":
                cache[i] = shift_parallel(cache[kind[1]], cache[kind[2]])
            else:
                cache[i] = shift_series(cache[kind[1]], cache[kind[2]], n).y_eff
        return cache[node]

    def describe(self, node: int | None = None, depth: int = 0) -> str:
        node = self.root if node is None else node
        kind = self.nodes[node]
        if kind[0] == "leaf":
            return f"y{kind[1]}"
        op = "||" if kind[0] == "par" else "--"
        if depth > 6:
            return f"#{node}"
        return f"({self.describe(kind[1], depth + 1)} {op} {self.describe(kind[2], depth + 1)})"

    def to_dict(self) -> dict:
        return {"nodes": [list(x) for x in self.nodes], "root": self.root, "size": self.size, "notes": self.notes}


def _val(tree: CompositionTree, i: int, memo: dict) -> float:
    if i not in memo:
        memo[i] = float(tree.evaluate(i))
    return memo[i]


def _odd_parallel_power(tree: CompositionTree, base: int, p: int) -> int:
    node = base
    for _ in range(p - 1):
        node = tree.par(node, base)
    return node


def _small_closure(Y: Sequence[float], n: float, max_size: int):
    """Values reachable with trees of at most ``max_size`` leaves, smallest tree first."""
    by_size: dict[int, list] = {1: [(y, ("leaf", k)) for k, y in enumerate(Y)]}
    for s in range(2, max_size + 1):
        out = []
        seen = set()
        for s1 in range(1, s):
            s2 = s - s1
            for y1, t1 in by_size[s1]:
                for y2, t2 in by_size[s2]:
                    cands = [(y1 * y2, ("par", t1, t2))]
                    den = y1 + y2 + n - 2
                    if den != 0:
                        cands.append(((y1 * y2 + n - 1) / den, ("ser", t1, t2)))
                    for v, t in cands:
                        if not math.isfinite(v):
                            continue
                        key = round(v, 12)
                        if key not in seen:
                            seen.add(key)
                            out.append((v, t))
        by_size[s] = out
    return by_size


def _build(tree: CompositionTree, spec) -> int:
    if spec[0] == "leaf":
        return tree.leaf(spec[1])
    a = _build(tree, spec[1])
    b = _build(tree, spec[2])
    return tree.par(a, b) if spec[0] == "par" else tree.ser(a, b)


def _greedy_product(tree: CompositionTree, R: float, family: list[tuple[float, int]], combine) -> tuple[int | None, float]:
    """Multiply factors from ``family`` (values > 1, decreasing) while staying <= R."""
    node, prod = None, 1.0
    for f, fnode in family:
        while prod * f <= R * (1 + 1e-15):
            prod *= f
            node = fnode if node is None else combine(node, fnode)
    return node, prod


def implement_weight(
    Y: Sequence,
    n,
    target,
    eps: float,
    budget: int = MAX_TREE_NODES,
    small_size: int = 4,
) -> CompositionTree:
    """Composition DAG over the start weights ``Y`` with effective weight within ``eps`` of ``target``.

    First tries every tree with at most ``small_size`` leaves.  Otherwise it
    builds a seed with ``x, y > 1`` and two families of factors approaching
    1 from above: series powers of the seed (in ``y``) and parallel powers
    (in the dual ``x``).  The target, divided by a pivot of the right sign,
    is then matched greedily by products of those factors.  When every
    start weight has ``x, y >= -1``, an odd parallel power is taken first to
    push the dual below ``-1``.
    """
    n_f = float(n)
    target = float(target)
    if target == 1:
        raise ValueError("target weight 1 is the vacuous edge")
    Yf = [float(y) for y in Y]
    tree = CompositionTree(tuple(Y), n)

    def finish(root: int) -> CompositionTree:
        tree.root = root
        got = float(tree.evaluate())
        if abs(got - target) > eps:
            raise SearchBudgetExhausted("composition did not reach the target", abs(got - target))
        if tree.size > budget:
            raise SearchBudgetExhausted(f"tree of {tree.size} nodes exceeds the budget", abs(got - target))
        return tree

    # 1. small trees
    closure = _small_closure(Yf, n_f, small_size)
    for s in range(1, small_size + 1):
        hits = [(abs(v - target), t) for v, t in closure[s] if abs(v - target) <= eps]
        if hits:
            hits.sort(key=lambda h: h[0])
            return finish(_build(tree, hits[0][1]))

    memo: dict[int, float] = {}
    leaves = [tree.leaf(k) for k in range(len(Y))]

    # 2. escape step: all x, y >= -1  ->  odd parallel power with x < -1
    def dual(v):
        return None if v == 1 else 1 + n_f / (v - 1)

    pool = list(leaves)
    if all(y >= -1 and (dual(y) is None or dual(y) >= -1) for y in Yf):
        for k, y in enumerate(Yf):
            if -1 < y < 0:
                for p in range(3, 101, 2):
                    if dual(y**p) is not None and dual(y**p) < -1:
                        node = _odd_parallel_power(tree, leaves[k], p)
                        tree.notes.append({"escape": "odd parallel power", "power": p, "x": dual(y**p)})
                        pool.append(node)
                        break
                break

    # 3. seed with y > 1 (hence x > 1): a pool value, a square, or a series square
    candidates = []
    for node in list(pool):
        v = _val(tree, node, memo)
        candidates.append((v, node))
        candidates.append((v * v, ("par", node)))
        d = 2 * v + n_f - 2
        if d != 0:
            candidates.append(((v * v + n_f - 1) / d, ("ser", node)))
    seed = None
    for v, how in sorted(candidates, key=lambda c: abs(c[0] - 4)):
        if v > 1 + 1e-9 and math.isfinite(v):
            if isinstance(how, tuple):
                seed = tree.par(how[1], how[1]) if how[0] == "par" else tree.ser(how[1], how[1])
            else:
                seed = how
            break
    if seed is None:
        raise SearchBudgetExhausted("no start weight combination gives y > 1", math.inf)
    y_seed = _val(tree, seed, memo)

    def families(levels: int):
        ys, xs = [], []
        node = seed
        for _ in range(levels):
            v = _val(tree, node, memo)
            if v - 1 < 1e-15:
                break
            ys.append((v, node))
            node = tree.ser(node, seed)
        node = seed
        for _ in range(levels):
            v = _val(tree, node, memo)
            x = dual(v)
            if x is None or x - 1 < 1e-15:
                break
            xs.append((x, node))
            node = tree.par(node, seed)
        return ys, xs

    # 4. pivots: start weights (and the pool) of the right sign, in y or in x
    x_target = dual(target)
    best = (math.inf, None)
    for levels in (8, 16, 32, 64, 128):
        ys, xs = families(levels)
        options = []
        for node in pool + [seed]:
            v = _val(tree, node, memo)
            # y-space: target = v * (product of y-factors)
            if v != 0 and target / v >= 1:
                options.append(("y", node, target / v))
            # x-space: x_target = x_v * (product of x-factors)
            xv = dual(v)
            if x_target is not None and xv not in (None, 0) and x_target / xv >= 1:
                options.append(("x", node, x_target / xv))
        if target > 1:
            options.append(("y", None, target))
        for space, pivot, R in options:
            fam = ys if space == "y" else xs
            combine = tree.par if space == "y" else tree.ser
            node, _ = _greedy_product(tree, R, fam, combine)
            if pivot is not None:
                node = pivot if node is None else combine(pivot, node)
            if node is None:
                continue
            got = float(tree.evaluate(node))
            err = abs(got - target)
            if err < best[0]:
                best = (err, node)
        if best[0] <= eps:
            return finish(best[1])
    tree.root = best[1] if best[1] is not None else seed
    raise SearchBudgetExhausted(f"greedy search did not reach eps={eps:g} (seed y={y_seed:.4g})", best[0])
