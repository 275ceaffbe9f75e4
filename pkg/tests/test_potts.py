import json
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skeinhard.potts.density import density_certificate, kauffman_generators, potts_generators, preset_certificate
from skeinhard.potts.graph import (
    PottsBudgetExceeded,
    PottsGraph,
    SingularParameters,
    cycle_graph,
    dual_weight,
    grid_graph,
    path_graph,
    random_graph,
    tutte_cd_oracle,
    tutte_from_potts,
    z_cluster,
    z_colorings,
)
from skeinhard.potts.shift import (
    DegenerateSeries,
    SearchBudgetExhausted,
    implement_weight,
    parallel_witness,
    series_witness,
    shift_parallel,
    shift_series,
)
from skeinhard.potts.transfer import (
    edge_operator,
    gram_rank,
    identification_edge,
    identification_vertical,
    is_noncrossing,
    pair_operator,
    partition_basis,
    plan_layout,
    vertical_operator,
    z_transfer,
)

EDGE = PottsGraph(2, ((0, 1, 2),))
LOOP = PottsGraph(1, ((0, 0, 2),))
TRIANGLE = cycle_graph(3)


# ---- evaluators


def test_colorings_examples():
    for n in (1, 2, 3, 4):
        assert z_colorings(EDGE.with_weight(F(7, 3)), n) == n * F(7, 3) + n * (n - 1)
    assert z_colorings(TRIANGLE.with_weight(0), 2) == 0
    assert z_colorings(PottsGraph(1), 5) == 5


def test_colorings_budget_and_domain():
    with pytest.raises(PottsBudgetExceeded):
        z_colorings(PottsGraph(30), 2)
    with pytest.raises(ValueError):
        z_colorings(EDGE, 2.5)


def test_cluster_examples():
    assert z_cluster(EDGE, 3) == 12 == z_colorings(EDGE, 3)
    assert z_cluster(PottsGraph(4), F(5, 2)) == F(5, 2) ** 4
    assert z_cluster(EDGE, 2.5) == pytest.approx(8.75)


def test_cluster_budget():
    with pytest.raises(PottsBudgetExceeded):
        z_cluster(PottsGraph(2, tuple((0, 1, 2) for _ in range(25))), 2)


def test_cluster_matches_colorings_exactly():
    rng = random.Random(3)
    for _ in range(60):
        G = random_graph(rng, 5, 8, weights=(F(1, 2), 2, F(-3, 4), 0, 3))
        n = rng.choice((1, 2, 3, 4))
        assert z_cluster(G, n) == z_colorings(G, n)


@given(st.integers(1, 4), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.fractions(-3, 3, max_denominator=5)), max_size=7))
@settings(max_examples=60, deadline=None)
def test_cluster_colorings_property(n, edges):
    G = PottsGraph(4, tuple(edges))
    assert z_cluster(G, n) == z_colorings(G, n)


def test_tutte_examples():
    x, y = F(3), F(5)
    assert tutte_from_potts(EDGE, x, y) == x == tutte_cd_oracle(EDGE, x, y)
    assert tutte_from_potts(LOOP, x, y) == y == tutte_cd_oracle(LOOP, x, y)
    assert tutte_from_potts(TRIANGLE, x, y) == x * x + x + y == tutte_cd_oracle(TRIANGLE, x, y)
    two = PottsGraph(2, ((0, 1, 2), (0, 1, 2)))
    assert tutte_cd_oracle(two, x, y) == x + y == tutte_from_potts(two, x, y)


def test_tutte_singular():
    with pytest.raises(SingularParameters):
        tutte_from_potts(EDGE, 1, 3)


def test_tutte_oracles_agree_on_random_graphs():
    rng = random.Random(11)
    for _ in range(30):
        G = random_graph(rng, 6, 8)
        x, y = rng.uniform(-3, 3), rng.uniform(-3, 3)
        a, b = tutte_from_potts(G, x, y), tutte_cd_oracle(G, x, y)
        assert abs(a - b) <= 1e-9 * max(1, abs(b))


def test_tutte_known_polynomial():
    # K4: x^3 + 3x^2 + 2x + 4xy + 2y + 3y^2 + y^3
    K4 = PottsGraph(4, tuple((i, j, 2) for i in range(4) for j in range(i + 1, 4)))
    x, y = F(2), F(-3)
    assert tutte_cd_oracle(K4, x, y) == x**3 + 3 * x**2 + 2 * x + 4 * x * y + 2 * y + 3 * y**2 + y**3


def test_dual_weight():
    assert dual_weight(-2, 5) == F(-2, 3)
    assert dual_weight(1, 5) is None
    for y in (F(-2), F(3, 7), F(9)):
        x = dual_weight(y, 5)
        assert (x - 1) * (y - 1) == 5


def test_graph_json_roundtrip():
    G = PottsGraph.from_json({"vertices": ["a", "b", "c"], "edges": [["a", "b", "1/3"], ["b", "c", 2.5]], "boundary": ["a"], "planar": True})
    assert G.edges[0][2] == F(1, 3)
    H = PottsGraph.from_json(G.to_json())
    assert H.edges == G.edges and H.boundary == G.boundary and H.planar
    with pytest.raises(ValueError):
        PottsGraph.from_json(json.dumps({"vertices": [0, 1], "edges": [[0, 2, 1]]}))
    with pytest.raises(ValueError):
        PottsGraph(2, (), boundary=(0, 0))
    with pytest.raises(ValueError):
        PottsGraph(2, ((0, 1, float("inf")),))


# ---- shift calculus


def test_parallel_examples():
    assert shift_parallel(F(7, 2), 1) == F(7, 2)
    for y1, y2, n in [(F(2), F(-1, 3), 3), (F(5), F(1, 2), 2)]:
        assert z_colorings(parallel_witness(y1, y2), n) == z_colorings(PottsGraph(2, ((0, 1, y1 * y2),)), n)


def test_series_example():
    s = shift_series(2, 2, 3)
    assert s.y_eff == F(6, 5) and s.const_factor == 5
    path = PottsGraph(3, ((0, 1, 2), (1, 2, 2)))
    assert z_colorings(path, 3) == 5 * z_colorings(PottsGraph(2, ((0, 1, F(6, 5)),)), 3)


def test_series_degenerate():
    with pytest.raises(DegenerateSeries):
        shift_series(0, 0, 2)


@given(st.fractions(-4, 4, max_denominator=7), st.fractions(-4, 4, max_denominator=7), st.fractions(F(1, 2), 6, max_denominator=5))
@settings(max_examples=80, deadline=None)
def test_series_dual_and_witness(y1, y2, n):
    if y1 == 1 or y2 == 1 or y1 + y2 + n - 2 == 0:
        return
    s = shift_series(y1, y2, n)
    if s.y_eff != 1:
        assert s.x_eff == dual_weight(y1, n) * dual_weight(y2, n)
    # Z-level identity with the middle vertex summed, boundary vertices pinned by gluing
    probe = PottsGraph(2, ((0, 1, F(3, 2)),), boundary=(0, 1))
    lhs = z_cluster(series_witness(y1, y2).glue(probe), n)
    rhs = s.const_factor * z_cluster(PottsGraph(2, ((0, 1, s.y_eff),), boundary=(0, 1)).glue(probe), n)
    assert lhs == rhs


def test_implement_weight_square():
    tree = implement_weight([F(3)], 5, 9, 1e-12)
    assert tree.size == 2 and tree.nodes[tree.root][0] == "par"


@pytest.mark.parametrize("target", [3.7, 0.2, -5])
def test_implement_weight_targets(target):
    tree = implement_weight([F(-2)], 5, target, 1e-3)
    assert abs(float(tree.evaluate()) - target) <= 1e-3
    assert abs(float(tree.evaluate(exact_arith=True)) - target) <= 1e-3
    assert tree.size <= 100_000


def test_implement_weight_escape_case():
    # n=3, y=-0.5 has x = -1: both weights lie in [-1, 0)
    assert dual_weight(F(-1, 2), 3) == -1
    tree = implement_weight([F(-1, 2)], 3, 3.7, 1e-3)
    assert tree.notes and tree.notes[0]["power"] % 2 == 1 and tree.notes[0]["x"] < -1
    assert abs(float(tree.evaluate()) - 3.7) <= 1e-3


def test_implement_weight_unreachable():
    # positive weights in (0, 1) only reach (0, 1) under both operations at n=1
    with pytest.raises(SearchBudgetExhausted) as exc:
        implement_weight([F(1, 2)], 1, 3.0, 1e-6)
    assert exc.value.best_distance > 0
    with pytest.raises(ValueError):
        implement_weight([F(-2)], 5, 1, 1e-3)


# ---- bases, Gram matrices, edge operators


def test_partition_counts():
    assert [len(partition_basis(k)) for k in range(9)] == [1, 1, 2, 5, 15, 52, 203, 877, 4140]
    assert [len(partition_basis(k, True)) for k in range(9)] == [1, 1, 2, 5, 14, 42, 132, 429, 1430]
    assert len(set(partition_basis(5).elements)) == 52
    assert not is_noncrossing(((0, 2), (1, 3)))
    with pytest.raises(PottsBudgetExceeded):
        partition_basis(11)


def test_gram_ranks():
    assert gram_rank(partition_basis(2), 5, 3) == 2
    assert gram_rank(partition_basis(3), 2.7183, 1.4142) == 5
    assert gram_rank(partition_basis(3), 1, 3) == 1
    # identification basis at integer n: rank = partitions with at most n blocks
    assert gram_rank(partition_basis(4), 2) == 8


def test_edge_operator_laws():
    b = partition_basis(3)
    for ys in (None, F(3)):
        A = edge_operator("A", 1, F(-2), 3, b, 5, ys).matrix
        Ai = edge_operator("A", 1, F(-1, 2), 3, b, 5, ys).matrix
        assert np.allclose(A @ Ai, np.eye(5), atol=1e-9)
        assert np.allclose(edge_operator("A", 2, 1, 3, b, 5, ys).matrix, np.eye(5), atol=1e-9)
        B = edge_operator("B", 3, F(-2, 3), 3, b, 5, ys).matrix
        Bi = edge_operator("B", 3, F(-3, 2), 3, b, 5, ys).matrix
        P = B @ Bi
        assert abs(P[0, 0]) > 1e-6 and np.allclose(P, P[0, 0] * np.eye(5), atol=1e-9)


def test_edge_operator_errors():
    with pytest.raises(ValueError):
        edge_operator("A", 3, 2, 3, n=5)
    with pytest.raises(SingularParameters):
        edge_operator("A", 1, 2, 4, n=2)


def test_gram_solve_matches_closed_form():
    b = partition_basis(4)
    assert np.allclose(pair_operator(0, 3, F(-2), b, F(7, 2)), identification_edge(0, 3, -2, b), atol=1e-9)
    assert np.allclose(vertical_operator(2, F(5), b, F(7, 2)), identification_vertical(2, 5, b, F(7, 2)), atol=1e-9)


def test_transfer_examples():
    assert z_transfer(path_graph(3), 3) == pytest.approx(float(z_colorings(path_graph(3), 3)), rel=1e-9)
    assert z_transfer(PottsGraph(4), 2.5) == pytest.approx(2.5**4, rel=1e-12)
    G = grid_graph(3, 3, -2)
    assert z_transfer(G, 4) == pytest.approx(float(z_cluster(G, 4)), rel=1e-9)
    assert z_transfer(LOOP, 3) == pytest.approx(6)


def test_transfer_random_layouts():
    rng = random.Random(5)
    checked = 0
    while checked < 40:
        G = random_graph(rng, 6, 8, weights=(2, F(1, 3), -2, F(5, 2)))
        order = list(range(G.n_vertices))
        rng.shuffle(order)
        if plan_layout(G, order).width > 4:
            continue
        n = rng.choice((1, 2, 3, F(5, 2), 4, F(7, 3)))
        ref = float(z_cluster(G, n))
        for via_gram in (True, False):
            assert abs(z_transfer(G, n, order, via_gram) - ref) <= 1e-9 * max(1, abs(ref))
        checked += 1


# ---- density


def test_density_kauffman():
    r5 = density_certificate(kauffman_generators(5))
    assert r5.lie_dim == 3 and r5.dense
    r6 = density_certificate(kauffman_generators(6))
    assert not r6.dense


def test_density_potts_preset():
    res = preset_certificate("potts-n5-k3")
    assert res.lie_dim == 24 and res.dense


def test_density_small_cases():
    # a single one-parameter subgroup spans one direction
    A = np.array([[2.0, 1.0], [0.0, 0.5]])
    assert density_certificate([A], mode="one_parameter").lie_dim == 1
    with pytest.raises(ValueError):
        preset_certificate("nope")


def test_potts_generators_planar_match():
    # k=3 partitions are all non-crossing, so both modes give the same operators
    a = potts_generators(5, 3, F(-2), planar=False)
    b = potts_generators(5, 3, F(-2), planar=True)
    assert all(np.allclose(x, y) for x, y in zip(a, b))
