"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a one-line verdict; the lines are printed together at the
end of the pytest run (see ``conftest.py``).
"""
import random
import time
from fractions import Fraction as F

import numpy as np

from conftest import close, generic_points, random_plat, random_word
from skeinhard.braid import BraidWord, PlatPresentation, plat_union
from skeinhard.bracket import bracket_bruteforce, bracket_morse, jones, plat_probability
from skeinhard.circuit import (
    INTEGER_GATE,
    QuantumCircuit,
    H,
    X,
    postselect_contract,
    rotation_return_distances,
    simulate_accept,
)
from skeinhard.compiler import QubitEncoding, compile_circuit, default_net, verify_reduction
from skeinhard.gadgets import ThresholdOracle, promise_compare, promise_pair, threshold_bounds
from skeinhard.params import BracketParams
from skeinhard.potts.density import density_certificate, kauffman_generators, potts_generators
from skeinhard.potts.graph import (
    PottsGraph,
    dual_weight,
    random_graph,
    tutte_cd_oracle,
    tutte_from_potts,
    z_cluster,
    z_colorings,
)
from skeinhard.potts.shift import implement_weight, parallel_witness, series_witness, shift_parallel, shift_series
from skeinhard.potts.transfer import partition_basis, plan_layout, z_transfer

VERDICTS: list[str] = []


def record(number: str, title: str, ok: bool, detail: str) -> None:
    VERDICTS.append(f"criterion {number:>3} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    print(VERDICTS[-1])


def test_c01_bracket_oracle_equivalence():
    rng = random.Random(101)
    points = [BracketParams.root_of_unity(5), BracketParams.root_of_unity(7)] + generic_points(13, 5)
    t0 = time.perf_counter()
    checked = worst = 0
    bad = 0
    for params in points:
        for _ in range(30):
            p = random_plat(rng, 6, 12)
            m, b = bracket_morse(p, params), bracket_bruteforce(p, params)
            worst = max(worst, abs(m - b) / max(abs(b), 1e-300))
            bad += not close(m, b)
            checked += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and checked >= 200 and elapsed < 60
    record("1", "bracket oracle equivalence", ok, f"{checked} plats at 7 points, worst rel {worst:.1e}, {elapsed:.1f}s")
    assert ok


def test_c02_invariance_suite():
    rng = random.Random(202)
    r7 = BracketParams.root_of_unity(7)
    points = [BracketParams.root_of_unity(5), r7] + generic_points(5, 2)
    t0 = time.perf_counter()
    counts = {"relations": 0, "r1": 0, "union": 0}
    bad = 0
    while counts["relations"] < 100:
        p = random_plat(rng, 6, 10)
        n = p.braid.n_strands
        if n < 4:
            continue
        letters = list(p.braid.letters)
        pos = rng.randint(0, len(letters))
        i = rng.randint(1, n - 2)
        base = bracket_morse(p, r7)
        cancel = letters[:pos] + [(i, 1), (i, -1)] + letters[pos:]
        lhs = letters[:pos] + [(i, 1), (i + 1, 1), (i, 1)] + letters[pos:]
        rhs = letters[:pos] + [(i + 1, 1), (i, 1), (i + 1, 1)] + letters[pos:]
        bad += not close(bracket_morse(PlatPresentation(BraidWord(n, tuple(cancel))), r7), base)
        bad += not close(
            bracket_morse(PlatPresentation(BraidWord(n, tuple(lhs))), r7),
            bracket_morse(PlatPresentation(BraidWord(n, tuple(rhs))), r7),
        )
        counts["relations"] += 1
    for k in range(100):
        params = points[k % len(points)]
        w = random_word(rng, rng.randint(1, 3), 8)
        wider = BraidWord(w.n_strands + 1, w.letters + ((w.n_strands, rng.choice((1, -1))),))
        bad += not close(jones(wider, params), jones(w, params))
        counts["r1"] += 1
    for k in range(100):
        params = points[k % len(points)]
        p1, p2 = random_plat(rng, 4, 6), random_plat(rng, 4, 6)
        bad += not close(bracket_morse(plat_union(p1, p2), params), bracket_morse(p1, params) * bracket_morse(p2, params))
        counts["union"] += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 60
    record("2", "invariance suite", ok, f"{counts} with {bad} violations, {elapsed:.1f}s")
    assert ok


def test_c03_plat_probability_range():
    rng = random.Random(303)
    lo, hi, n = 1.0, 0.0, 0
    for r in (5, 7, 8, 10):
        params = BracketParams.root_of_unity(r)
        for _ in range(60):
            p = plat_probability(random_plat(rng, 8, 14), params)
            lo, hi, n = min(lo, p), max(hi, p), n + 1
    ident = [plat_probability(PlatPresentation.identity(g), BracketParams.root_of_unity(r)) for g in (1, 2, 3, 4) for r in (5, 7)]
    ok = lo >= -1e-12 and hi <= 1 + 1e-12 and all(x == 1.0 for x in ident)
    record("3", "plat probability in [0,1], identity exactly 1", ok, f"{n} plats in [{lo:.3g}, {hi:.6f}], identities {set(ident)}")
    assert ok


def test_c04_reduction_end_to_end():
    t0 = time.perf_counter()
    params = BracketParams.root_of_unity(5)
    enc = QubitEncoding(params)
    net = default_net(params)
    details, ok = [], True
    for name, gates in (("empty", ()), ("H", (H(0),)), ("X", (X(0),))):
        c = QuantumCircuit(1, gates)
        res = compile_circuit(c, 0.02, enc, net)
        check = verify_reduction(c, res, params)
        err = abs(check["p_plat"] - simulate_accept(c)["probability"])
        ok &= err <= 0.05 and check["pass"]
        details.append(f"{name}: |dp|={err:.2e}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    record("4", "reduction end to end at r=5, eps=0.02", ok, ", ".join(details) + f", {elapsed:.1f}s")
    assert ok


def test_c05_gadget_inequalities():
    checked = violations = 0
    for b in np.linspace(0, 0.25, 102)[1:-1]:
        for a in np.linspace(0, 1, 100):
            r = threshold_bounds(a, b)
            for key in ("no_side", "yes_side"):
                if r[key] is not None:
                    checked += 1
                    violations += not r[key]
    points = 100 * 100
    ok = violations == 0 and checked > 0
    record("5", "postselected-success bounds (C = 2)", ok, f"{points} grid points, {checked} premise instances, {violations} violations")
    assert ok


def test_c06_promise_driver():
    rng = random.Random(606)
    n = 20
    wrong = over = 0
    for trial in range(1000):
        a, b = promise_pair(rng, n, 8.0)
        oracle = ThresholdOracle(a, b, gap=2.0, mode=("exact", "random", "adversarial")[trial % 3], seed=trial)
        res = promise_compare(oracle, n)
        wrong += res["answer"] != ("AoverB" if a > b else "BoverA")
        over += oracle.calls > 2 * (n + 1)
    ok = wrong == 0 and over == 0
    record("6", "promise comparison", ok, f"1000 pairs, {wrong} wrong, {over} over the 2(n+1) query limit")
    assert ok


def test_c07_potts_oracles():
    rng = random.Random(707)
    t0 = time.perf_counter()
    mismatch = 0
    for _ in range(100):
        G = random_graph(rng, 6, 8, weights=(F(1, 2), 2, F(-3, 4), 0, F(7, 3)))
        n = rng.choice((1, 2, 3, 4))
        mismatch += z_cluster(G, n) != z_colorings(G, n)
    transfer_worst = 0.0
    done = 0
    while done < 40:
        G = random_graph(rng, 6, 8, weights=(2, F(1, 3), -2, F(5, 2)))
        order = list(range(G.n_vertices))
        rng.shuffle(order)
        if plan_layout(G, order).width > 4:
            continue
        n = rng.choice((2, 3, F(5, 2), 4, F(7, 3)))
        ref = float(z_cluster(G, n))
        transfer_worst = max(transfer_worst, abs(z_transfer(G, n, order) - ref) / max(1.0, abs(ref)))
        done += 1
    tutte_worst = 0.0
    for _ in range(10):
        x, y = rng.uniform(-3, 3), rng.uniform(-3, 3)
        for _ in range(5):
            G = random_graph(rng, 6, 8)
            a, b = tutte_from_potts(G, x, y), tutte_cd_oracle(G, x, y)
            tutte_worst = max(tutte_worst, abs(a - b) / max(1.0, abs(b)))
    elapsed = time.perf_counter() - t0
    ok = mismatch == 0 and transfer_worst <= 1e-9 and tutte_worst <= 1e-9 and elapsed < 60
    record(
        "7",
        "Potts oracle equivalence",
        ok,
        f"cluster/colorings {mismatch} mismatches of 100, transfer worst {transfer_worst:.1e}, Tutte worst {tutte_worst:.1e}, {elapsed:.1f}s",
    )
    assert ok


def test_c08_shift_calculus():
    rng = random.Random(808)
    exact_fail = 0
    dual_worst = 0.0
    done = 0
    probe = PottsGraph(2, ((0, 1, F(3, 2)),), boundary=(0, 1))
    while done < 50:
        y1 = F(rng.randint(-12, 12), rng.randint(1, 4))
        y2 = F(rng.randint(-12, 12), rng.randint(1, 4))
        n = F(rng.randint(1, 16), rng.randint(1, 3))
        if 1 in (y1, y2) or y1 + y2 + n - 2 == 0:
            continue
        s = shift_series(y1, y2, n)
        if s.y_eff == 1:
            continue
        par_single = PottsGraph(2, ((0, 1, shift_parallel(y1, y2)),), boundary=(0, 1))
        exact_fail += z_cluster(parallel_witness(y1, y2).glue(probe), n) != z_cluster(par_single.glue(probe), n)
        ser_single = PottsGraph(2, ((0, 1, s.y_eff),), boundary=(0, 1))
        exact_fail += z_cluster(series_witness(y1, y2).glue(probe), n) != s.const_factor * z_cluster(ser_single.glue(probe), n)
        x1, x2 = float(dual_weight(y1, n)), float(dual_weight(y2, n))
        sf = shift_series(float(y1), float(y2), float(n))
        dual_worst = max(dual_worst, abs(sf.x_eff - x1 * x2) / max(1.0, abs(x1 * x2)))
        done += 1
    ok = exact_fail == 0 and dual_worst <= 1e-12
    record("8", "shift calculus", ok, f"50 triples, {exact_fail} exact Z failures, float dual worst {dual_worst:.1e}")
    assert ok


def test_c09_dimension_counts():
    bell = [len(partition_basis(k)) for k in range(1, 9)]
    catalan = [len(partition_basis(k, planar=True)) for k in range(1, 9)]
    ok = bell == [1, 2, 5, 15, 52, 203, 877, 4140] and catalan == [1, 2, 5, 14, 42, 132, 429, 1430]
    # the listed closed forms start at k = 0
    ok &= [len(partition_basis(k)) for k in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]
    ok &= [len(partition_basis(k, True)) for k in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    record("9", "partition basis sizes", ok, f"Bell {bell}, Catalan {catalan}")
    assert ok


def test_c10_weight_implementation():
    details, ok = [], True
    for target in (3.7, 0.2, -5):
        tree = implement_weight([F(-2)], 5, target, 1e-3)
        got = float(tree.evaluate(exact_arith=True))
        ok &= abs(got - target) <= 1e-3 and tree.size <= 100_000
        details.append(f"{target}: {got:.6f} ({tree.size} nodes)")
    record("10", "weight implementation n=5, y=-2", ok, ", ".join(details))
    assert ok


def test_c11_density_certificates():
    t0 = time.perf_counter()
    r5 = density_certificate(kauffman_generators(5))
    r6 = density_certificate(kauffman_generators(6))
    potts = density_certificate(potts_generators(F(5), 3, F(-2)), mode="one_parameter")
    elapsed = time.perf_counter() - t0
    ok = r5.lie_dim == 3 and r5.dense and not r6.dense and potts.lie_dim == 24 and potts.dense and elapsed < 300
    record(
        "11",
        "density certificates",
        ok,
        f"r=5 lie_dim {r5.lie_dim}, r=6 dense={r6.dense}, Potts n=5 k=3 lie_dim {potts.lie_dim}, {elapsed:.1f}s",
    )
    assert ok


def test_c12a_integer_gate_block():
    block = postselect_contract(INTEGER_GATE, [1, 0], [1, 0])
    ok = block.tolist() == [[4, -3], [3, 4]]
    record("12a", "postselected integer-gate block", ok, f"{block.real.astype(int).tolist()}")
    assert ok


def test_c12b_rotation_avoids_identity():
    R = postselect_contract(INTEGER_GATE, [1, 0], [1, 0]) / 5
    d = rotation_return_distances(R.real, 10_000)
    k = int(np.argmin(d)) + 1
    ok = bool(d.min() > 1e-3)
    record("12b", "normalized powers avoid I for 1e4 steps at 1e-3", ok, f"closest return {d.min():.3e} at k={k}")
    assert ok, f"||R^{k} - I|| = {d.min():.3e} <= 1e-3"
