import math

import numpy as np
import pytest

from skeinhard.braid import BraidWord, PlatPresentation, parse_braid, plat_components, underlying_permutation
from skeinhard.bracket import bracket_morse, plat_probability
from skeinhard.circuit import CNOT, H, X, QuantumCircuit, simulate_accept
from skeinhard.compiler import (
    GadgetLink,
    InfeasibleWindow,
    Net,
    NotDense,
    QubitEncoding,
    TargetUnreachable,
    ZeroBracket,
    best_phase,
    build_net,
    compile_circuit,
    default_L0,
    default_net,
    from_su2,
    knotify,
    pad_to_window,
    plan_padding,
    projective_distance,
    pure_braid_generators,
    synthesize,
    to_su2,
    verify_reduction,
    verify_synthesis,
)
from skeinhard.params import BracketParams

R5 = BracketParams.root_of_unity(5)


@pytest.fixture(scope="module")
def enc():
    return QubitEncoding(R5)


@pytest.fixture(scope="module")
def net(enc):
    return default_net(R5)


def haar_su2(rng, count):
    q = rng.normal(size=(count, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    return [from_su2(x) for x in q]


def test_projective_distance_properties():
    rng = np.random.default_rng(0)
    U, V = haar_su2(rng, 2)
    assert projective_distance(U, np.exp(0.7j) * U) < 1e-12
    d = projective_distance(U, V)
    # brute-force minimum over a phase grid
    grid = min(np.linalg.norm(U - np.exp(1j * p) * V, 2) for p in np.linspace(0, 2 * np.pi, 20001))
    assert d == pytest.approx(grid, abs=1e-6)
    # quaternion distance equals the projective distance
    qu, qv = to_su2(U), to_su2(V)
    assert min(np.linalg.norm(qu - qv), np.linalg.norm(qu + qv)) == pytest.approx(d, abs=1e-12)
    # non-unitary blocks go through the numeric branch
    M = 0.9 * V
    grid = min(np.linalg.norm(U - np.exp(1j * p) * M, 2) for p in np.linspace(0, 2 * np.pi, 20001))
    assert projective_distance(U, M) == pytest.approx(grid, abs=1e-6)


def test_best_phase():
    M = np.diag(np.exp(1j * np.array([3.0, -3.0])))
    ph = best_phase(M)
    assert abs(ph - (-1)) < 1e-12


def test_encoding(enc):
    assert enc.rep(1).dim == 2
    assert np.linalg.norm(enc.zero_state) == pytest.approx(1.0)
    assert enc.zero_state[enc.qubit_index(1)[0]] == 1
    J = enc.inclusion(2)
    assert J.shape == (13, 4)
    assert np.allclose(J.T @ J, np.eye(4), atol=1e-12)
    with pytest.raises(NotDense):
        QubitEncoding(BracketParams.root_of_unity(6))


def test_local_generators_act_on_one_factor(enc):
    rep4, rep8 = enc.rep(1), enc.rep(2)
    for i in (1, 2, 3):
        A, leak = enc.block(rep8.letter(i, 1), 2)
        assert leak < 1e-12
        assert np.allclose(A, np.kron(rep4.letter(i, 1), np.eye(2)), atol=1e-12)
        B, leak = enc.block(rep8.letter(i + 4, 1), 2)
        assert leak < 1e-12
        assert np.allclose(B, np.kron(np.eye(2), rep4.letter(i, 1)), atol=1e-12)
    _, leak = enc.block(rep8.letter(4, 1), 2)
    assert leak > 0.1


def test_small_net(enc):
    n1 = build_net(enc, 1)
    words = {str(n1.word(i)) for i in range(n1.size)}
    assert words == {"B4:", "B4: s1", "B4: s1^-1", "B4: s2", "B4: s2^-1"}
    assert n1.length[0] == 0 and len(n1.word(0)) == 0
    n8 = build_net(enc, 1, "V8")
    assert n8.size == 15


def test_net_covering_radius_and_monotone(enc):
    radii = [build_net(enc, L).covering_radius(1000, seed=1) for L in (6, 8, 10)]
    assert radii[2] <= 0.35
    assert radii[0] >= radii[1] >= radii[2]


def test_net_round_trip(enc, tmp_path):
    net = build_net(enc, 6)
    path = tmp_path / "net.npz"
    net.save(str(path))
    back = Net.load(str(path), R5)
    assert back.size == net.size
    assert np.array_equal(back.parent, net.parent)
    assert str(back.word(net.size - 1)) == str(net.word(net.size - 1))
    with pytest.raises(ValueError):
        Net.load(str(path), BracketParams.root_of_unity(7))


def test_synthesize_trivial_targets(enc, net):
    rep = enc.rep(1)
    r = synthesize(rep.letter(1, 1), 1e-9, enc, net)
    assert str(r.word) == "B4: s1" and r.achieved_distance < 1e-12
    r = synthesize(np.eye(2), 1e-9, enc, net)
    assert len(r.word) == 0 and r.method == "NetLookup"


def test_synthesize_random_targets(enc, net):
    rng = np.random.default_rng(7)
    rep = enc.rep(1)
    for U in haar_su2(rng, 20):
        r = synthesize(U, 0.05, enc, net)
        assert r.achieved_distance <= 0.05
        d, leak = verify_synthesis(r, U, enc)
        assert abs(d - r.achieved_distance) < 1e-9 and leak == 0
        assert projective_distance(rep.word_matrix(r.word.letters), U) == pytest.approx(r.achieved_distance, abs=1e-9)


def test_sk_recursion_refines(enc, net):
    rng = np.random.default_rng(3)
    for U in haar_su2(rng, 5):
        r = synthesize(U, 1e-3, enc, net)
        assert r.achieved_distance <= 1e-3
        assert r.method == "SKRecursion"


def test_unreachable_without_sk(enc, net):
    H_ = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    with pytest.raises(TargetUnreachable):
        synthesize(H_, 1e-6, enc, net, sk_depth=0)


def test_compile_examples(enc, net):
    empty = compile_circuit(QuantumCircuit(1), 0.02, enc, net)
    assert len(empty.plat.braid) == 0 and plat_probability(empty.plat, R5) == 1.0
    empty2 = compile_circuit(QuantumCircuit(2), 0.02, enc, net)
    assert empty2.plat.g == 4 and plat_probability(empty2.plat, R5) == 1.0
    for gates, expected in (((H(0),), 0.5), ((X(0),), 0.0), ((H(0), X(0), H(0)), 1.0)):
        c = QuantumCircuit(1, gates)
        res = compile_circuit(c, 0.02, enc, net)
        assert res.plat.g == 2
        p = plat_probability(res.plat, R5)
        assert abs(p - expected) <= 0.05
        rep = verify_reduction(c, res, R5)
        assert rep["pass"] and rep["deviation"] <= rep["bound"] <= 2 * 0.02 + 1e-12


def test_compile_two_qubit_local(enc, net):
    c = QuantumCircuit(2, (H(0), X(1), H(1)))
    res = compile_circuit(c, 0.02, enc, net)
    assert all(g.leakage == 0 for g in res.gates)
    assert abs(plat_probability(res.plat, R5) - simulate_accept(c)["probability"]) <= res.bound


def test_compile_entangling_reports_leakage(enc, net):
    c = QuantumCircuit(2, (H(0), CNOT(0, 1)))
    res = compile_circuit(c, 0.02, enc, net)
    g = res.gates[-1]
    assert g.method == "BeamSearch"
    assert res.reported_eps >= g.achieved_distance + g.leakage
    assert verify_reduction(c, res, R5)["pass"]


def test_verify_negative_control():
    c = QuantumCircuit(1, (H(0),))
    rep = verify_reduction(c, PlatPresentation.identity(2), R5)
    assert not rep["pass"] and rep["deviation"] == pytest.approx(0.5)


def test_pad_examples():
    trefoil = PlatPresentation(parse_braid("B4: s2 s2 s2"))
    b0 = abs(bracket_morse(trefoil, R5))
    link = pad_to_window(trefoil, (b0 / 2, b0 * 2), R5)
    assert (link.unknot_copies, link.L0_copies) == (0, 0)
    m, k, v = plan_padding(0.1, (1, 10), R5.delta_abs, 0.5)
    assert (m, k) == (math.ceil(math.log(10) / math.log(R5.delta_abs)), 0)
    assert 1 <= v <= 10


def test_pad_scales_down_and_up():
    p = PlatPresentation(parse_braid("B4: s2 s2 s2"))
    L0 = default_L0(R5)
    ell = abs(bracket_morse(L0, R5))
    assert ell / R5.delta_abs == pytest.approx(0.3, abs=2e-3)
    for window in ((1e-3, 3e-3), (50, 120), (0.2, 0.3)):
        link = pad_to_window(p, window, R5)
        val = abs(link.bracket(R5))
        assert window[0] <= val <= window[1]
        parts = 1 + link.unknot_copies + link.L0_copies * plat_components(L0)
        assert plat_components(link.to_plat()) == parts


def test_pad_multiplicativity_direct():
    base = PlatPresentation(parse_braid("B2: s1"))
    link = GadgetLink(base, 1, 1, default_L0(R5))
    assert abs(bracket_morse(link.to_plat(), R5) - link.bracket(R5)) <= 1e-9 * abs(link.bracket(R5))


def test_pad_errors():
    with pytest.raises(InfeasibleWindow):
        pad_to_window(PlatPresentation.identity(1), (1.0, 1.0 + 1e-9), R5, max_copies=8)
    with pytest.raises(ValueError):
        pad_to_window(PlatPresentation.identity(1), (2, 1), R5)
    # the Hopf link has bracket delta (-A^4 - A^-4) = 0 at t = i
    hopf = PlatPresentation(parse_braid("B4: s2 s2"))
    r4 = BracketParams.root_of_unity(4)
    assert abs(bracket_morse(hopf, r4)) < 1e-12
    with pytest.raises(ZeroBracket):
        pad_to_window(hopf, (1, 2), r4)


def test_pure_generators_are_pure():
    for g in pure_braid_generators(4):
        assert underlying_permutation(BraidWord(4, g)) == (1, 2, 3, 4)
    assert len(pure_braid_generators(4)) == 12


def test_knotify(enc):
    knot = PlatPresentation(parse_braid("B4: s2 s2 s2"))
    assert knotify(knot, 0.01, enc).plat == knot
    unlink = PlatPresentation.identity(2)
    res = knotify(unlink, 0.01, enc)
    assert plat_components(res.plat) == 1
    assert underlying_permutation(res.correction) == (1, 2, 3, 4)
    assert abs(bracket_morse(res.plat, R5) - res.phase * R5.delta**2) <= 0.01 * R5.delta_abs**2
    assert res.deviation <= 0.01 * R5.delta_abs**2
    full = BraidWord(4, res.inserted)
    assert underlying_permutation(res.plat.braid) == underlying_permutation(full)


def test_knotify_rejects_non_pure_net(enc, net):
    with pytest.raises(ValueError):
        knotify(PlatPresentation.identity(2), 0.01, enc, net)
