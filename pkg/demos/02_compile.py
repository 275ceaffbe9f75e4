"""Compile one-qubit circuits into plats and check the acceptance probabilities.

The plat probability |<L>|^2 / |delta|^(2g) should track the circuit's
probability of returning to |0> within twice the reported synthesis error.
Then the padding and knot-ification gadgets are applied to the result.
"""
from __future__ import annotations

import time

import numpy as np

from skeinhard.braid import PlatPresentation, plat_components
from skeinhard.bracket import bracket_morse
from skeinhard.circuit import H, QuantumCircuit, U1, X
from skeinhard.compiler import QubitEncoding, compile_circuit, default_L0, default_net, knotify, pad_to_window, verify_reduction
from skeinhard.params import BracketParams

params = BracketParams.root_of_unity(5)
enc = QubitEncoding(params)

t0 = time.perf_counter()
net = default_net(params)
print(f"net: {net.size} entries, covering radius {net.covering_radius(300):.3f}, built in {time.perf_counter() - t0:.1f}s")

theta = 0.7
ry = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
circuits = {
    "empty": QuantumCircuit(1, ()),
    "H": QuantumCircuit(1, (H(0),)),
    "X": QuantumCircuit(1, (X(0),)),
    "H X H": QuantumCircuit(1, (H(0), X(0), H(0))),
    "Ry(1.4)": QuantumCircuit(1, (U1(0, ry),)),
}
for name, c in circuits.items():
    res = compile_circuit(c, 0.02, enc, net)
    chk = verify_reduction(c, res, params)
    print(
        f"{name:8s} crossings {len(res.plat.braid):4d}  p_circuit {chk['p_circuit']:.4f}"
        f"  p_plat {chk['p_plat']:.4f}  |dp| {chk['deviation']:.1e} <= {chk['bound']:.1e}  {'ok' if chk['pass'] else 'FAIL'}"
    )

# padding: push the bracket of the H plat into a window by adding unknots and copies of L0
plat = compile_circuit(circuits["H"], 0.02, enc, net).plat
L0 = default_L0(params)
print(f"\nL0: {len(L0.braid)} crossings, |<L0>|/|delta| = {abs(bracket_morse(L0, params)) / params.delta_abs:.4f}")
for window in ((1e-3, 2e-3), (40.0, 80.0)):
    link = pad_to_window(plat, window, params, L0)
    print(f"window {window}: {link.unknot_copies} unknots, {link.L0_copies} copies of L0, |<L>| = {abs(link.bracket(params)):.4g}")

# knot-ification: a two-component unlink becomes a knot with the same bracket up to phase
unlink = PlatPresentation.identity(2)
res = knotify(unlink, 0.01, enc, default_net(params, 7, kind="pure"))
print(
    f"\nknotify: {plat_components(unlink)} -> {plat_components(res.plat)} component(s), "
    f"{len(res.plat.braid)} crossings, |<K> - phase <L>| / |<L>| = {res.deviation / abs(res.bracket_in):.4f}"
)
