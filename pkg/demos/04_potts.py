"""Potts partition functions, the shift calculus, and edge operators."""
from __future__ import annotations

from fractions import Fraction as F

import numpy as np

from skeinhard.potts import (
    density_certificate,
    edge_operator,
    gram_rank,
    implement_weight,
    kauffman_generators,
    partition_basis,
    potts_generators,
    shift_series,
    tutte_cd_oracle,
    tutte_from_potts,
    z_cluster,
    z_colorings,
    z_transfer,
)
from skeinhard.potts.graph import cycle_graph, grid_graph

# three evaluators of one partition function
G = grid_graph(3, 3, y=F(-2))
print(f"3x3 grid, n=4, y=-2: colourings {z_colorings(G, 4)}, clusters {z_cluster(G, 4)}, transfer {z_transfer(G, 4):.6f}")
print(f"same grid at n=5/2: clusters {float(z_cluster(G, F(5, 2))):.6f}, transfer {z_transfer(G, F(5, 2)):.6f}")

# Tutte polynomial by the Potts conversion and by contraction-deletion
tri = cycle_graph(3)
print(f"triangle T(2, 3): {tutte_from_potts(tri, F(2), F(3))} vs {tutte_cd_oracle(tri, 2, 3)} (x^2 + x + y = 9)")

# series composition and weight implementation from y = -2 at n = 5
s = shift_series(2, 2, 3)
print(f"\nseries(2, 2) at n=3: y_eff {s.y_eff}, x_eff {s.x_eff}, constant {s.const_factor}")
for target in (3.7, 0.2, -5.0):
    tree = implement_weight([F(-2)], 5, target, 1e-3)
    print(f"target {target:5}: {float(tree.evaluate()):.6f} with {tree.size} nodes")
tree = implement_weight([F(-1, 2)], 3, 3.7, 1e-3)
print(f"n=3, y=-1/2 (x = -1): escape step {tree.notes[0]}")

# boundary spaces and edge operators
print(f"\n|V(k)|: Bell {[len(partition_basis(k)) for k in range(9)]}")
print(f"       Catalan {[len(partition_basis(k, True)) for k in range(9)]}")
print(f"Gram ranks, k=3: generic {gram_rank(partition_basis(3), 2.7, 1.9)}, n=1 {gram_rank(partition_basis(3), 1, 3)}")
b3 = partition_basis(3)
A = edge_operator("A", 1, F(-2), 3, b3, 5).matrix
Ai = edge_operator("A", 1, F(-1, 2), 3, b3, 5).matrix
B = edge_operator("B", 2, F(-2, 3), 3, b3, 5).matrix
Bi = edge_operator("B", 2, F(-3, 2), 3, b3, 5).matrix
print(f"||A_(1,-2) A_(1,-1/2) - I|| = {np.linalg.norm(A @ Ai - np.eye(5)):.1e}")
print(f"B_(2,-2/3) B_(2,-3/2) = {(B @ Bi)[0, 0]:.6f} I")

# numerical denseness certificates
for name, gens, mode in (
    ("Kauffman r=5", kauffman_generators(5), "near_identity"),
    ("Kauffman r=6", kauffman_generators(6), "near_identity"),
    ("Potts n=5 k=3", potts_generators(F(5), 3, F(-2)), "one_parameter"),
):
    r = density_certificate(gens, mode=mode)
    print(f"{name:14s} lie_dim {r.lie_dim:2d} of {r.target_dim:2d}  dense={r.dense}")
