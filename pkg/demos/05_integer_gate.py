"""Postselecting an integer two-qubit gate yields 5 times a rotation by atan(3/4).

The angle is an irrational multiple of pi, so the powers never return to the
identity; they do come close, and how close within 10^4 steps is printed.
"""
from __future__ import annotations

import numpy as np

from skeinhard.circuit import INTEGER_GATE, postselect_contract, rotation_return_distances

block = postselect_contract(INTEGER_GATE, [1, 0], [1, 0])
print("postselected block:\n", block.real.astype(int))
R = block.real / 5
d = rotation_return_distances(R, 10_000)
order = np.argsort(d)[:5]
print("closest returns within 10^4 steps:")
for i in order:
    print(f"  k = {i + 1:5d}   ||R^k - I|| = {d[i]:.3e}")
print(f"steps with ||R^k - I|| <= 1e-3: {int(np.sum(d <= 1e-3))}")
