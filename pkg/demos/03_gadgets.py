"""The three hardness gadgets on synthetic and bracket-valued oracles."""
from __future__ import annotations

import random

import numpy as np

from skeinhard.braid import PlatPresentation, parse_braid
from skeinhard.bracket import bracket_morse
from skeinhard.gadgets import (
    ThresholdOracle,
    WindowDecider,
    apv_to_apx,
    bracket_family,
    postselected_success,
    promise_compare,
    promise_pair,
    threshold_bounds,
)
from skeinhard.params import BracketParams

# 1. postselecting a +-1 path-sum qubit: a' = (2a-1)^2 / (1 + (2a-1)^2)
b = 0.1
print("a      a'       no-side  yes-side")
for a in np.linspace(0.5, 1.0, 6):
    r = threshold_bounds(a, b)
    print(f"{a:.2f}  {postselected_success(a):.5f}  {r['no_side']!s:7s}  {r['yes_side']!s}")

# 2. promise comparison against an adversarial threshold oracle
rng = random.Random(1)
n = 16
for _ in range(4):
    a, bb = promise_pair(rng, n)
    oracle = ThresholdOracle(a, bb, mode="adversarial")
    res = promise_compare(oracle, n)
    print(f"a={a:.3e} b={bb:.3e} -> {res['answer']} after {res['queries']} queries")

# 3. multiplicative approximation of |<L>| / |delta|^g from a window decider
params = BracketParams.root_of_unity(5)
trefoil = PlatPresentation(parse_braid("B4: s2 s2 s2"))
f = abs(bracket_morse(trefoil, params)) / params.delta_abs**2
rescale, value = bracket_family(trefoil, params, N=30)
k, c = params.delta_abs, 2.0
res = apv_to_apx(WindowDecider(value, 1.0, 2.0), rescale, k, c, 12, (1.0, 2.0))
print(f"\ntrefoil f = {f:.5f}: estimate {res['estimate']:.5f} in [{res['lower']:.4f}, {res['upper']:.4f}], {res['queries']} queries")
