"""Kauffman bracket, Jones value and plat probability of a few small links.

Two evaluators are compared on each link: the skein-space transfer matrix
and the brute-force state sum.
"""
from __future__ import annotations

import cmath

from skeinhard.braid import PlatPresentation, parse_braid, writhe
from skeinhard.bracket import bracket_bruteforce, bracket_morse, jones, plat_probability
from skeinhard.params import BracketParams

LINKS = {
    "unknot": "B2:",
    "Hopf link": "B4: s2 s2",
    "trefoil": "B4: s2 s2 s2",
    "figure eight": "B4: s2 s1^-1 s2 s1^-1",
}

if __name__ == "__main__":
    for r in (5, 7):
        params = BracketParams.root_of_unity(r)
        print(f"\n-- t = exp(2 pi i / {r}), |delta| = {params.delta_abs:.6f}")
        for name, text in LINKS.items():
            p = PlatPresentation(parse_braid(text))
            morse, brute = bracket_morse(p, params), bracket_bruteforce(p, params)
            print(
                f"{name:13s} <L> = {morse:.6f}  (brute diff {abs(morse - brute):.1e})"
                f"  w = {writhe(p):+d}  V = {jones(p, params):.6f}  P = {plat_probability(p, params):.6f}"
            )

    # the positive trefoil has V(t) = t + t^3 - t^4, which is i sqrt(3) at t = exp(i pi / 3)
    t = cmath.exp(1j * cmath.pi / 3)
    tre = PlatPresentation(parse_braid(LINKS["trefoil"]))
    print(f"\ntrefoil at t = exp(i pi/3): V = {jones(tre, BracketParams.generic(t)):.12f}")
