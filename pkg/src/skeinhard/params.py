"""Evaluation points for the Kauffman bracket.

The bracket is evaluated numerically at a point ``t`` on the unit circle.
We fix the quarter root ``A = t**(-1/4)`` (principal branch of the angle),
so that the loop value is ``delta = -A**2 - A**-2 = -t**(1/2) - t**(-1/2)``
and a positive Reidemeister-I kink multiplies the bracket by ``-A**3``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

#: Roots of unity of these orders give a finite (non-dense) braid image.
NON_DENSE_ORDERS = frozenset({1, 2, 3, 4, 6})


@dataclass(frozen=True)
class BracketParams:
    """Evaluation point: either ``t = exp(2 pi i / r)`` or a generic unit complex ``t``.

    Use :meth:`root_of_unity` or :meth:`generic` rather than the constructor.
    """

    r: int | None
    t: complex
    A: complex = field(repr=False)
    delta: complex = field(repr=False)

    @classmethod
    def root_of_unity(cls, r: int) -> "BracketParams":
        if int(r) != r or r < 3:
            raise ValueError(f"root of unity order must be an integer >= 3, got {r!r}")
        r = int(r)
        t = cmath.exp(2j * math.pi / r)
        A = cmath.exp(-1j * math.pi / (2 * r))
        return cls(r=r, t=t, A=A, delta=-A**2 - A**-2)

    @classmethod
    def generic(cls, t: complex) -> "BracketParams":
        t = complex(t)
        if abs(abs(t) - 1.0) > 1e-12:
            raise ValueError(f"generic evaluation point must satisfy |t| = 1, got |t| = {abs(t)}")
        theta = cmath.phase(t)
        A = cmath.exp(-1j * theta / 4)
        return cls(r=None, t=t, A=A, delta=-A**2 - A**-2)

    @property
    def mode(self) -> str:
        return "root_of_unity" if self.r is not None else "generic"

    @property
    def is_root_of_unity(self) -> bool:
        return self.r is not None

    @property
    def delta_abs(self) -> float:
        return abs(self.delta)

    @property
    def dense(self) -> bool:
        """True for r = 5 or r >= 7, where the braid image is eventually dense."""
        return self.r is not None and self.r not in NON_DENSE_ORDERS

    def to_dict(self) -> dict:
        d = {"mode": self.mode, "t": [self.t.real, self.t.imag]}
        if self.r is not None:
            d["r"] = self.r
        return d

    def __str__(self) -> str:
        if self.r is not None:
            return f"r={self.r}"
        return f"t={self.t.real:.6g}{self.t.imag:+.6g}j"


def loop_value(params: BracketParams) -> complex:
    """Value of a single closed unknotted loop, ``-t**(1/2) - t**(-1/2)``."""
    return params.delta
