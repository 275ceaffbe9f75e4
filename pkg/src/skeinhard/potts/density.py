"""Numerical denseness certificates for finitely generated matrix groups.

Short words near the identity (projectively) have small logarithms; the
real Lie algebra spanned by those logarithms and their iterated commutators
is a lower bound for the Lie algebra of the closure.  Full dimension
``d^2 - 1`` certifies that the closure contains ``PSL``/``PSU`` numerically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import logm

MAX_DIM = 14
NEAR_IDENTITY = 0.2
MAX_WORD_LEN = 12


class LogBranchFailure(ArithmeticError):
    pass


@dataclass
class DensityResult:
    lie_dim: int
    target_dim: int
    dense: bool
    mode: str
    words_examined: int = 0
    near_identity: int = 0
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "lie_dim": self.lie_dim,
            "target_dim": self.target_dim,
            "dense": self.dense,
            "mode": self.mode,
            "words_examined": self.words_examined,
            "near_identity": self.near_identity,
            "notes": self.notes,
        }


def projective_normalize(M: np.ndarray) -> np.ndarray:
    """Rescale by the root of ``det`` that brings ``M`` closest to the identity."""
    d = M.shape[0]
    det = np.linalg.det(M)
    if det == 0:
        raise ValueError("singular generator")
    root = complex(det) ** (1.0 / d)
    best, best_dist = None, np.inf
    for k in range(d):
        c = root * np.exp(2j * np.pi * k / d)
        N = M / c
        dist = np.linalg.norm(N - np.eye(d), 2)
        if dist < best_dist:
            best, best_dist = N, dist
    if np.isrealobj(M) and np.abs(best.imag).max() < 1e-12:
        best = best.real
    return best


def _traceless_log(M: np.ndarray) -> np.ndarray:
    L = logm(M)
    if not np.all(np.isfinite(L)):
        raise LogBranchFailure("matrix logarithm failed")
    if np.isrealobj(M) and np.abs(np.imag(L)).max() > 1e-9:
        raise LogBranchFailure("real matrix has no real logarithm on the principal branch")
    if np.isrealobj(M):
        L = np.real(L)
    d = M.shape[0]
    return L - np.trace(L) / d * np.eye(d)


def _vec(X: np.ndarray, complex_ambient: bool) -> np.ndarray:
    if complex_ambient:
        return np.concatenate([X.real.ravel(), X.imag.ravel()])
    return np.real(X).ravel()


def lie_closure_dim(logs: list[np.ndarray], tol: float = 1e-8, max_rounds: int = 20) -> int:
    """Dimension of the real Lie algebra generated by ``logs`` under commutators."""
    if not logs:
        return 0
    d = logs[0].shape[0]
    cplx = any(np.iscomplexobj(X) and np.abs(X.imag).max() > 0 for X in logs)

    def basis_of(mats):
        if not mats:
            return []
        V = np.array([_vec(X, cplx) for X in mats])
        _, s, vt = np.linalg.svd(V, full_matrices=False)
        if s.size == 0 or s[0] == 0:
            return []
        r = int(np.sum(s > tol * s[0]))
        out = []
        for row in vt[:r]:
            if cplx:
                half = d * d
                out.append((row[:half] + 1j * row[half:]).reshape(d, d))
            else:
                out.append(row.reshape(d, d))
        return out

    scale = max(np.linalg.norm(X) for X in logs)
    mats = [X / scale for X in logs if np.linalg.norm(X) > 1e-9 * scale]
    B = basis_of(mats)
    for _ in range(max_rounds):
        comms = [X @ Y - Y @ X for i, X in enumerate(B) for Y in B[i + 1 :]]
        B2 = basis_of(B + comms)
        if len(B2) == len(B):
            return len(B)
        B = B2
    return len(B)


def _near_identity_words(gens: list[np.ndarray], max_len: int, radius: float, max_elements: int, want: int):
    """BFS over words, deduplicating projectively equal elements."""
    d = gens[0].shape[0]
    eye = np.eye(d)
    start = eye.astype(gens[0].dtype)

    def key(M):
        N = projective_normalize(M)
        # fix the remaining sign/phase ambiguity by the largest entry
        flat = N.ravel()
        j = int(np.argmax(np.abs(flat) > 1e-6))
        ph = flat[j] / abs(flat[j])
        return tuple(np.round(np.concatenate([(flat / ph).real, (flat / ph).imag]), 6))

    seen = {key(start)}
    layer = [start]
    found = []
    examined = 0
    for _ in range(max_len):
        nxt = []
        for M in layer:
            for g in gens:
                P = M @ g
                P = P / np.abs(np.linalg.det(P)) ** (1.0 / d)
                kk = key(P)
                if kk in seen:
                    continue
                seen.add(kk)
                examined += 1
                N = projective_normalize(P)
                dist = np.linalg.norm(N - eye, 2)
                if 1e-9 < dist <= radius:
                    found.append(N)
                nxt.append(P)
                if examined >= max_elements:
                    return found, examined
        if len(found) >= want:
            break
        layer = nxt
        if not layer:
            break
    return found, examined


def density_certificate(
    generators: list[np.ndarray],
    target_dim: int | None = None,
    mode: str = "near_identity",
    max_word_len: int = MAX_WORD_LEN,
    radius: float = NEAR_IDENTITY,
    max_elements: int = 200_000,
    tol: float = 1e-8,
) -> DensityResult:
    """Lie-algebra dimension of the closure of the group generated by ``generators``.

    ``mode="near_identity"`` takes logarithms of words of length
    ``<= max_word_len`` lying within ``radius`` of the identity.
    ``mode="one_parameter"`` takes logarithms of the squared generators,
    valid when each generator sits in a one-parameter family contained in
    the closure (edge operators, whose weights compose multiplicatively).
    """
    gens = [np.asarray(g) for g in generators]
    if not gens:
        raise ValueError("no generators")
    d = gens[0].shape[0]
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds {MAX_DIM}")
    target = d * d - 1 if target_dim is None else target_dim
    for g in gens:
        if abs(np.linalg.det(g)) < 1e-300:
            raise ValueError("generators must be invertible")
    if mode == "one_parameter":
        logs = [_traceless_log(projective_normalize(g @ g)) for g in gens]
        dim = lie_closure_dim(logs, tol)
        return DensityResult(dim, target, dim == target, mode, len(gens), len(gens))
    if mode != "near_identity":
        raise ValueError(f"unknown mode {mode!r}")
    words, examined = _near_identity_words(gens, max_word_len, radius, max_elements, want=4 * target)
    res = DensityResult(0, target, False, mode, examined, len(words))
    if not words:
        res.notes.append("no near-identity words found: evidence of a discrete image")
        return res
    logs = []
    for N in words:
        try:
            logs.append(_traceless_log(N))
        except LogBranchFailure as exc:
            res.notes.append(str(exc))
    res.lie_dim = lie_closure_dim(logs, tol)
    res.dense = res.lie_dim == target
    return res


# --------------------------------------------------------------------------
# Presets


def kauffman_generators(r: int, n_strands: int = 4) -> list[np.ndarray]:
    from ..params import BracketParams
    from ..skein import skein_rep

    rep = skein_rep(n_strands, BracketParams.root_of_unity(r))
    return [np.array(g) for g in rep.generators] + [np.array(g) for g in rep.inverses]


def potts_generators(n=5, k: int = 3, y=-2, planar: bool = False) -> list[np.ndarray]:
    """``A_{j,y}, A_{j,1/y}, B_{j,x}, B_{j,1/x}`` with ``x`` the dual of ``y``."""
    from .graph import dual_weight, exact
    from .transfer import edge_operator, partition_basis

    y = exact(y)
    x = dual_weight(y, n)
    basis = partition_basis(k, planar)
    ops = []
    for j in range(1, k):
        ops += [edge_operator("A", j, y, k, basis, n).matrix, edge_operator("A", j, 1 / y, k, basis, n).matrix]
    for j in range(1, k + 1):
        ops += [edge_operator("B", j, x, k, basis, n).matrix, edge_operator("B", j, 1 / x, k, basis, n).matrix]
    return ops


PRESETS = {
    "kauffman-r5": lambda: (kauffman_generators(5), "near_identity"),
    "kauffman-r6": lambda: (kauffman_generators(6), "near_identity"),
    "potts-n5-k3": lambda: (potts_generators(Fraction(5), 3, Fraction(-2)), "one_parameter"),
}


def preset_certificate(name: str) -> DensityResult:
    try:
        gens, mode = PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return density_certificate(gens, mode=mode)
