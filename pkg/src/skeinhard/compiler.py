"""Circuit -> braid -> plat compilation at desk scale.

Encoding
    One qubit lives in V(4), the 2-dimensional path space on 4 strands
    (``|0> = 01010``, the cup pair, and ``|1> = 01210``).  Two qubits live
    in V(8); the paths with height 0 in the middle form the embedded
    ``V(4) (x) V(4)``.  Generators ``s1..s3`` (``s5..s7``) act on the left
    (right) factor only; ``s4`` is the only letter that can entangle, and it
    also leaks out of the embedded subspace.

Synthesis
    An epsilon-net of short braid words is built by breadth-first search,
    deduplicated up to a global phase.  On V(4) the projective images are
    stored as unit quaternions (``SU(2)`` up to sign), for which Euclidean
    distance equals the projective operator distance used throughout.
    Targets are looked up in a KD-tree and, if needed, refined by the
    group-commutator recursion (depth <= 3).

Error accounting
    ``projective_distance(U, V) = min_phi ||U - e^{i phi} V||_2``.  A compiled
    circuit reports ``sum_j (d_j + leak_j)`` over its gates; the plat
    probability then deviates from the circuit probability by at most twice
    that amount.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial import cKDTree

from .braid import BraidWord, PlatPresentation, plat_components, plat_union, underlying_permutation
from .bracket import bracket_morse, plat_probability
from .circuit import QuantumCircuit, simulate_accept
from .params import BracketParams
from .skein import skein_rep

NET_FORMAT_VERSION = 1
MAX_NET_ENTRIES = 10_000_000
DEFAULT_NET_LENGTH = 18
L0_RATIO = 0.3


class NotDense(ValueError):
    """The evaluation point has a finite braid image; synthesis is impossible."""


class TargetUnreachable(RuntimeError):
    def __init__(self, message: str, best_distance: float):
        super().__init__(f"{message} (best distance {best_distance:.3g})")
        self.best_distance = best_distance


class NetBudgetExceeded(RuntimeError):
    pass


class ZeroBracket(ValueError):
    pass


class InfeasibleWindow(ValueError):
    def __init__(self, message: str, closest: float | None = None):
        super().__init__(message)
        self.closest = closest


# --------------------------------------------------------------------------
# Distances and SU(2) helpers


def projective_distance(U: np.ndarray, V: np.ndarray) -> float:
    """``min_phi ||U - e^{i phi} V||`` in the operator 2-norm.

    For unitary ``U, V`` this is ``2 sin(w/4)`` where ``w`` is the length of
    the smallest arc holding the spectrum of ``U^dagger V``.  Otherwise the
    phase is optimised numerically.
    """
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    d = U.shape[0]
    eye = np.eye(d)
    if np.allclose(U.conj().T @ U, eye, atol=1e-10) and np.allclose(V.conj().T @ V, eye, atol=1e-10):
        angles = np.sort(np.angle(np.linalg.eigvals(U.conj().T @ V)))
        gaps = np.diff(np.concatenate([angles, angles[:1] + 2 * math.pi]))
        w = 2 * math.pi - gaps.max()
        return 2 * math.sin(max(w, 0.0) / 4)

    def f(phi):
        return np.linalg.norm(U - np.exp(1j * phi) * V, 2)

    # start from the phase that best aligns the traces, then polish
    phi0 = np.angle(np.trace(V.conj().T @ U))
    grid = phi0 + np.linspace(-math.pi, math.pi, 33)
    start = grid[np.argmin([f(p) for p in grid])]
    res = minimize_scalar(f, bounds=(start - 0.2, start + 0.2), method="bounded", options={"xatol": 1e-12})
    return float(min(res.fun, f(start)))


def best_phase(M: np.ndarray) -> complex:
    """The scalar ``e^{i phi}`` minimising ``||M - e^{i phi} I||`` for unitary ``M``."""
    angles = np.sort(np.angle(np.linalg.eigvals(M)))
    ext = np.concatenate([angles, angles[:1] + 2 * math.pi])
    j = int(np.argmax(np.diff(ext)))
    start, end = ext[j + 1], ext[j] + 2 * math.pi  # the arc runs from after the gap round to before it
    return complex(np.exp(0.5j * (start + end)))


def to_su2(M: np.ndarray) -> np.ndarray:
    """Quaternion(s) ``(q0, q1, q2, q3)`` of ``M / sqrt(det M)``; sign is arbitrary."""
    M = np.asarray(M, dtype=complex)
    S = M / np.sqrt(np.linalg.det(M))[..., None, None]
    a, b = S[..., 0, 0], S[..., 0, 1]
    return np.stack([a.real, b.imag, b.real, a.imag], axis=-1)


def from_su2(q: np.ndarray) -> np.ndarray:
    a = q[0] + 1j * q[3]
    b = q[2] + 1j * q[1]
    return np.array([[a, b], [-b.conjugate(), a.conjugate()]])


def _canonical_sign(q: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(q), axis=-1)
    s = np.sign(np.take_along_axis(q, idx[..., None], axis=-1))
    return q * s


def _axis_angle(U: np.ndarray) -> tuple[np.ndarray, float]:
    """``U = exp(-i theta/2 n.sigma)`` in SU(2); returns ``(n, theta)`` with theta in [0, 2pi]."""
    S = U / np.sqrt(np.linalg.det(U))
    c = np.real(np.trace(S)) / 2
    vec = np.array(
        [
            np.imag(np.trace(S @ _PX)) / 2,
            np.imag(np.trace(S @ _PY)) / 2,
            np.imag(np.trace(S @ _PZ)) / 2,
        ]
    )
    # S = c I + i vec.sigma ; theta/2 = atan2(|vec|, c), axis = -vec/|vec|
    nv = np.linalg.norm(vec)
    if nv < 1e-15:
        return np.array([0.0, 0.0, 1.0]), 0.0
    return -vec / nv, 2 * math.atan2(nv, c)


_PX = np.array([[0, 1], [1, 0]], dtype=complex)
_PY = np.array([[0, -1j], [1j, 0]])
_PZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _rotation(axis: np.ndarray, theta: float) -> np.ndarray:
    n = axis / np.linalg.norm(axis)
    return math.cos(theta / 2) * np.eye(2) - 1j * math.sin(theta / 2) * (n[0] * _PX + n[1] * _PY + n[2] * _PZ)


def _balanced_commutator(D: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``V, W`` with ``V W V^-1 W^-1 = D`` (up to sign) for ``D`` near the identity."""
    axis, theta = _axis_angle(D)
    if theta > math.pi:
        theta = 2 * math.pi - theta
        axis = -axis
    # sin(theta/2) = 2 sin^2(phi/2) sqrt(1 - sin^4(phi/2))
    s = math.sin(theta / 2)
    sin2 = math.sqrt((1 - math.sqrt(max(1 - s * s, 0.0))) / 2)
    phi = 2 * math.asin(math.sqrt(sin2))
    V = _rotation(np.array([1.0, 0.0, 0.0]), phi)
    W = _rotation(np.array([0.0, 1.0, 0.0]), phi)
    C = V @ W @ V.conj().T @ W.conj().T
    # rotate the commutator's axis onto D's axis
    c_axis, _ = _axis_angle(C)
    Sm = _align(c_axis, axis)
    return Sm @ V @ Sm.conj().T, Sm @ W @ Sm.conj().T


def _align(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """An SU(2) element rotating unit vector ``a`` onto ``b``."""
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    cross = np.cross(a, b)
    dot = float(np.clip(a @ b, -1.0, 1.0))
    if np.linalg.norm(cross) < 1e-12:
        if dot > 0:
            return np.eye(2, dtype=complex)
        perp = np.cross(a, [1.0, 0.0, 0.0])
        if np.linalg.norm(perp) < 1e-6:
            perp = np.cross(a, [0.0, 1.0, 0.0])
        return _rotation(perp, math.pi)
    return _rotation(cross, math.acos(dot))


# --------------------------------------------------------------------------
# Encoding


def _require_dense(params: BracketParams) -> None:
    if not params.dense:
        raise NotDense(f"braid image at {params} is finite; choose r = 5 or r >= 7")


@dataclass(frozen=True)
class QubitEncoding:
    params: BracketParams
    strands_per_qubit: int = 4

    def __post_init__(self):
        _require_dense(self.params)

    @property
    def qubit_paths(self) -> tuple[tuple[int, ...], ...]:
        return ((0, 1, 0, 1, 0), (0, 1, 2, 1, 0))

    @property
    def zero_state(self) -> np.ndarray:
        rep = self.rep(1)
        return rep.cup_vector()

    def rep(self, n_qubits: int):
        return skein_rep(4 * n_qubits, self.params, "path")

    def qubit_index(self, n_qubits: int) -> np.ndarray:
        """Indices in V(4 n_qubits) of the computational basis states, in circuit order."""
        states = self.rep(n_qubits).states
        out = []
        for bits in np.ndindex(*(2,) * n_qubits):
            path = (0,)
            for b in bits:
                path = path + self.qubit_paths[b][1:]
            out.append(states.index(path))
        return np.array(out)

    def inclusion(self, n_qubits: int) -> np.ndarray:
        """Isometry ``(C^2)^{(x) n} -> V(4 n)`` as a ``dim x 2^n`` matrix."""
        idx = self.qubit_index(n_qubits)
        J = np.zeros((self.rep(n_qubits).dim, len(idx)))
        J[idx, np.arange(len(idx))] = 1.0
        return J

    def block(self, M: np.ndarray, n_qubits: int) -> tuple[np.ndarray, float]:
        """Encoded block of an ambient operator and the norm of its leaking part."""
        J = self.inclusion(n_qubits)
        inside = J.T @ M @ J
        leak = np.linalg.norm(M @ J - J @ inside, 2) if M.shape[0] > J.shape[1] else 0.0
        return inside, float(leak)


# --------------------------------------------------------------------------
# Nets


def _letters_for(strands: Sequence[int]) -> list[tuple[tuple[int, int], ...]]:
    out = []
    for i in strands:
        out.append(((i, 1),))
        out.append(((i, -1),))
    return out


def pure_braid_generators(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Standard generators ``A_ij`` of the pure braid group and their inverses."""
    gens = []
    for j in range(2, n + 1):
        for i in range(1, j):
            # conjugate s_i^2 by s_{j-1} ... s_{i+1}; letters acting first come first
            pre = tuple((k, -1) for k in range(j - 1, i, -1))
            post = tuple((k, 1) for k in range(i + 1, j))
            word = pre + ((i, 1), (i, 1)) + post
            gens.append(word)
            gens.append(tuple((k, -s) for k, s in reversed(word)))
    return gens


@dataclass
class Net:
    """Breadth-first epsilon-net of braid words in a fixed ambient space.

    ``generators`` are short braid words (single letters or pure-braid
    generators); entry ``k`` of the net is the word obtained by following
    ``parent`` links and appending ``letter`` at each step.
    """

    params: BracketParams
    n_strands: int
    generators: list[tuple[tuple[int, int], ...]]
    max_word_len: int
    mats: np.ndarray
    parent: np.ndarray
    letter: np.ndarray
    length: np.ndarray
    _tree: cKDTree | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.parent)

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    def generator_matrix(self, k: int) -> np.ndarray:
        rep = skein_rep(self.n_strands, self.params, "path")
        return rep.word_matrix(self.generators[k])

    def indices_word(self, idx: int) -> list[int]:
        out = []
        while idx > 0:
            out.append(int(self.letter[idx]))
            idx = int(self.parent[idx])
        return out[::-1]

    def word(self, idx: int) -> BraidWord:
        letters = []
        for k in self.indices_word(idx):
            letters.extend(self.generators[k])
        return BraidWord(self.n_strands, tuple(letters))

    @property
    def tree(self) -> cKDTree:
        if self._tree is None:
            if self.dim != 2:
                raise ValueError("KD-tree lookup is available for 2-dimensional ambient spaces only")
            self._tree = cKDTree(_canonical_sign(to_su2(self.mats)))
        return self._tree

    def nearest(self, target: np.ndarray) -> tuple[int, float]:
        """Index of the net element projectively closest to ``target`` (2x2) and the distance."""
        q = _canonical_sign(to_su2(target))
        d1, i1 = self.tree.query(q)
        d2, i2 = self.tree.query(-q)
        # prefer the shorter word on ties
        cands = sorted([(round(d1, 13), int(self.length[i1]), i1), (round(d2, 13), int(self.length[i2]), i2)])
        _, _, idx = cands[0]
        return int(idx), float(min(d1, d2))

    def covering_radius(self, n_targets: int = 1000, seed: int = 0) -> float:
        rng = np.random.default_rng(seed)
        q = rng.normal(size=(n_targets, 4))
        q /= np.linalg.norm(q, axis=1, keepdims=True)
        d1, _ = self.tree.query(q)
        d2, _ = self.tree.query(-q)
        return float(np.max(np.minimum(d1, d2)))

    # ---- cache

    def save(self, path: str) -> None:
        np.savez_compressed(
            path,
            version=NET_FORMAT_VERSION,
            meta=json.dumps(
                {
                    "params": self.params.to_dict(),
                    "n_strands": self.n_strands,
                    "generators": [list(map(list, g)) for g in self.generators],
                    "max_word_len": self.max_word_len,
                }
            ),
            mats=self.mats,
            parent=self.parent,
            letter=self.letter,
            length=self.length,
        )

    @classmethod
    def load(cls, path: str, params: BracketParams) -> "Net":
        with np.load(path, allow_pickle=False) as data:
            if int(data["version"]) != NET_FORMAT_VERSION:
                raise ValueError(f"net cache version {int(data['version'])} != {NET_FORMAT_VERSION}")
            meta = json.loads(str(data["meta"]))
            if meta["params"] != params.to_dict():
                raise ValueError("net cache was built for different parameters")
            return cls(
                params=params,
                n_strands=meta["n_strands"],
                generators=[tuple(tuple(x) for x in g) for g in meta["generators"]],
                max_word_len=meta["max_word_len"],
                mats=data["mats"],
                parent=data["parent"],
                letter=data["letter"],
                length=data["length"],
            )


def _dedupe_key(mats: np.ndarray) -> np.ndarray:
    """Phase-independent rounded fingerprint of each matrix."""
    if mats.shape[1] == 2:
        q = _canonical_sign(to_su2(mats))
    else:
        flat = mats.reshape(len(mats), -1)
        idx = np.argmax(np.abs(flat) > 1e-6, axis=1)
        ph = flat[np.arange(len(flat)), idx]
        flat = flat * (np.abs(ph) / ph)[:, None]
        q = np.concatenate([flat.real, flat.imag], axis=1)
    return np.round(q * 1e7).astype(np.int64)


def build_net(
    encoding: QubitEncoding,
    max_word_len: int,
    ambient: str = "V4",
    generators: Sequence[tuple[tuple[int, int], ...]] | None = None,
    budget: int = MAX_NET_ENTRIES,
) -> Net:
    """All projectively distinct images of words of length <= ``max_word_len``.

    Each image keeps its shortest word, ties broken lexicographically in the
    generator order.  ``ambient`` is ``"V4"`` (one qubit, 4 strands) or
    ``"V8"`` (two qubits, 8 strands).
    """
    params = encoding.params
    n = {"V4": 4, "V8": 8}[ambient]
    if generators is None:
        generators = _letters_for([1, 2]) if ambient == "V4" else _letters_for(range(1, 8))
    generators = [tuple(g) for g in generators]
    rep = skein_rep(n, params, "path")
    G = np.array([rep.word_matrix(g) for g in generators])
    inverse = []
    for g in generators:
        inv = tuple((i, -s) for i, s in reversed(g))
        inverse.append(generators.index(inv) if inv in generators else -1)

    mats = [np.eye(rep.dim, dtype=complex)[None]]
    parent = [np.array([0])]
    letter = [np.array([-1])]
    length = [np.array([0])]
    seen = {k.tobytes() for k in _dedupe_key(mats[0])}
    front, front_idx, front_letter = mats[0], np.array([0]), np.array([-1])
    total = 1
    for L in range(1, max_word_len + 1):
        cand, cpar, clet = [], [], []
        for k in range(len(G)):
            ok = front_letter != inverse[k] if inverse[k] >= 0 else np.ones(len(front), bool)
            if L == 1:
                ok = np.ones(len(front), bool)
            cand.append(np.matmul(G[k], front[ok]))
            cpar.append(front_idx[ok])
            clet.append(np.full(int(ok.sum()), k))
        # order candidates by (parent word, letter): parents are already sorted
        cand = np.concatenate(cand)
        cpar = np.concatenate(cpar)
        clet = np.concatenate(clet)
        order = np.lexsort((clet, cpar))
        cand, cpar, clet = cand[order], cpar[order], clet[order]
        keys = _dedupe_key(cand)
        keep = []
        for j, row in enumerate(keys):
            b = row.tobytes()
            if b not in seen:
                seen.add(b)
                keep.append(j)
        keep = np.array(keep, dtype=int)
        if total + len(keep) > budget:
            raise NetBudgetExceeded(f"net would exceed {budget} entries at word length {L}")
        new_idx = np.arange(total, total + len(keep))
        total += len(keep)
        front, front_idx, front_letter = cand[keep], new_idx, clet[keep]
        mats.append(front)
        parent.append(cpar[keep])
        letter.append(clet[keep])
        length.append(np.full(len(keep), L))
        if len(keep) == 0:
            break
    return Net(
        params=params,
        n_strands=n,
        generators=generators,
        max_word_len=max_word_len,
        mats=np.concatenate(mats),
        parent=np.concatenate(parent),
        letter=np.concatenate(letter).astype(np.int16),
        length=np.concatenate(length).astype(np.int16),
    )


_NET_CACHE: dict = {}


def default_net(params: BracketParams, max_word_len: int = DEFAULT_NET_LENGTH, kind: str = "braid") -> Net:
    """Process-wide net for one qubit (``kind="braid"``) or 4-strand pure braids (``kind="pure"``).

    If ``SKEINHARD_NET_DIR`` is set, nets are cached there as ``.npz`` files.
    """
    key = (params.r, max_word_len, kind)
    if key in _NET_CACHE:
        return _NET_CACHE[key]
    enc = QubitEncoding(params)
    gens = pure_braid_generators(4) if kind == "pure" else None
    cache_dir = os.environ.get("SKEINHARD_NET_DIR")
    path = os.path.join(cache_dir, f"net-r{params.r}-{kind}-L{max_word_len}-v{NET_FORMAT_VERSION}.npz") if cache_dir else None
    net = None
    if path and os.path.exists(path):
        try:
            net = Net.load(path, params)
        except (ValueError, KeyError, OSError):
            net = None
    if net is None:
        net = build_net(enc, max_word_len, "V4", gens)
        if path:
            os.makedirs(cache_dir, exist_ok=True)
            net.save(path)
    _NET_CACHE[key] = net
    return net


# --------------------------------------------------------------------------
# Synthesis


@dataclass(frozen=True)
class SynthesisResult:
    word: BraidWord
    achieved_distance: float
    leakage: float
    method: str
    depth: int = 0

    def to_dict(self) -> dict:
        return {
            "word": str(self.word),
            "length": len(self.word),
            "achieved_distance": self.achieved_distance,
            "leakage": self.leakage,
            "method": self.method if self.method == "NetLookup" else f"SKRecursion({self.depth})",
        }


def _net_letters(net: Net, idx: int) -> list[int]:
    return net.indices_word(idx)


def _inverse_gen_word(net: Net, ks: list[int]) -> list[int]:
    inv = []
    for k in reversed(ks):
        g = net.generators[k]
        inv.append(net.generators.index(tuple((i, -s) for i, s in reversed(g))))
    return inv


def _gen_word_matrix(net: Net, ks: list[int]) -> np.ndarray:
    M = np.eye(2, dtype=complex)
    for k in ks:
        M = _gen_mat(net, k) @ M
    return M


@lru_cache(maxsize=None)
def _gen_mat_cached(params: BracketParams, n: int, gen: tuple) -> np.ndarray:
    return skein_rep(n, params, "path").word_matrix(gen)


def _gen_mat(net: Net, k: int) -> np.ndarray:
    return _gen_mat_cached(net.params, net.n_strands, net.generators[k])


def _sk(net: Net, U: np.ndarray, depth: int) -> list[int]:
    if depth == 0:
        return _net_letters(net, net.nearest(U)[0])
    prev = _sk(net, U, depth - 1)
    Up = _gen_word_matrix(net, prev)
    D = U @ Up.conj().T
    V, W = _balanced_commutator(D / np.sqrt(np.linalg.det(D)))
    v = _sk(net, V, depth - 1)
    w = _sk(net, W, depth - 1)
    # matrix V W V^-1 W^-1 Up: Up acts first
    return prev + _inverse_gen_word(net, w) + _inverse_gen_word(net, v) + w + v


def synthesize(
    target: np.ndarray,
    eps: float,
    encoding: QubitEncoding,
    net: Net | None = None,
    sk_depth: int = 3,
) -> SynthesisResult:
    """Braid word whose V(4) image is within ``eps`` of ``target`` up to phase.

    ``target`` is a 2x2 unitary on the encoded qubit.  The distance reported
    is recomputed from the returned word.
    """
    _require_dense(encoding.params)
    target = np.asarray(target, dtype=complex)
    if target.shape != (2, 2):
        raise ValueError("synthesize expects a 2x2 target")
    net = net or default_net(encoding.params)
    rep = skein_rep(net.n_strands, net.params, "path")

    def realise(ks):
        letters = []
        for k in ks:
            letters.extend(net.generators[k])
        w = BraidWord(net.n_strands, tuple(letters))
        return w, projective_distance(rep.word_matrix(w.letters), target)

    idx, _ = net.nearest(target)
    word, dist = realise(_net_letters(net, idx))
    best = (dist, word, "NetLookup", 0)
    depth = 0
    while best[0] > eps and depth < sk_depth:
        depth += 1
        w, d = realise(_sk(net, target, depth))
        if d < best[0]:
            best = (d, w, "SKRecursion", depth)
    if best[0] > eps:
        raise TargetUnreachable(f"could not reach eps={eps:g} (SK depth {sk_depth})", best[0])
    return SynthesisResult(best[1], best[0], 0.0, best[2], best[3])


def verify_synthesis(result: SynthesisResult, target: np.ndarray, encoding: QubitEncoding, n_qubits: int = 1) -> tuple[float, float]:
    """Recompute ``(distance, leakage)`` from scratch by multiplying out the word."""
    rep = skein_rep(result.word.n_strands, encoding.params, "path")
    M = rep.word_matrix(result.word.letters)
    if result.word.n_strands == 4 * n_qubits:
        block, leak = encoding.block(M, n_qubits)
    else:
        block, leak = M, 0.0
    return projective_distance(block, target), leak


def _beam_search_2q(
    target: np.ndarray, encoding: QubitEncoding, beam: int = 64, depth: int = 24, seed_words=()
) -> tuple[BraidWord, float, float]:
    """Best-effort search in V(8) for a word whose encoded block approximates a 4x4 target."""
    rep = encoding.rep(2)
    J = encoding.inclusion(2)
    letters = [(i, s) for i in range(1, 8) for s in (1, -1)]
    mats = {l: rep.letter(*l) for l in letters}

    Tn = target.conj().T

    def surrogate(M):
        # cheap proxy: phase-aligned Frobenius mismatch of the block plus leaked mass
        inside = J.T @ M @ J
        overlap = abs(np.trace(Tn @ inside)) / 4
        leak = np.linalg.norm(M @ J - J @ inside)
        return math.sqrt(max(0.0, 2 - 2 * overlap)) + leak

    def score(M):
        inside = J.T @ M @ J
        leak = np.linalg.norm(M @ J - J @ inside, 2)
        return projective_distance(inside, target) + leak, inside, leak

    start = [((), np.eye(rep.dim, dtype=complex))]
    for w in seed_words:
        start.append((tuple(w), rep.word_matrix(w)))
    best = min(((surrogate(M), w, M) for w, M in start), key=lambda x: (x[0], len(x[1])))
    layer = start
    for _ in range(depth):
        cand = []
        for w, M in layer:
            for l in letters:
                if w and w[-1] == (l[0], -l[1]):
                    continue
                M2 = mats[l] @ M
                cand.append((surrogate(M2), w + (l,), M2))
        cand.sort(key=lambda x: x[0])
        layer = [(w, M) for _, w, M in cand[:beam]]
        if cand and cand[0][0] < best[0] - 1e-12:
            best = cand[0]
    _, w, M = best
    s, inside, leak = score(M)
    return BraidWord(8, w), projective_distance(inside, target), leak


# --------------------------------------------------------------------------
# Circuits


@dataclass(frozen=True)
class GateReport:
    gate: str
    qubits: tuple[int, ...]
    word_length: int
    achieved_distance: float
    leakage: float
    method: str


@dataclass(frozen=True)
class CompileResult:
    plat: PlatPresentation
    reported_eps: float
    gates: tuple[GateReport, ...]

    @property
    def bound(self) -> float:
        """Bound on ``|p_circuit - p_plat|``."""
        return 2 * self.reported_eps

    def to_dict(self) -> dict:
        return {
            "plat": str(self.plat.braid),
            "g": self.plat.g,
            "reported_eps": self.reported_eps,
            "bound": self.bound,
            "gates": [
                {
                    "gate": g.gate,
                    "qubits": list(g.qubits),
                    "word_length": g.word_length,
                    "achieved_distance": g.achieved_distance,
                    "leakage": g.leakage,
                    "method": g.method,
                }
                for g in self.gates
            ],
        }


def compile_circuit(c: QuantumCircuit, eps: float, encoding: QubitEncoding, net: Net | None = None) -> CompileResult:
    """Compile a 1- or 2-qubit circuit into a plat on ``4 n`` strands.

    Single-qubit gates are synthesized on V(4) and placed on their qubit's
    strands, which is exact on the embedded subspace.  Two-qubit gates are
    searched for directly in V(8), best-effort, with the achieved distance
    and leakage carried into the reported error.
    """
    if c.n_qubits > 2:
        raise ValueError("compile_circuit handles at most 2 qubits")
    n_gates = max(len(c.gates), 1)
    per_gate = eps / n_gates
    n = 4 * c.n_qubits
    letters: list[tuple[int, int]] = []
    reports = []
    total = 0.0
    for g in c.gates:
        U = g.unitary()
        if len(g.qubits) == 1:
            res = synthesize(U, per_gate, encoding, net)
            offset = 4 * g.qubits[0]
            letters.extend((i + offset, s) for i, s in res.word.letters)
            reports.append(GateReport(g.type, g.qubits, len(res.word), res.achieved_distance, 0.0, res.to_dict()["method"]))
            total += res.achieved_distance
        else:
            if g.qubits == (1, 0):
                swap = np.eye(4)[[0, 2, 1, 3]]
                U = swap @ U @ swap
            word, dist, leak = _beam_search_2q(U, encoding)
            letters.extend(word.letters)
            reports.append(GateReport(g.type, g.qubits, len(word), dist, leak, "BeamSearch"))
            total += dist + leak
    plat = PlatPresentation(BraidWord(n, tuple(letters)))
    return CompileResult(plat, total, tuple(reports))


def verify_reduction(c: QuantumCircuit, plat, params: BracketParams, bound: float | None = None) -> dict:
    """Compare the circuit's acceptance probability with the plat probability.

    ``plat`` may be a :class:`CompileResult` (its bound is used) or a bare
    :class:`PlatPresentation` with an explicit or default bound of 0.05.
    """
    if isinstance(plat, CompileResult):
        bound = plat.bound if bound is None else bound
        plat = plat.plat
    if bound is None:
        bound = 0.05
    p_circuit = simulate_accept(c)["probability"]
    p_plat = plat_probability(plat, params)
    return {
        "p_circuit": p_circuit,
        "p_plat": p_plat,
        "deviation": abs(p_circuit - p_plat),
        "bound": bound,
        "pass": bool(abs(p_circuit - p_plat) <= bound),
    }


# --------------------------------------------------------------------------
# Padding gadgets


@dataclass(frozen=True)
class GadgetLink:
    base: PlatPresentation
    unknot_copies: int
    L0_copies: int
    L0: PlatPresentation

    def to_plat(self) -> PlatPresentation:
        parts = [self.base] + [PlatPresentation.identity(1)] * self.unknot_copies + [self.L0] * self.L0_copies
        return plat_union(*parts)

    def bracket(self, params: BracketParams) -> complex:
        """Bracket by multiplicativity over the split components."""
        return (
            bracket_morse(self.base, params)
            * params.delta**self.unknot_copies
            * bracket_morse(self.L0, params) ** self.L0_copies
        )


@lru_cache(maxsize=8)
def default_L0(params: BracketParams, ratio: float = L0_RATIO) -> PlatPresentation:
    """A 2-bridge plat with ``|<L0>| / |delta| ~= ratio``, compiled from a 1-qubit rotation.

    The amplitude needed is ``ratio / |delta|``; a ``Y`` rotation with
    ``cos(theta/2)`` equal to it is synthesized to 1e-3.
    """
    enc = QubitEncoding(params)
    amp = ratio / params.delta_abs
    theta = 2 * math.acos(amp)
    target = np.array([[math.cos(theta / 2), -math.sin(theta / 2)], [math.sin(theta / 2), math.cos(theta / 2)]])
    res = synthesize(target, 1e-3, enc)
    return PlatPresentation(res.word)


def plan_padding(b0: float, window: tuple[float, float], delta_abs: float, ell: float, max_copies: int = 64):
    """Smallest ``(m, k)`` with ``b0 |delta|^m ell^k`` inside the window, or ``None``.

    Returns ``(m, k, value)`` or ``(None, None, closest)``.
    """
    lo, hi = window
    llo, lhi, lb = math.log(lo), math.log(hi), math.log(b0)
    ld, ll = math.log(delta_abs), math.log(ell)
    best = None
    closest, closest_gap = None, math.inf
    for total in range(max_copies + 1):
        for k in range(total + 1):
            m = total - k
            v = lb + m * ld + k * ll
            if llo - 1e-12 <= v <= lhi + 1e-12:
                best = (m, k, math.exp(v))
                break
            gap = min(abs(v - llo), abs(v - lhi))
            if gap < closest_gap:
                closest, closest_gap = math.exp(v), gap
        if best:
            return best
    return None, None, closest


def pad_to_window(
    p: PlatPresentation,
    window: tuple[float, float],
    params: BracketParams,
    L0: PlatPresentation | None = None,
    max_copies: int = 64,
) -> GadgetLink:
    """Add unknots (scale by ``|delta|``) and copies of ``L0`` (scale by ``|<L0>| < 1``)."""
    lo, hi = window
    if not 0 < lo < hi:
        raise ValueError("window must satisfy 0 < lo < hi")
    b0 = abs(bracket_morse(p, params))
    if b0 <= 1e-13 * params.delta_abs**p.g:
        raise ZeroBracket(f"bracket magnitude {b0:.3g} is numerically zero")
    L0 = L0 or default_L0(params)
    ell = abs(bracket_morse(L0, params))
    if not (0 < ell < 1 and params.delta_abs > 1):
        raise InfeasibleWindow("padding needs |<L0>| < 1 < |delta|")
    m, k, val = plan_padding(b0, window, params.delta_abs, ell, max_copies)
    if m is None:
        raise InfeasibleWindow(
            f"no combination of <= {max_copies} unknot/L0 copies lands in [{lo:g}, {hi:g}]", closest=val
        )
    link = GadgetLink(p, m, k, L0)
    got = abs(link.bracket(params))
    if not lo * (1 - 1e-9) <= got <= hi * (1 + 1e-9):
        raise InfeasibleWindow(f"verification failed: |bracket| = {got:.17g}", closest=got)
    return link


# --------------------------------------------------------------------------
# Knotification


@dataclass(frozen=True)
class KnotifyResult:
    plat: PlatPresentation
    inserted: tuple[tuple[int, int], ...]
    correction: BraidWord
    phase: complex
    achieved_distance: float
    bracket_in: complex
    bracket_out: complex

    @property
    def deviation(self) -> float:
        return abs(self.bracket_out - self.phase * self.bracket_in)


def _merge_letters(p: PlatPresentation) -> list[tuple[int, int]]:
    """Letters appended at the top that merge all components into one."""
    word = p.braid
    inserted = []
    while plat_components(PlatPresentation(word)) > 1:
        for i in range(1, word.n_strands):
            trial = BraidWord(word.n_strands, word.letters + ((i, 1),))
            if plat_components(PlatPresentation(trial)) < plat_components(PlatPresentation(word)):
                word = trial
                inserted.append((i, 1))
                break
        else:  # pragma: no cover - some adjacent pair always joins two components
            raise RuntimeError("could not merge components")
    return inserted


def knotify(
    p: PlatPresentation,
    eps: float,
    encoding: QubitEncoding,
    net: Net | None = None,
) -> KnotifyResult:
    """Merge all components into one and undo the damage with a pure braid.

    Each merging crossing ``s_i`` is followed by a pure-braid word whose
    image approximates ``rho(s_i)^-1`` up to a phase; the product of those
    phases is reported.  Implemented for 4-strand plats, where the pure
    braid image on V(4) is dense.
    """
    params = encoding.params
    b_in = bracket_morse(p, params)
    if plat_components(p) == 1:
        return KnotifyResult(p, (), BraidWord(p.braid.n_strands), 1.0 + 0j, 0.0, b_in, b_in)
    if p.braid.n_strands != 4:
        raise NotImplementedError("knotify is implemented for 2-bridge plats")
    inserted = _merge_letters(p)
    net = net or default_net(params, 7, kind="pure")
    rep = skein_rep(4, params, "path")
    letters = list(p.braid.letters)
    corr: list[tuple[int, int]] = []
    # |<L_out> - phase <L_in>| <= |delta|^g ||T - phase I|| for the appended segment T
    per = eps / len(inserted)
    for i, s in inserted:
        target = rep.letter(i, -s)
        res = synthesize(target, per, encoding, net)
        letters.append((i, s))
        letters.extend(res.word.letters)
        corr.extend(res.word.letters)
    correction = BraidWord(4, tuple(corr))
    if underlying_permutation(correction) != (1, 2, 3, 4):
        raise ValueError("knotify needs a pure-braid net (default_net(params, kind='pure'))")
    out = PlatPresentation(BraidWord(4, tuple(letters)))
    T = rep.word_matrix(tuple(letters[len(p.braid.letters):]))
    phase = best_phase(T)
    dist = float(np.linalg.norm(T - phase * np.eye(2), 2))
    return KnotifyResult(out, tuple(inserted), correction, phase, dist, b_in, bracket_morse(out, params))
