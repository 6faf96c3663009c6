"""Coins, the coined walk unitary, induced quotient walks, and Hamiltonians.

The discrete step is the shift applied after a per-vertex coin reshuffle of
the outgoing colors.  On regular properly colored graphs that is the usual
tensor form; on irregular graphs (quotients in particular) the coin simply
acts blockwise inside each vertex's color block.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BlockStructureError, CommutationFailure
from .graphs import ColoredGraph, adjacency_matrix, shift_permutation
from .symmetry import BasisPermutation, OrbitBasis, QuotientGraph

__all__ = [
    "CoinSpec",
    "WalkOperator",
    "grover_coin",
    "dft_coin",
    "custom_coin",
    "identity_coin",
    "walk_unitary",
    "symmetry_commutes",
    "induced_walk",
    "factor_quotient_walk",
    "continuous_hamiltonian",
    "quotient_hamiltonian",
    "evolve_discrete",
    "evolve_continuous",
]

UNITARITY_TOL = 1e-12
EVOLVE_TOL = 1e-10


@dataclass
class CoinSpec:
    kind: str
    d: int
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        if self.matrix.shape != (self.d, self.d):
            raise ValueError("coin matrix shape does not match its degree")
        dev = np.max(np.abs(self.matrix.conj().T @ self.matrix - np.eye(self.d)))
        if dev > UNITARITY_TOL:
            raise ValueError(f"coin is not unitary (deviation {dev:.2e})")


def grover_coin(d: int) -> CoinSpec:
    """Reflection about the uniform direction state: 2/d off the diagonal,
    2/d - 1 on it.  For d = 2 this is the Pauli X flip."""
    if d < 1:
        raise ValueError("coin degree must be >= 1")
    m = np.full((d, d), 2.0 / d, dtype=np.complex128) - np.eye(d, dtype=np.complex128)
    return CoinSpec(kind="grover", d=d, matrix=m)


def dft_coin(d: int) -> CoinSpec:
    """Discrete Fourier coin with entries omega^(jk)/sqrt(d), omega = e^(2 pi i/d)."""
    if d < 1:
        raise ValueError("coin degree must be >= 1")
    jk = np.outer(np.arange(d), np.arange(d))
    m = np.exp(2j * np.pi * jk / d) / np.sqrt(d)
    return CoinSpec(kind="dft", d=d, matrix=m)


def identity_coin(d: int) -> CoinSpec:
    return CoinSpec(kind="identity", d=d, matrix=np.eye(d, dtype=np.complex128))


def custom_coin(matrix: np.ndarray) -> CoinSpec:
    matrix = np.asarray(matrix, dtype=np.complex128)
    return CoinSpec(kind="custom", d=matrix.shape[0], matrix=matrix)


@dataclass
class WalkOperator:
    """A unitary step operator together with the basis it acts on.

    ``graph`` is set for walks on a graph's flat basis, ``orbit_basis`` for
    walks living on an orbit subspace of some larger walk.
    """

    matrix: np.ndarray
    graph: ColoredGraph | None = None
    orbit_basis: OrbitBasis | None = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        d = self.matrix.shape[0]
        if self.matrix.shape != (d, d):
            raise ValueError("walk operator must be square")
        dev = np.max(np.abs(self.matrix.conj().T @ self.matrix - np.eye(d)))
        if dev > UNITARITY_TOL:
            raise ValueError(f"walk operator is not unitary (deviation {dev:.2e})")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _coin_for_degree(coin, degree: int) -> np.ndarray:
    if isinstance(coin, CoinSpec):
        if coin.d != degree:
            raise ValueError(f"coin degree {coin.d} does not match vertex degree {degree}")
        return coin.matrix
    try:
        spec = coin[degree]
    except (KeyError, TypeError):
        raise ValueError(f"no coin supplied for degree {degree}") from None
    if spec.d != degree:
        raise ValueError(f"coin for degree class {degree} has wrong size {spec.d}")
    return spec.matrix


def walk_unitary(graph: ColoredGraph, coin) -> WalkOperator:
    """One step of the coined walk: coin each vertex block, then shift.

    ``coin`` is a single CoinSpec for regular graphs or a mapping from degree
    to CoinSpec for irregular ones.
    """
    d = graph.basis_size
    flip = np.zeros((d, d), dtype=np.complex128)
    for v in range(graph.num_vertices):
        idx = list(graph.vertex_flats(v))
        flip[np.ix_(idx, idx)] = _coin_for_degree(coin, graph.degree(v))
    shift = shift_permutation(graph)
    inv = np.empty_like(shift)
    inv[shift] = np.arange(d)
    return WalkOperator(matrix=flip[inv, :], graph=graph)


def symmetry_commutes(walk, sigma: BasisPermutation, tol: float = UNITARITY_TOL) -> bool:
    """True when conjugating the step by sigma reproduces it within tol."""
    u = walk.matrix if isinstance(walk, WalkOperator) else np.asarray(walk)
    if sigma.dim != u.shape[0]:
        raise ValueError("dimension mismatch")
    return bool(np.max(np.abs(sigma.conjugate(u) - u)) <= tol)


def induced_walk(walk: WalkOperator, orbits: OrbitBasis) -> WalkOperator:
    """Restrict a symmetric walk to the orbit subspace.

    Every generator attached to the orbit basis must commute with the step;
    otherwise the restriction is not unitary and CommutationFailure is
    raised naming the offender.
    """
    u = walk.matrix
    if orbits.dim != u.shape[0]:
        raise ValueError("orbit basis does not match the walk dimension")
    for g in orbits.generators:
        if not symmetry_commutes(walk, g):
            raise CommutationFailure(
                f"walk does not commute with {g.description or 'a subgroup generator'}"
            )
    v = orbits.vectors
    return WalkOperator(matrix=v.conj().T @ u @ v, orbit_basis=orbits)


def factor_quotient_walk(walk_h: WalkOperator, quotient: QuotientGraph):
    """Split a quotient step into shift times block-diagonal coin.

    Returns (S_H, C_H, blocks) with one block per quotient vertex, sized by
    its degree.  Raises BlockStructureError if C_H has weight outside the
    vertex blocks beyond tolerance.
    """
    m = quotient.orbit_basis.count
    u = walk_h.matrix
    if u.shape[0] != m:
        raise ValueError("walk does not live on the quotient orbit basis")
    s_h = np.zeros((m, m), dtype=np.complex128)
    s_h[quotient.orbit_shift, np.arange(m)] = 1.0
    c_h = s_h.conj().T @ u

    blocks = []
    start = 0
    mask = np.ones((m, m), dtype=bool)
    for v in range(quotient.graph.num_vertices):
        dv = quotient.graph.degree(v)
        blocks.append(c_h[start : start + dv, start : start + dv].copy())
        mask[start : start + dv, start : start + dv] = False
        start += dv
    worst = np.max(np.abs(c_h[mask])) if mask.any() else 0.0
    if worst > UNITARITY_TOL:
        raise BlockStructureError(
            f"quotient coin has off-block weight {worst:.2e}; orbit/quotient data inconsistent"
        )
    return s_h, c_h, blocks


def continuous_hamiltonian(graph: ColoredGraph, gamma: float, form: str = "laplacian") -> np.ndarray:
    """Vertex-space Hamiltonian of the coinless walk.

    "laplacian": -gamma off the diagonal on edges, degree*gamma on it.
    "adjacency": gamma on edges, zero diagonal (the usual simplification for
    regular graphs, where the dropped diagonal is a global phase).
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    a = adjacency_matrix(graph)
    if form == "adjacency":
        return gamma * a
    if form == "laplacian":
        deg = np.diag([graph.degree(v) for v in range(graph.num_vertices)]).astype(np.complex128)
        return gamma * (deg - a)
    raise ValueError(f"unknown Hamiltonian form {form!r}")


def quotient_hamiltonian(h: np.ndarray, orbits: OrbitBasis, tol: float = UNITARITY_TOL) -> np.ndarray:
    """Restriction of a symmetric Hamiltonian to the orbit subspace."""
    h = np.asarray(h, dtype=np.complex128)
    if orbits.dim != h.shape[0]:
        raise ValueError("orbit basis does not match the Hamiltonian dimension")
    for g in orbits.generators:
        if np.max(np.abs(g.conjugate(h) - h)) > tol:
            raise CommutationFailure(
                f"Hamiltonian does not commute with {g.description or 'a subgroup generator'}"
            )
    v = orbits.vectors
    return v.conj().T @ h @ v


def _check_state(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=np.complex128)
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-9:
        warnings.warn(f"evolving a non-normalized state (norm {norm:.6g})", stacklevel=3)
    return state


def evolve_discrete(walk, state: np.ndarray, steps: int) -> np.ndarray:
    """Apply the step operator ``steps`` times."""
    u = walk.matrix if isinstance(walk, WalkOperator) else np.asarray(walk)
    psi = _check_state(state)
    n0 = np.linalg.norm(psi)
    for _ in range(steps):
        psi = u @ psi
    if abs(np.linalg.norm(psi) - n0) > EVOLVE_TOL:
        raise RuntimeError("norm drift exceeded tolerance during discrete evolution")
    return psi


def evolve_continuous(h: np.ndarray, state: np.ndarray, t: float) -> np.ndarray:
    """Evolve under exp(+iHt) via Hermitian eigendecomposition.

    The +i phase convention is used throughout this package; every quotient
    and hitting quantity computed here is insensitive to that sign.
    """
    h = np.asarray(h, dtype=np.complex128)
    if np.max(np.abs(h - h.conj().T)) > 1e-10:
        raise ValueError("Hamiltonian must be Hermitian")
    psi = _check_state(state)
    n0 = np.linalg.norm(psi)
    evals, evecs = np.linalg.eigh(h)
    phases = np.exp(1j * evals * t)
    out = evecs @ (phases * (evecs.conj().T @ psi))
    if abs(np.linalg.norm(out) - n0) > EVOLVE_TOL:
        raise RuntimeError("norm drift exceeded tolerance during continuous evolution")
    return out
