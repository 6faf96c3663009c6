"""Measured-walk hitting times and the infinite-hitting-time analysis.

The measured walk alternates the step unitary with a projective test for
arrival at the final vertex set.  The mean first-arrival time has a closed
form in the doubled (vectorized) space; it breaks down exactly when the step
has eigenvectors with no final-vertex component, and the projector onto all
such eigenvectors decides which initial states never fully arrive.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import DimensionLimit
from .graphs import ColoredGraph
from .symmetry import OrbitBasis, check_measurement_symmetry
from .walk import WalkOperator

__all__ = [
    "Measurement",
    "HittingReport",
    "InfiniteSubspace",
    "CoinOverlap",
    "measurement_for_vertices",
    "restrict_measurement",
    "vectorize",
    "devectorize",
    "superoperators",
    "p_sequence",
    "hitting_time",
    "infinite_projector",
    "c_matrix",
    "intersection_dimension",
    "quotient_infinite_check",
    "dense_limit",
]

DEFAULT_DENSE_LIMIT = 128
SINGULARITY_TOL = 1e-9
DEGENERACY_TOL = 1e-8
NULL_TOL = 1e-9
INTERSECTION_TOL = 1e-8


def dense_limit() -> int:
    """Dimension cap for dense superoperators (QWALK_DENSE_LIMIT overrides)."""
    raw = os.environ.get("QWALK_DENSE_LIMIT")
    return int(raw) if raw else DEFAULT_DENSE_LIMIT


@dataclass
class Measurement:
    """Projective arrival test: P_f onto the final states, Q_f = I - P_f."""

    dim: int
    final_flats: tuple[int, ...]

    def __post_init__(self):
        self.final_flats = tuple(sorted(int(x) for x in self.final_flats))
        if any(not 0 <= x < self.dim for x in self.final_flats):
            raise ValueError("final basis index out of range")

    @property
    def P_f(self) -> np.ndarray:
        p = np.zeros((self.dim, self.dim), dtype=np.complex128)
        idx = list(self.final_flats)
        p[idx, idx] = 1.0
        return p

    @property
    def Q_f(self) -> np.ndarray:
        return np.eye(self.dim, dtype=np.complex128) - self.P_f

    @property
    def rank(self) -> int:
        return len(self.final_flats)

    def apply_P(self, state: np.ndarray) -> np.ndarray:
        out = np.zeros_like(state)
        idx = list(self.final_flats)
        out[idx] = state[idx]
        return out

    def apply_Q(self, state: np.ndarray) -> np.ndarray:
        out = state.copy()
        out[list(self.final_flats)] = 0.0
        return out


def measurement_for_vertices(graph: ColoredGraph, vertices: Sequence[int]) -> Measurement:
    """Measurement testing arrival at any of the given vertices (all coin states)."""
    flats = []
    for v in vertices:
        flats.extend(graph.vertex_flats(int(v)))
    if not flats:
        raise ValueError("empty final vertex set")
    return Measurement(dim=graph.basis_size, final_flats=tuple(flats))


def restrict_measurement(m: Measurement, orbits: OrbitBasis) -> Measurement:
    """Restrict a symmetric measurement to the orbit basis.

    The measured index set must be invariant under every orbit generator
    (checked exactly); each orbit then lies wholly inside or outside the
    final set and the restricted projector is again a 0/1 diagonal.
    """
    if m.dim != orbits.dim:
        raise ValueError("measurement does not live on the orbit basis' source space")
    check_measurement_symmetry(m.final_flats, orbits.generators)
    final = set(m.final_flats)
    final_orbits = [k for k, orbit in enumerate(orbits.orbits) if set(orbit) <= final]
    covered = sum(len(orbits.orbits[k]) for k in final_orbits)
    if covered != len(final):
        raise ValueError("final set is not a union of orbits")
    return Measurement(dim=orbits.count, final_flats=tuple(final_orbits))


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Row-major stacking of a square matrix into a length-D^2 vector."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("vectorize expects a square matrix")
    return rho.reshape(-1)

def devectorize(vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec)
    d = math.isqrt(vec.size)
    if d * d != vec.size:
        raise ValueError("vector length is not a perfect square")
    return vec.reshape(d, d)


def superoperators(walk, m: Measurement) -> tuple[np.ndarray, np.ndarray]:
    """Dense doubled-space matrices for the surviving and arriving branches.

    N = (Q_f U) ⊗ (Q_f U)* propagates the unmeasured branch, Y likewise for
    the arrival branch; with row-major vectorization (A rho B)^v equals
    (A ⊗ B^T) rho^v, which fixes these forms.
    """
    u = walk.matrix if isinstance(walk, WalkOperator) else np.asarray(walk)
    d = u.shape[0]
    if d > dense_limit():
        raise DimensionLimit(
            f"dimension {d} exceeds dense superoperator cap {dense_limit()}; "
            "reduce to a quotient first or raise QWALK_DENSE_LIMIT"
        )
    qu = m.Q_f @ u
    pu = m.P_f @ u
    n = np.kron(qu, qu.conj())
    y = np.kron(pu, pu.conj())
    return n, y


def _as_density(rho0: np.ndarray, dim: int) -> np.ndarray:
    rho0 = np.asarray(rho0, dtype=np.complex128)
    if rho0.ndim == 1:
        if rho0.size != dim:
            raise ValueError("state dimension mismatch")
        nrm = np.linalg.norm(rho0)
        if abs(nrm - 1.0) > 1e-9:
            warnings.warn(f"normalizing initial state (norm {nrm:.6g})", stacklevel=3)
            rho0 = rho0 / nrm
        return np.outer(rho0, rho0.conj())
    if rho0.shape != (dim, dim):
        raise ValueError("density operator dimension mismatch")
    if np.max(np.abs(rho0 - rho0.conj().T)) > 1e-10:
        raise ValueError("density operator is not Hermitian")
    if abs(np.trace(rho0).real - 1.0) > 1e-9:
        raise ValueError("density operator trace differs from 1")
    if np.linalg.eigvalsh(rho0).min() < -1e-10:
        raise ValueError("density operator is not positive semidefinite")
    return rho0


def p_sequence(walk, m: Measurement, rho0: np.ndarray, horizon: int) -> list[float]:
    """First-arrival probabilities p(1..T) of the measured walk.

    Each step applies the unitary, reads off the arrival weight, and keeps
    the (unnormalized) surviving branch.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    u = walk.matrix if isinstance(walk, WalkOperator) else np.asarray(walk)
    rho = _as_density(rho0, u.shape[0])
    idx = list(m.final_flats)
    out = []
    for _ in range(horizon):
        rho = u @ rho @ u.conj().T
        out.append(float(np.trace(rho[np.ix_(idx, idx)]).real))
        rho[idx, :] = 0.0
        rho[:, idx] = 0.0
    return out


@dataclass
class InfiniteSubspace:
    """Span of all step eigenvectors with no final-vertex component.

    ``structural_rank`` counts the dimension forced by eigenvalue degeneracy
    exceeding the measured rank; any further null vectors found are the
    ``accidental_dim``.
    """

    projector: np.ndarray
    basis: np.ndarray
    rank: int
    structural_rank: int
    accidental_dim: int
    cluster_dims: tuple[int, ...]


def _eig_clusters(u: np.ndarray, tol: float):
    """Orthonormal eigenbasis of a unitary, grouped by eigenphase clusters."""
    t, z = scipy.linalg.schur(u, output="complex")
    phases = np.angle(np.diag(t))
    order = np.argsort(phases)
    phases = phases[order]
    z = z[:, order]
    n = phases.size
    # Circular clustering: split where the phase gap exceeds tol, then merge
    # the ends if they wrap around within tol.
    breaks = [i + 1 for i in range(n - 1) if phases[i + 1] - phases[i] > tol]
    bounds = [0] + breaks + [n]
    groups = [list(range(a, b)) for a, b in zip(bounds[:-1], bounds[1:])]
    if len(groups) > 1 and (phases[0] + 2 * np.pi) - phases[-1] <= tol:
        groups[0] = groups.pop() + groups[0]
    return [(z[:, g], phases[g].mean()) for g in groups]


def infinite_projector(
    walk,
    m: Measurement,
    degeneracy_tol: float = DEGENERACY_TOL,
    null_tol: float = NULL_TOL,
) -> InfiniteSubspace:
    """Projector onto every step eigenvector with zero final-vertex overlap.

    Within each (clustered) eigenspace the final-vertex rows of the
    eigenvectors form a homogeneous system; its null space contributes the
    combinations that never touch the measurement.  A k-dimensional
    eigenspace against r measured rows forces at least k - r solutions;
    anything beyond that is counted as accidental.
    """
    u = walk.matrix if isinstance(walk, WalkOperator) else np.asarray(walk)
    d = u.shape[0]
    if m.dim != d:
        raise ValueError("measurement does not match the walk dimension")
    rows = list(m.final_flats)
    r = len(rows)

    pieces = []
    structural = 0
    accidental = 0
    cluster_dims = []
    for vecs, _phase in _eig_clusters(u, degeneracy_tol):
        k = vecs.shape[1]
        cluster_dims.append(k)
        block = vecs[rows, :]
        _, svals, vh = np.linalg.svd(block, full_matrices=True)
        null_dim = k - int(np.sum(svals >= null_tol))
        if null_dim <= 0:
            continue
        coeff = vh.conj().T[:, k - null_dim :]
        w = vecs @ coeff
        pieces.append(w)
        structural += max(k - r, 0)
        accidental += null_dim - max(k - r, 0)

    if pieces:
        basis = np.hstack(pieces)
        # Columns are orthonormal within a cluster and across clusters
        # (different eigenspaces of a normal matrix), so no re-orthogonalization.
        projector = basis @ basis.conj().T
    else:
        basis = np.zeros((d, 0), dtype=np.complex128)
        projector = np.zeros((d, d), dtype=np.complex128)

    rank = basis.shape[1]
    # Construction guarantees: no final-vertex weight, commutes with the step.
    if rank:
        if np.max(np.abs(projector[rows, :])) > 1e-8:
            raise RuntimeError("projector leaks onto the measured subspace")
        if np.max(np.abs(u @ projector - projector @ u)) > 1e-9:
            raise RuntimeError("projector fails to commute with the step")
    return InfiniteSubspace(
        projector=projector,
        basis=basis,
        rank=rank,
        structural_rank=structural,
        accidental_dim=accidental,
        cluster_dims=tuple(cluster_dims),
    )


@dataclass
class CoinOverlap:
    """Coin-space overlap matrix with the infinite-hitting subspace at a vertex."""

    vertex: int
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def c_matrix(p_hat: np.ndarray, graph: ColoredGraph, vertex: int) -> CoinOverlap:
    """Restrict the infinite-hitting projector to one vertex's coin block.

    The result is Hermitian positive semidefinite; a coin state along a zero
    eigenvector is the unique way to escape infinite hitting from that
    vertex, and no escape exists when the matrix is positive definite.
    """
    idx = list(graph.vertex_flats(vertex))
    block = np.asarray(p_hat)[np.ix_(idx, idx)]
    evals, evecs = np.linalg.eigh(block)
    return CoinOverlap(vertex=vertex, matrix=block, eigenvalues=evals, eigenvectors=evecs)


def intersection_dimension(p: np.ndarray, q: np.ndarray, tol: float = INTERSECTION_TOL) -> int:
    """Dimension of range(p) ∩ range(q) for orthogonal projectors p, q.

    Counted as the multiplicity of singular value 1 of p·q (the cosines of
    the principal angles between the two ranges).
    """
    svals = np.linalg.svd(np.asarray(p) @ np.asarray(q), compute_uv=False)
    return int(np.sum(svals > 1.0 - tol))


def quotient_infinite_check(p_hat: np.ndarray, p_h: np.ndarray, tol: float = INTERSECTION_TOL) -> int:
    """Dimension of the infinite-hitting subspace surviving inside the
    orbit subspace; zero means the quotient walk hits every target."""
    return intersection_dimension(p_hat, p_h, tol)


@dataclass
class HittingReport:
    """Everything the hitting analysis produces for one configuration."""

    tau: float
    tau_is_infinite: bool
    method: str
    p_prefix: list[float]
    hit_probability: float
    P_rank: int
    structural_rank: int
    accidental_dim: int
    escape_weight: float
    escape_weight_squared: float
    series_tau: float | None = None
    series_converged: bool = False
    intersection_dim: int | None = None
    c_matrix_spectra: dict[str, list[float]] | None = None

    def to_json(self) -> dict:
        return {
            "tau": "infinite" if self.tau_is_infinite else self.tau,
            "p_prefix": list(self.p_prefix),
            "hit_probability": self.hit_probability,
            "P_rank": self.P_rank,
            "intersection_dim": self.intersection_dim,
            "c_matrix_spectra": self.c_matrix_spectra,
            "method": self.method,
            "structural_rank": self.structural_rank,
            "accidental_dim": self.accidental_dim,
            "escape_weight": self.escape_weight,
            "escape_weight_squared": self.escape_weight_squared,
            "series_tau": self.series_tau,
            "series_converged": self.series_converged,
        }


def _deflated_closed_form(u, m, rho, infinite: InfiniteSubspace):
    """Mean arrival time from the closed form, computed on the orthogonal
    complement of the never-arriving subspace where the resolvent exists."""
    d = u.shape[0]
    if infinite.rank:
        # Orthonormal basis of the complement via the projector's eigenvectors.
        evals, evecs = np.linalg.eigh(infinite.projector)
        w = evecs[:, evals < 0.5]
    else:
        w = np.eye(d, dtype=np.complex128)
    qu = m.Q_f @ u
    pu = m.P_f @ u
    qu_t = w.conj().T @ qu @ w
    rho_t = w.conj().T @ rho @ w
    k = qu_t.shape[0]
    n_t = np.kron(qu_t, qu_t.conj())
    a = np.eye(k * k, dtype=np.complex128) - n_t
    sigma_min = np.linalg.svd(a, compute_uv=False)[-1]
    if sigma_min <= SINGULARITY_TOL:
        return None
    x = np.linalg.solve(a, rho_t.reshape(-1))
    x = np.linalg.solve(a, x)
    pu_w = pu @ w
    val = np.trace(pu_w @ x.reshape(k, k) @ pu_w.conj().T)
    return float(val.real)


def hitting_time(
    walk,
    m: Measurement,
    rho0: np.ndarray,
    horizon: int | None = None,
    degeneracy_tol: float = DEGENERACY_TOL,
    series_tol: float = 1e-6,
    infinite: InfiniteSubspace | None = None,
) -> HittingReport:
    """Full hitting analysis of one measured-walk configuration.

    The mean arrival time comes from the closed form whenever the resolvent
    of the surviving branch exists (after deflating the never-arriving
    subspace); the truncated series over ``horizon`` steps cross-checks it
    once the arrival probabilities have summed close enough to one.  An
    initial state overlapping the never-arriving subspace has infinite mean
    arrival time outright.
    """
    u = walk.matrix if isinstance(walk, WalkOperator) else np.asarray(walk)
    d = u.shape[0]
    rho = _as_density(rho0, d)
    if horizon is None:
        horizon = 10 * d * d

    if infinite is None:
        infinite = infinite_projector(walk, m, degeneracy_tol=degeneracy_tol)
    overlap = float(np.trace(infinite.projector @ rho).real)
    escape = 1.0 - overlap

    p_pref = p_sequence(u, m, rho, horizon)
    hit_prob = float(np.sum(p_pref))
    series_tau = float(np.dot(np.arange(1, horizon + 1), p_pref))
    series_converged = hit_prob > 1.0 - series_tol

    if overlap > SINGULARITY_TOL:
        report = HittingReport(
            tau=math.inf,
            tau_is_infinite=True,
            method="projector",
            p_prefix=p_pref,
            hit_probability=hit_prob,
            P_rank=infinite.rank,
            structural_rank=infinite.structural_rank,
            accidental_dim=infinite.accidental_dim,
            escape_weight=escape,
            escape_weight_squared=escape * escape,
            series_tau=series_tau,
            series_converged=False,
        )
        return report

    tau = None
    method = "series"
    if d <= dense_limit():
        tau = _deflated_closed_form(u, m, rho, infinite)
        if tau is not None:
            method = "closed-form" if infinite.rank == 0 else "closed-form-deflated"
    if tau is None:
        tau = series_tau
        if not series_converged:
            warnings.warn(
                f"truncated series reached only sum p = {hit_prob:.9f} after {horizon} steps",
                stacklevel=2,
            )
    elif series_converged and abs(series_tau - tau) > max(1e-6, 1e-9 * abs(tau)):
        warnings.warn(
            f"closed-form and series arrival times disagree: {tau} vs {series_tau}",
            stacklevel=2,
        )

    return HittingReport(
        tau=float(tau),
        tau_is_infinite=False,
        method=method,
        p_prefix=p_pref,
        hit_probability=hit_prob,
        P_rank=infinite.rank,
        structural_rank=infinite.structural_rank,
        accidental_dim=infinite.accidental_dim,
        escape_weight=escape,
        escape_weight_squared=escape * escape,
        series_tau=series_tau,
        series_converged=series_converged,
    )
