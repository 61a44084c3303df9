"""Infinite-time averaging maps and their superoperator representations.

The total averaging map dephases a joint state in the energy eigenbasis
(spectral projections handle degenerate levels); the reduced averaging map
is its compression to the system for a fixed bath state.  Superoperators
are stored as dense (d_s^2 x d_s^2) matrices acting on column-vectorized
operators: vec stacks columns, so entry (i, j) sits at index ``j * d + i``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import (
    BipartiteDims,
    _as_square,
    hermitian_eigensystem,
    partial_trace_bath,
    to_density_matrix,
)

#: Default relative scale for degeneracy / gap-degeneracy thresholds.
DEG_SCALE = 1e-9
#: Convergence threshold for map-power limits.
POWER_TOL = 1e-12
#: Doubling budget for map-power limits (powers up to 2**POWER_MAX_DOUBLINGS).
POWER_MAX_DOUBLINGS = 64


@dataclass(frozen=True, eq=False)
class EnergyEigensystem:
    """Spectral data of a bipartite Hamiltonian with degeneracy clustering.

    ``clusters`` lists half-open index ranges of (near-)degenerate groups in
    the ascending ``energies``; within a group the spread is <= ``eps_deg``.
    """

    dims: BipartiteDims
    energies: np.ndarray
    vectors: np.ndarray
    clusters: tuple[tuple[int, int], ...]
    eps_deg: float

    @property
    def dim(self) -> int:
        return self.energies.shape[0]

    @property
    def degenerate(self) -> bool:
        return any(b - a > 1 for a, b in self.clusters)

    def cluster_energies(self) -> np.ndarray:
        """One representative energy per cluster."""
        return np.array([self.energies[a] for a, _ in self.clusters])

    def min_gap(self) -> float:
        """Smallest nonzero spacing between distinct (clustered) levels."""
        reps = self.cluster_energies()
        if reps.size < 2:
            return 0.0
        return float(np.min(np.diff(reps)))


def _cluster_sorted(energies: np.ndarray, eps_deg: float):
    """Single-linkage clustering of an ascending energy list."""
    bounds = [0]
    for k in range(1, energies.size):
        if energies[k] - energies[k - 1] > eps_deg:
            bounds.append(k)
    bounds.append(energies.size)
    return tuple((bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1))


def _default_scale(energies: np.ndarray) -> float:
    s = float(np.max(np.abs(energies))) if energies.size else 0.0
    return s if s > 0.0 else 1.0


def build_eigensystem(h, dims: BipartiteDims,
                      eps_deg: float | None = None) -> EnergyEigensystem:
    """Diagonalize a Hermitian joint Hamiltonian and cluster degeneracies.

    ``eps_deg`` defaults to DEG_SCALE times the spectral radius.
    """
    h = _as_square(h)
    if h.shape[0] != dims.d:
        raise ValueError(f"Hamiltonian dim {h.shape[0]} != d_s*d_b = {dims.d}")
    energies, vectors = hermitian_eigensystem(h)
    if eps_deg is None:
        eps_deg = DEG_SCALE * _default_scale(energies)
    clusters = _cluster_sorted(energies, eps_deg)
    return EnergyEigensystem(dims, energies, vectors, clusters, eps_deg)


@dataclass(frozen=True, eq=False)
class GapReport:
    """Result of the nondegenerate-energy-gap scan.

    ``offenders`` holds quadruples (k, k', j, j') of index pairs whose
    energy differences coincide within ``eps_gap``; repeated energies are
    reported as (k, k', j, j) quadruples against a zero difference.
    """

    nondegenerate_gaps: bool
    offenders: tuple[tuple[int, int, int, int], ...]
    eps_gap: float


def check_nondegenerate_gaps(es: EnergyEigensystem,
                             eps_gap: float | None = None) -> GapReport:
    """Scan for coinciding energy differences via sorted pairwise gaps.

    Nondegenerate gaps require all energies distinct and all positive
    pairwise differences distinct; the scan sorts the O(d^2) differences
    instead of comparing all O(d^4) quadruples.
    """
    e = es.energies
    if eps_gap is None:
        eps_gap = DEG_SCALE * _default_scale(e)
    d = e.size
    offenders: list[tuple[int, int, int, int]] = []
    rows, cols = np.triu_indices(d, k=1)
    diffs = e[cols] - e[rows]  # >= 0 since energies ascend
    zero = np.flatnonzero(diffs <= eps_gap)
    for idx in zero[:64]:
        k, kp = int(cols[idx]), int(rows[idx])
        offenders.append((k, kp, k, k))
    order = np.argsort(diffs, kind="stable")
    sd = diffs[order]
    close = np.flatnonzero(np.diff(sd) <= eps_gap)
    for idx in close[:64]:
        a, b = order[idx], order[idx + 1]
        offenders.append((int(cols[a]), int(rows[a]), int(cols[b]), int(rows[b])))
    return GapReport(len(offenders) == 0, tuple(offenders), float(eps_gap))


def energy_dephase(m, es: EnergyEigensystem) -> np.ndarray:
    """Project an arbitrary operator onto the energy-diagonal blocks.

    Linear in ``m``: singleton clusters dephase, degenerate clusters keep
    their full block (P M P for the cluster projector P).
    """
    m = _as_square(m)
    v = es.vectors
    me = v.conj().T @ m @ v
    out = np.zeros_like(me)
    for a, b in es.clusters:
        out[a:b, a:b] = me[a:b, a:b]
    return v @ out @ v.conj().T


def total_average(rho_sb, es: EnergyEigensystem) -> np.ndarray:
    """Infinite-time average of a joint state: dephasing in the eigenbasis.

    Idempotent by construction; the output is validated as a density matrix.
    """
    rho_sb = _as_square(rho_sb)
    if rho_sb.shape[0] != es.dim:
        raise ValueError(f"state dim {rho_sb.shape[0]} != {es.dim}")
    return to_density_matrix(energy_dephase(rho_sb, es))


def unitary_evolve(rho_sb, es: EnergyEigensystem, t: float) -> np.ndarray:
    """Conjugate a joint state by exp(-iHt) through the eigenbasis."""
    rho_sb = _as_square(rho_sb)
    if rho_sb.shape[0] != es.dim:
        raise ValueError(f"state dim {rho_sb.shape[0]} != {es.dim}")
    v = es.vectors
    phases = np.exp(-1j * es.energies * t)
    me = v.conj().T @ rho_sb @ v
    me = me * np.outer(phases, phases.conj())
    return v @ me @ v.conj().T


# -- superoperator layer ------------------------------------------------------

def vec(m) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v) -> np.ndarray:
    """Inverse of ``vec`` for square matrices."""
    v = np.asarray(v, dtype=complex).ravel()
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    return v.reshape(d, d, order="F")


def superop_dim(superop) -> int:
    s = _as_square(superop)
    d = int(round(np.sqrt(s.shape[0])))
    if d * d != s.shape[0]:
        raise ValueError("superoperator side is not a perfect square")
    return d


def superop_from_function(f, d: int) -> np.ndarray:
    """Matrix of a linear map on d x d operators, built column by column."""
    s = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for i in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            s[:, j * d + i] = vec(f(e))
    return s


def identity_superop(d: int) -> np.ndarray:
    return np.eye(d * d, dtype=complex)


def constant_superop(rho) -> np.ndarray:
    """Map sending every state to the fixed state ``rho``."""
    rho = _as_square(rho)
    d = rho.shape[0]
    s = np.zeros((d * d, d * d), dtype=complex)
    tr_row = vec(np.eye(d)).conj()
    return np.outer(vec(rho), tr_row)


def reduced_average_map(rho_b, es: EnergyEigensystem) -> np.ndarray:
    """Superoperator of the reduced time-averaging map for bath state rho_b.

    Columns are the images of the operator basis under
    tr_B . energy_dephase . (tensor with rho_b); trace-preserving and
    completely positive by construction.
    """
    rho_b = _as_square(rho_b)
    if rho_b.shape[0] != es.dims.d_b:
        raise ValueError(f"bath state dim {rho_b.shape[0]} != {es.dims.d_b}")

    def act(e):
        joint = np.kron(e, rho_b)
        return partial_trace_bath(energy_dephase(joint, es), es.dims)

    return superop_from_function(act, es.dims.d_s)


def compose(phi, psi) -> np.ndarray:
    """Composition phi . psi (apply ``psi`` first)."""
    phi = _as_square(phi)
    psi = _as_square(psi)
    if phi.shape != psi.shape:
        raise ValueError(f"dimension mismatch: {phi.shape} vs {psi.shape}")
    return phi @ psi


def apply(superop, rho) -> np.ndarray:
    """Apply a superoperator to a state and validate the result."""
    s = _as_square(superop)
    rho = _as_square(rho)
    d = superop_dim(s)
    if rho.shape[0] != d:
        raise ValueError(f"state dim {rho.shape[0]} != map dim {d}")
    return to_density_matrix(unvec(s @ vec(rho)))


def apply_raw(superop, m) -> np.ndarray:
    """Apply a superoperator to an arbitrary operator (no validation)."""
    return unvec(_as_square(superop) @ vec(m))


def is_trace_preserving(superop, tol: float = 1e-9) -> bool:
    """True if the dual map fixes the identity to ``tol``."""
    s = _as_square(superop)
    d = superop_dim(s)
    tr_row = vec(np.eye(d)).conj()
    return bool(np.max(np.abs(tr_row @ s - tr_row)) <= tol)


def is_hermiticity_preserving(superop, tol: float = 1e-9) -> bool:
    s = _as_square(superop)
    d = superop_dim(s)
    for j in range(d):
        for i in range(j + 1):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            lhs = apply_raw(s, e.conj().T)
            rhs = apply_raw(s, e).conj().T
            if np.max(np.abs(lhs - rhs)) > tol:
                return False
    return True


def choi_matrix(superop) -> np.ndarray:
    """Normalized Choi matrix: action on the maximally entangled state.

    J = (1/d) * sum_ij Phi(E_ij) (x) E_ij.  The map is completely positive
    iff J >= 0 and trace-preserving iff the system-output partial trace of
    J equals I/d.
    """
    s = _as_square(superop)
    d = superop_dim(s)
    j = np.zeros((d * d, d * d), dtype=complex)
    for jj in range(d):
        for ii in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[ii, jj] = 1.0
            j += np.kron(apply_raw(s, e), e)
    return j / d


def is_cptp(superop, tol: float = 1e-9) -> bool:
    """Certify complete positivity and trace preservation.

    CP: all Choi eigenvalues >= -tol.  TP: dual map fixes the identity.
    """
    if not is_trace_preserving(superop, tol):
        return False
    j = choi_matrix(superop)
    w = np.linalg.eigvalsh((j + j.conj().T) / 2.0)
    return bool(w[0] >= -tol)


def power_limit(superop, eps_conv: float = POWER_TOL,
                k_max: int = POWER_MAX_DOUBLINGS):
    """Limit of repeated map applications by repeated squaring.

    Convergence requires both the consecutive-power and the doubled-power
    differences to fall below ``eps_conv`` (squaring alone would wrongly
    accept finite-order unitaries, whose powers cycle).  Returns
    ``(limit, converged, exponent)`` where ``exponent`` is the map power at
    which convergence was certified; ``converged`` False signals that no
    limit exists within the doubling budget.
    """
    s = _as_square(superop)
    if not is_trace_preserving(s):
        warnings.warn("power_limit called on a non-trace-preserving map",
                      RuntimeWarning, stacklevel=2)
    p = s.copy()
    exponent = 1
    for _ in range(k_max):
        step = np.linalg.norm(p @ s - p)
        sq = p @ p
        jump = np.linalg.norm(sq - p)
        if step <= eps_conv and jump <= eps_conv:
            return sq, True, exponent
        p = sq
        exponent *= 2
    return p, False, exponent
