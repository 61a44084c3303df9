"""Dense complex-matrix primitives for finite-dimensional quantum states.

Operators are plain numpy arrays.  Composite systems follow the system-first
Kronecker convention: the joint basis index is ``i = i_system * d_bath +
i_bath``.  Density matrices are Hermitian, unit-trace and positive
semidefinite within the module tolerances below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Relative Hermiticity tolerance for operator validation.
HERM_TOL = 1e-10
#: Absolute unit-trace tolerance for density matrices.
TRACE_TOL = 1e-10
#: Eigenvalues in [-PSD_TOL, 0) count as numerical noise and are clamped to 0.
PSD_TOL = 1e-9
#: Relative tolerance for spectral decompositions.
EIG_TOL = 1e-10


@dataclass(frozen=True)
class BipartiteDims:
    """System/bath factorisation of a joint Hilbert space."""

    d_s: int
    d_b: int

    def __post_init__(self):
        if self.d_s < 2:
            raise ValueError(f"system dimension must be >= 2, got {self.d_s}")
        if self.d_b < 1:
            raise ValueError(f"bath dimension must be >= 1, got {self.d_b}")

    @property
    def d(self) -> int:
        return self.d_s * self.d_b


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the system factor first."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace_bath(m, dims: BipartiteDims) -> np.ndarray:
    """Trace out the bath: (tr_B M)_ij = sum_m M_(i,m),(j,m)."""
    m = _as_square(m)
    if m.shape[0] != dims.d:
        raise ValueError(f"matrix dim {m.shape[0]} != d_s*d_b = {dims.d}")
    r = m.reshape(dims.d_s, dims.d_b, dims.d_s, dims.d_b)
    return np.einsum("imjm->ij", r)


def partial_trace_system(m, dims: BipartiteDims) -> np.ndarray:
    """Trace out the system factor, leaving a bath operator."""
    m = _as_square(m)
    if m.shape[0] != dims.d:
        raise ValueError(f"matrix dim {m.shape[0]} != d_s*d_b = {dims.d}")
    r = m.reshape(dims.d_s, dims.d_b, dims.d_s, dims.d_b)
    return np.einsum("imin->mn", r)


def hermiticity_defect(m) -> float:
    """Hilbert-Schmidt norm of the anti-Hermitian part, relative to ||m||."""
    m = _as_square(m)
    norm = np.linalg.norm(m)
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(m - m.conj().T) / norm)


def hermitian_eigensystem(h, *, herm_tol: float = HERM_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvector columns of H.

    Raises ValueError if H is not Hermitian to ``herm_tol`` (relative).
    """
    h = _as_square(h)
    if hermiticity_defect(h) > herm_tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((h + h.conj().T) / 2.0)
    return w, v


def trace_norm(m) -> float:
    """Trace norm ||M||_1; for Hermitian M this is the sum of |eigenvalues|."""
    m = _as_square(m)
    if hermiticity_defect(m) <= 1e-8:
        w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
        return float(np.sum(np.abs(w)))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def trace_distance(rho1, rho2) -> float:
    """Trace distance D(rho1, rho2) = ||rho1 - rho2||_1 / 2, in [0, 1]."""
    rho1 = _as_square(rho1)
    rho2 = _as_square(rho2)
    if rho1.shape != rho2.shape:
        raise ValueError(f"dimension mismatch: {rho1.shape} vs {rho2.shape}")
    return 0.5 * trace_norm(rho1 - rho2)


def purity(rho) -> float:
    """tr(rho^2)."""
    rho = _as_square(rho)
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def effective_dimension(rho) -> float:
    """Inverse purity: number of levels the state effectively occupies."""
    return 1.0 / purity(rho)


def hilbert_schmidt_norm(m) -> float:
    """sqrt(tr(M^dag M)), i.e. the Frobenius norm."""
    return float(np.linalg.norm(np.asarray(m)))


def ket(dim: int, index: int) -> np.ndarray:
    """Computational basis vector |index> in dimension ``dim``."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def density_from_pure(psi) -> np.ndarray:
    """|psi><psi| for a normalized amplitude vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def project_to_density(mat, *, herm_tol: float = HERM_TOL,
                       trace_tol: float = TRACE_TOL,
                       psd_tol: float = PSD_TOL):
    """Validate ``mat`` as a density matrix, clamping eigenvalue noise.

    Eigenvalues in [-psd_tol, 0) are set to 0 and the state renormalized;
    anything below -psd_tol is an error.  Returns ``(rho, clamped)`` where
    ``clamped`` flags whether any eigenvalue was adjusted.
    """
    m = _as_square(mat)
    if hermiticity_defect(m) > herm_tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    h = (m + m.conj().T) / 2.0
    tr = float(np.real(np.trace(h)))
    if abs(tr - 1.0) > max(trace_tol, 10 * np.finfo(float).eps):
        raise ValueError(f"trace {tr} differs from 1 beyond tolerance")
    h = h / tr
    w = np.linalg.eigvalsh(h)
    if w[0] < -psd_tol:
        raise ValueError(f"matrix is not positive semidefinite: min eig {w[0]}")
    if w[0] >= 0.0:
        return h, False
    w, v = np.linalg.eigh(h)
    w = np.maximum(w, 0.0)
    rho = (v * w) @ v.conj().T
    rho = rho / np.real(np.trace(rho))
    return (rho + rho.conj().T) / 2.0, True


def to_density_matrix(mat, **tolerances) -> np.ndarray:
    """``project_to_density`` without the clamp flag."""
    rho, _ = project_to_density(mat, **tolerances)
    return rho


# -- random sampling helpers (deterministic given an explicit Generator) -----

def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator,
                          rank: int | None = None) -> np.ndarray:
    """Full-rank (or given-rank) random mixed state from a Ginibre factor."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.real(np.trace(rho))


def random_hermitian(dim: int, rng: np.random.Generator,
                     scale: float = 1.0) -> np.ndarray:
    """GUE-like random Hermitian matrix."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2.0


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary from the QR decomposition of a Ginibre matrix."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
