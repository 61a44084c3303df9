"""Jaynes-Cummings model: a qubit exchanging one excitation with a field mode.

The truncated model keeps bath levels 0..n_max.  Excitation number is
conserved, so the Hamiltonian splits into the vacuum |0,0>, one 2x2 block
per excitation sector n = 1..n_max spanned by {|0,n>, |1,n-1>}, and the
uncoupled top state |1,n_max> left over by the cutoff.  All closed forms
below describe this truncated system exactly (the top state is stationary
and enters the series as a boundary term); for a tail-negligible cutoff
they reduce to the familiar infinite-ladder expressions.

Qubit basis order: index 0 = ground, index 1 = excited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..linalg import BipartiteDims, _as_square

#: Default relative thermal weight allowed above the cutoff.
TAIL_TOL = 1e-10
#: Hard ceiling for automatically chosen cutoffs (series paths only).
N_MAX_CAP = 10**6
#: Largest cutoff for which dense matrices may be built.
N_MAX_DENSE = 64


@dataclass(frozen=True)
class JCParams:
    """Physical parameters: qubit frequency, mode frequency, coupling,
    inverse bath temperature and Fock cutoff.

    ``n_max`` is the highest thermally populated bath level; the tail-mass
    bound is enforced only by :meth:`with_auto_cutoff` so that small
    explicit cutoffs remain available for dense cross-checks.
    """

    omega0: float
    omega: float
    g: float
    beta: float
    n_max: int

    def __post_init__(self):
        if self.omega <= 0.0:
            raise ValueError("mode frequency must be positive")
        if self.beta <= 0.0:
            raise ValueError("inverse temperature must be positive")
        if self.g < 0.0:
            raise ValueError("coupling must be nonnegative")
        if self.n_max < 1:
            raise ValueError("cutoff must be at least 1")

    @property
    def delta(self) -> float:
        """Detuning between the qubit and the mode."""
        return self.omega0 - self.omega

    @property
    def boltzmann_ratio(self) -> float:
        return math.exp(-self.beta * self.omega)

    @property
    def partition(self) -> float:
        """Truncated partition function sum_{n<=n_max} exp(-beta*omega*n)."""
        q = self.boltzmann_ratio
        return (1.0 - q ** (self.n_max + 1)) / (1.0 - q)

    @property
    def tail_mass(self) -> float:
        """Thermal weight above the cutoff relative to the truncated sum."""
        q = self.boltzmann_ratio
        return q ** (self.n_max + 1) / (1.0 - q) / self.partition

    def thermal_weights(self) -> np.ndarray:
        """Normalized occupation probabilities p_n, n = 0..n_max."""
        w = np.exp(-self.beta * self.omega * np.arange(self.n_max + 1))
        return w / w.sum()

    def thermal_state(self) -> np.ndarray:
        return np.diag(self.thermal_weights()).astype(complex)

    @property
    def dims(self) -> BipartiteDims:
        return BipartiteDims(2, self.n_max + 1)

    @classmethod
    def with_auto_cutoff(cls, omega0: float, omega: float, g: float,
                         beta: float, tol_tail: float = TAIL_TOL,
                         n_cap: int = N_MAX_CAP) -> "JCParams":
        """Choose the smallest cutoff whose relative tail mass is <= tol_tail."""
        q = math.exp(-beta * omega)
        # tail/Z = q^(n+1) / (1 - q^(n+1)) <= tol  <=>  q^(n+1) <= tol/(1+tol)
        n = math.ceil(math.log(tol_tail / (1.0 + tol_tail)) / math.log(q)) - 1
        n = max(1, min(int(n), n_cap))
        return cls(omega0, omega, g, beta, n)

    @classmethod
    def from_ratios(cls, delta_over_omega: float, g_over_omega: float,
                    beta_omega: float, n_max: int | None = None,
                    tol_tail: float = TAIL_TOL) -> "JCParams":
        """Build from the dimensionless ratios used in sweeps (omega = 1)."""
        if n_max is None:
            return cls.with_auto_cutoff(1.0 + delta_over_omega, 1.0,
                                        g_over_omega, beta_omega, tol_tail)
        return cls(1.0 + delta_over_omega, 1.0, g_over_omega, beta_omega, n_max)


@dataclass(frozen=True, eq=False)
class DressedSector:
    """Analytic eigensystem of one excitation sector.

    ``vectors`` columns match ``energies`` (ascending) and are expressed in
    the ordered basis (|0,n>, |1,n-1>).
    """

    n: int
    energies: np.ndarray
    vectors: np.ndarray


def _rabi(p: JCParams, n) -> np.ndarray:
    """Generalized Rabi splitting sqrt(delta^2 + 4 g^2 n)."""
    return np.sqrt(p.delta ** 2 + 4.0 * p.g ** 2 * np.asarray(n, dtype=float))


def _mixing_angle(p: JCParams, n):
    """cos(theta) = delta/Omega, sin(theta) = 2 g sqrt(n)/Omega per sector."""
    n = np.asarray(n, dtype=float)
    omega_r = _rabi(p, n)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.where(omega_r > 0.0, p.delta / np.where(omega_r > 0, omega_r, 1.0), 1.0)
        s = np.where(omega_r > 0.0, 2.0 * p.g * np.sqrt(n) / np.where(omega_r > 0, omega_r, 1.0), 0.0)
    return omega_r, c, s


def jc_hamiltonian_dense(p: JCParams) -> np.ndarray:
    """Dense joint Hamiltonian on 2 * (n_max + 1) levels.

    Restricted to dense-tractable cutoffs; use the sector or series paths
    for large ladders.
    """
    if p.n_max > N_MAX_DENSE:
        raise ValueError(f"dense path capped at n_max = {N_MAX_DENSE}")
    d_b = p.n_max + 1
    lower = np.diag(np.sqrt(np.arange(1, d_b)), k=1)  # annihilation operator
    number = np.diag(np.arange(d_b, dtype=float))
    sigma_plus = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    excited = np.diag([0.0, 1.0])
    h = (p.omega0 * np.kron(excited, np.eye(d_b))
         + p.omega * np.kron(np.eye(2), number)
         + p.g * (np.kron(sigma_plus, lower) + np.kron(sigma_plus.conj().T, lower.conj().T)))
    return h.astype(complex)


def jc_dressed_blocks(p: JCParams) -> list[DressedSector]:
    """Per-sector 2x2 eigensystems for n = 1..n_max.

    At zero detuning the eigenvectors are the equal-weight superpositions
    (|0,n> +- |1,n-1>)/sqrt(2).  The vacuum (energy 0) and the uncoupled
    top state |1,n_max> (energy omega0 + n_max*omega) are not listed.
    """
    sectors = []
    for n in range(1, p.n_max + 1):
        omega_r, c, s = (float(x) for x in _mixing_angle(p, n))
        theta = math.atan2(s, c)
        cos_h, sin_h = math.cos(theta / 2.0), math.sin(theta / 2.0)
        mean = p.omega * n + p.delta / 2.0
        v_minus = np.array([cos_h, -sin_h], dtype=complex)
        v_plus = np.array([sin_h, cos_h], dtype=complex)
        sectors.append(DressedSector(
            n,
            np.array([mean - omega_r / 2.0, mean + omega_r / 2.0]),
            np.column_stack([v_minus, v_plus]),
        ))
    return sectors


def jc_analytic_spectrum(p: JCParams) -> np.ndarray:
    """All 2(n_max+1) eigenvalues of the truncated Hamiltonian, ascending."""
    n = np.arange(1, p.n_max + 1, dtype=float)
    omega_r = _rabi(p, n)
    mean = p.omega * n + p.delta / 2.0
    energies = np.concatenate([
        [0.0],
        mean - omega_r / 2.0,
        mean + omega_r / 2.0,
        [p.omega0 + p.n_max * p.omega],
    ])
    return np.sort(energies)


def _avg_survival(p: JCParams, n) -> np.ndarray:
    """Time average of |c_n(t)|^2: (delta^2 + 2g^2 n) / (delta^2 + 4g^2 n).

    Sectors with zero Rabi splitting (n = 0, or g = 0 at resonance) have a
    constant survival factor, so the average is 1.
    """
    n = np.asarray(n, dtype=float)
    denom = p.delta ** 2 + 4.0 * p.g ** 2 * n
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(denom > 0.0,
                       (p.delta ** 2 + 2.0 * p.g ** 2 * n) / np.where(denom > 0, denom, 1.0),
                       1.0)
    return out


def jc_alpha_beta_bar(p: JCParams):
    """Time-averaged population transfer coefficients of the truncated model.

    alpha_bar weighs ground-state survival (sectors 0..n_max); beta_bar
    weighs excited-state survival, whose n = n_max term is exactly 1
    because the cutoff leaves |1,n_max> stationary.
    """
    weights = p.thermal_weights()
    n = np.arange(p.n_max + 1)
    alpha_bar = float(weights @ _avg_survival(p, n))
    beta_terms = _avg_survival(p, n[:-1] + 1)
    beta_bar = float(weights[:-1] @ beta_terms + weights[-1])
    return alpha_bar, beta_bar


def _c_factor(p: JCParams, n, t: float) -> np.ndarray:
    """cos(Omega_n t/2) - i (delta/Omega_n) sin(Omega_n t/2), limit 1 at Omega=0."""
    n = np.asarray(n, dtype=float)
    omega_r = _rabi(p, n)
    safe = np.where(omega_r > 0.0, omega_r, 1.0)
    out = np.cos(omega_r * t / 2.0) - 1j * (p.delta / safe) * np.sin(omega_r * t / 2.0)
    return np.where(omega_r > 0.0, out, 1.0 + 0.0j)


def jc_reduced_state(rho_s, t: float, p: JCParams) -> np.ndarray:
    """Exact reduced qubit state at time t for a thermal bath.

    Evaluates the thermal series for the population transfer factors and
    the coherence factor, including the stationary-top-state boundary term,
    in the Schroedinger picture (phases match dense unitary evolution).
    """
    rho_s = _as_square(rho_s)
    weights = p.thermal_weights()
    n_all = np.arange(p.n_max + 1)
    c_all = _c_factor(p, n_all, t)            # sectors 0..n_max
    c_up = _c_factor(p, n_all[:-1] + 1, t)    # sectors 1..n_max

    alpha_t = float(weights @ np.abs(c_all) ** 2)
    beta_t = float(weights[:-1] @ np.abs(c_up) ** 2 + weights[-1])
    gamma_t = np.exp(-1j * p.omega * t) * (
        weights[:-1] @ (c_all[:-1] * c_up)
        + weights[-1] * c_all[-1] * np.exp(-1j * p.delta * t / 2.0)
    )

    p0, p1 = np.real(rho_s[0, 0]), np.real(rho_s[1, 1])
    out = np.zeros((2, 2), dtype=complex)
    out[1, 1] = p0 * (1.0 - alpha_t) + p1 * beta_t
    out[0, 0] = p0 * alpha_t + p1 * (1.0 - beta_t)
    out[1, 0] = rho_s[1, 0] * gamma_t
    out[0, 1] = np.conj(out[1, 0])
    return out


def jc_time_averaging_map(p: JCParams) -> np.ndarray:
    """Superoperator of the reduced time-averaging map.

    Populations mix through (alpha_bar, beta_bar); coherences average to
    zero.  The zero-coherence form assumes no accidental cross-sector
    energy coincidences (at exactly delta = 0, g = omega the spectrum has
    such coincidences and a coherence term survives; see the dense path).
    """
    alpha_bar, beta_bar = jc_alpha_beta_bar(p)
    s = np.zeros((4, 4), dtype=complex)
    # vec order [m00, m10, m01, m11]
    s[0, 0] = alpha_bar
    s[3, 0] = 1.0 - alpha_bar
    s[0, 3] = 1.0 - beta_bar
    s[3, 3] = beta_bar
    return s


def jc_trapping_closed_form(p: JCParams) -> float:
    """Information trapping (alpha_bar + beta_bar - 1)(1 - beta_bar).

    The maximum of the idempotence defect over states is attained at the
    excited state.  At resonance this equals (1 - exp(-beta*omega))/4 up
    to the truncation tail, independently of the coupling.
    """
    alpha_bar, beta_bar = jc_alpha_beta_bar(p)
    return (alpha_bar + beta_bar - 1.0) * (1.0 - beta_bar)


def jc_t_infinity_closed_form(p: JCParams) -> float:
    """Trapping against the repeated-application limit map.

    Zero for the idempotent g = 0 map (no unique fixed point, but the
    limit exists and equals the map itself).
    """
    alpha_bar, beta_bar = jc_alpha_beta_bar(p)
    denom = 2.0 - alpha_bar - beta_bar
    if denom <= 1e-15:
        return 0.0
    return (alpha_bar + beta_bar - 1.0) * (1.0 - beta_bar) / denom


def jc_invariant_state(p: JCParams) -> np.ndarray:
    """Unique fixed point of the strictly contractive time-averaging map."""
    alpha_bar, beta_bar = jc_alpha_beta_bar(p)
    denom = 2.0 - alpha_bar - beta_bar
    if denom <= 1e-15:
        raise ValueError("map is idempotent (g = 0): every population "
                         "configuration is invariant, no unique fixed point")
    return np.diag([(1.0 - beta_bar) / denom, (1.0 - alpha_bar) / denom]).astype(complex)


@dataclass(frozen=True, eq=False)
class JCSectorDiagnostics:
    """Time-averaged total-state diagnostics from the sector structure."""

    corr_d: float
    bath_shift_d: float
    eq_bound_rhs: float
    d_eff_bath: float
    omega_s: np.ndarray

    @property
    def bound_total(self) -> float:
        return self.corr_d + self.bath_shift_d


def jc_sector_diagnostics(p: JCParams, rho_s) -> JCSectorDiagnostics:
    """Correlation/bath-shift distances and equilibration bound, O(n_max).

    Works sector by sector in the dressed basis instead of diagonalizing
    the dense Hamiltonian, so Fock ladders of thousands of levels stay
    cheap.  Only the populations of ``rho_s`` enter: system coherences
    live across sectors and average away for a thermal (number-diagonal)
    bath.
    """
    rho_s = _as_square(rho_s)
    p0 = float(np.real(rho_s[0, 0]))
    p1 = float(np.real(rho_s[1, 1]))
    weights = p.thermal_weights()
    n_sec = np.arange(1, p.n_max + 1)
    omega_r, c, s = _mixing_angle(p, n_sec)
    cos2_h = (1.0 + c) / 2.0   # cos^2(theta/2)
    sin2_h = (1.0 - c) / 2.0

    # Sector input weights: d0 on |0,n>, d1 on |1,n-1>.
    d0 = p0 * weights[1:]
    d1 = p1 * weights[:-1]
    w_plus = d0 * sin2_h + d1 * cos2_h
    w_minus = d0 * cos2_h + d1 * sin2_h

    # Dephased sector blocks in the (|0,n>, |1,n-1>) basis.
    b00 = w_plus * sin2_h + w_minus * cos2_h
    b11 = w_plus * cos2_h + w_minus * sin2_h
    b01 = (w_plus - w_minus) * (s / 2.0)

    w_vac = p0 * weights[0]
    w_top = p1 * weights[-1]  # stationary |1,n_max>

    omega_s = np.zeros((2, 2), dtype=complex)
    omega_s[0, 0] = w_vac + b00.sum()
    omega_s[1, 1] = b11.sum() + w_top

    omega_b = np.zeros(p.n_max + 1)
    omega_b[0] += w_vac
    omega_b[1:] += b00
    omega_b[:-1] += b11
    omega_b[-1] += w_top

    d_eff = 1.0 / float(omega_b @ omega_b)
    rhs = 0.5 * math.sqrt(2.0 / d_eff)

    # Correlations: the time-averaged total state is block diagonal over
    # sectors while omega_s (x) omega_b is diagonal, so the trace norm of
    # the difference splits into 2x2 sector pieces plus two 1x1 pieces.
    s00 = float(np.real(omega_s[0, 0]))
    s11 = float(np.real(omega_s[1, 1]))
    x00 = b00 - s00 * omega_b[1:]
    x11 = b11 - s11 * omega_b[:-1]
    mean = (x00 + x11) / 2.0
    rad = np.sqrt(((x00 - x11) / 2.0) ** 2 + b01 ** 2)
    norm1 = np.abs(mean + rad) + np.abs(mean - rad)
    corr = norm1.sum()
    corr += abs(w_vac - s00 * omega_b[0])
    corr += abs(w_top - s11 * omega_b[-1])
    corr_d = 0.5 * corr

    bath_shift_d = 0.5 * float(np.abs(weights - omega_b).sum())
    return JCSectorDiagnostics(corr_d, bath_shift_d, rhs, d_eff, omega_s)
