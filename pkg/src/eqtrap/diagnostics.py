"""Quantitative equilibration diagnostics.

Information trapping is the idempotence defect of the time-averaging map,
max over states of D(map^2 rho, map rho).  The objective is a trace norm of
a linear image of rho, hence convex in rho, so the maximum over the convex
state space is attained at pure states; the maximizers below therefore
search pure states only (a Bloch grid with golden-section refinement for
qubits, multistart coordinate ascent above).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import averaging as av
from . import linalg as la

#: Coarse Bloch grid (polar x azimuthal points).
BLOCH_GRID = (181, 360)
#: Random restarts for the amplitude-ascent maximizer (system dim > 2).
MULTISTART = 64
#: Stop refining when the objective improves by less than this.
MAXIMIZE_TOL = 1e-10
#: State pairs closer than this are skipped by the contractivity probe.
PROBE_MIN_DISTANCE = 1e-8


@dataclass(frozen=True, eq=False)
class TrappingResult:
    """Maximized trapping value with the maximizing state.

    ``strategy`` is one of ``bloch_grid``, ``multistart`` or
    ``closed_form``; ``maximizer`` is None when the value is fixed by
    convention (nonexistent power limit).
    """

    value: float
    maximizer: np.ndarray | None
    strategy: str
    converged: bool


@dataclass(frozen=True)
class CorrelationBound:
    """Terms of the correlation upper bound on information trapping."""

    correlations: float
    bath_shift: float

    @property
    def total(self) -> float:
        return self.correlations + self.bath_shift


@dataclass(frozen=True)
class EquilibrationReport:
    """Monte-Carlo time-averaged distance next to its spectral upper bound."""

    rhs: float
    mc_average_distance: float
    n_samples: int
    t_max: float


def _hermitian_distance_batch(m00, m01, m11):
    """Trace distance piece for batches of 2x2 Hermitian differences."""
    a = np.real(m00)
    d = np.real(m11)
    mean = (a + d) / 2.0
    rad = np.sqrt(((a - d) / 2.0) ** 2 + np.abs(m01) ** 2)
    return 0.5 * (np.abs(mean + rad) + np.abs(mean - rad))


def _objective_factory(diff_superop):
    """Objective rho_pure -> trace distance of the mapped difference."""
    m = diff_superop

    def objective(psi):
        rho = np.outer(psi, psi.conj())
        out = av.unvec(m @ av.vec(rho))
        out = (out + out.conj().T) / 2.0
        return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(out))))

    return objective


def _bloch_states(theta, phi):
    """vec'd pure-state density matrices for angle grids (broadcasting)."""
    theta_b, phi_b = np.broadcast_arrays(np.asarray(theta, dtype=float),
                                         np.asarray(phi, dtype=float))
    half = theta_b / 2.0
    c = np.cos(half)
    s = np.sin(half)
    phase = np.exp(1j * phi_b)
    m00 = (c * c).astype(complex)
    m10 = c * s * phase
    return np.stack([m00, m10, np.conj(m10), 1.0 - m00], axis=-1)


def _grid_eval(diff_superop, theta, phi):
    shape = np.broadcast(np.asarray(theta), np.asarray(phi)).shape
    rows = _bloch_states(theta, phi).reshape(-1, 4)
    out = rows @ diff_superop.T
    d = _hermitian_distance_batch(out[:, 0], (out[:, 1] + out[:, 2].conj()) / 2.0,
                                  out[:, 3])
    return d.reshape(shape)


def _golden_max(f, lo, hi, iters=60):
    """Golden-section maximization on [lo, hi] (assumes local unimodality)."""
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _maximize_qubit(diff_superop, coarse, tol):
    n_theta, n_phi = coarse
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    values = _grid_eval(diff_superop, theta[:, None], phi[None, :])
    it, ip = np.unravel_index(np.argmax(values), values.shape)
    best_theta, best_phi = theta[it], phi[ip]
    best = float(values[it, ip])
    d_theta = np.pi / (n_theta - 1)
    d_phi = 2.0 * np.pi / n_phi

    def f_theta(x):
        return float(_grid_eval(diff_superop, np.array(x), np.array(best_phi)))

    def f_phi(x):
        return float(_grid_eval(diff_superop, np.array(best_theta), np.array(x)))

    converged = False
    for _ in range(50):
        t_lo = max(0.0, best_theta - d_theta)
        t_hi = min(np.pi, best_theta + d_theta)
        best_theta, v1 = _golden_max(f_theta, t_lo, t_hi)
        best_phi, v2 = _golden_max(f_phi, best_phi - d_phi, best_phi + d_phi)
        best_phi = best_phi % (2.0 * np.pi)
        gain = max(v1, v2) - best
        best = max(best, v1, v2)
        if gain < tol:
            converged = True
            break
    psi = np.array([np.cos(best_theta / 2.0),
                    np.exp(1j * best_phi) * np.sin(best_theta / 2.0)])
    return best, psi, converged


def _maximize_multistart(diff_superop, d, n_starts, tol, seed):
    objective = _objective_factory(diff_superop)
    rng = np.random.default_rng(seed)
    best_val = -1.0
    best_psi = None
    any_converged = False
    for _ in range(n_starts):
        psi = la.random_pure_state(d, rng)
        val = objective(psi)
        converged = False
        for _ in range(40):
            start = val
            for coord in range(2 * d):
                idx, imag = divmod(coord, 2)

                def f(x):
                    v = psi.copy()
                    c = v[idx]
                    v[idx] = complex(c.real, x) if imag else complex(x, c.imag)
                    n = np.linalg.norm(v)
                    if n < 1e-12:
                        return -np.inf
                    return objective(v / n)

                cur = psi[idx].imag if imag else psi[idx].real
                x, fx = _golden_max(f, cur - 1.0, cur + 1.0, iters=40)
                if fx > val:
                    val = fx
                    c = psi[idx]
                    psi[idx] = complex(c.real, x) if imag else complex(x, c.imag)
                    psi = psi / np.linalg.norm(psi)
            if val - start < tol:
                converged = True
                break
        if val > best_val:
            best_val, best_psi, any_converged = val, psi, converged
    return float(best_val), best_psi, any_converged


def _maximize_over_pure(diff_superop, *, strategy="auto", coarse=BLOCH_GRID,
                        n_starts=MULTISTART, tol=MAXIMIZE_TOL, seed=0):
    d = av.superop_dim(diff_superop)
    if strategy == "auto":
        strategy = "bloch_grid" if d == 2 else "multistart"
    if strategy == "bloch_grid":
        if d != 2:
            raise ValueError("bloch_grid strategy requires a qubit map")
        value, psi, converged = _maximize_qubit(diff_superop, coarse, tol)
    elif strategy == "multistart":
        value, psi, converged = _maximize_multistart(diff_superop, d, n_starts,
                                                     tol, seed)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return value, psi, converged, strategy


def trapping_measure(superop, *, strategy="auto", coarse=BLOCH_GRID,
                     n_starts=MULTISTART, tol=MAXIMIZE_TOL,
                     seed=0) -> TrappingResult:
    """Maximal trace distance between the twice- and once-averaged state.

    Zero exactly when the map is idempotent.  Raises on maps that do not
    preserve the trace.
    """
    s = np.asarray(superop, dtype=complex)
    if not av.is_trace_preserving(s):
        raise ValueError("trapping measure requires a trace-preserving map")
    diff = s @ s - s
    value, psi, converged, used = _maximize_over_pure(
        diff, strategy=strategy, coarse=coarse, n_starts=n_starts, tol=tol,
        seed=seed)
    return TrappingResult(value, la.density_from_pure(psi), used, converged)


def trapping_measure_infinity(superop, *, eps_conv=av.POWER_TOL,
                              k_max=av.POWER_MAX_DOUBLINGS, strategy="auto",
                              coarse=BLOCH_GRID, n_starts=MULTISTART,
                              tol=MAXIMIZE_TOL, seed=0) -> TrappingResult:
    """Maximal distance between the repeated-application limit and one
    application; 1 by convention when the limit does not exist."""
    s = np.asarray(superop, dtype=complex)
    if not av.is_trace_preserving(s):
        raise ValueError("trapping measure requires a trace-preserving map")
    limit, converged, _ = av.power_limit(s, eps_conv, k_max)
    if not converged:
        return TrappingResult(1.0, None, "power_limit", False)
    diff = limit - s
    value, psi, conv, used = _maximize_over_pure(
        diff, strategy=strategy, coarse=coarse, n_starts=n_starts, tol=tol,
        seed=seed)
    return TrappingResult(value, la.density_from_pure(psi), used, conv)


def correlation_bound(rho_s, rho_b, es: av.EnergyEigensystem) -> CorrelationBound:
    """Correlations in the time-averaged total state plus the bath shift.

    Their sum upper-bounds the trapping distance for this initial state:
    resetting the averaged total state to a product with the original bath
    reproduces the twice-averaged reduced state.
    """
    rho_s = np.asarray(rho_s, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    if rho_s.shape[0] != es.dims.d_s or rho_b.shape[0] != es.dims.d_b:
        raise ValueError("state dimensions do not match the eigensystem")
    omega_sb = av.total_average(la.tensor_product(rho_s, rho_b), es)
    omega_s = la.partial_trace_bath(omega_sb, es.dims)
    omega_b = la.partial_trace_system(omega_sb, es.dims)
    correlations = la.trace_distance(omega_sb, la.tensor_product(omega_s, omega_b))
    bath_shift = la.trace_distance(rho_b, omega_b)
    return CorrelationBound(correlations, bath_shift)


def equilibration_bound(omega_b, d_s: int) -> float:
    """Spectral bound sqrt(d_s / d_eff(omega_b)) / 2 on the average distance
    between the evolving reduced state and its time average."""
    return 0.5 * float(np.sqrt(d_s / la.effective_dimension(omega_b)))


def average_distance_mc(rho_s, rho_b, es: av.EnergyEigensystem, *,
                        t_max: float | None = None, n_samples: int = 2000,
                        seed: int = 0) -> EquilibrationReport:
    """Monte-Carlo estimate of the time-averaged reduced-state distance.

    Samples times uniformly in [0, t_max] (default: 200 periods of the
    smallest level spacing), evolves the product state, and averages the
    distance between the reduced state and its infinite-time average.
    Warns when the spectrum has degenerate gaps, which voids the bound's
    hypothesis.
    """
    rho_s = np.asarray(rho_s, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    dims = es.dims
    if rho_s.shape[0] != dims.d_s or rho_b.shape[0] != dims.d_b:
        raise ValueError("state dimensions do not match the eigensystem")
    report = av.check_nondegenerate_gaps(es)
    if not report.nondegenerate_gaps:
        warnings.warn("spectrum has degenerate gaps, the equilibration bound "
                      "hypothesis fails", RuntimeWarning, stacklevel=2)
    if t_max is None:
        gap = es.min_gap()
        t_max = 200.0 * 2.0 * np.pi / gap if gap > 0.0 else 1.0

    joint = la.tensor_product(rho_s, rho_b)
    omega_sb = av.total_average(joint, es)
    omega_s = la.partial_trace_bath(omega_sb, dims)
    omega_b = la.partial_trace_system(omega_sb, dims)
    rhs = equilibration_bound(omega_b, dims.d_s)

    rng = np.random.default_rng(seed)
    ts = rng.uniform(0.0, t_max, size=n_samples)
    v = es.vectors
    joint_e = v.conj().T @ joint @ v
    phases = np.exp(-1j * np.outer(ts, es.energies))
    batch = phases[:, :, None] * joint_e[None, :, :] * phases.conj()[:, None, :]
    back = np.einsum("ab,tbc,dc->tad", v, batch, v.conj(), optimize=True)
    reduced = np.einsum("timjm->tij", back.reshape(
        n_samples, dims.d_s, dims.d_b, dims.d_s, dims.d_b))
    diff = reduced - omega_s[None, :, :]
    if dims.d_s == 2:
        dist = _hermitian_distance_batch(diff[:, 0, 0], diff[:, 0, 1], diff[:, 1, 1])
    else:
        dist = np.array([la.trace_distance(reduced[k], omega_s)
                         for k in range(n_samples)])
    return EquilibrationReport(rhs, float(np.mean(dist)), n_samples, float(t_max))


def strict_contractivity_probe(superop, n_pairs: int = 200, seed: int = 0):
    """Largest sampled ratio D(map rho1, map rho2) / D(rho1, rho2).

    Probes all computational-basis projector pairs plus random pure pairs;
    pairs closer than PROBE_MIN_DISTANCE are skipped.  Returns
    ``(max_ratio, (rho1, rho2))`` with the witnessing pair.
    """
    s = np.asarray(superop, dtype=complex)
    d = av.superop_dim(s)
    rng = np.random.default_rng(seed)
    pairs = []
    for i in range(d):
        for j in range(i + 1, d):
            pairs.append((la.density_from_pure(la.ket(d, i)),
                          la.density_from_pure(la.ket(d, j))))
    for _ in range(n_pairs):
        pairs.append((la.density_from_pure(la.random_pure_state(d, rng)),
                      la.density_from_pure(la.random_pure_state(d, rng))))
    max_ratio = 0.0
    witness = None
    for rho1, rho2 in pairs:
        dist = la.trace_distance(rho1, rho2)
        if dist < PROBE_MIN_DISTANCE:
            continue
        mapped = la.trace_distance(av.apply_raw(s, rho1), av.apply_raw(s, rho2))
        ratio = mapped / dist
        if ratio > max_ratio:
            max_ratio, witness = ratio, (rho1, rho2)
    return max_ratio, witness
