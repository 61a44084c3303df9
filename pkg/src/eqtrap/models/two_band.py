"""Qubit coupled to two quasi-continuum energy bands: exact effective dynamics.

The excited population relaxes towards a weight fixed by its initial value
while the coherence decays and rotates; the band populations enter only
through the rates gamma_i = 2 pi lambda^2 N_i / band_width.  The dynamics
is implemented directly from its equations of motion

    d/dt p1(t) = -gamma * p1(t) + gamma1 * p1(0)
    d/dt rho_10(t) = -(i * band_gap + gamma2 / 2) * rho_10(t)

whose solution is p1(t) = p1(0) (gamma1 + gamma2 e^{-gamma t}) / gamma.
Qubit basis order: index 0 = ground, index 1 = excited.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TwoBandParams:
    """Band level counts, coupling scale, band width and band gap."""

    n1: int
    n2: int
    coupling: float = 0.01
    band_width: float = 1.0
    band_gap: float = 1.0

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("band level counts must be >= 1")
        if self.coupling <= 0.0 or self.band_width <= 0.0:
            raise ValueError("coupling and band width must be positive")

    @property
    def gamma1(self) -> float:
        return 2.0 * np.pi * self.coupling ** 2 * self.n1 / self.band_width

    @property
    def gamma2(self) -> float:
        return 2.0 * np.pi * self.coupling ** 2 * self.n2 / self.band_width

    @property
    def gamma(self) -> float:
        return self.gamma1 + self.gamma2


@dataclass(frozen=True, eq=False)
class TwoBandRates:
    """Time-local generator coefficients: relaxation and dephasing rates."""

    relaxation: np.ndarray
    dephasing: np.ndarray


def _superop(pop_factor: float, coh_factor: complex) -> np.ndarray:
    s = np.zeros((4, 4), dtype=complex)
    # vec order [m00, m10, m01, m11]
    s[0, 0] = 1.0
    s[0, 3] = 1.0 - pop_factor
    s[3, 3] = pop_factor
    s[1, 1] = coh_factor
    s[2, 2] = np.conj(coh_factor)
    return s


def two_band_propagator(t: float, p: TwoBandParams) -> np.ndarray:
    """Superoperator of the exact dynamical map at time t."""
    pop = (p.gamma1 + p.gamma2 * np.exp(-p.gamma * t)) / p.gamma
    coh = np.exp(-(p.gamma2 / 2.0 + 1j * p.band_gap) * t)
    return _superop(float(pop), complex(coh))


def two_band_average_map(p: TwoBandParams) -> np.ndarray:
    """Infinite-time average of the propagator family.

    The excited population keeps the fraction gamma1/gamma, coherences
    average to zero; for n2/n1 -> 0 this tends to the identity map.
    """
    return _superop(p.gamma1 / p.gamma, 0.0)


def two_band_rates(t, p: TwoBandParams) -> TwoBandRates:
    """Time-local master-equation rates (both nonnegative for t >= 0).

    relaxation(0) = gamma2 and decays to 0; dephasing grows from 0 to
    gamma2/4.  Written with decaying exponentials only, so large gamma*t
    does not overflow.
    """
    t = np.asarray(t, dtype=float)
    decay = np.exp(-p.gamma * t)
    relaxation = p.gamma2 * p.gamma * decay / (p.gamma1 + p.gamma2 * decay)
    dephasing = (p.gamma1 * p.gamma2 / 4.0) * (1.0 - decay) / (p.gamma2 * decay + p.gamma1)
    return TwoBandRates(relaxation, dephasing)


def two_band_trapping_closed_form(p: TwoBandParams) -> float:
    """Idempotence defect N1*N2/(N1+N2)^2, maximized by the excited state."""
    return p.n1 * p.n2 / float(p.n1 + p.n2) ** 2


def two_band_t_infinity_closed_form(p: TwoBandParams) -> float:
    """Trapping against the limit map (the constant map onto the ground
    state): N1/(N1+N2)."""
    return p.n1 / float(p.n1 + p.n2)
