"""Hamiltonians whose energy eigenbasis factorizes into system x bath states.

Every system-diagonal observable is conserved, so the time-averaging map is
plain dephasing in the system basis: a projection (idempotent), but not
strictly contractive because basis projectors keep unit distance.
"""

from __future__ import annotations

import numpy as np

from ..averaging import EnergyEigensystem, _cluster_sorted, _default_scale, DEG_SCALE
from ..linalg import BipartiteDims


def product_basis_model(system_energies, joint_energies,
                        eps_deg: float | None = None):
    """Eigensystem and time-averaging superoperator of a product-basis model.

    ``joint_energies[k1, k2]`` is the energy of the product eigenvector
    |k1> (x) |k2| in the computational basis.  System energies must be
    nondegenerate (a degenerate conserved quantity would leave the reduced
    dephasing form ill-defined); returns ``(eigensystem, superop)`` where
    the superoperator zeroes system coherences and fixes populations.
    """
    system_energies = np.asarray(system_energies, dtype=float)
    joint = np.asarray(joint_energies, dtype=float)
    d_s = system_energies.size
    if joint.ndim != 2 or joint.shape[0] != d_s:
        raise ValueError(f"joint energies must be (d_s, d_b), got {joint.shape}")
    spread = max(np.ptp(system_energies), 1.0)
    gaps = np.diff(np.sort(system_energies))
    if gaps.size and np.min(gaps) <= 1e-9 * spread:
        raise ValueError("system energies must be nondegenerate")

    d_b = joint.shape[1]
    dims = BipartiteDims(d_s, d_b)
    flat = joint.reshape(-1)  # system-first joint index
    order = np.argsort(flat, kind="stable")
    energies = flat[order]
    vectors = np.eye(dims.d, dtype=complex)[:, order]
    if eps_deg is None:
        eps_deg = DEG_SCALE * _default_scale(energies)
    es = EnergyEigensystem(dims, energies, vectors,
                           _cluster_sorted(energies, eps_deg), float(eps_deg))

    keep = np.zeros(d_s * d_s)
    for i in range(d_s):
        keep[i * d_s + i] = 1.0  # vec index of the (i, i) entry
    superop = np.diag(keep).astype(complex)
    return es, superop
