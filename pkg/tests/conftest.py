import numpy as np

from eqtrap import averaging as av


def random_cptp_superop(d, rng, n_kraus=4):
    """Random CPTP map from normalized Ginibre Kraus operators."""
    ops = [rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
           for _ in range(n_kraus)]
    gram = sum(k.conj().T @ k for k in ops)
    w, v = np.linalg.eigh(gram)
    inv_sqrt = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    kraus = [k @ inv_sqrt for k in ops]
    s = np.zeros((d * d, d * d), dtype=complex)
    for k in kraus:
        s += np.kron(k.conj(), k)
    return s


def unitary_conjugation_superop(u):
    """Superoperator of rho -> U rho U^dag."""
    return np.kron(np.asarray(u).conj(), np.asarray(u))


def assert_superop_close(a, b, tol=1e-12):
    assert np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol


def cesaro_average(joint, es, t_grid, dims):
    """Uniform-time average of the reduced evolved state."""
    from eqtrap import linalg as la

    acc = np.zeros((dims.d_s, dims.d_s), dtype=complex)
    for t in t_grid:
        acc += la.partial_trace_bath(av.unitary_evolve(joint, es, t), dims)
    return acc / len(t_grid)
