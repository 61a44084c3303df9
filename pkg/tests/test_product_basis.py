import numpy as np
import pytest

from eqtrap import averaging as av
from eqtrap import diagnostics as dg
from eqtrap import linalg as la
from eqtrap.models import product_basis_model


def generic_model(d_s=3, d_b=4, seed=50):
    rng = np.random.default_rng(seed)
    system = np.sort(rng.uniform(0.0, 1.0, d_s)) * np.arange(1, d_s + 1)
    joint = rng.uniform(0.0, 10.0, (d_s, d_b))
    return product_basis_model(system, joint), rng


def test_rejects_degenerate_system_energies():
    with pytest.raises(ValueError):
        product_basis_model([0.0, 0.0, 1.0], np.arange(9.0).reshape(3, 3))


def test_superop_is_projection():
    (es, superop), _ = generic_model()
    np.testing.assert_array_equal(superop @ superop, superop)
    assert av.is_cptp(superop)


def test_matches_generic_pipeline():
    (es, superop), rng = generic_model()
    rho_b = la.random_density_matrix(es.dims.d_b, rng)
    generic = av.reduced_average_map(rho_b, es)
    np.testing.assert_allclose(generic, superop, atol=1e-10)


def test_basis_projectors_fixed_with_unit_distance():
    (es, superop), _ = generic_model()
    d_s = es.dims.d_s
    for i in range(d_s):
        rho = la.density_from_pure(la.ket(d_s, i))
        np.testing.assert_allclose(av.apply(superop, rho), rho, atol=1e-12)
    mapped0 = av.apply(superop, la.density_from_pure(la.ket(d_s, 0)))
    mapped1 = av.apply(superop, la.density_from_pure(la.ket(d_s, 1)))
    assert la.trace_distance(mapped0, mapped1) == pytest.approx(1.0, abs=1e-12)


def test_probe_reports_unit_ratio_with_basis_witness():
    (es, superop), _ = generic_model()
    ratio, witness = dg.strict_contractivity_probe(superop, n_pairs=50, seed=3)
    assert ratio == pytest.approx(1.0, abs=1e-12)
    rho1, rho2 = witness
    # the witness is a pair of computational-basis projectors
    for rho in (rho1, rho2):
        diag = np.diag(rho).real
        assert np.max(diag) == pytest.approx(1.0, abs=1e-12)
        assert la.hilbert_schmidt_norm(rho - np.diag(diag)) <= 1e-12


def test_no_trapping_despite_bath_shift():
    # Off-diagonal bath states change under averaging while the reduced
    # map stays a projection: the bound terms can be large with zero
    # trapping.
    rng = np.random.default_rng(51)
    system = np.array([0.0, 1.0])
    joint = np.array([[0.0, 2.3, 4.1], [1.0, 3.7, 6.9]])
    (es, superop) = product_basis_model(system, joint)
    t_res = dg.trapping_measure(superop)
    assert t_res.value <= 1e-10
    ti_res = dg.trapping_measure_infinity(superop)
    assert ti_res.value <= 1e-10

    rho_b = la.random_density_matrix(3, rng)  # generic: has coherences
    rho_s = la.random_density_matrix(2, rng)
    bound = dg.correlation_bound(rho_s, rho_b, es)
    # total averaged state is a product, so correlations vanish
    assert bound.correlations <= 1e-10
    off = rho_b - np.diag(np.diag(rho_b))
    assert bound.bath_shift == pytest.approx(0.5 * la.trace_norm(off), abs=1e-10)
    assert bound.bath_shift > 0.01


def test_second_application_is_identity_on_image():
    (es, superop), rng = generic_model(d_s=2, d_b=5, seed=52)
    rho = la.random_density_matrix(2, rng)
    once = av.apply(superop, rho)
    np.testing.assert_allclose(av.apply(superop, once), once, atol=1e-12)
