"""Self-contained cross-check suite behind the ``validate`` subcommand.

Each check re-derives a closed-form or structural fact through an
independent route and compares; the suite passes only if every check does.
"""

from __future__ import annotations

import numpy as np

from . import averaging as av
from . import diagnostics as dg
from . import linalg as la
from . import sweeps
from .models import (
    JCParams,
    TwoBandParams,
    jc_hamiltonian_dense,
    jc_sector_diagnostics,
    jc_t_infinity_closed_form,
    jc_time_averaging_map,
    jc_trapping_closed_form,
    product_basis_model,
    two_band_average_map,
    two_band_rates,
    two_band_t_infinity_closed_form,
    two_band_trapping_closed_form,
)

EXCITED = np.diag([0.0, 1.0]).astype(complex)


def _check_linalg_roundtrip():
    rng = np.random.default_rng(100)
    dims = la.BipartiteDims(3, 5)
    rho_s = la.random_density_matrix(3, rng)
    rho_b = la.random_density_matrix(5, rng)
    joint = la.tensor_product(rho_s, rho_b)
    err = max(
        la.hilbert_schmidt_norm(la.partial_trace_bath(joint, dims) - rho_s),
        la.hilbert_schmidt_norm(la.partial_trace_system(joint, dims) - rho_b))
    return err <= 1e-12, f"round-trip error {err:.2e}"


def _check_trace_distance_metric():
    rng = np.random.default_rng(101)
    for _ in range(10):
        r1, r2, r3 = (la.random_density_matrix(4, rng) for _ in range(3))
        d12 = la.trace_distance(r1, r2)
        if abs(d12 - la.trace_distance(r2, r1)) > 1e-12:
            return False, "symmetry violated"
        if d12 > la.trace_distance(r1, r3) + la.trace_distance(r3, r2) + 1e-12:
            return False, "triangle inequality violated"
    return True, "symmetry and triangle inequality hold"


def _check_total_average_idempotent():
    rng = np.random.default_rng(102)
    dims = la.BipartiteDims(2, 12)
    h = la.random_hermitian(dims.d, rng)
    es = av.build_eigensystem(h, dims)
    rho = la.tensor_product(la.random_density_matrix(2, rng),
                            la.random_density_matrix(12, rng))
    once = av.total_average(rho, es)
    err = la.hilbert_schmidt_norm(av.total_average(once, es) - once)
    return err <= 1e-10, f"idempotence defect {err:.2e}"


def _check_jc_oracle_equivalence():
    worst = 0.0
    for delta in (0.0, 0.5, 5.0):
        p = JCParams.from_ratios(delta, 0.7, 1.0, n_max=8)
        es = av.build_eigensystem(jc_hamiltonian_dense(p), p.dims)
        dense = av.reduced_average_map(p.thermal_state(), es)
        closed = jc_time_averaging_map(p)
        worst = max(worst, float(np.max(np.abs(dense - closed))))
        worst = max(worst, abs(dg.trapping_measure(dense).value
                               - jc_trapping_closed_form(p)))
        worst = max(worst, abs(dg.trapping_measure_infinity(dense).value
                               - jc_t_infinity_closed_form(p)))
    return worst <= 1e-8, f"worst deviation {worst:.2e}"


def _check_jc_resonance_value():
    worst = 0.0
    for beta_omega in (0.003, 0.01, 1.0):
        expected = 0.25 * (1.0 - np.exp(-beta_omega))
        for g in (0.5, 1.0, 2.0):
            p = JCParams.with_auto_cutoff(1.0, 1.0, g, beta_omega)
            worst = max(worst, abs(jc_trapping_closed_form(p) - expected))
    return worst <= 1e-10, f"worst deviation {worst:.2e}"


def _check_equilibration_marks():
    marks = {0.003: 0.027, 0.005: 0.035, 0.01: 0.050}
    worst = 0.0
    for beta_omega, mark in marks.items():
        p = JCParams.from_ratios(0.0, 1.0, beta_omega)
        worst = max(worst, abs(jc_sector_diagnostics(p, EXCITED).eq_bound_rhs - mark))
    return worst <= 0.002, f"worst mark deviation {worst:.4f}"


def _check_bound_chain():
    for delta in np.linspace(0.0, 10.0, 11):
        p = JCParams.from_ratios(delta, 1.0, 0.01)
        sd = jc_sector_diagnostics(p, EXCITED)
        if jc_trapping_closed_form(p) > sd.bound_total + 1e-9:
            return False, f"bound violated at delta/omega = {delta}"
    return True, "trapping below correlation bound on the sweep"


def _check_two_band():
    for n1, n2 in ((1, 1), (100, 100), (50, 300)):
        p = TwoBandParams(n1, n2)
        t_num = dg.trapping_measure(two_band_average_map(p)).value
        if abs(t_num - two_band_trapping_closed_form(p)) > 1e-12:
            return False, f"trapping mismatch at ({n1}, {n2})"
        ti_num = dg.trapping_measure_infinity(two_band_average_map(p)).value
        if abs(ti_num - two_band_t_infinity_closed_form(p)) > 1e-12:
            return False, f"limit trapping mismatch at ({n1}, {n2})"
    p = TwoBandParams(7, 3)
    rates = two_band_rates(np.logspace(-5, 5, 101) / p.gamma, p)
    ok = bool(np.all(rates.relaxation >= 0) and np.all(rates.dephasing >= 0))
    return ok, "closed forms and rate positivity"


def _check_product_basis():
    rng = np.random.default_rng(103)
    es, superop = product_basis_model([0.0, 1.0, 2.3],
                                      rng.uniform(0, 10, (3, 4)))
    if not np.array_equal(superop @ superop, superop):
        return False, "projection property lost"
    ratio, _ = dg.strict_contractivity_probe(superop, n_pairs=50, seed=11)
    return abs(ratio - 1.0) <= 1e-12, f"probe ratio {ratio:.12f}"


def _check_cptp_certificates():
    p = JCParams.from_ratios(0.5, 1.0, 1.0, n_max=20)
    maps = [jc_time_averaging_map(p),
            two_band_average_map(TwoBandParams(5, 9)),
            av.constant_superop(np.diag([0.25, 0.75]))]
    es, superop = product_basis_model([0.0, 1.0], np.array([[0.0, 2.1], [1.0, 3.3]]))
    maps.append(superop)
    for s in maps:
        if not av.is_cptp(s):
            return False, "a model map failed the certificate"
    return True, "all model maps certified CPTP"


def _check_mc_bound_quick():
    rows = sweeps.random_bound_rows(2, 20, trials=3, seed=5, n_samples=400)
    ok = all(row["satisfied"] for row in rows)
    return ok, f"{sum(r['satisfied'] for r in rows)}/3 trials within the bound"


def _check_determinism():
    grid = np.linspace(0.0, 4.0, 9)
    a = sweeps.rows_to_csv(sweeps.FIGURE1_FIELDS,
                           sweeps.figure1_rows(1.0, [0.01], grid, None, 1e-10))
    b = sweeps.rows_to_csv(sweeps.FIGURE1_FIELDS,
                           sweeps.figure1_rows(1.0, [0.01], grid, None, 1e-10))
    return a == b, "repeated sweep emission is byte-identical"


CHECKS = [
    ("linalg-roundtrip", _check_linalg_roundtrip),
    ("trace-distance-metric", _check_trace_distance_metric),
    ("total-average-idempotent", _check_total_average_idempotent),
    ("jc-oracle-equivalence", _check_jc_oracle_equivalence),
    ("jc-resonance-value", _check_jc_resonance_value),
    ("equilibration-marks", _check_equilibration_marks),
    ("correlation-bound-chain", _check_bound_chain),
    ("two-band-closed-forms", _check_two_band),
    ("product-basis-projection", _check_product_basis),
    ("cptp-certificates", _check_cptp_certificates),
    ("mc-bound-quick", _check_mc_bound_quick),
    ("deterministic-output", _check_determinism),
]


def run_all(out=print):
    """Run every check; returns the list of failing check names."""
    failures = []
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        out(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failures.append(name)
    return failures
