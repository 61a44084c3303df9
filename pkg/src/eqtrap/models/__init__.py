"""Built-in model systems with closed-form time-averaging maps."""

from .jaynes_cummings import (
    JCParams,
    JCSectorDiagnostics,
    DressedSector,
    jc_alpha_beta_bar,
    jc_analytic_spectrum,
    jc_dressed_blocks,
    jc_hamiltonian_dense,
    jc_invariant_state,
    jc_reduced_state,
    jc_sector_diagnostics,
    jc_t_infinity_closed_form,
    jc_time_averaging_map,
    jc_trapping_closed_form,
)
from .product_basis import product_basis_model
from .two_band import (
    TwoBandParams,
    TwoBandRates,
    two_band_average_map,
    two_band_propagator,
    two_band_rates,
    two_band_t_infinity_closed_form,
    two_band_trapping_closed_form,
)

__all__ = [
    "JCParams",
    "JCSectorDiagnostics",
    "DressedSector",
    "jc_alpha_beta_bar",
    "jc_analytic_spectrum",
    "jc_dressed_blocks",
    "jc_hamiltonian_dense",
    "jc_invariant_state",
    "jc_reduced_state",
    "jc_sector_diagnostics",
    "jc_t_infinity_closed_form",
    "jc_time_averaging_map",
    "jc_trapping_closed_form",
    "product_basis_model",
    "TwoBandParams",
    "TwoBandRates",
    "two_band_average_map",
    "two_band_propagator",
    "two_band_rates",
    "two_band_t_infinity_closed_form",
    "two_band_trapping_closed_form",
]
