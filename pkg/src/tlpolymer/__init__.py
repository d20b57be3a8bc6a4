"""Temperley-Lieb algebra at zero loop weight, critical dense polymers and the XX chain."""

from .link_rep import LinkState, enumerate_link_states, rho_matrix, rho_sector_block, sector_dimension
from .selection_rules import EigLabel, TwoColumnConfig, predicted_spectrum
from .spectral import clustered_spectrum, jordan_cells, run_suite, verify_sector
from .tl_algebra import Connectivity, TLElement, compose, enumerate_connectivities
from .transfer import double_row_matrix, hamiltonian_element, inversion_scalar

__all__ = [
    "Connectivity",
    "EigLabel",
    "LinkState",
    "TLElement",
    "TwoColumnConfig",
    "clustered_spectrum",
    "compose",
    "double_row_matrix",
    "enumerate_connectivities",
    "enumerate_link_states",
    "hamiltonian_element",
    "inversion_scalar",
    "jordan_cells",
    "predicted_spectrum",
    "rho_matrix",
    "rho_sector_block",
    "run_suite",
    "sector_dimension",
    "verify_sector",
]
