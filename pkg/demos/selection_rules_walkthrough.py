"""Predicted spectrum of the polymer Hamiltonian against exact diagonalization.

Run: python3 demos/selection_rules_walkthrough.py
"""

from tlpolymer.link_rep import rho_sector_block, sector_dimension
from tlpolymer.selection_rules import enumerate_reduced, predicted_spectrum
from tlpolymer.spectral import clustered_spectrum, verify_sector
from tlpolymer.transfer import hamiltonian_element


def show_sector(n: int, d: int) -> None:
    labels = predicted_spectrum(n, d)
    print(f"N={n}, d={d}: sector dimension {sector_dimension(n, d)}, {len(labels)} labels")
    for label, mult in labels.items():
        print(f"  K+={sorted(label.k_plus)} K-={sorted(label.k_minus)} delta={label.delta}"
              f"  value {label.value:+.6f}  x{mult}")
    block = rho_sector_block(hamiltonian_element(n), n, d)
    observed = clustered_spectrum(block).real_entries()
    print("  exact:", ", ".join(f"{v:+.6f} x{m}" for v, m in observed))
    print("  verdict:", verify_sector(n, d).status)


def main() -> None:
    print("Reduced configurations double as Dyck paths:")
    for c in enumerate_reduced(2, 3):
        print(f"  left {c.left} right {c.right}")
    print()
    for n, d in [(4, 0), (5, 1), (6, 2)]:
        show_sector(n, d)
        print()


if __name__ == "__main__":
    main()
