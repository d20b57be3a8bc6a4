"""From link states to XX spin states: intertwining, kernels and Jordan cells.

Run: python3 demos/spin_chain_bridge.py
"""

import numpy as np

from tlpolymer.bridge import completion_rank, injectivity_matrix, intertwine_residual, kernel_residuals
from tlpolymer.spectral import fock_sector_mismatch, generalized_eigenvector_count


def main() -> None:
    np.set_printoptions(precision=3, suppress=True)
    print("Overlap matrix for N=5, d=1 at q=i (lower triangular):")
    print(injectivity_matrix(5, 1, 1j))
    for n, d in [(6, 0), (6, 2), (7, 1)]:
        s1, s2 = kernel_residuals(n, d, 1j)
        rank, total = completion_rank(n, d)
        print(
            f"N={n} d={d}: intertwining {intertwine_residual(n, d, 1j):.1e},"
            f" S+ {s1:.1e}, S+(2) {s2:.1e}, completed rank {rank}/{total}"
        )
    for n in range(2, 9):
        worst = max(fock_sector_mismatch(n, k)[0] for k in range(n + 1))
        extra = generalized_eigenvector_count(n)
        print(f"N={n}: Fock spectra deviate by {worst:.1e}, generalized eigenvectors {extra}")


if __name__ == "__main__":
    main()
