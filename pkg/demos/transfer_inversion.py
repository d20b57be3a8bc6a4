"""Double-row transfer matrix: inversion identity, commuting family, small-u limit.

Run: python3 demos/transfer_inversion.py
"""

from math import pi

import numpy as np

from tlpolymer.link_rep import rho_matrix
from tlpolymer.transfer import double_row_matrix, hamiltonian_element, inversion_scalar


def main() -> None:
    for n in range(2, 7):
        u, v = 0.3, 0.9
        d_u, d_v = double_row_matrix(n, u), double_row_matrix(n, v)
        inverse = d_u @ double_row_matrix(n, u + pi / 2) - inversion_scalar(n, u) * np.eye(len(d_u))
        print(
            f"N={n} dim={len(d_u):3d}"
            f"  inversion {np.abs(inverse).max():.1e}"
            f"  commutator {np.abs(d_u @ d_v - d_v @ d_u).max():.1e}"
            f"  crossing {np.abs(d_u - double_row_matrix(n, pi / 2 - u)).max():.1e}"
        )
    n, eps = 5, 1e-6
    d_eps = double_row_matrix(n, eps)
    slope = (d_eps - np.eye(len(d_eps))) / (2 * eps)
    print(f"N={n} small-u slope vs Hamiltonian: {np.abs(slope - rho_matrix(hamiltonian_element(n), n)).max():.1e}")


if __name__ == "__main__":
    main()
