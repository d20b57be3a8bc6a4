"""The open XXZ chain with boundary fields, and its free-fermion solution at q = i.

Conventions: site 1 is the leftmost tensor factor, spin up is basis index 0
with sigma^z = +1, and |0> is the all-up state. Operators are scipy sparse
CSR matrices of dimension 2^N.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import comb, cos, pi

import numpy as np
import scipy.sparse as sp

MAX_SPIN_SITES = 14

SIGMA_Z = sp.csr_matrix(np.diag([1.0, -1.0]))
SIGMA_MINUS = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))  # |down><up|
SIGMA_PLUS = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
SIGMA_X = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
SIGMA_Y = sp.csr_matrix(np.array([[0.0, -1.0j], [1.0j, 0.0]]))
ID2 = sp.identity(2, format="csr")


def _check_sites(n: int) -> None:
    if n < 1:
        raise ValueError("N must be positive")
    if n > MAX_SPIN_SITES:
        raise ValueError(f"N={n} exceeds the spin-chain guard {MAX_SPIN_SITES}")


def kron_chain(factors) -> sp.csr_matrix:
    out = sp.csr_matrix(np.ones((1, 1)))
    for f in factors:
        out = sp.kron(out, f, format="csr")
    return out


def site_operator(n: int, j: int, op) -> sp.csr_matrix:
    """``op`` acting on site j (1-based) of an N-site chain."""
    _check_sites(n)
    if not 1 <= j <= n:
        raise ValueError(f"site {j} out of range for N={n}")
    return kron_chain([op if k == j else ID2 for k in range(1, n + 1)])


def vacuum(n: int) -> np.ndarray:
    v = np.zeros(2**n, dtype=complex)
    v[0] = 1.0
    return v


def basis_index(spins: str) -> int:
    """Index of a product state given as a string of 'u'/'d' (site 1 first)."""
    return int("".join("1" if s == "d" else "0" for s in spins), 2)


@functools.lru_cache(maxsize=None)
def magnetization(n: int) -> np.ndarray:
    """Diagonal of S^z in the computational basis."""
    idx = np.arange(2**n)
    downs = np.array([bin(k).count("1") for k in idx])
    return n / 2 - downs


def sector_indices(n: int, n_down: int) -> np.ndarray:
    """Basis indices with exactly ``n_down`` down spins (S^z = N/2 - n_down)."""
    return np.flatnonzero(np.isclose(magnetization(n), n / 2 - n_down))


def sz_matrix(n: int) -> sp.csr_matrix:
    return sp.diags(magnetization(n).astype(complex), format="csr")


def e_tilde(q: complex) -> np.ndarray:
    q = complex(q)
    return np.array(
        [[0, 0, 0, 0], [0, -q, 1, 0], [0, 1, -1 / q, 0], [0, 0, 0, 0]], dtype=complex
    )


def e_matrix(n: int, j: int, q: complex) -> sp.csr_matrix:
    """id^(j-1) (x) e~ (x) id^(N-j-1)."""
    _check_sites(n)
    if not 1 <= j <= n - 1:
        raise ValueError(f"e_j index {j} out of range for N={n}")
    if q == 0:
        raise ValueError("q must be nonzero")
    left = sp.identity(2 ** (j - 1), format="csr")
    right = sp.identity(2 ** (n - j - 1), format="csr")
    return kron_chain([left, sp.csr_matrix(e_tilde(q)), right])


def hxxz_matrix(n: int, q: complex) -> sp.csr_matrix:
    """Open XXZ Hamiltonian with boundary fields -(q - 1/q)/4 (sigma^z_1 - sigma^z_N)."""
    _check_sites(n)
    q = complex(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    dim = 2**n
    h = sp.csr_matrix((dim, dim), dtype=complex)
    anis = (q + 1 / q) / 2
    for j in range(1, n):
        xx = site_operator(n, j, SIGMA_X) @ site_operator(n, j + 1, SIGMA_X)
        yy = site_operator(n, j, SIGMA_Y) @ site_operator(n, j + 1, SIGMA_Y)
        zz = site_operator(n, j, SIGMA_Z) @ site_operator(n, j + 1, SIGMA_Z)
        h = h + xx + yy + anis * zz
    boundary = site_operator(n, 1, SIGMA_Z) - site_operator(n, n, SIGMA_Z)
    h = h - (q - 1 / q) / 2 * boundary
    return (0.5 * h).tocsr()


def hxxz_from_tl(n: int, q: complex) -> sp.csr_matrix:
    """sum_j ((q + 1/q)/4 id + e_j)."""
    dim = 2**n
    q = complex(q)
    h = sp.csr_matrix((dim, dim), dtype=complex)
    for j in range(1, n):
        h = h + (q + 1 / q) / 4 * sp.identity(dim) + e_matrix(n, j, q)
    return h.tocsr()


@functools.lru_cache(maxsize=None)
def _jw_pair(n: int, j: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    string = [-SIGMA_Z] * (j - 1)
    c = kron_chain(string + [SIGMA_MINUS] + [ID2] * (n - j))
    return c, c.T.tocsr()


def jordan_wigner_c(n: int, j: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """(c_j, c_j^dagger) with c_j = prod_{k<j}(-sigma^z_k) sigma^-_j."""
    _check_sites(n)
    if not 1 <= j <= n:
        raise ValueError(f"site {j} out of range for N={n}")
    return _jw_pair(n, j)


def caln_matrix(n: int) -> np.ndarray:
    """Symmetric one-body matrix: unit off-diagonals, -i and +i corners."""
    if n < 2:
        raise ValueError("N must be at least 2")
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    m[idx, idx + 1] = 1
    m[idx + 1, idx] = 1
    m[0, 0] += -1j
    m[n - 1, n - 1] += 1j
    return m


def chebyshev_det(length: int, xi: complex) -> complex:
    """det(K_L - xi id) for the L x L path adjacency K_L, by the three-term recursion."""
    prev, cur = 1.0, -xi
    if length == 0:
        return prev
    for _ in range(length - 1):
        prev, cur = cur, -xi * cur - prev
    return cur


@dataclass(frozen=True)
class FermionMode:
    """b_n = sum_j f^j c_j^dagger and a_n = sum_j g^j c_j."""

    index: int
    f_vec: np.ndarray
    g_vec: np.ndarray
    eigenvalue: float


@dataclass(frozen=True)
class JordanPair:
    n_sites: int
    w1_vec: np.ndarray
    w2_vec: np.ndarray
    k_prime: complex
    beta1: complex
    beta2: complex

    @property
    def w_vec(self) -> np.ndarray:
        return self.beta1 * self.w1_vec + self.beta2 * self.w2_vec

    @property
    def zero_vec(self) -> np.ndarray:
        j = np.arange(1, self.n_sites + 1)
        return self.k_prime * (1j**j)


@dataclass(frozen=True)
class CalNSpectrum:
    n_sites: int
    eigenvalues: tuple[float, ...]
    modes: tuple[FermionMode, ...]
    jordan_pair: JordanPair | None


def mode_labels(n: int) -> list[int]:
    """Generic labels ascending, then -1 (N even), then 0."""
    generic = [k for k in range(1, n) if 2 * k != n]
    return generic + ([-1, 0] if n % 2 == 0 else [0])


def generic_mode_vector(n: int, k: int) -> np.ndarray:
    """u_k^j = K_k (alpha x^j + gamma x^-j) with K_k = (2 alpha gamma N)^(-1/2)."""
    x = np.exp(1j * pi * k / n)
    alpha = -(1 + 1j / x)
    gamma = 1 + 1j * x
    norm = (2 * alpha * gamma * n) ** -0.5
    j = np.arange(1, n + 1)
    return norm * (alpha * x**j + gamma * x ** (-j))


def jordan_pair(n: int) -> JordanPair:
    if n % 2 or n < 2:
        raise ValueError("the Jordan pair exists for even N only")
    j = np.arange(1, n + 1)
    phase = 1j**j
    w1 = phase * np.floor((n - j - 1) / 2)
    w2 = phase * np.floor((n - j + 1) / 2)
    k_prime = (2j / n) ** 0.5
    beta1 = -1 / (2 * k_prime)
    beta2 = -beta1 * (n - 4) / n
    return JordanPair(n, w1, w2, k_prime, beta1, beta2)


@functools.lru_cache(maxsize=None)
def caln_spectrum(n: int) -> CalNSpectrum:
    """Mode vectors and eigenvalues of the one-body matrix."""
    if n < 2:
        raise ValueError("N must be at least 2")
    modes = []
    for k in range(1, n):
        if 2 * k == n:
            continue
        u = generic_mode_vector(n, k)
        modes.append(FermionMode(k, u, u, 2 * cos(pi * k / n)))
    pair = None
    j = np.arange(1, n + 1)
    if n % 2:
        u0 = 1j ** (j + 1)
        modes.append(FermionMode(0, u0, u0, 0.0))
    else:
        pair = jordan_pair(n)
        modes.append(FermionMode(-1, pair.w_vec, pair.zero_vec, 0.0))
        modes.append(FermionMode(0, pair.zero_vec, pair.w_vec, 0.0))
    values = tuple(sorted([2 * cos(pi * k / n) for k in range(1, n) if 2 * k != n] + [0.0] * (1 if n % 2 else 2)))
    return CalNSpectrum(n, values, tuple(modes), pair)


def _combine(n: int, coeffs: np.ndarray, dagger: bool) -> sp.csr_matrix:
    dim = 2**n
    out = sp.csr_matrix((dim, dim), dtype=complex)
    for j, c in enumerate(coeffs, start=1):
        if c != 0:
            pair = jordan_wigner_c(n, j)
            out = out + c * pair[1 if dagger else 0]
    return out.tocsr()


@functools.lru_cache(maxsize=None)
def mode_operators(n: int) -> dict[int, tuple[sp.csr_matrix, sp.csr_matrix, FermionMode]]:
    """Map label -> (a_label, b_label, mode)."""
    _check_sites(n)
    out = {}
    for mode in caln_spectrum(n).modes:
        a = _combine(n, mode.g_vec, dagger=False)
        b = _combine(n, mode.f_vec, dagger=True)
        out[mode.index] = (a, b, mode)
    return out


def mode_hamiltonian(n: int) -> sp.csr_matrix:
    """H rebuilt from the modes: sum Lambda_k b_k a_k, plus b_0 a_-1 for N even."""
    ops = mode_operators(n)
    dim = 2**n
    h = sp.csr_matrix((dim, dim), dtype=complex)
    for k, (a, b, mode) in ops.items():
        if k > 0:
            h = h + mode.eigenvalue * (b @ a)
    if n % 2 == 0:
        h = h + ops[0][1] @ ops[-1][0]
    return h.tocsr()


@dataclass(frozen=True)
class FockWord:
    n_sites: int
    modes: tuple[int, ...]

    def __post_init__(self) -> None:
        modes = tuple(self.modes)
        if len(set(modes)) != len(modes):
            raise ValueError("duplicate modes in Fock word")
        allowed = set(mode_labels(self.n_sites))
        if any(k not in allowed for k in modes):
            raise ValueError(f"invalid mode label in {modes}")
        order = {k: i for i, k in enumerate(mode_labels(self.n_sites))}
        object.__setattr__(self, "modes", tuple(sorted(modes, key=order.__getitem__)))

    @property
    def eigenvalue(self) -> float:
        """Eigenvalue of H on the word; each a_k lowers the energy by Lambda_k."""
        n = self.n_sites
        return -sum(2 * cos(pi * k / n) for k in self.modes if k > 0)

    @property
    def is_generalized(self) -> bool:
        return self.n_sites % 2 == 0 and 0 in self.modes and -1 not in self.modes


def fock_words(n: int, n_modes: int) -> list[FockWord]:
    return [FockWord(n, combo) for combo in itertools.combinations(mode_labels(n), n_modes)]


def apply_word(n: int, labels, vec: np.ndarray, which: str = "a") -> np.ndarray:
    """Apply the product of mode operators (first label leftmost) to vec."""
    ops = mode_operators(n)
    slot = 0 if which == "a" else 1
    out = vec
    for k in reversed(tuple(labels)):
        out = ops[k][slot] @ out
    return out


def fock_state(n: int, word: FockWord) -> np.ndarray:
    """a_{k_1} ... a_{k_n} |0>, with the special modes rightmost."""
    if word.n_sites != n:
        raise ValueError("size mismatch")
    return apply_word(n, word.modes, vacuum(n))


def _half_power_diag(n: int, q: complex, sign: int, sites) -> np.ndarray:
    # Diagonal of prod_{k in sites} q^(sign * sigma^z_k / 2), principal branch.
    root = complex(q) ** 0.5
    diag = np.ones(2**n, dtype=complex)
    idx = np.arange(2**n)
    for k in sites:
        up = ((idx >> (n - k)) & 1) == 0
        diag *= np.where(up, root**sign, root ** (-sign))
    return diag


def uq_generators(n: int, q: complex) -> tuple[sp.csr_matrix, sp.csr_matrix, sp.csr_matrix]:
    """(S^+, S^-, q^{S^z}) with S^+ = sum_j q^{-S^z_{<j}} sigma^+_j q^{S^z_{>j}}."""
    _check_sites(n)
    dim = 2**n
    s_plus = sp.csr_matrix((dim, dim), dtype=complex)
    for j in range(1, n + 1):
        left = sp.diags(_half_power_diag(n, q, -1, range(1, j)))
        right = sp.diags(_half_power_diag(n, q, 1, range(j + 1, n + 1)))
        s_plus = s_plus + left @ site_operator(n, j, SIGMA_PLUS) @ right
    s_plus = s_plus.tocsr()
    q_sz = sp.diags(_half_power_diag(n, q, 1, range(1, n + 1)), format="csr")
    return s_plus, s_plus.T.tocsr(), q_sz


def uq_divided_powers(n: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """S^{+(2)} and S^{-(2)} at q = i.

    S^{+(2)} = sum_{j1<j2} q^{-sigma^z}_{<j1} sigma^+_{j1} sigma^+_{j2} q^{sigma^z}_{>j2}.
    """
    _check_sites(n)
    q = 1j
    dim = 2**n
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for j1 in range(1, n + 1):
        left = sp.diags(_half_power_diag(n, q * q, -1, range(1, j1)) if j1 > 1 else np.ones(dim))
        for j2 in range(j1 + 1, n + 1):
            right = sp.diags(_half_power_diag(n, q * q, 1, range(j2 + 1, n + 1)))
            pair = site_operator(n, j1, SIGMA_PLUS) @ site_operator(n, j2, SIGMA_PLUS)
            total = total + left @ pair @ right
    total = total.tocsr()
    return total, total.T.tocsr()


def sign_of_sz(n: int, shift: int = 0) -> sp.csr_matrix:
    """(-1)^(S^z + shift) as the diagonal exp(i pi (S^z + shift))."""
    return sp.diags(np.exp(1j * pi * (magnetization(n) + shift)), format="csr")


def divided_power_mode_form(n: int) -> sp.csr_matrix:
    """S^{+(2)} rebuilt from the b modes."""
    ops = mode_operators(n)
    dim = 2**n
    acc = sp.csr_matrix((dim, dim), dtype=complex)
    if n % 2:
        for k in range(1, (n - 1) // 2 + 1):
            acc = acc + ops[k][1] @ ops[n - k][1]
        return (sign_of_sz(n, 1) @ acc).tocsr()
    for k in range(1, (n - 2) // 2 + 1):
        acc = acc - ops[k][1] @ ops[n - k][1]
    acc = acc + 1j * ops[-1][1] @ ops[0][1]
    return (sign_of_sz(n) @ acc).tocsr()


def b_coefficient(n: int, k1: int, k2: int) -> complex:
    """Coefficient of b_{k1} b_{k2} in sum_{j1<j2} i^(j1+j2) c^dag_{j1} c^dag_{j2}."""
    labels = set(mode_labels(n))
    if k1 not in labels or k2 not in labels:
        raise ValueError(f"invalid mode labels ({k1}, {k2}) for N={n}")
    if k1 == k2:
        return 0j
    if k1 > 0 and k2 > 0:
        if k1 + k2 != n:
            return 0j
        return -1j if 2 * k1 < n else 1j
    if n % 2 == 0 and {k1, k2} == {0, -1}:
        return 1 + 0j if (k1, k2) == (0, -1) else -1 + 0j
    return 0j


def b_coefficient_numeric(n: int, k1: int, k2: int) -> complex:
    """Same coefficient from the inverse Bogoliubov map c^dag_j = sum_k g_k^j b_k."""
    modes = {m.index: m for m in caln_spectrum(n).modes}
    g1, g2 = modes[k1].g_vec, modes[k2].g_vec
    total = 0j
    for j1 in range(1, n + 1):
        for j2 in range(j1 + 1, n + 1):
            total += 1j ** (j1 + j2) * (g1[j1 - 1] * g2[j2 - 1] - g1[j2 - 1] * g2[j1 - 1])
    return total


def fock_sector_count(n: int, n_down: int) -> int:
    return comb(n, n_down)
