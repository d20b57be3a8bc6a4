"""The map from link states into the spin chain and the certificates built on it.

A link state v with arcs (i, j) is sent to prod (w sigma^-_j + w^-1 sigma^-_i) |0>
with w = sqrt(-q) on the principal branch. The image intertwines the
defect-preserving link action with the e_j matrices at beta = -(q + 1/q).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .link_rep import LinkState, apply_element, enumerate_link_states
from .tl_algebra import TLElement
from .xx_chain import (
    apply_word,
    e_matrix,
    mode_labels,
    sector_indices,
    uq_divided_powers,
    uq_generators,
    vacuum,
)

RANK_TOL = 1e-9


def w_of_q(q: complex) -> complex:
    return complex(-complex(q)) ** 0.5


def beta_of_q(q: complex) -> complex:
    q = complex(q)
    return -(q + 1 / q)


def bubble_list(v: LinkState) -> list[tuple[int, int]]:
    """1-based arcs (p, q) of v ordered by ascending p."""
    return sorted(v.arcs)


def homo_i(n: int, d: int, v: LinkState, q: complex) -> np.ndarray:
    """Image of the link state v in the S^z = d/2 sector of the spin chain."""
    if v.n_sites != n or v.n_defects != d:
        raise ValueError(f"link state is not in sector (N={n}, d={d})")
    w = w_of_q(q)
    out = np.zeros(2**n, dtype=complex)
    arcs = bubble_list(v)
    for choice in itertools.product((0, 1), repeat=len(arcs)):
        index, power = 0, 0
        for (i, j), right in zip(arcs, choice):
            site = j if right else i
            index |= 1 << (n - site)
            power += 1 if right else -1
        out[index] += w**power
    return out


def image_matrix(n: int, d: int, q: complex) -> np.ndarray:
    """Columns are the images of the sector basis, in basis order."""
    states = enumerate_link_states(n, d).states
    return np.column_stack([homo_i(n, d, v, q) for v in states])


def intertwine_residual(n: int, d: int, q: complex) -> float:
    """max over generators U_i and basis states v of |i(U_i v|_d) - e_i i(v)|."""
    if n < 2:
        return 0.0
    beta = beta_of_q(q)
    states = enumerate_link_states(n, d).states
    images = {v: homo_i(n, d, v, q) for v in states}
    worst = 0.0
    for i in range(1, n):
        gen = TLElement.generator(n, i, beta)
        e = e_matrix(n, i, q)
        for v in states:
            lhs = np.zeros(2**n, dtype=complex)
            for u, coeff in apply_element(gen, v, restricted=True).items():
                lhs += coeff * images[u]
            worst = max(worst, float(np.linalg.norm(lhs - e @ images[v])))
    return worst


def spin_config_index(steps) -> int:
    """Basis index of the product state with up spins at +1 steps."""
    n = len(steps)
    index = 0
    for site, x in enumerate(steps, start=1):
        if x == -1:
            index |= 1 << (n - site)
    return index


def injectivity_matrix(n: int, d: int, q: complex) -> np.ndarray:
    """Overlaps of the images with the Dyck spin configurations, both in decreasing order."""
    states = enumerate_link_states(n, d).states
    rows = [spin_config_index(v.dyck_steps()) for v in states]
    images = image_matrix(n, d, q)
    return images[rows, :]


def is_lower_triangular(m: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.all(np.abs(np.triu(m, k=1)) <= tol))


def kernel_residuals(n: int, d: int, q: complex) -> tuple[float, float | None]:
    """(max |S^+ i(v)|, max |S^{+(2)} i(v)|); the second only at q = i."""
    images = image_matrix(n, d, q)
    s_plus, _, _ = uq_generators(n, q)
    first = float(np.max(np.linalg.norm(s_plus @ images, axis=0))) if images.size else 0.0
    second = None
    if abs(complex(q) - 1j) < 1e-14:
        s2, _ = uq_divided_powers(n)
        second = float(np.max(np.linalg.norm(s2 @ images, axis=0))) if images.size else 0.0
    return first, second


@dataclass(frozen=True)
class RemovalState:
    kind: str
    modes: tuple[int, ...]
    vector: np.ndarray = field(repr=False)


def _second_kind_pairs(n: int) -> list[tuple[int, int]]:
    top = (n - 1) // 2 if n % 2 else (n - 2) // 2
    return [(l, n - l) for l in range(1, top + 1)]


def first_kind_words(n: int, n_bub: int) -> list[tuple[int, ...]]:
    """Mode words a_{j_{n-1}} ... a_{j_1} a_0 with j_1 < ... < j_{n-1} drawn from labels != 0."""
    if n_bub < 1:
        return []
    others = [k for k in mode_labels(n) if k != 0]
    return [tuple(reversed(js)) + (0,) for js in itertools.combinations(sorted(others), n_bub - 1)]


def second_kind_prefixes(n: int, n_bub: int) -> list[tuple[int, ...]]:
    """Mode words a_{k_{n-2}} ... a_{k_1} multiplying the pair sum, labels != 0."""
    if n_bub < 2:
        return []
    others = [k for k in mode_labels(n) if k != 0]
    return [tuple(reversed(ks)) for ks in itertools.combinations(sorted(others), n_bub - 2)]


def _pair_sum_state(n: int) -> np.ndarray:
    out = np.zeros(2**n, dtype=complex)
    for l, r in _second_kind_pairs(n):
        out += apply_word(n, (l, r), vacuum(n))
    return out


def removal_states(n: int, n_bub: int) -> list[RemovalState]:
    """States spanning the complement of the image in the n-bubble spin sector."""
    if n_bub < 0 or 2 * n_bub > n:
        raise ValueError(f"n={n_bub} bubbles impossible for N={n}")
    if n_bub == 0:
        return []
    out = []
    for word in first_kind_words(n, n_bub):
        out.append(RemovalState("first", word, apply_word(n, word, vacuum(n))))
    if n_bub >= 2:
        base = _pair_sum_state(n)
        for prefix in second_kind_prefixes(n, n_bub):
            out.append(RemovalState("second", prefix, apply_word(n, prefix, base)))
    return out


def _b_form_apply(n: int, state: RemovalState, x: np.ndarray) -> complex:
    # Pairing <state|x>: reverse the a-word, conjugate coefficients, a -> b, read |0>.
    if state.kind == "first":
        return complex(apply_word(n, tuple(reversed(state.modes)), x, which="b")[0])
    total = 0j
    for l, r in _second_kind_pairs(n):
        word = (r, l) + tuple(reversed(state.modes))
        total += apply_word(n, word, x, which="b")[0]
    return complex(total)


def pairing(n: int, state: RemovalState, x: np.ndarray) -> complex:
    """Bilinear pairing of a removal state with an arbitrary vector."""
    return _b_form_apply(n, state, x)


def numeric_rank(m: np.ndarray, tol: float = RANK_TOL) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def completion_rank(n: int, d: int, q: complex = 1j) -> tuple[int, int]:
    """(rank of removal states together with the image basis, sector dimension C(N, n))."""
    n_bub = (n - d) // 2
    rows = sector_indices(n, n_bub)
    cols = [homo_i(n, d, v, q)[rows] for v in enumerate_link_states(n, d).states]
    cols += [r.vector[rows] for r in removal_states(n, n_bub)] if n >= 2 else []
    return numeric_rank(np.column_stack(cols)), comb(n, n_bub)


@dataclass(frozen=True)
class GramCertificate:
    v: int
    k: int
    shift: int
    eigen_list: tuple[tuple[int, int], ...]

    @property
    def all_positive(self) -> bool:
        return all(value > 0 for value, mult in self.eigen_list if mult > 0)

    @property
    def min_value(self) -> int:
        return min(value for value, mult in self.eigen_list if mult > 0)


def gram_certificate(l_size: int, i_size: int) -> GramCertificate:
    """Spectrum of |K| id + A(|L|, |I|) with |K| = |L| - |I|."""
    v, k = l_size, i_size
    if k < 0 or v <= 2 * k - 1:
        raise ValueError(f"Johnson parameters (v={v}, k={k}) violate v > 2k - 1")
    shift = v - k
    eigen = []
    for j in range(0, k + 1):
        mult = comb(v, j) - (comb(v, j - 1) if j >= 1 else 0)
        eigen.append((k * (v - k) - j * (v - j + 1) + shift, mult))
    return GramCertificate(v, k, shift, tuple(eigen))


def johnson_adjacency(v: int, k: int) -> np.ndarray:
    subsets = [frozenset(s) for s in itertools.combinations(range(v), k)]
    size = len(subsets)
    adj = np.zeros((size, size))
    for a in range(size):
        for b in range(a + 1, size):
            if len(subsets[a] & subsets[b]) == k - 1:
                adj[a, b] = adj[b, a] = 1
    return adj
