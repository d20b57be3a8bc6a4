"""Double-row transfer matrix of critical dense polymers (loop weight 0).

The double row has N faces in its lower row with anisotropy u and N faces in
its upper row with anisotropy pi/2 - u. A face of anisotropy u expands into two
tiles: with weight cos u its strands join (bottom, right) and (left, top); with
weight sin u they join (bottom, left) and (top, right). A boundary arc joins
the left edges of the two leftmost faces and another joins the right edges of
the two rightmost faces. Any closed loop kills a term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import cos, pi, sin

import numpy as np

from .link_rep import rho_matrix, rho_sector_block
from .tl_algebra import Connectivity, TLElement

MAX_TRANSFER_SITES = 10
ENDPOINT_TOL = 1e-14

# Tile strands as pairs of edge slots of a face.
_TILE_ID = (("bottom", "right"), ("left", "top"))
_TILE_TURN = (("bottom", "left"), ("top", "right"))


@dataclass(frozen=True)
class FaceWeights:
    u: float

    @property
    def w_id(self) -> float:
        return cos(self.u)

    @property
    def w_turn(self) -> float:
        return sin(self.u)


def sign_pattern_length(n: int) -> int:
    """Number of excitation levels: (N-1)/2 for N odd, (N-2)/2 for N even."""
    if n < 1:
        raise ValueError("N must be positive")
    return (n - 1) // 2 if n % 2 else (n - 2) // 2


@dataclass(frozen=True)
class SignPattern:
    n_sites: int
    eps: tuple[int, ...]
    mu: tuple[int, ...]

    def __post_init__(self) -> None:
        size = sign_pattern_length(self.n_sites)
        if len(self.eps) != size or len(self.mu) != size:
            raise ValueError(f"sign arrays must have length {size} for N={self.n_sites}")
        if any(s not in (-1, 1) for s in self.eps + self.mu):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def all_patterns(cls, n: int) -> list[SignPattern]:
        size = sign_pattern_length(n)
        out = []
        for eps in itertools.product((1, -1), repeat=size):
            for mu in itertools.product((1, -1), repeat=size):
                out.append(cls(n, eps, mu))
        return out


def _face_edges(n: int, row: int, k: int) -> dict[str, tuple]:
    # Edge labels shared between neighbouring faces; outer edges are ("bot", k) / ("top", k).
    if row == 0:
        return {
            "bottom": ("bot", k),
            "top": ("mid", k),
            "left": ("vlow", k),
            "right": ("vlow", k + 1),
        }
    return {
        "bottom": ("mid", k),
        "top": ("top", k),
        "left": ("vup", k),
        "right": ("vup", k + 1),
    }


def _face_sequence(n: int, u: float):
    """Faces in contraction order with their tile weights (id weight, turn weight)."""
    lower = (cos(u), sin(u))
    upper = (cos(pi / 2 - u), sin(pi / 2 - u))
    for k in range(n):
        yield _face_edges(n, 0, k), lower
    for k in range(n):
        yield _face_edges(n, 1, k), upper


def _boundary_arcs(n: int):
    return [(("vlow", 0), ("vup", 0)), (("vlow", n), ("vup", n))]


def _add_strand(partner: dict, a, b) -> bool:
    """Join edge ends a and b; returns False if a closed loop is formed."""
    a_open, b_open = a in partner, b in partner
    if a_open and b_open:
        pa, pb = partner.pop(a), partner.pop(b)
        if pa == b:
            return False
        partner[pa], partner[pb] = pb, pa
    elif a_open:
        pa = partner.pop(a)
        partner[pa], partner[b] = b, pa
    elif b_open:
        pb = partner.pop(b)
        partner[pb], partner[a] = a, pb
    else:
        partner[a], partner[b] = b, a
    return True


def _outer_to_connectivity(n: int, partner: dict) -> Connectivity:
    def point(label) -> int:
        kind, k = label
        return k if kind == "top" else n + k

    pairing = [0] * (2 * n)
    for a, b in partner.items():
        pairing[point(a)] = point(b)
    return Connectivity(n, tuple(pairing))


def _check_u(n: int, u: float) -> None:
    if n < 1:
        raise ValueError("N must be positive")
    if n > MAX_TRANSFER_SITES:
        raise ValueError(f"N={n} exceeds the transfer-matrix guard {MAX_TRANSFER_SITES}")
    if abs(sin(2 * u)) < ENDPOINT_TOL:
        raise ValueError("sin 2u vanishes; use the identity limit at the endpoints")


def double_row_element(n: int, u: float) -> TLElement:
    """D_N(u) as a TL element at loop weight 0, by frontier contraction.

    Faces are inserted bottom row left to right, then top row left to right,
    then the two boundary arcs. The frontier state is the pairing of currently
    open edge ends; terms forming a closed loop are discarded.
    """
    _check_u(n, u)
    states: dict[tuple, float] = {(): 1.0}
    for edges, (w_id, w_turn) in _face_sequence(n, u):
        nxt: dict[tuple, float] = {}
        for key, weight in states.items():
            for tile, w in ((_TILE_ID, w_id), (_TILE_TURN, w_turn)):
                if w == 0:
                    continue
                partner = dict(key)
                if all(_add_strand(partner, edges[s], edges[t]) for s, t in tile):
                    new_key = tuple(sorted(partner.items()))
                    nxt[new_key] = nxt.get(new_key, 0.0) + weight * w
        states = nxt
    terms: dict[Connectivity, complex] = {}
    for key, weight in states.items():
        partner = dict(key)
        if not all(_add_strand(partner, a, b) for a, b in _boundary_arcs(n)):
            continue
        c = _outer_to_connectivity(n, partner)
        terms[c] = terms.get(c, 0) + weight
    norm = 1.0 / sin(2 * u)
    return TLElement(n, 0, {c: w * norm for c, w in terms.items()})


def double_row_matrix(n: int, u: float) -> np.ndarray:
    """rho(D_N(u)) on V_N; the endpoints u with sin 2u = 0 give the identity."""
    if abs(sin(2 * u)) < ENDPOINT_TOL:
        return rho_matrix(TLElement.identity(n, 0), n)
    return rho_matrix(double_row_element(n, u), n)


def double_row_sector(n: int, u: float, d: int) -> np.ndarray:
    """Diagonal block of rho(D_N(u)) on V_N^d."""
    if abs(sin(2 * u)) < ENDPOINT_TOL:
        return rho_sector_block(TLElement.identity(n, 0), n, d)
    return rho_sector_block(double_row_element(n, u), n, d)


def inversion_scalar(n: int, u: float) -> float:
    """((cos^2N u - sin^2N u)/(cos^2 u - sin^2 u))^2.

    The ratio equals the finite geometric sum sum_k c^k s^(N-1-k) with
    c = cos^2 u and s = sin^2 u, which has no singularity at c = s.
    """
    c, s = cos(u) ** 2, sin(u) ** 2
    ratio = sum(c**k * s ** (n - 1 - k) for k in range(n))
    return ratio * ratio


def hamiltonian_element(n: int, beta: complex = 0) -> TLElement:
    """H_N = U_1 + ... + U_{N-1}."""
    if n < 2:
        raise ValueError("N must be at least 2")
    total = TLElement.zero(n, beta)
    for i in range(1, n):
        total = total + TLElement.generator(n, i, beta)
    return total


def _level_sines(n: int) -> list[float]:
    size = sign_pattern_length(n)
    if n % 2:
        return [sin((2 * j - 1) * pi / (2 * n)) for j in range(1, size + 1)]
    return [sin(j * pi / n) for j in range(1, size + 1)]


def candidate_d(n: int, u: float, signs: SignPattern) -> float:
    """Closed-form eigenvalue candidate of D_N(u) for the given sign pattern."""
    if signs.n_sites != n:
        raise ValueError("sign pattern size mismatch")
    s2u = sin(2 * u)
    value = (1.0 if n % 2 else float(n)) / 2 ** (n - 1)
    for sj, e, m in zip(_level_sines(n), signs.eps, signs.mu):
        value *= (1 / sj + e * s2u) * (1 / sj + m * s2u)
    return value


def candidate_h(n: int, signs: SignPattern) -> float:
    """Closed-form eigenvalue candidate of H_N for the given sign pattern."""
    if signs.n_sites != n:
        raise ValueError("sign pattern size mismatch")
    size = sign_pattern_length(n)
    top = (n + 1) // 2 if n % 2 else n // 2
    total = 0.0
    for j in range(1, size + 1):
        level = top - j
        total += cos(pi * j / n) * (signs.eps[level - 1] + signs.mu[level - 1])
    return total
