"""Link states and the link representation of TL_N(beta).

Sites of a link state are labelled 1..N in the public API (``arcs`` and
``defects``); the stored ``partner`` tuple is 0-based with -1 marking a defect.
Each sector basis is ordered by strictly decreasing Dyck order key
``sum_i 2**i [x_i = -1]``, where the Dyck step x_i is -1 exactly when site i
closes an arc.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb

import numpy as np

from .tl_algebra import Connectivity, TLElement

DEFECT = -1


@dataclass(frozen=True)
class LinkState:
    """A non-crossing half diagram; ``partner[i]`` is the 0-based partner of site i or -1."""

    n_sites: int
    partner: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.n_sites
        if len(self.partner) != n:
            raise ValueError("partner tuple must have N entries")
        stack: list[int] = []
        for i, p in enumerate(self.partner):
            if p == DEFECT:
                if stack:
                    raise ValueError("defect lies under an arc")
                continue
            if not (0 <= p < n) or p == i or self.partner[p] != i:
                raise ValueError(f"invalid partner table {self.partner}")
            if p > i:
                stack.append(i)
            elif not stack or stack.pop() != p:
                raise ValueError("arcs cross")

    @classmethod
    def from_arcs(cls, n: int, arcs: list[tuple[int, int]]) -> LinkState:
        """Build from 1-based arc endpoints; unlisted sites are defects."""
        partner = [DEFECT] * n
        for i, j in arcs:
            a, b = i - 1, j - 1
            if partner[a] != DEFECT or partner[b] != DEFECT:
                raise ValueError("site used twice")
            partner[a], partner[b] = b, a
        return cls(n, tuple(partner))

    @property
    def arcs(self) -> list[tuple[int, int]]:
        """1-based arcs (i, j), i < j, sorted by left endpoint."""
        return [(i + 1, p + 1) for i, p in enumerate(self.partner) if p > i]

    @property
    def defects(self) -> list[int]:
        return [i + 1 for i, p in enumerate(self.partner) if p == DEFECT]

    @property
    def n_defects(self) -> int:
        return sum(1 for p in self.partner if p == DEFECT)

    def dyck_steps(self) -> tuple[int, ...]:
        """+1 at arc openings and defects, -1 at arc closings."""
        return tuple(-1 if 0 <= p < i else 1 for i, p in enumerate(self.partner))

    def order_key(self) -> int:
        return dyck_order_key(self.dyck_steps())


def dyck_order_key(steps) -> int:
    return sum(2 ** (i + 1) for i, x in enumerate(steps) if x == -1)


def link_from_steps(steps) -> LinkState:
    """Pair each down step with the closest unpaired up step to its left."""
    n = len(steps)
    partner = [DEFECT] * n
    open_sites: list[int] = []
    for j, x in enumerate(steps):
        if x == 1:
            open_sites.append(j)
        elif x == -1:
            if not open_sites:
                raise ValueError(f"not a Dyck path: {tuple(steps)}")
            i = open_sites.pop()
            partner[i], partner[j] = j, i
        else:
            raise ValueError("steps must be +1 or -1")
    return LinkState(n, tuple(partner))


def sector_dimension(n: int, d: int) -> int:
    """dim V_N^d = C(N, (N-d)/2) - C(N, (N-d-2)/2), zero off-parity."""
    if d < 0 or d > n or (n - d) % 2:
        return 0
    k = (n - d) // 2
    return comb(n, k) - (comb(n, k - 1) if k >= 1 else 0)


def _check_sector(n: int, d: int) -> None:
    if n < 1:
        raise ValueError("N must be positive")
    if d < 0 or d > n or (n - d) % 2:
        raise ValueError(f"no sector with N={n}, d={d}: need 0 <= d <= N and N-d even")


@dataclass(frozen=True)
class SectorBasis:
    n_sites: int
    defects: int
    states: tuple[LinkState, ...]

    def __len__(self) -> int:
        return len(self.states)

    @functools.cached_property
    def index(self) -> dict[LinkState, int]:
        return {v: k for k, v in enumerate(self.states)}


def _dyck_paths(n: int, end: int):
    # Depth-first generation of +-1 paths of length n staying >= 0 and ending at `end`.
    out: list[tuple[int, ...]] = []
    path: list[int] = []

    def grow(height: int) -> None:
        remaining = n - len(path)
        if remaining == 0:
            if height == end:
                out.append(tuple(path))
            return
        for step in (1, -1):
            h = height + step
            if h < 0 or abs(h - end) > remaining - 1:
                continue
            path.append(step)
            grow(h)
            path.pop()

    grow(0)
    return out


@functools.lru_cache(maxsize=None)
def enumerate_link_states(n: int, d: int) -> SectorBasis:
    """All link states with d defects, ordered by decreasing Dyck order key."""
    _check_sector(n, d)
    states = [link_from_steps(p) for p in _dyck_paths(n, d)]
    states.sort(key=lambda v: v.order_key(), reverse=True)
    return SectorBasis(n, d, tuple(states))


def full_basis(n: int) -> list[LinkState]:
    """Concatenated sector bases, ordered by decreasing d."""
    out: list[LinkState] = []
    for d in range(n, -1, -2):
        out.extend(enumerate_link_states(n, d).states)
    return out


def act_detailed(c: Connectivity, v: LinkState) -> tuple[LinkState, int, int]:
    """Apply c to v; return (result, closed loops, number of defect pairs joined)."""
    if c.n_sites != v.n_sites:
        raise ValueError("size mismatch")
    n = c.n_sites
    pairing, vp = c.pairing, v.partner
    result = [DEFECT] * n
    seen_top = [False] * n
    done = [False] * n

    for k in range(n):
        if done[k]:
            continue
        pt = pairing[n + k]
        while True:
            if pt >= n:
                result[k], result[pt - n] = pt - n, k
                done[pt - n] = True
                break
            seen_top[pt] = True
            nxt = vp[pt]
            if nxt == DEFECT:
                break
            seen_top[nxt] = True
            pt = pairing[nxt]
        done[k] = True

    joined = 0
    for t in range(n):
        if seen_top[t] or vp[t] != DEFECT:
            continue
        seen_top[t] = True
        pt = pairing[t]
        while True:
            seen_top[pt] = True
            nxt = vp[pt]
            if nxt == DEFECT:
                joined += 1
                break
            seen_top[nxt] = True
            pt = pairing[nxt]

    loops = 0
    for t in range(n):
        if seen_top[t]:
            continue
        loops += 1
        pt = t
        while not seen_top[pt]:
            seen_top[pt] = True
            nxt = vp[pt]
            seen_top[nxt] = True
            pt = pairing[nxt]
    return LinkState(n, tuple(result)), loops, joined


def act(c: Connectivity, v: LinkState) -> tuple[LinkState, int]:
    """Attach v to the top of c and read the link state off the bottom."""
    result, loops, _ = act_detailed(c, v)
    return result, loops


def _loop_factor(beta: complex, loops: int) -> complex:
    return 1.0 if loops == 0 else beta**loops


def apply_element(e: TLElement, v: LinkState, restricted: bool = False) -> dict[LinkState, complex]:
    """Image of v under e as a sparse vector. ``restricted`` drops defect-lowering terms."""
    out: dict[LinkState, complex] = {}
    for c, coeff in e.terms.items():
        w, loops, joined = act_detailed(c, v)
        if restricted and joined:
            continue
        weight = coeff * _loop_factor(e.beta, loops)
        if weight == 0:
            continue
        out[w] = out.get(w, 0) + weight
    return out


def rho_matrix(e: TLElement, n: int) -> np.ndarray:
    """Matrix of e on V_N, basis concatenated by decreasing d."""
    if e.n_sites != n:
        raise ValueError("size mismatch")
    basis = full_basis(n)
    index = {v: k for k, v in enumerate(basis)}
    mat = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, v in enumerate(basis):
        for w, coeff in apply_element(e, v).items():
            mat[index[w], col] += coeff
    return mat


def rho_sector_block(e: TLElement, n: int, d: int) -> np.ndarray:
    """Defect-preserving diagonal block of rho(e) on V_N^d."""
    if e.n_sites != n:
        raise ValueError("size mismatch")
    sector = enumerate_link_states(n, d)
    index = sector.index
    mat = np.zeros((len(sector), len(sector)), dtype=complex)
    for col, v in enumerate(sector.states):
        for w, coeff in apply_element(e, v, restricted=True).items():
            mat[index[w], col] += coeff
    return mat


def sector_offsets(n: int) -> dict[int, slice]:
    """Row/column ranges of each sector inside rho_matrix."""
    out: dict[int, slice] = {}
    start = 0
    for d in range(n, -1, -2):
        size = sector_dimension(n, d)
        out[d] = slice(start, start + size)
        start += size
    return out
