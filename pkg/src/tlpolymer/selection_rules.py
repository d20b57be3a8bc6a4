"""Two-column configurations, Dyck paths and the predicted spectrum of H_N.

Levels of a column are numbered 1..M from top to bottom. An occupied (blue)
site carries the sign -1 and an empty (white) site +1; the left column gives
the eps signs and the right column the mu signs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, cos, pi

from .link_rep import LinkState, dyck_order_key, link_from_steps
from .transfer import SignPattern, sign_pattern_length


def binom(a: int, b: int) -> int:
    """Binomial coefficient that vanishes outside 0 <= b <= a."""
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


@dataclass(frozen=True)
class TwoColumnConfig:
    height: int
    left: tuple[int, ...] = ()
    right: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        for sig in (self.left, self.right):
            if any(not 1 <= x <= self.height for x in sig):
                raise ValueError(f"labels must lie in 1..{self.height}")
            if any(a >= b for a, b in zip(sig, sig[1:])):
                raise ValueError("signatures must be strictly ascending")

    @property
    def m(self) -> int:
        return len(self.left)

    @property
    def n(self) -> int:
        return len(self.right)

    def is_reduced(self) -> bool:
        """Every level carries exactly one occupied site."""
        both = set(self.left) & set(self.right)
        return not both and len(self.left) + len(self.right) == self.height


def is_admissible(c: TwoColumnConfig) -> bool:
    if not 0 <= c.m <= c.n <= c.height:
        return False
    return all(l >= r for l, r in zip(c.left, c.right))


def enumerate_admissible(height: int, m: int, n: int) -> list[TwoColumnConfig]:
    """All admissible configurations with signature lengths (m, n); empty if none."""
    if not 0 <= m <= n <= height:
        return []
    out = []
    levels = range(1, height + 1)
    for right in itertools.combinations(levels, n):
        for left in itertools.combinations(levels, m):
            if all(l >= r for l, r in zip(left, right)):
                out.append(TwoColumnConfig(height, left, right))
    return out


def enumerate_reduced(x: int, y: int) -> list[TwoColumnConfig]:
    """The reduced admissible set of height x + y with signature lengths (x, y)."""
    return [c for c in enumerate_admissible(x + y, x, y) if c.is_reduced()]


def reduce(c: TwoColumnConfig) -> TwoColumnConfig:
    """Drop levels whose two sites have the same color and relabel the rest."""
    if not is_admissible(c):
        raise ValueError("configuration is not admissible")
    left, right = set(c.left), set(c.right)
    kept = [j for j in range(1, c.height + 1) if (j in left) != (j in right)]
    relabel = {j: k for k, j in enumerate(kept, start=1)}
    return TwoColumnConfig(
        len(kept),
        tuple(relabel[j] for j in c.left if j in relabel),
        tuple(relabel[j] for j in c.right if j in relabel),
    )


@dataclass(frozen=True)
class DyckPath:
    steps: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        height = 0
        for x in self.steps:
            if x not in (1, -1):
                raise ValueError("steps must be +1 or -1")
            height += x
            if height < 0:
                raise ValueError(f"not a Dyck path: {self.steps}")

    @property
    def endpoint(self) -> int:
        return sum(self.steps)

    def order_key(self) -> int:
        return dyck_order_key(self.steps)


def dyck_from_reduced(c: TwoColumnConfig) -> DyckPath:
    if not c.is_reduced() or not is_admissible(c):
        raise ValueError("configuration must be reduced and admissible")
    left = set(c.left)
    return DyckPath(tuple(-1 if j in left else 1 for j in range(1, c.height + 1)))


def reduced_from_dyck(p: DyckPath) -> TwoColumnConfig:
    left = tuple(j for j, x in enumerate(p.steps, start=1) if x == -1)
    right = tuple(j for j, x in enumerate(p.steps, start=1) if x == 1)
    return TwoColumnConfig(len(p.steps), left, right)


def link_from_dyck(p: DyckPath) -> LinkState:
    return link_from_steps(p.steps)


def dyck_from_link(v: LinkState) -> DyckPath:
    return DyckPath(v.dyck_steps())


def enumerate_dyck(n: int, end: int) -> list[DyckPath]:
    """All Dyck paths of length n ending at height ``end``, decreasing order key."""
    from .link_rep import enumerate_link_states

    return [dyck_from_link(v) for v in enumerate_link_states(n, end).states]


def config_to_signs(c: TwoColumnConfig, n_sites: int) -> SignPattern:
    if c.height != sign_pattern_length(n_sites):
        raise ValueError(f"height {c.height} does not match N={n_sites}")
    left, right = set(c.left), set(c.right)
    levels = range(1, c.height + 1)
    return SignPattern(
        n_sites,
        tuple(-1 if j in left else 1 for j in levels),
        tuple(-1 if j in right else 1 for j in levels),
    )


def _top_level(n_sites: int) -> int:
    return (n_sites + 1) // 2 if n_sites % 2 else n_sites // 2


@dataclass(frozen=True)
class EigLabel:
    """Formal eigenvalue 2 sum_{K+} cos(pi k/N) - 2 sum_{K-} cos(pi k/N)."""

    n_sites: int
    k_plus: frozenset[int]
    k_minus: frozenset[int]
    delta: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "k_plus", frozenset(self.k_plus))
        object.__setattr__(self, "k_minus", frozenset(self.k_minus))
        top = sign_pattern_length(self.n_sites)
        if self.k_plus & self.k_minus:
            raise ValueError("K+ and K- must be disjoint")
        if any(not 1 <= k <= top for k in self.k_plus | self.k_minus):
            raise ValueError(f"k values must lie in 1..{top}")
        if self.delta not in (0, 1):
            raise ValueError("delta must be 0 or 1")

    @property
    def m(self) -> int:
        return len(self.k_plus) + len(self.k_minus)

    @property
    def k_complement(self) -> frozenset[int]:
        top = sign_pattern_length(self.n_sites)
        return frozenset(range(1, top + 1)) - self.k_plus - self.k_minus

    @property
    def value(self) -> float:
        n = self.n_sites
        return 2 * sum(cos(pi * k / n) for k in sorted(self.k_plus)) - 2 * sum(
            cos(pi * k / n) for k in sorted(self.k_minus)
        )

    def sort_key(self) -> tuple:
        return (self.delta, self.m, tuple(sorted(self.k_plus)), tuple(sorted(self.k_minus)))


def label_from_config(c: TwoColumnConfig, n_sites: int, delta: int = 0) -> EigLabel:
    """Both white at level j puts k = top - j in K+, both blue puts it in K-."""
    if c.height != sign_pattern_length(n_sites):
        raise ValueError(f"height {c.height} does not match N={n_sites}")
    top = _top_level(n_sites)
    left, right = set(c.left), set(c.right)
    k_plus, k_minus = set(), set()
    for j in range(1, c.height + 1):
        if j not in left and j not in right:
            k_plus.add(top - j)
        elif j in left and j in right:
            k_minus.add(top - j)
    return EigLabel(n_sites, frozenset(k_plus), frozenset(k_minus), delta)


def _check_sector(n_sites: int, d: int) -> int:
    if n_sites < 1 or d < 0 or d > n_sites or (n_sites - d) % 2:
        raise ValueError(f"no sector with N={n_sites}, d={d}")
    return (n_sites - d) // 2


def label_degeneracy(n_sites: int, n: int, m: int, delta: int) -> int:
    """Closed-form multiplicity of a label with m signed levels in the n-bubble sector."""
    if m > n or (n - m) % 2 != delta or (n_sites % 2 and delta):
        return 0
    free = sign_pattern_length(n_sites) - m
    if delta == 0:
        return binom(free, (n - m) // 2) - binom(free, (n - m - 2) // 2)
    return binom(free, (n - m - 1) // 2) - binom(free, (n - m - 3) // 2)


def predicted_spectrum(n_sites: int, d: int) -> dict[EigLabel, int]:
    """Every formal label of sector d with its nonzero predicted multiplicity."""
    n = _check_sector(n_sites, d)
    size = sign_pattern_length(n_sites)
    deltas = (0,) if n_sites % 2 else (0, 1)
    out: dict[EigLabel, int] = {}
    for delta in deltas:
        for m in range(0, min(n, size) + 1):
            mult = label_degeneracy(n_sites, n, m, delta)
            if mult <= 0:
                continue
            for ks in itertools.combinations(range(1, size + 1), m):
                for signs in itertools.product((1, -1), repeat=m):
                    k_plus = frozenset(k for k, s in zip(ks, signs) if s == 1)
                    k_minus = frozenset(k for k, s in zip(ks, signs) if s == -1)
                    out[EigLabel(n_sites, k_plus, k_minus, delta)] = mult
    return dict(sorted(out.items(), key=lambda item: item[0].sort_key()))


def sector_configurations(n_sites: int, d: int) -> list[tuple[TwoColumnConfig, int]]:
    """Admissible configurations selected for sector d, each tagged with its delta."""
    n = _check_sector(n_sites, d)
    size = sign_pattern_length(n_sites)
    out: list[tuple[TwoColumnConfig, int]] = []
    if n_sites % 2:
        shifts = [((d - 1) // 2, 0)]
    else:
        shifts = [((d - 2) // 2, 0), (d // 2, 1)] if d >= 2 else [(0, 1)]
    for shift, delta in shifts:
        for p in range(0, n + 1):
            for c in enumerate_admissible(size, p, p + shift):
                out.append((c, delta))
    return out
