"""Diagram calculus for the Temperley-Lieb algebra TL_N(beta).

A connectivity on N sites has 2N boundary points. Internally they are numbered
0-based: top points ``0..N-1`` from left to right, bottom points ``N..2N-1``
from left to right. A connectivity is stored as its pairing involution on
these 2N points.

The product ``a * b`` glues ``b`` on top of ``a``: the top points of the
product are the top points of ``b`` and the bottom points are those of ``a``.
This is the convention under which ``(a * b) v = a (b v)`` for link states
attached to the top of a diagram.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

MAX_ENUMERATION_SITES = 10
PRUNE_TOL = 1e-14


def _boundary_order(n: int) -> list[int]:
    # Circular order around the box: top left-to-right, then bottom right-to-left.
    return list(range(n)) + list(range(2 * n - 1, n - 1, -1))


def is_planar_pairing(pairing: tuple[int, ...]) -> bool:
    """Return True if ``pairing`` is a fixed-point-free, non-crossing involution."""
    size = len(pairing)
    if size % 2:
        return False
    for i, p in enumerate(pairing):
        if not (0 <= p < size) or p == i or pairing[p] != i:
            return False
    n = size // 2
    order = _boundary_order(n)
    position = {pt: k for k, pt in enumerate(order)}
    stack: list[int] = []
    for pt in order:
        partner = pairing[pt]
        if position[partner] > position[pt]:
            stack.append(pt)
        elif not stack or stack.pop() != partner:
            return False
    return not stack


@dataclass(frozen=True)
class Connectivity:
    """A planar pairing of the 2N boundary points of an N-site box."""

    n_sites: int
    pairing: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        if len(self.pairing) != 2 * self.n_sites:
            raise ValueError("pairing must have 2N entries")
        if not is_planar_pairing(tuple(self.pairing)):
            raise ValueError(f"not a planar pairing: {self.pairing}")

    @classmethod
    def identity(cls, n: int) -> Connectivity:
        return cls(n, tuple(list(range(n, 2 * n)) + list(range(n))))

    def top_arcs(self) -> list[tuple[int, int]]:
        """Arcs joining two top points, as 0-based (i, j) with i < j."""
        n = self.n_sites
        return [(i, p) for i, p in enumerate(self.pairing[:n]) if i < p < n]

    def bottom_arcs(self) -> list[tuple[int, int]]:
        n = self.n_sites
        return [(i - n, p - n) for i, p in enumerate(self.pairing) if n <= i < p]

    def through_lines(self) -> int:
        n = self.n_sites
        return sum(1 for i in range(n) if self.pairing[i] >= n)

    def mirror(self) -> Connectivity:
        """Reflect the diagram top to bottom."""
        n = self.n_sites
        swap = [i + n if i < n else i - n for i in range(2 * n)]
        new = [0] * (2 * n)
        for i, p in enumerate(self.pairing):
            new[swap[i]] = swap[p]
        return Connectivity(n, tuple(new))

    def pairing_one_based(self) -> tuple[int, ...]:
        return tuple(p + 1 for p in self.pairing)

    def __str__(self) -> str:
        return f"Connectivity(N={self.n_sites}, pairing={self.pairing_one_based()})"


def make_generator(n: int, i: int) -> Connectivity:
    """The generator U_i (1-based, 1 <= i <= N-1) as a connectivity."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range for N={n}")
    pairing = list(range(n, 2 * n)) + list(range(n))
    a, b = i - 1, i
    pairing[a], pairing[b] = b, a
    pairing[n + a], pairing[n + b] = n + b, n + a
    return Connectivity(n, tuple(pairing))


def compose(c1: Connectivity, c2: Connectivity) -> tuple[Connectivity, int]:
    """Product ``c1 * c2``: glue ``c2`` on top of ``c1``.

    Returns the resulting connectivity and the number of closed loops formed
    in the middle row.
    """
    if c1.n_sites != c2.n_sites:
        raise ValueError("size mismatch")
    n = c1.n_sites
    upper, lower = c2.pairing, c1.pairing
    # Points of the glued picture: ("u", k) in upper, ("l", k) in lower.
    # Upper bottom point n+k coincides with lower top point k.
    result = [-1] * (2 * n)
    visited_middle = [False] * n

    def follow(layer: str, pt: int) -> int:
        # Walk from an outer point until another outer point is reached.
        while True:
            if layer == "u":
                nxt = upper[pt]
                if nxt < n:
                    return nxt
                mid = nxt - n
                visited_middle[mid] = True
                layer, pt = "l", mid
            else:
                nxt = lower[pt]
                if nxt >= n:
                    return nxt
                visited_middle[nxt] = True
                layer, pt = "u", nxt + n

    for k in range(n):
        if result[k] < 0:
            end = follow("u", k)
            result[k] = end
            result[end] = k
    for k in range(n, 2 * n):
        if result[k] < 0:
            end = follow("l", k)
            result[k] = end
            result[end] = k

    loops = 0
    for start in range(n):
        if visited_middle[start]:
            continue
        loops += 1
        layer, pt = "l", start
        while True:
            visited_middle[pt if layer == "l" else pt - n] = True
            if layer == "l":
                nxt = lower[pt]
                layer, pt = "u", nxt + n
            else:
                nxt = upper[pt]
                layer, pt = "l", nxt - n
            if layer == "l" and pt == start:
                break
    return Connectivity(n, tuple(result)), loops


def _noncrossing_matchings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first = points[0]
    for k in range(1, len(points), 2):
        inside, outside = points[1:k], points[k + 1:]
        for left in _noncrossing_matchings(inside):
            for right in _noncrossing_matchings(outside):
                yield [(first, points[k])] + left + right


@functools.lru_cache(maxsize=None)
def _enumerate_cached(n: int) -> tuple[Connectivity, ...]:
    seen: dict[tuple[int, ...], Connectivity] = {}
    for matching in _noncrossing_matchings(_boundary_order(n)):
        pairing = [0] * (2 * n)
        for a, b in matching:
            pairing[a], pairing[b] = b, a
        key = tuple(pairing)
        if key not in seen:
            seen[key] = Connectivity(n, key)
    return tuple(sorted(seen.values(), key=lambda c: c.pairing))


def enumerate_connectivities(n: int) -> list[Connectivity]:
    """All planar connectivities on N sites (Catalan many), sorted by pairing."""
    if n < 1:
        raise ValueError("N must be positive")
    if n > MAX_ENUMERATION_SITES:
        raise ValueError(f"N={n} exceeds the enumeration guard {MAX_ENUMERATION_SITES}")
    return list(_enumerate_cached(n))


@dataclass(frozen=True)
class TLElement:
    """A finite linear combination of connectivities at loop weight ``beta``."""

    n_sites: int
    beta: complex
    terms: Mapping[Connectivity, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        pruned = {}
        for c, coeff in self.terms.items():
            if c.n_sites != self.n_sites:
                raise ValueError("all terms must share n_sites")
            coeff = complex(coeff)
            if abs(coeff) > PRUNE_TOL:
                pruned[c] = coeff
        object.__setattr__(self, "terms", pruned)

    @classmethod
    def from_connectivity(cls, c: Connectivity, beta: complex, coeff: complex = 1.0) -> TLElement:
        return cls(c.n_sites, beta, {c: coeff})

    @classmethod
    def identity(cls, n: int, beta: complex) -> TLElement:
        return cls.from_connectivity(Connectivity.identity(n), beta)

    @classmethod
    def generator(cls, n: int, i: int, beta: complex) -> TLElement:
        return cls.from_connectivity(make_generator(n, i), beta)

    @classmethod
    def zero(cls, n: int, beta: complex) -> TLElement:
        return cls(n, beta, {})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: TLElement) -> None:
        if self.n_sites != other.n_sites:
            raise ValueError("size mismatch")
        if self.beta != other.beta:
            raise ValueError("beta mismatch")

    def __add__(self, other: TLElement) -> TLElement:
        self._check(other)
        terms = dict(self.terms)
        for c, coeff in other.terms.items():
            terms[c] = terms.get(c, 0) + coeff
        return TLElement(self.n_sites, self.beta, terms)

    def __sub__(self, other: TLElement) -> TLElement:
        return self + (-1) * other

    def __rmul__(self, scalar: complex) -> TLElement:
        return TLElement(self.n_sites, self.beta, {c: scalar * v for c, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TLElement):
            return multiply(self, other)
        return other * self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TLElement):
            return NotImplemented
        if self.n_sites != other.n_sites or self.beta != other.beta:
            return False
        diff = self - other
        return diff.is_zero()

    def __hash__(self) -> int:
        return hash((self.n_sites, self.beta, frozenset(self.terms)))

    def allclose(self, other: TLElement, tol: float = 1e-12) -> bool:
        self._check(other)
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(c, 0) - other.terms.get(c, 0)) <= tol for c in keys)


def multiply(e1: TLElement, e2: TLElement) -> TLElement:
    """Bilinear product; each composed term is weighted by beta**loops."""
    e1._check(e2)
    beta = e1.beta
    terms: dict[Connectivity, complex] = {}
    for c1, a in e1.terms.items():
        for c2, b in e2.terms.items():
            c, loops = compose(c1, c2)
            weight = a * b * (beta**loops if loops else 1)
            if weight == 0:
                continue
            terms[c] = terms.get(c, 0) + weight
    return TLElement(e1.n_sites, beta, terms)
