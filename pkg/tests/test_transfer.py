from math import pi, sin

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tlpolymer.link_rep import rho_matrix, sector_offsets
from tlpolymer.transfer import (
    SignPattern,
    candidate_d,
    candidate_h,
    double_row_element,
    double_row_matrix,
    double_row_sector,
    hamiltonian_element,
    inversion_scalar,
    sign_pattern_length,
)


@pytest.mark.parametrize("n, size", [(1, 0), (2, 0), (3, 1), (4, 1), (5, 2), (8, 3), (17, 8)])
def test_sign_pattern_length(n, size):
    assert sign_pattern_length(n) == size


def test_sign_pattern_validation():
    with pytest.raises(ValueError):
        SignPattern(5, (1,), (1, 1))
    with pytest.raises(ValueError):
        SignPattern(5, (1, 0), (1, 1))
    assert len(SignPattern.all_patterns(5)) == 16


def test_two_sites_closed_form():
    # Basis order (d=2 then d=0); the defect pair is closed with weight sin 2u.
    u = 0.3
    np.testing.assert_allclose(double_row_matrix(2, u), [[1, 0], [sin(2 * u), 1]], atol=1e-14)


def tile_expansion(n, u):
    """Independent oracle: sum over all 2^(2N) tile choices with union-find strand tracing."""
    import itertools

    from tlpolymer.link_rep import rho_matrix
    from tlpolymer.tl_algebra import Connectivity, TLElement

    def edges(row, k):
        if row == 0:
            return {"b": ("bot", k), "t": ("mid", k), "l": ("vl", k), "r": ("vl", k + 1)}
        return {"b": ("mid", k), "t": ("top", k), "l": ("vu", k), "r": ("vu", k + 1)}

    faces = [(0, k) for k in range(n)] + [(1, k) for k in range(n)]
    weights = {0: (np.cos(u), np.sin(u)), 1: (np.sin(u), np.cos(u))}
    terms = {}
    for choice in itertools.product((0, 1), repeat=2 * n):
        adj = {}

        def link(a, b):
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)

        weight = 1.0
        for (row, k), turn in zip(faces, choice):
            e = edges(row, k)
            weight *= weights[row][turn]
            pairs = (("b", "l"), ("t", "r")) if turn else (("b", "r"), ("l", "t"))
            for s, t in pairs:
                link(e[s], e[t])
        link(("vl", 0), ("vu", 0))
        link(("vl", n), ("vu", n))
        outer = [v for v in adj if v[0] in ("bot", "top")]
        seen, pairing = set(), [0] * (2 * n)
        for start in outer:
            if start in seen:
                continue
            prev, cur = None, start
            seen.add(cur)
            while True:
                nxt = [x for x in adj[cur] if x != prev] if prev is not None else adj[cur]
                prev, cur = cur, nxt[0]
                seen.add(cur)
                if cur[0] in ("bot", "top"):
                    break
            point = lambda v: v[1] if v[0] == "top" else n + v[1]
            pairing[point(start)], pairing[point(cur)] = point(cur), point(start)
        if len(seen) < len(adj):
            continue
        c = Connectivity(n, tuple(pairing))
        terms[c] = terms.get(c, 0) + weight
    element = TLElement(n, 0, {c: w / np.sin(2 * u) for c, w in terms.items()})
    return rho_matrix(element, n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("u", [0.3, 1.1])
def test_against_tile_expansion(n, u):
    np.testing.assert_allclose(double_row_matrix(n, u), tile_expansion(n, u), atol=1e-12)


def test_three_sites_frozen():
    # Frozen output of an independent brute-force expansion over all 2^(2N) tile choices.
    expected = [
        [0.92029471931, 0, 0],
        [0.724053034776, 1.07970528069, 0.564642473395],
        [0.724053034776, 0.564642473395, 1.07970528069],
    ]
    np.testing.assert_allclose(double_row_matrix(3, 0.3), expected, atol=1e-11)


def test_endpoint_is_identity():
    for n in (1, 3, 4):
        dim = len(double_row_matrix(n, 0.0))
        np.testing.assert_array_equal(double_row_matrix(n, 0.0), np.eye(dim))
        np.testing.assert_allclose(double_row_matrix(n, 1e-7), np.eye(dim), atol=1e-5)
    with pytest.raises(ValueError):
        double_row_element(3, 0.0)


def test_size_guard():
    with pytest.raises(ValueError):
        double_row_element(11, 0.3)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("u", [0.1, 0.3, 0.7])
def test_inversion_identity(n, u):
    prod = double_row_matrix(n, u) @ double_row_matrix(n, u + pi / 2)
    residual = np.linalg.norm(prod - inversion_scalar(n, u) * np.eye(len(prod)), np.inf)
    assert residual < 1e-10


@pytest.mark.parametrize("u", [0.2, pi / 4, 0.9])
def test_inversion_scalar_matches_ratio(u):
    for n in range(1, 9):
        c, s = np.cos(u) ** 2, np.sin(u) ** 2
        if abs(c - s) > 1e-6:
            expected = ((c**n - s**n) / (c - s)) ** 2
            assert inversion_scalar(n, u) == pytest.approx(expected, rel=1e-12)
    assert inversion_scalar(4, pi / 4) == pytest.approx((4 * 0.5**3) ** 2)


@pytest.mark.parametrize("n", range(2, 8))
def test_hamiltonian_is_derivative_at_zero(n):
    eps = 1e-6
    fd = (double_row_matrix(n, eps) - double_row_matrix(n, 0.0)) / (2 * eps)
    np.testing.assert_allclose(fd, rho_matrix(hamiltonian_element(n), n), atol=1e-4)


@pytest.mark.parametrize("n", range(1, 8))
def test_transfer_respects_sectors(n):
    m = double_row_matrix(n, 0.4)
    for d, sl in sector_offsets(n).items():
        np.testing.assert_allclose(m[sl, sl], double_row_sector(n, 0.4, d), atol=1e-13)


@pytest.mark.parametrize("n", range(1, 8))
def test_eigenvalues_are_candidates(n):
    # Sector blocks are diagonalizable; the full matrix has cells tying sectors together.
    cands = np.array([candidate_d(n, 0.2, s) for s in SignPattern.all_patterns(n)])
    for d in range(n % 2, n + 1, 2):
        for ev in np.linalg.eigvals(double_row_sector(n, 0.2, d)):
            assert np.min(np.abs(cands - ev)) < 1e-9


@pytest.mark.parametrize("n", range(2, 9))
def test_hamiltonian_eigenvalues_are_candidates(n):
    cands = np.array([candidate_h(n, s) for s in SignPattern.all_patterns(n)])
    m = rho_matrix(hamiltonian_element(n), n)
    for sl in sector_offsets(n).values():
        for ev in np.linalg.eigvals(m[sl, sl]):
            assert np.min(np.abs(cands - ev)) < 1e-9


def test_candidate_two_sites():
    assert candidate_d(2, 0.3, SignPattern(2, (), ())) == 1.0


coupling = st.floats(min_value=0.05, max_value=1.5).filter(lambda u: abs(sin(2 * u)) > 1e-3)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=6), coupling, coupling)
def test_commuting_family(n, u, v):
    a, b = double_row_matrix(n, u), double_row_matrix(n, v)
    np.testing.assert_allclose(a @ b, b @ a, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=6), coupling)
def test_crossing_symmetry(n, u):
    np.testing.assert_allclose(double_row_matrix(n, u), double_row_matrix(n, pi / 2 - u), rtol=0, atol=1e-12)


@pytest.mark.parametrize("n", range(3, 9))
def test_hamiltonian_candidates_from_taylor(n):
    eps = 1e-5
    for s in SignPattern.all_patterns(n):
        assert candidate_d(n, 0.0, s) == pytest.approx(1.0, abs=1e-12)
        slope = (candidate_d(n, eps, s) - candidate_d(n, -eps, s)) / (4 * eps)
        assert slope == pytest.approx(candidate_h(n, s), abs=1e-6)
