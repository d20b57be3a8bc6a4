from math import comb, cos, pi, sin

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from tlpolymer.xx_chain import (
    b_coefficient,
    b_coefficient_numeric,
    basis_index,
    caln_matrix,
    caln_spectrum,
    chebyshev_det,
    divided_power_mode_form,
    e_matrix,
    fock_sector_count,
    fock_state,
    fock_words,
    FockWord,
    hxxz_from_tl,
    hxxz_matrix,
    jordan_pair,
    jordan_wigner_c,
    magnetization,
    mode_hamiltonian,
    mode_labels,
    mode_operators,
    sector_indices,
    site_operator,
    sz_matrix,
    uq_divided_powers,
    uq_generators,
    vacuum,
)

GENERIC_Q = [1j, np.exp(1j * pi / 3), np.exp(1j * pi / 5), 1.3]


def dense(m):
    return m.toarray() if sp.issparse(m) else np.asarray(m)


def comm(a, b):
    return dense(a @ b - b @ a)


def anti(a, b):
    return dense(a @ b + b @ a)


def test_basis_conventions():
    assert basis_index("uuu") == 0
    assert basis_index("udd") == 3
    np.testing.assert_array_equal(magnetization(2), [1, 0, 0, -1])
    assert list(sector_indices(3, 1)) == [1, 2, 4]
    assert vacuum(3)[0] == 1


def test_site_guards():
    with pytest.raises(ValueError):
        site_operator(15, 1, np.eye(2))
    with pytest.raises(ValueError):
        e_matrix(4, 4, 1j)


@pytest.mark.parametrize("q", [1j, np.exp(1j * pi / 3)])
@pytest.mark.parametrize("n", range(3, 7))
def test_e_matrices_satisfy_tl(n, q):
    beta = -(q + 1 / q)
    es = [e_matrix(n, j, q) for j in range(1, n)]
    for j, e in enumerate(es):
        np.testing.assert_allclose(dense(e @ e), dense(beta * e), atol=1e-12)
        if j + 1 < len(es):
            np.testing.assert_allclose(dense(e @ es[j + 1] @ e), dense(e), atol=1e-12)
            np.testing.assert_allclose(dense(es[j + 1] @ e @ es[j + 1]), dense(es[j + 1]), atol=1e-12)
        for k in range(j + 2, len(es)):
            np.testing.assert_allclose(comm(e, es[k]), 0, atol=1e-12)


def test_e_squares_vanish_at_i():
    e = e_matrix(4, 2, 1j)
    assert np.abs(dense(e @ e)).max() < 1e-15


@pytest.mark.parametrize("q", [1j, np.exp(1j * pi / 3)])
@pytest.mark.parametrize("n", range(2, 7))
def test_hamiltonian_from_tl(n, q):
    np.testing.assert_allclose(dense(hxxz_matrix(n, q)), dense(hxxz_from_tl(n, q)), atol=1e-12)


@pytest.mark.parametrize("n", range(2, 9))
def test_hamiltonian_conserves_sz(n):
    assert np.abs(comm(hxxz_matrix(n, 1j), sz_matrix(n))).max() < 1e-12


def test_xxx_limit_is_hermitian():
    h = dense(hxxz_matrix(5, 1.0))
    np.testing.assert_allclose(h, h.conj().T, atol=1e-14)


@pytest.mark.parametrize("n", range(1, 9))
def test_jordan_wigner_anticommutators(n):
    ops = [jordan_wigner_c(n, j) for j in range(1, n + 1)]
    dim = 2**n
    for j, (c, cd) in enumerate(ops):
        assert np.isrealobj(dense(c))
        for k, (c2, cd2) in enumerate(ops):
            np.testing.assert_array_equal(anti(cd, c2), np.eye(dim) if j == k else 0)
            np.testing.assert_array_equal(anti(c, c2), 0)
            np.testing.assert_array_equal(anti(cd, cd2), 0)


def test_single_fermion_has_one_down_spin():
    v = jordan_wigner_c(4, 2)[0] @ vacuum(4)
    assert np.flatnonzero(v).tolist() == [basis_index("uduu")]


@pytest.mark.parametrize("n", range(2, 9))
def test_hamiltonian_is_fermion_bilinear(n):
    m = caln_matrix(n)
    ops = [jordan_wigner_c(n, j) for j in range(1, n + 1)]
    dim = 2**n
    h = sp.csr_matrix((dim, dim), dtype=complex)
    for a in range(n):
        for b in range(n):
            if m[a, b] != 0:
                h = h + m[a, b] * (ops[a][1] @ ops[b][0])
    np.testing.assert_allclose(dense(h), dense(hxxz_matrix(n, 1j)), atol=1e-12)


@pytest.mark.parametrize("n, values", [(3, [-1, 0, 1]), (4, [-np.sqrt(2), 0, 0, np.sqrt(2)])])
def test_one_body_spectrum(n, values):
    np.testing.assert_allclose(caln_spectrum(n).eigenvalues, values, atol=1e-14)


def test_one_body_jordan_cell_even():
    m = caln_matrix(4)
    assert np.linalg.matrix_rank(m, tol=1e-10) == 3
    assert np.linalg.matrix_rank(m @ m, tol=1e-10) == 2


@pytest.mark.parametrize("length", range(1, 13))
@pytest.mark.parametrize("v", [0.3, 1.1, 2.5])
def test_chebyshev_determinant(length, v):
    k = np.diag(np.ones(length - 1), 1) + np.diag(np.ones(length - 1), -1)
    direct = np.linalg.det(k - 2 * cos(v) * np.eye(length))
    closed = (-1) ** length * sin((length + 1) * v) / sin(v)
    assert chebyshev_det(length, 2 * cos(v)) == pytest.approx(direct, abs=1e-9)
    assert direct == pytest.approx(closed, abs=1e-9)


@pytest.mark.parametrize("n", range(2, 11))
def test_mode_vectors(n):
    spectrum = caln_spectrum(n)
    m = caln_matrix(n)
    for mode in spectrum.modes:
        if mode.index > 0:
            np.testing.assert_allclose(m @ mode.g_vec, mode.eigenvalue * mode.g_vec, atol=1e-12)
            assert mode.g_vec @ mode.g_vec == pytest.approx(1, abs=1e-10)
            x = np.exp(1j * pi * mode.index / n)
            alpha, gamma = -(1 + 1j / x), 1 + 1j * x
            assert alpha * gamma == pytest.approx(-1j * 2 * cos(pi * mode.index / n), abs=1e-12)
    if n % 2:
        zero = {md.index: md for md in spectrum.modes}[0].g_vec
        j = np.arange(1, n + 1)
        np.testing.assert_allclose(zero, 1j ** (j + 1))
        assert zero @ zero == pytest.approx(1)


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_jordan_pair_constants(n):
    pair = jordan_pair(n)
    w1, w2 = pair.w1_vec, pair.w2_vec
    assert w1 @ w1 == -n * (n - 4) / 4
    assert w2 @ w2 == -n * n / 4
    assert w1 @ w2 == -n * (n - 2) / 4
    assert pair.k_prime * pair.beta1 == pytest.approx(-0.5)
    assert pair.beta2 / pair.beta1 == pytest.approx(-(n - 4) / n)
    np.testing.assert_allclose(caln_matrix(n) @ pair.w_vec, pair.zero_vec, atol=1e-12)
    np.testing.assert_allclose(caln_matrix(n) @ pair.zero_vec, 0, atol=1e-12)


def test_jordan_pair_needs_even():
    with pytest.raises(ValueError):
        jordan_pair(5)


@pytest.mark.parametrize("n", range(2, 11))
def test_mode_anticommutators(n):
    ops = mode_operators(n)
    dim = 2**n
    for k, (a, _, _) in ops.items():
        for l, (a2, b2, _) in ops.items():
            expected = np.eye(dim) if k == l else 0
            assert np.abs(anti(b2, a) - expected).max() < 1e-10
            assert np.abs(anti(a, a2)).max() < 1e-10


@pytest.mark.parametrize("n", range(2, 9))
def test_mode_hamiltonian(n):
    np.testing.assert_allclose(dense(mode_hamiltonian(n)), dense(hxxz_matrix(n, 1j)), atol=1e-10)


@pytest.mark.parametrize("n", [4, 6])
def test_transposed_pairs(n):
    ops = mode_operators(n)
    np.testing.assert_allclose(dense(ops[0][0]).T, dense(ops[-1][1]), atol=1e-14)
    np.testing.assert_allclose(dense(ops[-1][0]).T, dense(ops[0][1]), atol=1e-14)
    np.testing.assert_allclose(dense(ops[1][0]).T, dense(ops[1][1]), atol=1e-14)


def test_mode_labels():
    assert mode_labels(5) == [1, 2, 3, 4, 0]
    assert mode_labels(6) == [1, 2, 4, 5, -1, 0]


def test_fock_word_validation():
    with pytest.raises(ValueError):
        FockWord(6, (3,))
    with pytest.raises(ValueError):
        FockWord(5, (1, 1))
    assert FockWord(6, (0, 2, -1)).modes == (2, -1, 0)


def test_vacuum_word():
    word = FockWord(4, ())
    assert word.eigenvalue == 0
    np.testing.assert_array_equal(fock_state(4, word), vacuum(4))
    assert np.abs(hxxz_matrix(4, 1j) @ vacuum(4)).max() == 0


@pytest.mark.parametrize("modes, value", [((1,), -1.0), ((2,), 1.0), ((1, 2), 0.0), ((0,), 0.0)])
def test_three_site_words(modes, value):
    word = FockWord(3, modes)
    v = fock_state(3, word)
    assert word.eigenvalue == pytest.approx(value, abs=1e-15)
    np.testing.assert_allclose(hxxz_matrix(3, 1j) @ v, value * v, atol=1e-12)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_generalized_words(n):
    h = dense(hxxz_matrix(n, 1j))
    count = 0
    for k in range(n + 1):
        for word in fock_words(n, k):
            v = fock_state(n, word)
            shifted = h - word.eigenvalue * np.eye(len(h))
            if word.is_generalized:
                count += 1
                assert np.linalg.norm(shifted @ v) > 1e-6
                assert np.linalg.norm(shifted @ shifted @ v) < 1e-10
            else:
                assert np.linalg.norm(shifted @ v) < 1e-10
    assert count == 2 ** (n - 2)


@pytest.mark.parametrize("n", range(1, 13))
def test_fock_counts(n):
    for k in range(n + 1):
        assert len(fock_words(n, k)) == fock_sector_count(n, k) == comb(n, k)


@pytest.mark.parametrize("q", [1j, np.exp(1j * pi / 5)])
@pytest.mark.parametrize("n", range(2, 7))
def test_quantum_group_commutes_with_tl(n, q):
    s_plus, s_minus, q_sz = uq_generators(n, q)
    np.testing.assert_allclose(dense(s_minus), dense(s_plus).T)
    for j in range(1, n):
        e = e_matrix(n, j, q)
        for g in (s_plus, s_minus, q_sz):
            assert np.abs(comm(g, e)).max() < 1e-12


@pytest.mark.parametrize("n", range(2, 9))
def test_nilpotent_at_i(n):
    s_plus, s_minus, _ = uq_generators(n, 1j)
    assert np.abs(dense(s_plus @ s_plus)).max() < 1e-12
    assert np.abs(dense(s_minus @ s_minus)).max() < 1e-12


@pytest.mark.parametrize("n", range(2, 9))
def test_divided_powers_are_symmetries(n):
    s2, s2m = uq_divided_powers(n)
    h = hxxz_matrix(n, 1j)
    assert np.abs(dense(s2)).max() > 0.5
    assert np.abs(comm(s2, h)).max() < 1e-10
    assert np.abs(comm(s2m, h)).max() < 1e-10
    for j in range(1, n):
        assert np.abs(comm(s2, e_matrix(n, j, 1j))).max() < 1e-12


@pytest.mark.parametrize("n", range(2, 9))
def test_divided_power_mode_form(n):
    np.testing.assert_allclose(dense(divided_power_mode_form(n)), dense(uq_divided_powers(n)[0]), atol=1e-10)


@pytest.mark.parametrize("n", [4, 5])
def test_divided_power_is_limit(n):
    # (S^+)^2 / [2]_q vanishes as 0/0 at q = i; average the limit from both sides.
    eta = 1e-5
    total = 0
    for sign in (1, -1):
        q = 1j * np.exp(1j * sign * eta)
        s_plus = uq_generators(n, q)[0]
        total = total + dense(s_plus @ s_plus) / (q + 1 / q)
    np.testing.assert_allclose(total / 2, dense(uq_divided_powers(n)[0]), atol=1e-8)


@pytest.mark.parametrize("n, k1, k2, value", [(5, 2, 3, -1j), (5, 1, 3, 0), (6, 0, -1, 1), (6, -1, 0, -1), (6, 1, 5, -1j)])
def test_b_coefficient(n, k1, k2, value):
    assert b_coefficient(n, k1, k2) == value


@pytest.mark.parametrize("n", [5, 6])
def test_b_coefficient_numeric(n):
    for k1 in mode_labels(n):
        for k2 in mode_labels(n):
            assert b_coefficient_numeric(n, k1, k2) == pytest.approx(b_coefficient(n, k1, k2), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=7), st.floats(min_value=0.1, max_value=3.0))
def test_quantum_group_on_unit_circle(n, angle):
    q = np.exp(1j * angle)
    if abs(q + 1 / q) < 1e-6:
        return
    s_plus, _, q_sz = uq_generators(n, q)
    for j in range(1, n):
        e = e_matrix(n, j, q)
        assert np.abs(comm(s_plus, e)).max() < 1e-10
        assert np.abs(comm(q_sz, e)).max() < 1e-10
