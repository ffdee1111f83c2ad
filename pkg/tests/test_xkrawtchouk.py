import math

import numpy as np
import pytest
import scipy.linalg

from pstlab.errors import ValidationError
from pstlab.orthopoly import KrawtchoukParams, krawtchouk_coefficients, krawtchouk_sum
from pstlab.pst import certify_endpoint_pst
from pstlab.spectral import JacobiMatrix
from pstlab.xkrawtchouk import (
    build_band_hamiltonian,
    build_family,
    degree_set,
    eigenvalue_formula,
    endpoint_gap_witness,
    endpoint_max_probability,
    exceptional_weight,
    member,
    perfect_return_time,
    return_magnitudes,
    x_amplitudes,
)

CASES = [(N, p) for N in (1, 2, 4, 7, 10) for p in (0.3, 0.5, 0.7)]


@pytest.fixture(scope="module")
def walk4():
    fam = build_family(4, 0.5)
    return fam, build_band_hamiltonian(fam), fam.eigenvector_table()


def gram(fam):
    G = (fam.values * fam.weights_hat) @ fam.values.T
    h = np.sqrt(np.diag(G))
    return G / np.outer(h, h)


def test_smallest_family():
    fam = build_family(1, 0.5)
    assert fam.degree_set == (0, 1, 4)
    assert fam.grid.tolist() == [-1, 0, 1]
    np.testing.assert_allclose(gram(fam), np.eye(3), atol=1e-12)


@pytest.mark.parametrize("N, p", CASES)
def test_orthogonality(N, p):
    fam = build_family(N, p)
    assert len(fam.degree_set) == fam.grid.size == N + 2
    np.testing.assert_allclose(gram(fam), np.eye(N + 2), atol=1e-8)
    assert fam.orthogonality_residual <= 1e-8


def test_weight_positive_and_formula():
    N, p = 4, 0.5
    for x in range(-1, N + 1):
        w = exceptional_weight(x, N, p)
        assert w > 0
        binom = math.comb(N + 1, x + 1) * p ** (x + 1) * (1 - p) ** (N - x)
        phi = krawtchouk_sum(2, x - N - 1, p, -N - 2) * krawtchouk_sum(2, x - N, p, -N - 2)
        assert w == pytest.approx(binom / phi, rel=1e-14)
    assert exceptional_weight(-2, N, p) == 0.0


@pytest.mark.parametrize("N", [1, 3, 5])
def test_member_degrees(N):
    p = 0.4
    for s in degree_set(N):
        d = s + 2
        x = np.arange(d + 2, dtype=float) - 3.5
        diffs = member(s, x, N, p)
        for _ in range(d):
            diffs = np.diff(diffs)
        # d-th difference is d! times the leading coefficient, the next is zero
        assert abs(diffs[0]) > 1e-8 * math.factorial(d)
        assert abs(diffs[1] - diffs[0]) <= 1e-6 * abs(diffs[0])


def test_member_rejects_gap_label():
    with pytest.raises(ValidationError):
        member(5, [0.0], 4, 0.5)


@pytest.mark.parametrize("N, p", [(0, 0.5), (3, 0.0), (3, 1.0), (2.5, 0.5)])
def test_family_validation(N, p):
    with pytest.raises(ValidationError):
        build_family(N, p)


def test_band_structure(walk4):
    fam, ham, _ = walk4
    H = ham.entries
    assert H.shape == (6, 6)
    assert np.array_equal(H, H.T)
    i, j = np.indices(H.shape)
    assert np.max(np.abs(H[np.abs(i - j) > 3])) <= 1e-10
    assert ham.off_band_mass <= 1e-10
    # last vertex couples only to vertex N
    assert ham.last_row_support == (4,)
    assert ham.vertex_labels == (0, 1, 2, 3, 4, 7)


def test_spectrum_formula_n4(walk4):
    _, ham, _ = walk4
    ref = np.array([-krawtchouk_sum(3, x - 4, 0.5, -5) for x in range(-1, 5)])
    np.testing.assert_allclose(ham.spectrum_formula, ref, atol=1e-12)
    np.testing.assert_allclose(np.linalg.eigvalsh(ham.entries), np.sort(ref), atol=1e-8)


@pytest.mark.parametrize("N, p", CASES)
def test_spectrum_and_eigenvectors(N, p):
    fam = build_family(N, p)
    ham = build_band_hamiltonian(fam)
    lam = np.array([eigenvalue_formula(x, N, p) for x in fam.grid])
    np.testing.assert_allclose(np.linalg.eigvalsh(ham.entries), np.sort(lam), atol=1e-8)
    T = fam.eigenvector_table().entries
    np.testing.assert_allclose(T.T @ T, np.eye(N + 2), atol=1e-8)
    resid = ham.entries @ T - T * lam
    assert np.max(np.abs(resid)) <= 1e-8
    i, j = np.indices(ham.entries.shape)
    assert np.max(np.abs(ham.entries[np.abs(i - j) > 3]), initial=0.0) <= 1e-8


def test_amplitudes_match_expm(walk4, rng):
    fam, ham, table = walk4
    for _ in range(20):
        n, m = rng.integers(1, 7, 2)
        t = rng.uniform(0, 10)
        c = x_amplitudes(ham, table, n, m, [t]).values[0]
        U = scipy.linalg.expm(-1j * t * ham.entries)
        assert abs(c - U[m - 1, n - 1]) < 1e-9


def test_amplitudes_at_zero(walk4):
    _, ham, table = walk4
    for n in range(1, 7):
        assert x_amplitudes(ham, table, n, n, [0.0]).values[0] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValidationError):
        x_amplitudes(ham, table, 0, 1, [0.0])
    with pytest.raises(ValidationError):
        x_amplitudes(ham, table, 1, 7, [0.0])


def test_perfect_return(walk4):
    _, ham, table = walk4
    T, mag = perfect_return_time(ham, table)
    assert T == pytest.approx(4 * math.pi / 3)
    assert mag >= 1 - 1e-6
    assert np.min(return_magnitudes(ham, table, T)) >= 1 - 1e-6


def test_no_endpoint_transfer(walk4):
    _, ham, table = walk4
    T, _ = perfect_return_time(ham, table)
    _, best = endpoint_max_probability(ham, table, 8 * T)
    assert best < 1 - 1e-3
    # odd gap ratios alone do not give transfer off a path
    assert endpoint_gap_witness(ham).odd_integers == (11, 5, 3, 5, 11)


@pytest.mark.parametrize("N", [2, 4, 6])
def test_contrast_with_classical_chain(N):
    classical = JacobiMatrix(krawtchouk_coefficients(KrawtchoukParams(0.5, N + 1)))
    assert certify_endpoint_pst(classical).has_pst
    fam = build_family(N, 0.5)
    ham = build_band_hamiltonian(fam)
    table = fam.eigenvector_table()
    T, _ = perfect_return_time(ham, table)
    _, best = endpoint_max_probability(ham, table, 8 * T, points=4096)
    assert best < 1 - 1e-3
