import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import unweighted_path
from oracles import mirror_chain_from_integers, odd_ratio_exists
from pstlab.errors import ValidationError
from pstlab.orthopoly import evaluate_ops
from pstlab.pst import (
    PST_FIDELITY,
    certify_endpoint_pst,
    endpoint_polynomial_identity,
    ese_scan,
    gap_condition,
    grid_max_fidelity,
    has_ese,
    interior_pst,
)
from pstlab.spectral import JacobiMatrix, eigendecompose, jacobi_from_spectrum, mirror_weights
from pstlab.walk import amplitudes, transfer_probability

seeds = st.integers(0, 2**32 - 1)


def mirror_spectrum_chain(x):
    x = np.asarray(x, dtype=float)
    return jacobi_from_spectrum(x, mirror_weights(x))


def perturbed_krawtchouk(kraw5, factor=1.1):
    a = kraw5.offdiag.copy()
    a[0] *= factor
    return JacobiMatrix.from_arrays(a, kraw5.diag)


# gap condition


def test_gap_integer_ladder():
    w = gap_condition([0, 1, 2, 3, 4])
    assert w.odd_integers == (1, 1, 1, 1)
    assert w.base_time == pytest.approx(math.pi)


def test_gap_single():
    w = gap_condition([-1, 1])
    assert w.odd_integers == (1,)
    assert w.base_time == pytest.approx(math.pi / 2)


def test_gap_even_ratio_rejected():
    assert gap_condition([0, 1, 3]) is None


def test_gap_mixed_odd():
    w = gap_condition([0, 1, 4, 5])
    assert w.odd_integers == (1, 3, 1)
    assert w.base_time == pytest.approx(math.pi)


def test_gap_non_integer_rational():
    w = gap_condition([0.0, 0.5, 2.0])
    assert w.odd_integers == (1, 3)
    assert w.base_time == pytest.approx(2 * math.pi)


def test_gap_irrational():
    assert gap_condition([0.0, 1.0, 1.0 + math.sqrt(2)]) is None


def test_gap_max_denominator():
    x = [0.0, 1.0, 1.0 + 101 / 103]
    assert gap_condition(x) is None
    w = gap_condition(x, max_denominator=200)
    assert w.odd_integers == (103, 101)


@pytest.mark.parametrize("bad", [[1.0], [0.0, 0.0], [1.0, 0.0]])
def test_gap_validation(bad):
    with pytest.raises(ValidationError):
        gap_condition(bad)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 9), seeds)
def test_gap_matches_brute_force(N, seed):
    x = mirror_chain_from_integers(np.random.default_rng(seed), N)
    gaps = np.diff(x)
    w = gap_condition(x)
    ref = odd_ratio_exists(gaps, bound=199)
    assert (w is not None) == (ref is not None)
    if w is not None:
        # minimal witness, so it coincides with the smallest brute-force one
        assert w.odd_integers[0] == ref[0]
        assert list(w.odd_integers) == ref[1].tolist()
        assert all(o % 2 == 1 and o > 0 for o in w.odd_integers)
        np.testing.assert_allclose(w.base_time * gaps, np.array(w.odd_integers) * math.pi)


# endpoint certification


def test_certify_krawtchouk(kraw5):
    r = certify_endpoint_pst(kraw5)
    assert r.has_pst and r.mirror_symmetric and r.gap_condition
    assert r.transfer_time == pytest.approx(math.pi)
    assert r.fidelity_at_t0 >= 1 - 1e-12
    assert r.pair == (0, 4)


@pytest.mark.parametrize("N, t0", [(2, math.pi / 2), (3, math.pi / math.sqrt(2))])
def test_certify_short_paths(N, t0):
    r = certify_endpoint_pst(unweighted_path(N))
    assert r.has_pst
    assert r.transfer_time == pytest.approx(t0)


def test_refute_path_four():
    r = certify_endpoint_pst(unweighted_path(4))
    assert not r.has_pst
    assert not r.gap_condition and r.mirror_symmetric
    assert r.grid_max_fidelity is not None and r.grid_max_fidelity < 1.0


def test_single_site_has_no_pst():
    r = certify_endpoint_pst(JacobiMatrix.from_arrays([], [0.0]))
    assert not r.has_pst and r.transfer_time is None


def test_gap_without_mirror(kraw5):
    # integer spectrum but binomial weights broken: gap holds, mirror fails
    x = np.arange(5.0)
    w = np.array([1, 3, 6, 4, 2], dtype=float)
    J = jacobi_from_spectrum(x, w / w.sum())
    r = certify_endpoint_pst(J)
    assert r.gap_condition and not r.mirror_symmetric and not r.has_pst
    assert r.fidelity_at_t0 < 1 - 1e-3


def test_report_dict_round_trip(kraw5):
    d = certify_endpoint_pst(kraw5).to_dict()
    assert d["pair"] == [0, 4]
    assert d["witness"]["odd_integers"] == [1, 1, 1, 1]


@pytest.mark.parametrize("s", [0.5, 2.0, math.pi])
def test_scale_covariance(kraw5, s):
    r = certify_endpoint_pst(kraw5.scaled(s))
    assert r.has_pst
    assert r.transfer_time == pytest.approx(math.pi / s, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), seeds)
def test_kay_equivalence(N, seed):
    x = mirror_chain_from_integers(np.random.default_rng(seed), N)
    J = mirror_spectrum_chain(x)
    r = certify_endpoint_pst(J)
    assert r.mirror_symmetric
    assert r.has_pst == (gap_condition(x) is not None)
    if r.has_pst:
        assert transfer_probability(J, 0, N - 1, r.transfer_time) >= PST_FIDELITY
    else:
        assert r.grid_max_fidelity < PST_FIDELITY


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 10), seeds)
def test_non_mirror_chains_never_transfer(N, seed):
    rng = np.random.default_rng(seed)
    x = mirror_chain_from_integers(rng, N)
    w = rng.uniform(0.1, 1.0, N)
    J = jacobi_from_spectrum(x, w / w.sum())
    d = eigendecompose(J)
    _, best = grid_max_fidelity(d, 0, N - 1, 2 * math.pi * 99 / np.min(np.diff(x)))
    assert best < 1 - 1e-6


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), seeds)
def test_forward_direction_polynomial_relation(N, seed):
    x = mirror_chain_from_integers(np.random.default_rng(seed), N)
    J = mirror_spectrum_chain(x)
    r = certify_endpoint_pst(J)
    if not r.has_pst:
        return
    d = eigendecompose(J)
    P = evaluate_ops(J.coeffs, d.eigenvalues).values
    lhs = P[N - 1]
    rhs = np.exp(-1j * r.phase) * np.exp(1j * r.transfer_time * d.eigenvalues) * P[0]
    assert np.max(np.abs(lhs - rhs)) <= 1e-7
    assert endpoint_polynomial_identity(J, r)


def test_polynomial_identity_krawtchouk(kraw5):
    r = certify_endpoint_pst(kraw5)
    assert endpoint_polynomial_identity(kraw5, r)
    x = np.arange(5.0)
    k4 = 2 / 3 * (x ** 4 - 8 * x ** 3 + 20 * x ** 2 - 16 * x + 1.5)
    np.testing.assert_allclose(k4, [1, -1, 1, -1, 1], atol=1e-12)
    P = evaluate_ops(kraw5.coeffs, x).values[4]
    np.testing.assert_allclose(P, k4, atol=1e-12)


def test_polynomial_identity_two_sites():
    J = unweighted_path(2)
    assert endpoint_polynomial_identity(J, certify_endpoint_pst(J))


def test_polynomial_identity_fails_without_mirror(kraw5):
    J = perturbed_krawtchouk(kraw5)
    fake = certify_endpoint_pst(kraw5)
    assert not endpoint_polynomial_identity(J, fake)
    with pytest.raises(ValidationError):
        endpoint_polynomial_identity(J, certify_endpoint_pst(J))


# interior pairs


def test_interior_krawtchouk(kraw5):
    r1 = interior_pst(kraw5, 1)
    assert r1.has_pst and r1.pair == (1, 3)
    assert r1.transfer_time == pytest.approx(math.pi)
    r2 = interior_pst(kraw5, 2)
    assert r2.has_pst and r2.pair == (2, 2)
    assert r2.fidelity_at_t0 == pytest.approx(1.0, abs=1e-12)


def test_interior_perturbed(kraw5):
    r = interior_pst(perturbed_krawtchouk(kraw5), 1)
    assert not r.has_pst
    assert r.grid_max_fidelity < 1 - 1e-3


def test_interior_range(kraw5):
    for j in (0, 4):
        with pytest.raises(ValidationError):
            interior_pst(kraw5, j)


@pytest.mark.parametrize("M", [4, 6, 9])
def test_interior_implication(M):
    from pstlab.orthopoly import KrawtchoukParams, krawtchouk_coefficients

    J = JacobiMatrix(krawtchouk_coefficients(KrawtchoukParams(0.5, M)))
    for j in range(1, M):
        r = interior_pst(J, j)
        assert r.has_pst and r.transfer_time == pytest.approx(math.pi)
        # hypothesis status only, no converse is drawn from it
        assert isinstance(r.zero_entry, bool)


# early state exclusion


def test_ese_two_sites_empty():
    J = unweighted_path(2)
    assert ese_scan(J, certify_endpoint_pst(J)) == []


def test_ese_three_sites_closed_form():
    J = unweighted_path(3)
    r = certify_endpoint_pst(J)
    t = np.linspace(0, r.transfer_time, 50)
    c = amplitudes(J, 0, 0, t).values
    np.testing.assert_allclose(c, (np.cos(math.sqrt(2) * t) + 1) / 2, atol=1e-13)
    # the only zero is T0 itself, outside the open interval
    assert ese_scan(J, r) == []


def test_ese_krawtchouk_none(kraw5):
    findings = ese_scan(kraw5, certify_endpoint_pst(kraw5))
    assert findings == [] and not has_ese(findings)


def test_ese_positive_example():
    J = mirror_spectrum_chain([0, 1, 4, 5])
    r = certify_endpoint_pst(J)
    assert r.has_pst and r.transfer_time == pytest.approx(math.pi)
    findings = ese_scan(J, r)
    assert len(findings) >= 1
    t, last = findings[0]
    assert t == pytest.approx(0.8411, abs=1e-3)
    assert last == pytest.approx(0.272, abs=1e-3)
    for s, _ in findings:
        assert 0 < s < r.transfer_time
        assert abs(amplitudes(J, 0, 0, [s]).values[0]) <= 1e-8
    assert has_ese(findings)


def test_ese_requires_pst(kraw5):
    J = unweighted_path(4)
    with pytest.raises(ValidationError):
        ese_scan(J, certify_endpoint_pst(J))
    with pytest.raises(ValidationError):
        ese_scan(kraw5, certify_endpoint_pst(kraw5), grid=10)


def test_grid_refine_zero(kraw5):
    d = eigendecompose(kraw5)
    t, f = grid_max_fidelity(d, 0, 4, 2 * math.pi, points=4096, refine=0)
    assert f == pytest.approx(1.0, abs=1e-5)
