"""Jacobi matrices, their eigendecomposition, and the inverse spectral map.

Weights.  With orthonormal P_n and v_k = (P_0(l_k), ..., P_{N-1}(l_k)),
J v_k = l_k v_k.  Orthonormality of the P_n under the discrete measure
sum_k w_k delta_{l_k} makes V = [sqrt(w_k) v_k] an orthogonal matrix, so the
unit eigenvector is v~_k = sqrt(w_k) v_k and, because P_0 = 1, its first
component squared is w_k.  These are the Gauss-Christoffel numbers
w_k = 1 / sum_n P_n(l_k)^2.
"""

from dataclasses import dataclass

import numpy as np

from . import _tridiag
from .errors import NumericalError, ValidationError
from .orthopoly import Normalization, PolynomialTable, RecurrenceCoefficients, evaluate_ops


@dataclass(frozen=True)
class JacobiMatrix:
    """Symmetric tridiagonal Hamiltonian of a weighted path."""

    coeffs: RecurrenceCoefficients

    @classmethod
    def from_arrays(cls, offdiag, diag):
        return cls(RecurrenceCoefficients(tuple(offdiag), tuple(diag)))

    @property
    def size(self):
        return self.coeffs.size

    @property
    def offdiag(self):
        return np.array(self.coeffs.offdiag)

    @property
    def diag(self):
        return np.array(self.coeffs.diag)

    def dense(self):
        a = self.offdiag
        return np.diag(self.diag) + np.diag(a, 1) + np.diag(a, -1)

    def scaled(self, s):
        if s <= 0:
            raise ValidationError("scale factor must be positive")
        return JacobiMatrix.from_arrays(self.offdiag * s, self.diag * s)


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    weights: np.ndarray
    eigenvectors: np.ndarray

    @property
    def size(self):
        return self.eigenvalues.size


def _twisted_vectors(J, vals, Z):
    """v[n, k] = P_n(l_k) for n < N, evaluated in the stable direction.

    Z[0, k]^2 has only absolute accuracy, and the plain forward recurrence
    is unstable past the peak of an eigenvector.  Here each eigenvector is
    recurred forward from site 0 and backward from site N-1, both towards
    its largest entry, and the two halves are joined there.  Tiny weights
    then keep their relative accuracy.
    """
    N = vals.size
    if N == 1:
        return np.ones((1, 1))
    a, b = J.offdiag, J.diag
    twist = np.argmax(np.abs(Z), axis=0)
    fwd = np.empty((N, N))
    bwd = np.empty((N, N))
    with np.errstate(over="ignore", invalid="ignore"):
        fwd[0] = 1.0
        fwd[1] = (vals - b[0]) / a[0]
        for n in range(1, N - 1):
            fwd[n + 1] = ((vals - b[n]) * fwd[n] - a[n - 1] * fwd[n - 1]) / a[n]
        bwd[N - 1] = 1.0
        bwd[N - 2] = (vals - b[N - 1]) / a[N - 2]
        for n in range(N - 2, 0, -1):
            bwd[n - 1] = ((vals - b[n]) * bwd[n] - a[n] * bwd[n + 1]) / a[n - 1]
        cols = np.arange(N)
        scale = fwd[twist, cols] / bwd[twist, cols]
        rows = np.arange(N)[:, None]
        return np.where(rows <= twist, fwd, 0.0) + np.where(rows > twist, bwd * scale, 0.0)


def _twisted_weights(J, vals, Z):
    """w_k = 1 / sum_n P_n(l_k)^2 from the twisted vectors."""
    v = _twisted_vectors(J, vals, Z)
    with np.errstate(over="ignore", invalid="ignore"):
        return 1.0 / np.sum(v * v, axis=0)


def eigendecompose(J):
    """Ascending eigenvalues, spectral weights, and unit eigenvectors.

    Each eigenvector column is signed so its first nonzero entry is positive.
    """
    vals, Z = _tridiag.tql_implicit(J.coeffs.diag, J.coeffs.offdiag)
    for k in range(Z.shape[1]):
        col = Z[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-300)
        if nz.size and col[nz[0]] < 0:
            Z[:, k] = -col
    weights = _twisted_weights(J, vals, Z)
    bad = ~(np.isfinite(weights) & (weights > 0))
    weights[bad] = Z[0, bad] ** 2
    total = weights.sum()
    if not np.isfinite(total) or total <= 0:
        raise NumericalError("eigenvector first components vanish")
    weights = weights / total
    if vals.size > 1 and np.any(np.diff(vals) <= 0):
        raise NumericalError("computed spectrum is not simple")
    return SpectralDecomposition(vals, weights, Z)


def spectral_polynomial_table(J, decomp):
    """Orthonormal table P_0..P_N at the eigenvalues of J.

    Rows below N come from the twisted evaluation, so they stay accurate
    past the peak of each eigenvector.  Row N is one more recurrence step.
    """
    vals = decomp.eigenvalues
    v = _twisted_vectors(J, vals, decomp.eigenvectors)
    bad = ~np.all(np.isfinite(v), axis=0)
    if np.any(bad):
        plain = evaluate_ops(J.coeffs, vals[bad], Normalization.ORTHONORMAL).values
        v[:, bad] = plain[: J.size]
    N = J.size
    a, b = J.offdiag, J.diag
    top = (vals - b[N - 1]) * v[N - 1]
    if N > 1:
        top = top - a[N - 2] * v[N - 2]
    return PolynomialTable(np.vstack([v, top]), Normalization.ORTHONORMAL, vals.copy())


def eigenvectors_from_polynomials(J, decomp):
    """Columns v_k = (P_0(l_k), ..., P_{N-1}(l_k)), not normalized."""
    return spectral_polynomial_table(J, decomp).values[: J.size, :]


def _check_measure(eigenvalues, weights):
    x = np.asarray(eigenvalues, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    if x.size != w.size:
        raise ValidationError(f"{x.size} eigenvalues but {w.size} weights")
    if x.size == 0:
        raise ValidationError("empty spectrum")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
        raise ValidationError("spectrum and weights must be finite")
    if x.size > 1:
        gaps = np.diff(x)
        if np.any(gaps <= 0):
            k = int(np.flatnonzero(gaps <= 0)[0]) + 1
            raise ValidationError(f"eigenvalues not strictly increasing at index {k}")
        span = x[-1] - x[0]
        if np.min(gaps) < 1e-10 * span:
            k = int(np.argmin(gaps)) + 1
            raise ValidationError(f"eigenvalues {k - 1} and {k} are numerically degenerate")
    if np.any(w <= 0):
        k = int(np.flatnonzero(w <= 0)[0])
        raise ValidationError(f"weight {k} is not positive")
    total = w.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"weights sum to {total!r}, expected 1")
    return x, w / total


def jacobi_from_spectrum(eigenvalues, weights):
    """Rebuild the Jacobi matrix of the discrete measure sum_k w_k delta_{l_k}.

    Discrete Stieltjes procedure: the orthonormal polynomials are carried as
    value vectors on the nodes, each new one fully reorthogonalized against
    its predecessors in the weighted inner product.
    """
    x, w = _check_measure(eigenvalues, weights)
    N = x.size
    Q = np.zeros((N, N))
    Q[0] = 1.0
    diag = np.empty(N)
    off = np.empty(max(N - 1, 0))
    for n in range(N):
        q = Q[n]
        diag[n] = np.sum(w * x * q * q)
        if n == N - 1:
            break
        r = (x - diag[n]) * q
        if n > 0:
            r -= off[n - 1] * Q[n - 1]
        for _ in range(2):
            r -= (Q[: n + 1] * w) @ r @ Q[: n + 1]
        norm_sq = np.sum(w * r * r)
        if not norm_sq > 0:
            raise NumericalError(f"Stieltjes breakdown at index {n}: a_n^2 = {norm_sq!r}")
        off[n] = np.sqrt(norm_sq)
        Q[n + 1] = r / off[n]
    if np.any(off <= 0):
        k = int(np.flatnonzero(off <= 0)[0])
        raise NumericalError(f"Stieltjes breakdown at index {k}")
    return JacobiMatrix.from_arrays(off, diag)


def mirror_symmetric(J, tol=1e-10):
    """True when J is persymmetric (invariant under reversing the path)."""
    if tol < 0:
        raise ValidationError("tolerance must be non-negative")
    a, b = J.offdiag, J.diag
    return bool(np.all(np.abs(b - b[::-1]) <= tol) and np.all(np.abs(a - a[::-1]) <= tol))


def mirror_weights(eigenvalues):
    """Weights w_k proportional to 1 / |prod_{j != k} (l_k - l_j)|.

    These are the spectral weights of the unique persymmetric Jacobi matrix
    with the given spectrum.
    """
    x = np.asarray(eigenvalues, dtype=float)
    diffs = x[:, None] - x[None, :]
    np.fill_diagonal(diffs, 1.0)
    # logs keep the products in range for long chains
    logs = -np.sum(np.log(np.abs(diffs)), axis=1)
    w = np.exp(logs - logs.max())
    return w / w.sum()
