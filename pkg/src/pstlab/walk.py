"""Continuous-time quantum walks on weighted paths and finite birth-death chains.

Sign convention: amplitudes here are c_nm(t) = e_m^T exp(+itJ) e_n.  The
exceptional walk in :mod:`pstlab.xkrawtchouk` uses exp(-itH) instead; the two
differ by t -> -t, i.e. complex conjugation.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ValidationError
from .orthopoly import Normalization
from .spectral import JacobiMatrix, eigendecompose, spectral_polynomial_table


@dataclass(frozen=True)
class QuantumState:
    amplitudes: np.ndarray

    @classmethod
    def basis(cls, N, n):
        if not 0 <= n < N:
            raise ValidationError(f"vertex {n} outside 0..{N - 1}")
        v = np.zeros(N, dtype=complex)
        v[n] = 1.0
        return cls(v)

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class AmplitudeSeries:
    times: np.ndarray
    values: np.ndarray
    source: tuple

    @property
    def probabilities(self):
        return np.abs(self.values) ** 2


@dataclass(frozen=True)
class BirthDeathRates:
    """Birth rates lambda_0..lambda_{N-2}; death rates mu_0..mu_{N-1}.

    The chain is finite: the last state has no birth (reflecting boundary).
    With mu_0 > 0 mass leaks out of state 0 and rows sum to less than one.
    """

    birth: tuple
    death: tuple

    def __post_init__(self):
        lam = tuple(float(v) for v in self.birth)
        mu = tuple(float(v) for v in self.death)
        if len(mu) < 1 or len(lam) != len(mu) - 1:
            raise ValidationError("need len(birth) == len(death) - 1 >= 0")
        if any(not math.isfinite(v) for v in lam + mu):
            raise ValidationError("rates must be finite")
        if any(v <= 0 for v in lam):
            raise ValidationError("birth rates must be positive")
        if mu[0] < 0 or any(v <= 0 for v in mu[1:]):
            raise ValidationError("need mu_0 >= 0 and mu_i > 0 for i >= 1")
        object.__setattr__(self, "birth", lam)
        object.__setattr__(self, "death", mu)

    @property
    def size(self):
        return len(self.death)

    def generator(self):
        """The matrix A with P'(t) = A P(t)."""
        lam = np.append(self.birth, 0.0)
        mu = np.array(self.death)
        A = np.diag(-(lam + mu))
        A += np.diag(lam[:-1], 1)
        A += np.diag(mu[1:], -1)
        return A

    def potential_coefficients(self):
        """pi_0 = 1, pi_i = lambda_0..lambda_{i-1} / (mu_1..mu_i)."""
        pi = np.ones(self.size)
        for i in range(1, self.size):
            pi[i] = pi[i - 1] * self.birth[i - 1] / self.death[i]
        return pi


def _decomp(J, decomp):
    return decomp if decomp is not None else eigendecompose(J)


def evolve(J, initial, t, decomp=None):
    """exp(itJ) applied to ``initial`` through the spectral decomposition."""
    if not math.isfinite(t):
        raise ValidationError("time must be finite")
    psi = np.asarray(getattr(initial, "amplitudes", initial), dtype=complex)
    if psi.shape != (J.size,):
        raise ValidationError(f"state has shape {psi.shape}, expected ({J.size},)")
    d = _decomp(J, decomp)
    V = d.eigenvectors
    out = V @ (np.exp(1j * t * d.eigenvalues) * (V.T @ psi))
    return QuantumState(out)


def propagator(J, t, decomp=None):
    """Dense exp(itJ)."""
    d = _decomp(J, decomp)
    V = d.eigenvectors
    return (V * np.exp(1j * t * d.eigenvalues)) @ V.T


def amplitude_spectral(decomp, polys, n, m, times):
    """c_nm(t) = sum_k P_n(l_k) P_m(l_k) w(l_k) exp(i l_k t).

    ``polys`` must be the orthonormal table evaluated at the eigenvalues.
    """
    N = decomp.size
    for idx in (n, m):
        if not 0 <= idx < N:
            raise ValidationError(f"vertex {idx} outside 0..{N - 1}")
    if polys.normalization is not Normalization.ORTHONORMAL:
        raise ValidationError("amplitude_spectral needs the orthonormal table")
    if polys.nodes.shape != decomp.eigenvalues.shape or not np.allclose(
        polys.nodes, decomp.eigenvalues, rtol=0, atol=1e-12 * (1 + np.abs(decomp.eigenvalues).max())
    ):
        raise ValidationError("polynomial table is not evaluated at the eigenvalues")
    t = np.atleast_1d(np.asarray(times, dtype=float))
    coef = polys.values[n] * polys.values[m] * decomp.weights
    vals = np.exp(1j * np.outer(t, decomp.eigenvalues)) @ coef
    return AmplitudeSeries(t, vals, (n, m))


def amplitudes(J, n, m, times, decomp=None):
    """Convenience wrapper: spectral amplitudes straight from J."""
    d = _decomp(J, decomp)
    table = spectral_polynomial_table(J, d)
    return amplitude_spectral(d, table, n, m, times)


def transfer_probability(J, n, m, t, decomp=None):
    """|c_nm(t)|^2."""
    N = J.size
    for idx in (n, m):
        if not 0 <= idx < N:
            raise ValidationError(f"vertex {idx} outside 0..{N - 1}")
    d = _decomp(J, decomp)
    V = d.eigenvectors
    c = np.sum(V[n] * V[m] * np.exp(1j * t * d.eigenvalues))
    return float(abs(c) ** 2)


def fidelity_curve(decomp, n, m, times):
    """|c_nm(t)|^2 on an array of times, from unit eigenvectors."""
    V = decomp.eigenvectors
    t = np.asarray(times, dtype=float)
    c = np.exp(1j * np.outer(t, decomp.eigenvalues)) @ (V[n] * V[m])
    return np.abs(c) ** 2


def default_time_grid(decomp, points=512):
    """``points`` samples over [0, 2 pi / g_min]."""
    ev = decomp.eigenvalues
    if ev.size < 2:
        return np.linspace(0.0, 2 * np.pi, points)
    return np.linspace(0.0, 2 * np.pi / np.min(np.diff(ev)), points)


def birth_death_spectral(rates):
    """Karlin-McGregor data of a finite chain.

    Returns ``(x, psi, Q)``: the spectrum of -A, the masses of the spectral
    measure, and ``Q[n, k] = Q_n(x_k)`` with Q_0 = 1 and
    -x Q_n = mu_n Q_{n-1} - (lambda_n + mu_n) Q_n + lambda_n Q_{n+1}.
    """
    lam = np.append(rates.birth, 0.0)
    mu = np.array(rates.death)
    # -A is similar to the symmetric Jacobi matrix with these entries
    off = np.sqrt(lam[:-1] * mu[1:])
    S = JacobiMatrix.from_arrays(off, lam + mu)
    d = eigendecompose(S)
    x = d.eigenvalues
    N = rates.size
    Q = np.empty((N, N))
    Q[0] = 1.0
    if N > 1:
        Q[1] = (lam[0] + mu[0] - x) * Q[0] / lam[0]
    for n in range(1, N - 1):
        Q[n + 1] = ((lam[n] + mu[n] - x) * Q[n] - mu[n] * Q[n - 1]) / lam[n]
    return x, d.weights, Q


def birth_death_transition(rates, i, j, t):
    """P_ij(t) = sum_k e^{-x_k t} Q_i Q_j psi_k / sum_k Q_j^2 psi_k."""
    N = rates.size
    for idx in (i, j):
        if not 0 <= idx < N:
            raise ValidationError(f"state {idx} outside 0..{N - 1}")
    if not (math.isfinite(t) and t >= 0):
        raise ValidationError("time must be finite and non-negative")
    x, psi, Q = birth_death_spectral(rates)
    num = np.sum(np.exp(-x * t) * Q[i] * Q[j] * psi)
    den = np.sum(Q[j] ** 2 * psi)
    return float(num / den)


def birth_death_matrix(rates, t):
    """Full P(t) from the spectral formula."""
    x, psi, Q = birth_death_spectral(rates)
    num = (Q * (np.exp(-x * t) * psi)) @ Q.T
    den = (Q ** 2) @ psi
    return num / den[None, :]
